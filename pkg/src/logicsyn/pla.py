"""PLA text files.

::

    .i 3                 number of inputs
    .o 1                 number of outputs
    .ilb A B C           input names (optional)
    .ob F                output names (optional)
    .p 3                 number of term lines (optional, checked)
    .cap 4               AND-plane capacity when larger than the term count
    .pal 3               fixed OR width; marks a PAL program
    11- 1
    1-1 1
    -11 1
    .e

Term lines are ``<inputs over 0,1,-> <outputs over 0,1>``.  When a file is
read as a set of functions, an output ``-`` puts the term in that output's
don't-care set.  Other dot directives are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FormatError
from .minimize import Cube
from .techmap import PalProgram, PlaProgram
from .truthtab import DC, TruthTable


@dataclass
class PlaFile:
    n: int | None = None
    m: int | None = None
    inputs: tuple[str, ...] | None = None
    outputs: tuple[str, ...] | None = None
    declared_terms: int | None = None
    capacity: int | None = None
    pal_k: int | None = None
    terms: list[tuple[str, str, int]] = field(default_factory=list)  # (inputs, outputs, line)

    def input_names(self) -> tuple[str, ...]:
        if self.inputs is not None:
            return self.inputs
        if self.n <= 26:
            return tuple(chr(ord("A") + k) for k in range(self.n))
        return tuple(f"x{k}" for k in range(self.n))

    def output_names(self) -> tuple[str, ...]:
        if self.outputs is not None:
            return self.outputs
        return ("F",) if self.m == 1 else tuple(f"F{j}" for j in range(self.m))


def _int_arg(words: list[str], lineno: int) -> int:
    if len(words) != 2 or not words[1].isdigit():
        raise FormatError(f"{words[0]} takes one non-negative integer", lineno)
    return int(words[1])


def parse_pla_file(text: str, allow_dc: bool = False) -> PlaFile:
    f = PlaFile()
    ended = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise FormatError("content after .e", lineno)
        words = line.split()
        key = words[0]
        if key.startswith("."):
            if key == ".i":
                f.n = _int_arg(words, lineno)
            elif key == ".o":
                f.m = _int_arg(words, lineno)
            elif key == ".p":
                f.declared_terms = _int_arg(words, lineno)
            elif key == ".cap":
                f.capacity = _int_arg(words, lineno)
            elif key == ".pal":
                f.pal_k = _int_arg(words, lineno)
            elif key == ".ilb":
                f.inputs = tuple(words[1:])
            elif key == ".ob":
                f.outputs = tuple(words[1:])
            elif key in (".e", ".end"):
                ended = True
            else:
                raise FormatError(f"unknown directive {key}", lineno)
            continue
        if f.n is None or f.m is None:
            raise FormatError("term line before .i and .o", lineno)
        if f.n == 0 and len(words) == 1:
            words = ["", words[0]]
        if len(words) != 2:
            raise FormatError("expected '<input cube> <output bits>'", lineno)
        cube, outs = words
        if len(cube) != f.n or set(cube) - set("01-"):
            raise FormatError(f"input part must be {f.n} characters over 0, 1, -", lineno)
        allowed = set("01-") if allow_dc else set("01")
        if len(outs) != f.m or set(outs) - allowed:
            over = "0, 1, -" if allow_dc else "0, 1"
            raise FormatError(f"output part must be {f.m} characters over {over}", lineno)
        f.terms.append((cube, outs, lineno))
    if f.n is None or f.m is None:
        raise FormatError("missing .i or .o declaration")
    if f.inputs is not None and len(f.inputs) != f.n:
        raise FormatError(f".ilb lists {len(f.inputs)} names for {f.n} inputs")
    if f.outputs is not None and len(f.outputs) != f.m:
        raise FormatError(f".ob lists {len(f.outputs)} names for {f.m} outputs")
    if f.declared_terms is not None and f.declared_terms != len(f.terms):
        raise FormatError(f".p declares {f.declared_terms} terms but {len(f.terms)} are given")
    return f


def read_pla(text: str) -> PlaProgram | PalProgram:
    f = parse_pla_file(text)
    inputs, outputs = f.input_names(), f.output_names()
    if f.pal_k is not None:
        per_output: list[list[Cube]] = [[] for _ in range(f.m)]
        for cube, outs, lineno in f.terms:
            if outs.count("1") != 1:
                raise FormatError("a PAL term feeds exactly one output", lineno)
            per_output[outs.index("1")].append(Cube.from_string(cube))
        return PalProgram(inputs, outputs, tuple(tuple(t) for t in per_output), f.pal_k)
    terms = tuple(Cube.from_string(c) for c, _, _ in f.terms)
    plane = tuple(tuple(int(ch) for ch in o) for _, o, _ in f.terms)
    capacity = f.capacity if f.capacity is not None else len(terms)
    return PlaProgram(inputs, outputs, terms, plane, capacity)


def write_pla(p: PlaProgram | PalProgram) -> str:
    n, m = len(p.inputs), len(p.outputs)
    lines = [f".i {n}", f".o {m}"]
    if n:
        lines.append(".ilb " + " ".join(p.inputs))
    lines.append(".ob " + " ".join(p.outputs))
    if isinstance(p, PalProgram):
        rows = []
        for j, ts in enumerate(p.terms):
            bits = "".join("1" if i == j else "0" for i in range(m))
            rows += [(str(c), bits) for c in ts]
        lines.append(f".pal {p.k}")
    else:
        rows = [(str(c), "".join(map(str, b))) for c, b in zip(p.terms, p.or_plane)]
        if p.capacity != len(p.terms):
            lines.append(f".cap {p.capacity}")
    lines.append(f".p {len(rows)}")
    lines += [f"{c} {o}".lstrip() for c, o in rows]
    lines.append(".e")
    return "\n".join(lines) + "\n"


def read_pla_functions(text: str) -> dict[str, TruthTable]:
    """One truth table per output: ``1`` marks the ON-set, ``-`` the DC-set."""
    f = parse_pla_file(text, allow_dc=True)
    inputs = f.input_names()
    size = 1 << f.n
    tables = {}
    for j, name in enumerate(f.output_names()):
        out: list[int | None] = [0] * size
        dc: set[int] = set()
        for cube, outs, _ in f.terms:
            rows = Cube.from_string(cube).rows()
            if outs[j] == "1":
                for r in rows:
                    out[r] = 1
            elif outs[j] == "-":
                dc.update(rows)
        for r in dc:
            if out[r] != 1:
                out[r] = DC
        tables[name] = TruthTable(inputs, tuple(out))
    return tables
