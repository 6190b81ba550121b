"""Device mapping: PLA and PAL programs, multiplexer trees and the half adder."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .errors import CapacityError, CoverError
from .minimize import Cover, Cube, Form
from .netlist import Gate, Netlist
from .truthtab import DC, TruthTable

DEFAULT_PAL_TERMS = 3


def _output_names(m: int) -> tuple[str, ...]:
    return ("F",) if m == 1 else tuple(f"F{j}" for j in range(m))


def _check_covers(functions: Sequence[Cover]) -> tuple[str, ...]:
    if not functions:
        raise CoverError("at least one function is required")
    order = functions[0].order
    for j, c in enumerate(functions):
        if c.form is not Form.SOP:
            raise CoverError(f"function {j} is {c.form.value.upper()}; AND-OR arrays take SOP covers")
        if c.order != order:
            raise CoverError(f"function {j} is over {c.order}, expected {order}")
    return order


@dataclass(frozen=True)
class PlaProgram:
    """Programmable AND plane feeding a programmable OR plane."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    terms: tuple[Cube, ...]
    or_plane: tuple[tuple[int, ...], ...]
    capacity: int

    def __post_init__(self):
        for name in ("inputs", "outputs", "terms", "or_plane"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "or_plane", tuple(tuple(r) for r in self.or_plane))
        if len(self.terms) > self.capacity:
            raise CapacityError(
                f"{len(self.terms)} product terms exceed the capacity of {self.capacity}",
                len(self.terms), self.capacity)
        if len(self.or_plane) != len(self.terms):
            raise ValueError("OR plane needs one row per product term")
        for c, row in zip(self.terms, self.or_plane):
            if c.n != len(self.inputs):
                raise ValueError(f"term {c} does not match {len(self.inputs)} inputs")
            if len(row) != len(self.outputs) or set(row) - {0, 1}:
                raise ValueError(f"OR-plane row {row} must have {len(self.outputs)} bits")

    @property
    def n(self) -> int:
        return len(self.inputs)

    @property
    def m(self) -> int:
        return len(self.outputs)

    def value(self, output: int, row: int) -> int:
        return int(any(bits[output] and c.covers(row) for c, bits in zip(self.terms, self.or_plane)))

    def table(self, output: int) -> TruthTable:
        return TruthTable(self.inputs, tuple(self.value(output, r) for r in range(1 << self.n)))


@dataclass(frozen=True)
class PalProgram:
    """Programmable AND plane feeding fixed OR gates of ``k`` terms each."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    terms: tuple[tuple[Cube, ...], ...]
    k: int = DEFAULT_PAL_TERMS

    def __post_init__(self):
        for name in ("inputs", "outputs"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "terms", tuple(tuple(t) for t in self.terms))
        if len(self.terms) != len(self.outputs):
            raise ValueError("need one term list per output")
        for name, ts in zip(self.outputs, self.terms):
            if len(ts) > self.k:
                raise CapacityError(
                    f"output {name!r} needs {len(ts)} product terms but its OR gate has {self.k}",
                    len(ts), self.k, name)
            for c in ts:
                if c.n != len(self.inputs):
                    raise ValueError(f"term {c} does not match {len(self.inputs)} inputs")

    def value(self, output: int, row: int) -> int:
        return int(any(c.covers(row) for c in self.terms[output]))

    def table(self, output: int) -> TruthTable:
        n = len(self.inputs)
        return TruthTable(self.inputs, tuple(self.value(output, r) for r in range(1 << n)))


def map_pla(functions: Sequence[Cover], capacity: int | None = None,
            outputs: Sequence[str] | None = None) -> PlaProgram:
    """Share identical product terms across outputs.

    ``capacity=None`` sizes the array to the distinct-term count.
    """
    order = _check_covers(functions)
    names = tuple(outputs) if outputs is not None else _output_names(len(functions))
    terms: dict[Cube, list[int]] = {}
    for j, c in enumerate(functions):
        for cube in c.cubes:
            terms.setdefault(cube, [0] * len(functions))[j] = 1
    if capacity is None:
        capacity = len(terms)
    if len(terms) > capacity:
        raise CapacityError(
            f"PLA needs {len(terms)} product terms but only {capacity} are available",
            len(terms), capacity)
    return PlaProgram(order, names, tuple(terms), tuple(tuple(r) for r in terms.values()), capacity)


def map_pal(functions: Sequence[Cover], per_output_terms: int = DEFAULT_PAL_TERMS,
            outputs: Sequence[str] | None = None) -> PalProgram:
    order = _check_covers(functions)
    names = tuple(outputs) if outputs is not None else _output_names(len(functions))
    return PalProgram(order, names, tuple(c.cubes for c in functions), per_output_terms)


# --- multiplexer trees -----------------------------------------------------

class _MuxBuilder:
    def __init__(self):
        self.gates: list[Gate] = []
        self.inverters: dict[str, str] = {}
        self.counter: Counter = Counter()
        self.memo: dict[tuple, tuple] = {}

    def gate(self, kind: str, inputs: Sequence[str]) -> str:
        gid = f"{kind.lower()}{self.counter[kind]}"
        self.counter[kind] += 1
        self.gates.append(Gate(gid, kind, tuple(inputs), f"{gid}_o"))
        return f"{gid}_o"

    def inv(self, net: str) -> str:
        if net not in self.inverters:
            gid = f"inv_{net}"
            self.gates.append(Gate(gid, "NOT", (net,), f"{gid}_o"))
            self.inverters[net] = f"{gid}_o"
        return self.inverters[net]

    def cell(self, s: str, d0: tuple, d1: tuple) -> tuple:
        """2-to-1 multiplexer ``s'.d0 + s.d1`` with constant inputs folded away."""
        if d0 == d1:
            return d0
        if d0 == ("const", 0) and d1 == ("const", 1):
            return ("net", s)
        if d0 == ("const", 1) and d1 == ("const", 0):
            return ("net", self.inv(s))
        if d0 == ("const", 0):
            return ("net", self.gate("AND", (s, d1[1])))
        if d1 == ("const", 0):
            return ("net", self.gate("AND", (self.inv(s), d0[1])))
        if d0 == ("const", 1):
            return ("net", self.gate("OR", (self.inv(s), d1[1])))
        if d1 == ("const", 1):
            return ("net", self.gate("OR", (s, d0[1])))
        lo = self.gate("AND", (self.inv(s), d0[1]))
        hi = self.gate("AND", (s, d1[1]))
        return ("net", self.gate("OR", (lo, hi)))

    def tree(self, values: tuple[int, ...], selects: Sequence[str]) -> tuple:
        if all(v == values[0] for v in values):
            return ("const", values[0])
        if values in self.memo:
            return self.memo[values]
        half = len(values) // 2
        d0 = self.tree(values[:half], selects[1:])
        d1 = self.tree(values[half:], selects[1:])
        out = self.cell(selects[0], d0, d1)
        self.memo[values] = out
        return out


def map_mux(t: TruthTable, select_order: Sequence[str] | None = None, output: str = "F") -> Netlist:
    """Shannon-expand ``t`` into a tree of 2-to-1 multiplexers.

    The first select variable drives the root cell.  DC rows are treated as 0.
    Identical cofactors share one subtree.
    """
    selects = tuple(t.order if select_order is None else select_order)
    if sorted(selects) != sorted(t.order) or len(set(selects)) != len(selects):
        raise ValueError(f"select order {selects} is not a permutation of {t.order}")
    pos = [t.order.index(s) for s in selects]
    n = t.n
    values = []
    for r in range(1 << n):
        # r enumerates assignments with selects[0] as the most significant bit
        row = 0
        for k, p in enumerate(pos):
            if (r >> (n - 1 - k)) & 1:
                row |= 1 << (n - 1 - p)
        v = t.outputs[row]
        values.append(0 if v is DC else v)
    b = _MuxBuilder()
    root = b.tree(tuple(values), selects)
    if root[0] == "const":
        b.gates.append(Gate("const0", f"CONST{root[1]}", (), output))
    elif (b.gates and b.gates[-1].output == root[1]
          and not any(root[1] in g.inputs for g in b.gates)):
        last = b.gates.pop()
        b.gates.append(Gate(last.id, last.kind, last.inputs, output))
    else:
        b.gates.append(Gate("buf0", "BUF", (root[1],), output))
    return Netlist(t.order, (output,), tuple(b.gates))


def mux2() -> Netlist:
    """A single 2-to-1 multiplexer cell: ``O = S'.d0 + S.d1``."""
    return Netlist(("S", "d0", "d1"), ("O",), (
        Gate("inv_S", "NOT", ("S",), "inv_S_o"),
        Gate("and0", "AND", ("inv_S_o", "d0"), "and0_o"),
        Gate("and1", "AND", ("S", "d1"), "and1_o"),
        Gate("or0", "OR", ("and0_o", "and1_o"), "O"),
    ))


def half_adder() -> Netlist:
    return Netlist(("A", "B"), ("sum", "carry"), (
        Gate("xor0", "XOR", ("A", "B"), "sum"),
        Gate("and0", "AND", ("A", "B"), "carry"),
    ))
