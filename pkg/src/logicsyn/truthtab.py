"""Truth tables, canonical SOP/POS forms, K-map layout and equivalence checks.

Row ``i`` of an ``n``-variable table assigns variable ``order[k]`` the bit
``(i >> (n - 1 - k)) & 1``: the first variable is the most significant bit, so
``F(0, 1, 1)`` is row 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import BoundExceededError, DontCareError, FormatError, UnknownVariableError
from .expr import Expr, Kind, VarOrder, conj, disj, literal, variables

DC = None
"""Output marker for a don't-care row."""

EQUIVALENCE_BOUND = 24


def row_bits(row: int, n: int) -> tuple[int, ...]:
    return tuple((row >> (n - 1 - k)) & 1 for k in range(n))


def bits_row(bits: Sequence[int]) -> int:
    row = 0
    for b in bits:
        row = (row << 1) | (1 if b else 0)
    return row


@dataclass(frozen=True)
class TruthTable:
    order: VarOrder
    outputs: tuple[int | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if len(set(self.order)) != len(self.order):
            raise ValueError(f"duplicate variable in order {self.order}")
        if len(self.outputs) != 1 << len(self.order):
            raise ValueError(f"expected {1 << len(self.order)} outputs, got {len(self.outputs)}")
        for v in self.outputs:
            if v not in (0, 1, DC):
                raise ValueError(f"output values must be 0, 1 or DC, got {v!r}")

    @classmethod
    def from_function(cls, order: Sequence[str], fn: Callable[..., int | None]) -> TruthTable:
        n = len(order)
        return cls(tuple(order), tuple(fn(*row_bits(i, n)) for i in range(1 << n)))

    @classmethod
    def from_rows(cls, order: Sequence[str], on: Iterator[int] | Sequence[int],
                  dc: Sequence[int] = ()) -> TruthTable:
        size = 1 << len(order)
        out: list[int | None] = [0] * size
        for r in on:
            out[r] = 1
        for r in dc:
            out[r] = DC
        return cls(tuple(order), tuple(out))

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def on_rows(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.outputs) if v == 1)

    @property
    def off_rows(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.outputs) if v == 0)

    @property
    def dc_rows(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.outputs) if v is DC)

    @property
    def has_dc(self) -> bool:
        return any(v is DC for v in self.outputs)

    def assignment(self, row: int) -> dict[str, int]:
        return dict(zip(self.order, row_bits(row, self.n)))

    def complement(self) -> TruthTable:
        return TruthTable(self.order, tuple(v if v is DC else 1 - v for v in self.outputs))

    def agrees(self, other: TruthTable) -> bool:
        """True when ``other`` matches this table on every non-DC row."""
        return self.order == other.order and all(
            a is DC or a == b for a, b in zip(self.outputs, other.outputs))


# --- evaluation ------------------------------------------------------------

def truth_vector(e: Expr, order: Sequence[str]) -> np.ndarray:
    """Values of ``e`` on all ``2**len(order)`` rows as a boolean array."""
    n = len(order)
    missing = [v for v in variables(e) if v not in order]
    if missing:
        raise UnknownVariableError(missing[0])
    rows = np.arange(1 << n, dtype=np.int64)
    columns = {name: ((rows >> (n - 1 - k)) & 1).astype(bool) for k, name in enumerate(order)}
    return _vec(e, columns, 1 << n)


def _vec(e: Expr, cols: dict[str, np.ndarray], size: int) -> np.ndarray:
    k = e.kind
    if k is Kind.VAR:
        return cols[e.name]
    if k is Kind.CONST:
        return np.full(size, bool(e.value))
    vals = [_vec(c, cols, size) for c in e.children]
    if k is Kind.NOT:
        return ~vals[0]
    if k in (Kind.AND, Kind.NAND):
        out = np.logical_and.reduce(vals)
    elif k in (Kind.OR, Kind.NOR):
        out = np.logical_or.reduce(vals)
    else:
        out = np.logical_xor.reduce(vals)
    return ~out if k in (Kind.NAND, Kind.NOR, Kind.XNOR) else out


def from_expr(e: Expr, order: Sequence[str] | None = None) -> TruthTable:
    order = variables(e) if order is None else tuple(order)
    vec = truth_vector(e, order)
    return TruthTable(order, tuple(int(v) for v in vec))


# --- canonical forms -------------------------------------------------------

def minterm(row: int, order: VarOrder) -> Expr:
    return conj(literal(name, bool(b)) for name, b in zip(order, row_bits(row, len(order))))


def maxterm(row: int, order: VarOrder) -> Expr:
    # uncomplemented where the row bit is 0
    return disj(literal(name, not b) for name, b in zip(order, row_bits(row, len(order))))


def canonical_sop(t: TruthTable) -> Expr:
    if t.has_dc:
        raise DontCareError("canonical SOP is undefined for tables with don't-care rows")
    return disj(minterm(r, t.order) for r in t.on_rows)


def canonical_pos(t: TruthTable) -> Expr:
    if t.has_dc:
        raise DontCareError("canonical POS is undefined for tables with don't-care rows")
    return conj(maxterm(r, t.order) for r in t.off_rows)


# --- equivalence -----------------------------------------------------------

def counterexample(a: Expr, b: Expr, bound: int = EQUIVALENCE_BOUND,
                   order: Sequence[str] | None = None) -> dict[str, int] | None:
    """First assignment where ``a`` and ``b`` differ, or None.

    Rows where ``a`` is 1 and ``b`` is 0 are reported before rows where only
    ``b`` holds; within each group the lowest row index wins.
    """
    if order is None:
        order = tuple(dict.fromkeys(variables(a) + variables(b)))
    if len(order) > bound:
        raise BoundExceededError(
            f"exhaustive check over {len(order)} variables exceeds the bound of {bound}")
    va = truth_vector(a, order)
    vb = truth_vector(b, order)
    for diff in (va & ~vb, vb & ~va):
        hits = np.flatnonzero(diff)
        if hits.size:
            return dict(zip(order, row_bits(int(hits[0]), len(order))))
    return None


def equivalent(a: Expr, b: Expr, bound: int = EQUIVALENCE_BOUND) -> bool:
    return counterexample(a, b, bound) is None


def table_matches(e: Expr, t: TruthTable) -> bool:
    """``e`` reproduces ``t`` on every non-DC row."""
    vec = truth_vector(e, t.order)
    return all(v is DC or v == int(x) for v, x in zip(t.outputs, vec))


# --- K-maps ----------------------------------------------------------------

def gray_code(bits: int) -> tuple[int, ...]:
    return tuple(i ^ (i >> 1) for i in range(1 << bits))


@dataclass(frozen=True)
class KmapGrid:
    row_vars: VarOrder
    col_vars: VarOrder
    row_codes: tuple[int, ...]
    col_codes: tuple[int, ...]
    cells: tuple[tuple[int | None, ...], ...]

    @property
    def row_labels(self) -> tuple[str, ...]:
        return tuple(format(c, f"0{len(self.row_vars)}b") for c in self.row_codes)

    @property
    def col_labels(self) -> tuple[str, ...]:
        return tuple(format(c, f"0{len(self.col_vars)}b") for c in self.col_codes)

    def table_row(self, r: int, c: int) -> int:
        return (self.row_codes[r] << len(self.col_vars)) | self.col_codes[c]

    def neighbours(self) -> Iterator[tuple[tuple[int, int], tuple[int, int]]]:
        """Horizontal and vertical neighbour pairs, wraparound included."""
        nr, nc = len(self.row_codes), len(self.col_codes)
        for r in range(nr):
            for c in range(nc):
                if nc > 1:
                    yield (r, c), (r, (c + 1) % nc)
                if nr > 1:
                    yield (r, c), ((r + 1) % nr, c)

    def text(self) -> str:
        rv = "".join(self.row_vars)
        cv = "".join(self.col_vars)
        w = max(len(rv), len(self.row_labels[0]))
        cw = max(len(lbl) for lbl in self.col_labels)
        lines = [" " * (w + 1) + cv,
                 rv.ljust(w) + " " + " ".join(lbl.ljust(cw) for lbl in self.col_labels)]
        for r, label in enumerate(self.row_labels):
            vals = ("-" if v is DC else str(v) for v in self.cells[r])
            lines.append(label.ljust(w) + " " + " ".join(v.ljust(cw) for v in vals).rstrip())
        return "\n".join(lines)


def kmap_render(t: TruthTable) -> KmapGrid:
    """Lay ``t`` out on a Gray-coded grid.

    Two variables: rows A, columns B.  Three: rows A, columns BC.  Four: rows
    AB, columns CD.
    """
    n = t.n
    if n not in (2, 3, 4):
        raise ValueError(f"K-maps are rendered for 2 to 4 variables, not {n}")
    nrow = 1 if n < 4 else 2
    ncol = n - nrow
    row_codes = gray_code(nrow)
    col_codes = gray_code(ncol)
    cells = tuple(
        tuple(t.outputs[(rc << ncol) | cc] for cc in col_codes) for rc in row_codes)
    return KmapGrid(t.order[:nrow], t.order[nrow:], row_codes, col_codes, cells)


# --- text format -----------------------------------------------------------

def format_table(t: TruthTable) -> str:
    lines = [" ".join(t.order)]
    for i, v in enumerate(t.outputs):
        bits = format(i, f"0{t.n}b") if t.n else ""
        val = "-" if v is DC else str(v)
        lines.append(f"{bits} {val}" if bits else val)
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> TruthTable:
    """Read the truth-table text format written by :func:`format_table`.

    The first line that is not a ``#`` comment is the header (blank for a
    zero-variable table).  Later blank lines and comments are ignored.  Every
    row must appear exactly once.
    """
    header: VarOrder | None = None
    out: dict[int, int | None] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if header is None:
            if raw.lstrip().startswith("#"):
                continue
            header = tuple(line.split())
            if len(set(header)) != len(header):
                raise FormatError("duplicate variable in header", lineno)
            continue
        if not line:
            continue
        fields = line.split()
        n = len(header)
        if n == 0:
            if len(fields) != 1:
                raise FormatError("expected a single output value", lineno)
            bits, val = "", fields[0]
        else:
            if len(fields) != 2:
                raise FormatError("expected '<bits> <value>'", lineno)
            bits, val = fields
            if len(bits) != n or set(bits) - {"0", "1"}:
                raise FormatError(f"row must have {n} bits over {{0,1}}", lineno)
        if val not in ("0", "1", "-"):
            raise FormatError(f"output must be 0, 1 or '-', got {val!r}", lineno)
        row = int(bits, 2) if bits else 0
        if row in out:
            raise FormatError(f"duplicate row {bits or '(empty)'}", lineno)
        out[row] = DC if val == "-" else int(val)
    if header is None:
        raise FormatError("empty truth table")
    missing = [r for r in range(1 << len(header)) if r not in out]
    if missing:
        raise FormatError(f"missing {len(missing)} row(s), first is row {missing[0]}")
    return TruthTable(header, tuple(out[r] for r in range(1 << len(header))))
