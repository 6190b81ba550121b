"""Exact two-level minimization.

Prime implicants come from Quine-McCluskey merging; the cover is then picked
either exactly (branch and bound over the reduced covering matrix) or
greedily.  Cubes are ``(mask, value)`` bit pairs laid out like truth-table
rows: variable ``k`` of ``n`` lives in bit ``n - 1 - k``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.optimize import linprog

from .errors import CoverError, InvariantError
from .expr import Expr, VarOrder, conj, disj, literal, render
from .truthtab import DC, TruthTable

EXACT_LIMIT = 16


class Lit(enum.Enum):
    POS = "1"
    NEG = "0"
    ABSENT = "-"


class _Choice(str, enum.Enum):
    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            for member in cls:
                if member.value == value.lower():
                    return member
        return None


class Strategy(_Choice):
    EXACT = "exact"
    GREEDY = "greedy"


class Form(_Choice):
    SOP = "sop"
    POS = "pos"


@dataclass(frozen=True, order=True)
class Cube:
    """A product term.  ``mask`` marks the specified variables."""

    mask: int
    value: int
    n: int

    def __post_init__(self):
        full = (1 << self.n) - 1
        if self.mask & ~full or self.value & ~self.mask:
            raise ValueError(f"malformed cube mask={self.mask:b} value={self.value:b} n={self.n}")

    @classmethod
    def from_string(cls, s: str) -> Cube:
        mask = value = 0
        for ch in s:
            mask <<= 1
            value <<= 1
            if ch == "1":
                mask |= 1
                value |= 1
            elif ch == "0":
                mask |= 1
            elif ch != "-":
                raise ValueError(f"cube characters are 0, 1 and '-', got {ch!r}")
        return cls(mask, value, len(s))

    @classmethod
    def minterm(cls, row: int, n: int) -> Cube:
        return cls((1 << n) - 1, row, n)

    @classmethod
    def universe(cls, n: int) -> Cube:
        return cls(0, 0, n)

    def __str__(self) -> str:
        return "".join(s.value for s in self.states())

    def states(self) -> tuple[Lit, ...]:
        out = []
        for k in range(self.n):
            bit = 1 << (self.n - 1 - k)
            if not self.mask & bit:
                out.append(Lit.ABSENT)
            else:
                out.append(Lit.POS if self.value & bit else Lit.NEG)
        return tuple(out)

    @property
    def literal_count(self) -> int:
        return self.mask.bit_count()

    @property
    def size(self) -> int:
        return 1 << (self.n - self.literal_count)

    def covers(self, row: int) -> bool:
        return row & self.mask == self.value

    def rows(self) -> Iterator[int]:
        free = ~self.mask & ((1 << self.n) - 1)
        sub = 0
        while True:
            yield self.value | sub
            if sub == free:
                return
            sub = (sub - free) & free

    def contains(self, other: Cube) -> bool:
        return other.mask & self.mask == self.mask and other.value & self.mask == self.value

    def display_key(self) -> tuple[int, ...]:
        # literal order: complemented, plain, absent
        return tuple({Lit.NEG: 0, Lit.POS: 1, Lit.ABSENT: 2}[s] for s in self.states())


@dataclass(frozen=True)
class Cover:
    """Two-level cover.

    SOP cubes are product terms.  A POS cube lists the rows on which its sum
    term is 0, so the term has variable ``v`` plain where the cube has 0 and
    complemented where it has 1.
    """

    form: Form
    cubes: tuple[Cube, ...]
    order: VarOrder

    def __post_init__(self):
        object.__setattr__(self, "form", Form(self.form))
        object.__setattr__(self, "cubes", tuple(self.cubes))
        object.__setattr__(self, "order", tuple(self.order))
        for c in self.cubes:
            if c.n != len(self.order):
                raise ValueError(f"cube {c} does not match {len(self.order)} variables")

    @property
    def literal_count(self) -> int:
        return sum(c.literal_count for c in self.cubes)

    def value(self, row: int) -> int:
        hit = any(c.covers(row) for c in self.cubes)
        return int(hit) if self.form is Form.SOP else int(not hit)

    def table(self) -> TruthTable:
        return TruthTable(self.order, tuple(self.value(r) for r in range(1 << len(self.order))))

    def to_expr(self) -> Expr:
        if self.form is Form.SOP:
            return disj(derive_term(c, self.order) for c in self.cubes)
        return conj(sum_term(c, self.order) for c in self.cubes)

    def render(self) -> str:
        """Expression text; POS sum terms are always parenthesized."""
        if self.form is Form.SOP or not self.cubes:
            return render(self.to_expr())
        if self.cubes == (Cube.universe(len(self.order)),):
            return "0"
        terms = [render(sum_term(c, self.order)) for c in self.cubes]
        compact = all(len(v) == 1 and "A" <= v <= "Z" for v in self.order)
        return ("" if compact else ".").join(f"({t})" for t in terms)


def derive_term(c: Cube, order: Sequence[str]) -> Expr:
    """Product of the literals a cube keeps; the all-absent cube is 1."""
    return conj(literal(name, s is Lit.POS)
                for name, s in zip(order, c.states()) if s is not Lit.ABSENT)


def sum_term(c: Cube, order: Sequence[str]) -> Expr:
    return disj(literal(name, s is Lit.NEG)
                for name, s in zip(order, c.states()) if s is not Lit.ABSENT)


# --- prime implicants ------------------------------------------------------

def prime_implicants(t: TruthTable) -> frozenset[Cube]:
    """All prime implicants of the ON-set extended by the DC-set.

    Each generation merges pairs that differ in exactly one specified
    variable; anything that never merges is prime.
    """
    n = t.n
    full = (1 << n) - 1
    current = {(full, r) for r, v in enumerate(t.outputs) if v == 1 or v is DC}
    primes: set[tuple[int, int]] = set()
    while current:
        merged: set[tuple[int, int]] = set()
        nxt: set[tuple[int, int]] = set()
        for mask, value in current:
            bits = mask & ~value
            while bits:
                b = bits & -bits
                bits ^= b
                partner = (mask, value | b)
                if partner in current:
                    nxt.add((mask & ~b, value))
                    merged.add((mask, value))
                    merged.add(partner)
        primes |= current - merged
        current = nxt
    return frozenset(Cube(m, v, n) for m, v in primes)


# --- cover selection -------------------------------------------------------

def _cost(c: Cube) -> tuple[int, Cube]:
    return (c.literal_count, c)


def _solution_key(cubes: Iterable[Cube]) -> tuple[int, int, tuple[Cube, ...]]:
    cubes = sorted(cubes)
    return (len(cubes), sum(c.literal_count for c in cubes), tuple(cubes))


class _Matrix:
    """Covering matrix: candidate primes against ON rows, as bitsets."""

    def __init__(self, primes: Iterable[Cube], on_rows: Sequence[int]):
        self.rows = list(on_rows)
        self.primes = sorted((p for p in primes if any(p.covers(r) for r in self.rows)), key=_cost)
        self.cover = [0] * len(self.primes)  # prime -> row bitset
        self.covered_by = [0] * len(self.rows)  # row -> prime bitset
        for j, p in enumerate(self.primes):
            for i, r in enumerate(self.rows):
                if p.covers(r):
                    self.cover[j] |= 1 << i
                    self.covered_by[i] |= 1 << j
        for i, r in enumerate(self.rows):
            if not self.covered_by[i]:
                raise CoverError(f"row {r} is a 1-row that no supplied prime covers")


def _bits(x: int) -> Iterator[int]:
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


def _essentials(m: _Matrix, uncovered: int, alive: int) -> list[int]:
    found = []
    for i in _bits(uncovered):
        cand = m.covered_by[i] & alive
        if cand and cand & (cand - 1) == 0:
            found.append(cand.bit_length() - 1)
    return sorted(set(found))


def _reduce(m: _Matrix, uncovered: int, alive: int, chosen: list[int]) -> tuple[int, int]:
    """Apply essential selection, row dominance and column dominance to a fixpoint.

    Column dominance only drops a prime when an earlier one (fewer literals,
    or equal literals and a smaller cube) covers all of its remaining rows, so
    the tie-break order of the final cover is preserved.
    """
    while uncovered:
        ess = _essentials(m, uncovered, alive)
        if ess:
            for j in ess:
                chosen.append(j)
                uncovered &= ~m.cover[j]
                alive &= ~(1 << j)
            continue
        before = (uncovered, alive)
        # a row whose candidates include another row's candidates is implied
        rows = sorted(_bits(uncovered), key=lambda i: ((m.covered_by[i] & alive).bit_count(), i))
        kept: list[int] = []
        for i in rows:
            ci = m.covered_by[i] & alive
            if any(ck & ~ci == 0 for ck in kept):
                uncovered &= ~(1 << i)
            else:
                kept.append(ci)
        # primes are indexed in cost order
        kept = []
        for q in _bits(alive):
            rq = m.cover[q] & uncovered
            if rq == 0 or any(rq & ~rp == 0 for rp in kept):
                alive &= ~(1 << q)
            else:
                kept.append(rq)
        if (uncovered, alive) == before:
            break
    return uncovered, alive


def _lower_bound(m: _Matrix, uncovered: int, alive: int) -> tuple[int, int]:
    """(cube count, literal count) lower bound from pairwise-disjoint rows."""
    rows = sorted(_bits(uncovered), key=lambda i: (m.covered_by[i] & alive).bit_count())
    used = 0
    count = lits = 0
    for i in rows:
        cand = m.covered_by[i] & alive
        if cand & used == 0:
            used |= cand
            count += 1
            lits += min(m.primes[j].literal_count for j in _bits(cand))
    return count, lits


def _picked_cost(m: _Matrix, picked: Sequence[int]) -> tuple[int, int]:
    return len(picked), sum(m.primes[j].literal_count for j in picked)


def _infeasible(m: _Matrix, uncovered: int, alive: int) -> bool:
    return any(m.covered_by[i] & alive == 0 for i in _bits(uncovered))


def _lp_count_bound(m: _Matrix, uncovered: int, alive: int) -> int:
    """Ceiling of the LP relaxation of the remaining set-cover problem."""
    rows = list(_bits(uncovered))
    cols = list(_bits(alive))
    a = np.zeros((len(rows), len(cols)))
    for ci, j in enumerate(cols):
        for ri, i in enumerate(rows):
            if m.cover[j] >> i & 1:
                a[ri, ci] = -1.0
    res = linprog(np.ones(len(cols)), A_ub=a, b_ub=-np.ones(len(rows)),
                  bounds=(0, 1), method="highs")
    if res.status != 0:
        return 0
    return math.ceil(res.fun - 1e-6)


def _bound(m: _Matrix, uncovered: int, alive: int, picked: Sequence[int],
           target: tuple[int, int]) -> tuple[int, int]:
    n, lits = _picked_cost(m, picked)
    lb_n, lb_l = _lower_bound(m, uncovered, alive)
    bound = (n + lb_n, lits + lb_l)
    if bound < target and uncovered.bit_count() > 8:
        lp = _lp_count_bound(m, uncovered, alive)
        if n + lp > bound[0]:
            bound = (n + lp, bound[1])
    return bound


def _exact(m: _Matrix) -> list[Cube]:
    """Minimum cover under the (count, literals, sorted cube list) order.

    The first pass finds the optimal (count, literals) pair by branching on
    the row with fewest candidates.  The second pass decides primes in cube
    order, including before excluding, so the first cover it reaches at the
    optimal cost is the lexicographically smallest one.
    """
    full = (1 << len(m.rows)) - 1
    all_primes = (1 << len(m.primes)) - 1
    greedy = _greedy(m)
    best = [(len(greedy), sum(c.literal_count for c in greedy))]

    def optimum(unc: int, alv: int, picked: list[int]):
        picked = list(picked)
        unc, alv = _reduce(m, unc, alv, picked)
        if not unc:
            best[0] = min(best[0], _picked_cost(m, picked))
            return
        if _infeasible(m, unc, alv) or _bound(m, unc, alv, picked, best[0]) >= best[0]:
            return
        row = min(_bits(unc), key=lambda i: ((m.covered_by[i] & alv).bit_count(), i))
        excluded = 0
        for j in _bits(m.covered_by[row] & alv):
            # earlier options are excluded below later ones
            optimum(unc & ~m.cover[j], alv & ~excluded & ~(1 << j), picked + [j])
            excluded |= 1 << j

    optimum(full, all_primes, [])
    target = best[0]
    by_cube = sorted(range(len(m.primes)), key=lambda j: m.primes[j])

    def smallest(unc: int, alv: int, picked: list[int]) -> list[int] | None:
        picked = list(picked)
        unc, alv = _reduce(m, unc, alv, picked)
        if not unc:
            return picked if _picked_cost(m, picked) == target else None
        if _infeasible(m, unc, alv) or _bound(m, unc, alv, picked, target) > target:
            return None
        j = next(j for j in by_cube if alv >> j & 1)
        found = smallest(unc & ~m.cover[j], alv & ~(1 << j), picked + [j])
        if found is not None:
            return found
        return smallest(unc, alv & ~(1 << j), picked)

    chosen = smallest(full, all_primes, [])
    if chosen is None:
        raise InvariantError("exact cover search lost its optimum")
    return [m.primes[j] for j in chosen]


def _greedy(m: _Matrix) -> list[Cube]:
    full = (1 << len(m.rows)) - 1
    alive = (1 << len(m.primes)) - 1
    chosen = _essentials(m, full, alive)
    essential = set(chosen)
    uncovered = full
    for j in chosen:
        uncovered &= ~m.cover[j]
    while uncovered:
        j = min((j for j in range(len(m.primes)) if j not in chosen and m.cover[j] & uncovered),
                key=lambda j: (-(m.cover[j] & uncovered).bit_count(), _cost(m.primes[j])))
        chosen.append(j)
        uncovered &= ~m.cover[j]
    # drop redundant picks, latest first
    for j in reversed(list(chosen)):
        if j in essential:
            continue
        rest = 0
        for k in chosen:
            if k != j:
                rest |= m.cover[k]
        if rest == full:
            chosen.remove(j)
    return [m.primes[j] for j in chosen]


def select_cover(primes: Iterable[Cube], t: TruthTable,
                 strategy: Strategy | str = Strategy.EXACT,
                 exact_limit: int = EXACT_LIMIT) -> Cover:
    """Choose primes covering every 1-row of ``t`` (DC rows are optional).

    EXACT returns a minimum-size cover, breaking ties by fewer literals and
    then by the lexicographically smallest sorted cube list.  GREEDY takes
    the essentials, then repeatedly the prime covering most uncovered rows.
    Either result is irredundant.
    """
    strategy = Strategy(strategy)
    if strategy is Strategy.EXACT and t.n > exact_limit:
        warnings.warn(f"{t.n} variables exceeds the exact limit of {exact_limit}; "
                      "falling back to greedy cover selection", RuntimeWarning, stacklevel=2)
        strategy = Strategy.GREEDY
    on = t.on_rows
    if not on:
        return Cover(Form.SOP, (), t.order)
    m = _Matrix(primes, on)
    cubes = _exact(m) if strategy is Strategy.EXACT else _greedy(m)
    return Cover(Form.SOP, tuple(sorted(cubes, key=Cube.display_key)), t.order)


def minimize(t: TruthTable, form: Form | str = Form.SOP,
             strategy: Strategy | str = Strategy.EXACT,
             exact_limit: int = EXACT_LIMIT) -> Cover:
    form = Form(form)
    if form is Form.SOP:
        return select_cover(prime_implicants(t), t, strategy, exact_limit)
    comp = t.complement()
    zeros = select_cover(prime_implicants(comp), comp, strategy, exact_limit)
    return Cover(Form.POS, zeros.cubes, t.order)


def minimize_sop(t: TruthTable, strategy: Strategy | str = Strategy.EXACT) -> Expr:
    return minimize(t, Form.SOP, strategy).to_expr()


def minimize_pos(t: TruthTable, strategy: Strategy | str = Strategy.EXACT) -> Expr:
    return minimize(t, Form.POS, strategy).to_expr()
