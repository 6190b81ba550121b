"""Acceptance criteria, one test each.

A PASS/FAIL line per criterion is printed in the pytest terminal summary
(see conftest.py).
"""

import itertools
import random
import time

import pytest

from logicsyn.expr import evaluate, parse
from logicsyn.minimize import Cube, minimize, minimize_sop, prime_implicants
from logicsyn.netlist import eval_comb, synth_covers
from logicsyn.pla import read_pla, write_pla
from logicsyn.seq import ff_next, parse_state_table, simulate, synth_fsm, excitation_equations, \
    StateTable
from logicsyn.techmap import PlaProgram, half_adder, map_mux, map_pal, map_pla
from logicsyn.truthtab import DC, TruthTable, equivalent, row_bits

from oracles import brute_min_cover, brute_primes, cube_rows, random_table

criterion = pytest.mark.criterion


def _random_tables(seed, count, sizes, dc_rate):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.choice(sizes)
        out.append(TruthTable(tuple("ABCDEFG"[:n]), tuple(random_table(rng, n, dc_rate))))
    return out


def _matches(e, t):
    for r, want in enumerate(t.outputs):
        if want is not DC and evaluate(e, t.assignment(r)) != want:
            return False
    return True


@criterion(1, "worked examples f, majority and g, each under 1 s")
def test_worked_examples():
    f_text = "A'B'C' + A'B'C + ABC' + AB'C'"
    maj_text = "A'BC + AB'C + ABC' + ABC"
    g_rows = {0, 1, 2, 3, 7, 8, 10, 11, 15}

    start = time.perf_counter()
    f = TruthTable.from_rows("ABC", [0, 1, 4, 6])
    cover = minimize(f)
    assert (len(cover.cubes), cover.literal_count) == (2, 4)
    assert cover.render() == "A'B' + AC'"
    assert equivalent(cover.to_expr(), parse(f_text))
    assert brute_min_cover(brute_primes(3, {0, 1, 4, 6}, set()), {0, 1, 4, 6}) == (2, 4)
    assert time.perf_counter() - start < 1.0

    start = time.perf_counter()
    maj = TruthTable.from_rows("ABC", [3, 5, 6, 7])
    cover = minimize(maj)
    assert [c.literal_count for c in cover.cubes] == [2, 2, 2]
    assert equivalent(cover.to_expr(), parse(maj_text))
    assert time.perf_counter() - start < 1.0

    start = time.perf_counter()
    g = TruthTable.from_rows("ABCD", sorted(g_rows))
    cover = minimize(g)
    assert len(cover.cubes) <= 3
    e = cover.to_expr()
    assert all(evaluate(e, g.assignment(r)) == int(r in g_rows) for r in range(16))
    assert time.perf_counter() - start < 1.0


@criterion(2, "minimizer soundness on 1000 random tables with don't-cares, under 30 s")
def test_minimizer_soundness():
    tables = _random_tables(2024, 1000, [2, 3, 4, 5, 6], 0.1)
    start = time.perf_counter()
    results = [minimize_sop(t) for t in tables]
    elapsed = time.perf_counter() - start
    failures = [k for k, (e, t) in enumerate(zip(results, tables)) if not _matches(e, t)]
    assert not failures
    assert elapsed < 30.0, f"{elapsed:.1f} s"


@criterion(3, "exact cover size equals the brute-force minimum for all 256 three-variable functions")
def test_exact_optimality_three_variables():
    start = time.perf_counter()
    mismatches = []
    for bits in itertools.product((0, 1), repeat=8):
        t = TruthTable(("A", "B", "C"), bits)
        on = set(t.on_rows)
        size = len(minimize(t).cubes)
        if size != brute_min_cover(brute_primes(3, on, set()), on)[0]:
            mismatches.append(bits)
    elapsed = time.perf_counter() - start
    assert not mismatches
    assert elapsed < 10.0, f"{elapsed:.1f} s"


@criterion(4, "returned primes pass the expansion test and covers are irredundant on 500 tables")
def test_primality_and_irredundancy():
    for t in _random_tables(77, 500, [1, 2, 3, 4, 5], 0.1):
        allowed = set(t.on_rows) | set(t.dc_rows)
        on = set(t.on_rows)
        cover = minimize(t)
        primes = prime_implicants(t)
        for c in primes:
            s = str(c)
            assert cube_rows(s) <= allowed
            for k, ch in enumerate(s):
                if ch != "-":
                    assert cube_rows(s[:k] + "-" + s[k + 1:]) - allowed
        assert set(cover.cubes) <= primes
        for k in range(len(cover.cubes)):
            rest = [str(c) for j, c in enumerate(cover.cubes) if j != k]
            assert not on <= set().union(set(), *(cube_rows(s) for s in rest))


@criterion(5, "AOI, PLA, PAL and MUX realizations of 200 random functions match their tables")
def test_technology_mapping_equivalence():
    for t in _random_tables(5, 200, [1, 2, 3, 4], 0.1):
        cover = minimize(t)
        assignments = [t.assignment(r) for r in range(1 << t.n)]
        aoi = synth_covers({"F": cover})
        pla = map_pla([cover])
        pal = map_pal([cover], per_output_terms=max(1, len(cover.cubes)))
        for r, sigma in enumerate(assignments):
            want = t.outputs[r]
            if want is DC:
                continue
            assert eval_comb(aoi, sigma)["F"] == want
            assert pla.value(0, r) == want
            assert pal.value(0, r) == want
        for perm in itertools.permutations(t.order):
            mux = map_mux(t, perm)
            for r, sigma in enumerate(assignments):
                if t.outputs[r] is not DC:
                    assert eval_comb(mux, sigma)["F"] == t.outputs[r]


@criterion(6, "half adder matches two-bit binary addition")
def test_half_adder():
    ha = half_adder()
    for a, b in itertools.product((0, 1), repeat=2):
        out = eval_comb(ha, {"A": a, "B": b})
        assert (out["carry"], out["sum"]) == divmod(a + b, 2)


# (kind, inputs, next state); "q" holds, "q'" complements, None is invalid
FLIP_FLOP_ROWS = [
    ("RS", (0, 0), "q"), ("RS", (0, 1), 0), ("RS", (1, 0), 1), ("RS", (1, 1), None),
    ("JK", (0, 0), "q"), ("JK", (0, 1), 0), ("JK", (1, 0), 1), ("JK", (1, 1), "q'"),
    ("D", (0,), 0), ("D", (1,), 1),
    ("SR_LATCH", (0, 1), 1), ("SR_LATCH", (1, 0), 0), ("SR_LATCH", (1, 1), "q"),
    ("SR_LATCH", (0, 0), None),
]


@criterion(7, "flip-flop and latch characteristic tables reproduced row by row")
def test_flip_flop_tables():
    for kind, inputs, nxt in FLIP_FLOP_ROWS:
        for q in (0, 1):
            want = {"q": q, "q'": 1 - q}.get(nxt, nxt)
            assert ff_next(kind, inputs, q) == want, (kind, inputs, q)


COUNTER_FILE = """\
# present state -> next state
states 3
reset 000
000 -> 001
001 -> 010
010 -> 011
011 -> 100
100 -> 101
101 -> 110
110 -> 111
111 -> 000
"""


@criterion(8, "counter from its state-table file counts k mod 8 for 0 <= k <= 32")
def test_counter_end_to_end():
    st = parse_state_table(COUNTER_FILE)
    nl = synth_fsm(st, "D")
    wave = simulate(nl, 32, reset=st.reset)
    states = [0] + [int(wave.word(t), 2) for t in range(32)]
    assert states == [k % 8 for k in range(33)]
    # each D equation must reproduce its next-state column
    for i, t in enumerate(excitation_equations(st, "D")):
        column = tuple(((k + 1) % 8 >> (2 - i)) & 1 for k in range(8))
        e = minimize(t).to_expr()
        assert tuple(evaluate(e, dict(zip(st.names, row_bits(k, 3)))) for k in range(8)) == column


@criterion(9, "100 random state tables: synthesized machines follow every defined trajectory")
def test_fsm_round_trip():
    rng = random.Random(9)
    for _ in range(100):
        w = rng.randint(1, 4)
        size = 1 << w
        defined = rng.sample(range(size), rng.randint(1, size))
        nexts = {s: rng.choice(defined) for s in defined}
        st = StateTable.from_transitions(w, nexts)
        nl = synth_fsm(st, "D")
        steps = size + 2
        for start in defined:
            wave = simulate(nl, steps, reset=row_bits(start, w))
            code, expected = start, []
            for _ in range(steps):
                code = nexts[code]
                expected.append(code)
            assert [int(wave.word(t), 2) for t in range(steps)] == expected


@criterion(10, "PLA emit-then-parse is field-exact for 100 random programs")
def test_pla_round_trip():
    rng = random.Random(10)
    for _ in range(100):
        n, m = rng.randint(1, 6), rng.randint(1, 4)
        terms = tuple(dict.fromkeys(
            Cube.from_string("".join(rng.choice("01-") for _ in range(n)))
            for _ in range(rng.randint(0, 8))))
        plane = tuple(tuple(rng.randint(0, 1) for _ in range(m)) for _ in terms)
        p = PlaProgram(tuple(f"i{k}" for k in range(n)), tuple(f"o{j}" for j in range(m)),
                       terms, plane, len(terms) + rng.randint(0, 2))
        q = read_pla(write_pla(p))
        assert (q.inputs, q.outputs, q.terms, q.or_plane, q.capacity) == \
            (p.inputs, p.outputs, p.terms, p.or_plane, p.capacity)
