import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from logicsyn.errors import FormatError
from logicsyn.minimize import Cube, minimize
from logicsyn.pla import parse_pla_file, read_pla, read_pla_functions, write_pla
from logicsyn.techmap import PalProgram, PlaProgram, map_pla
from logicsyn.truthtab import DC, TruthTable

MAJORITY_PLA = """\
# majority of three
.i 3
.o 1
.p 4
011 1
101 1
110 1
111 1
.e
"""


def random_pla(rng: random.Random) -> PlaProgram:
    n, m = rng.randint(0, 5), rng.randint(1, 3)
    count = rng.randint(0, 6)
    terms = [Cube.from_string("".join(rng.choice("01-") for _ in range(n))) for _ in range(count)]
    plane = [tuple(rng.randint(0, 1) for _ in range(m)) for _ in terms]
    capacity = count + rng.choice((0, 0, 1, 3))
    inputs = tuple(f"x{k}" for k in range(n)) if rng.random() < 0.5 else tuple("ABCDE"[:n])
    outputs = tuple(f"y{j}" for j in range(m))
    return PlaProgram(inputs, outputs, tuple(terms), tuple(plane), capacity)


def test_read_majority_functions():
    tables = read_pla_functions(MAJORITY_PLA)
    assert list(tables) == ["F"]
    t = tables["F"]
    assert t.order == ("A", "B", "C")
    assert minimize(t).render() == "AB + AC + BC"


def test_majority_pla_program_round_trip():
    p = map_pla([minimize(read_pla_functions(MAJORITY_PLA)["F"])])
    text = write_pla(p)
    assert text == ".i 3\n.o 1\n.ilb A B C\n.ob F\n.p 3\n11- 1\n1-1 1\n-11 1\n.e\n"
    assert read_pla(text) == p


def test_dont_care_outputs():
    tables = read_pla_functions(".i 2\n.o 2\n.ob F G\n11 1-\n0- -1\n.e\n")
    assert tables["F"].outputs == (DC, DC, 0, 1)
    assert tables["G"].outputs == (1, 1, 0, DC)


def test_pal_round_trip():
    p = PalProgram(("A", "B"), ("F", "G"),
                   ((Cube.from_string("1-"),), (Cube.from_string("01"), Cube.from_string("10"))), 2)
    text = write_pla(p)
    assert ".pal 2" in text
    assert read_pla(text) == p


def test_zero_input_program():
    p = PlaProgram((), ("F",), (Cube.from_string(""),), ((1,),), 1)
    assert read_pla(write_pla(p)) == p
    assert p.table(0).outputs == (1,)


@pytest.mark.parametrize("text, match", [
    (".i 2\n.o 1\n.foo\n", "line 3: unknown directive"),
    (".i 2\n.o 1\n1 1\n", "line 3"),
    (".i 2\n.o 1\n11 2\n", "line 3"),
    (".i 2\n.o 1\n11 -\n", "line 3"),
    ("11 1\n", "line 1: term line before"),
    (".i 2\n.o 1\n.p 2\n11 1\n", "declares 2"),
    (".i 2\n.o 1\n.e\n11 1\n", "line 4: content after"),
    (".o 1\n", "missing"),
    (".i 2\n.o 1\n.ilb A\n", ".ilb"),
    (".i x\n.o 1\n", "line 1"),
])
def test_strict_parse_errors(text, match):
    with pytest.raises(FormatError, match=match):
        read_pla(text)


def test_pal_terms_feed_one_output():
    with pytest.raises(FormatError, match="line 4"):
        read_pla(".i 1\n.o 2\n.pal 3\n1 11\n.e\n")


def test_capacity_directive_only_when_needed():
    p = map_pla([minimize(read_pla_functions(MAJORITY_PLA)["F"])], capacity=5)
    assert ".cap 5" in write_pla(p)
    assert read_pla(write_pla(p)).capacity == 5


def test_default_names():
    f = parse_pla_file(".i 2\n.o 2\n")
    assert f.input_names() == ("A", "B")
    assert f.output_names() == ("F0", "F1")


@given(st.randoms(use_true_random=False))
def test_round_trip_is_field_exact(rng):
    p = random_pla(rng)
    q = read_pla(write_pla(p))
    assert q == p
    assert (q.inputs, q.outputs, q.terms, q.or_plane, q.capacity) == \
        (p.inputs, p.outputs, p.terms, p.or_plane, p.capacity)


def test_function_reading_agrees_with_program():
    rng = random.Random(5)
    for _ in range(30):
        p = random_pla(rng)
        tables = read_pla_functions(write_pla(p))
        for j, name in enumerate(p.outputs):
            assert tables[name] == p.table(j)
