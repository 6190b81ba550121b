import subprocess
import sys
from pathlib import Path

import pytest

from logicsyn.cli import main
from logicsyn.expr import parse
from logicsyn.netlist import eval_comb, parse_netlist, stats
from logicsyn.pla import read_pla
from logicsyn.truthtab import equivalent, row_bits

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# --- table, parse, kmap ----------------------------------------------------

def test_table_and(capsys):
    assert run(capsys, "table", "AB") == (0, "A B\n00 0\n01 0\n10 0\n11 1\n", "")


def test_table_or(capsys):
    _, out, _ = run(capsys, "table", "A + B")
    assert out.splitlines()[1:] == ["00 0", "01 1", "10 1", "11 1"]


def test_table_constant(capsys):
    assert run(capsys, "table", "1")[1] == "\n1\n"


def test_table_with_order(capsys):
    _, out, _ = run(capsys, "table", "B", "--order", "A,B")
    assert out == "A B\n00 0\n01 1\n10 0\n11 1\n"


def test_parse_error_exits_one(capsys):
    code, out, err = run(capsys, "table", "A +")
    assert code == 1 and out == ""
    assert "position 3" in err


def test_parse_and_dot(capsys, tmp_path):
    dot = tmp_path / "e.dot"
    code, out, _ = run(capsys, "parse", "A.B' + (C)", "--dot", str(dot))
    assert (code, out) == (0, "AB' + C\n")
    assert dot.read_text().startswith("digraph expr")


def test_kmap(capsys):
    _, out, _ = run(capsys, "kmap", "AB + CD")
    assert out.splitlines()[0].strip() == "CD"
    assert out.splitlines()[1] == "AB 00 01 11 10"


# --- minimize --------------------------------------------------------------

def test_minimize_f(capsys):
    code, out, _ = run(capsys, "minimize", "A'B'C' + A'B'C + ABC' + AB'C'")
    assert code == 0
    assert out == "A'B' + AC'\n# F: 2 terms, 4 literals\n"


def test_minimize_pos_is_equivalent(capsys):
    source = "ABC + A'BC + AB'C'"
    _, out, _ = run(capsys, "minimize", "--form", "pos", source)
    assert equivalent(parse(out.splitlines()[0]), parse(source))


def test_minimize_pla_file(capsys):
    _, out, _ = run(capsys, "minimize", str(SAMPLES / "majority.pla"))
    assert out.splitlines()[0] == "AB + AC + BC"


def test_minimize_truth_table_file(capsys):
    _, out, _ = run(capsys, "minimize", str(SAMPLES / "g.tt"), "--strategy", "greedy")
    assert out.splitlines()[0] == "A'B' + B'D' + CD"


def test_minimize_function_file(capsys):
    _, out, _ = run(capsys, "minimize", str(SAMPLES / "adder.fn"))
    assert out.splitlines()[:2] == ["S = A'B'C + A'BC' + AB'C' + ABC", "Co = AB + AC + BC"]


def test_function_file_errors(capsys, tmp_path):
    bad = tmp_path / "bad.fn"
    bad.write_text("F = AB\nnonsense\n")
    code, _, err = run(capsys, "minimize", str(bad))
    assert code == 1 and "line 2" in err
    bad.write_text("F = A +\n")
    code, _, err = run(capsys, "minimize", str(bad))
    assert code == 1 and "line 1" in err


# --- check -----------------------------------------------------------------

def test_check_equivalent(capsys):
    assert run(capsys, "check", "A'BC + AB'C + ABC' + ABC", "AB + AC + BC")[1] == "equivalent\n"


def test_check_counterexample(capsys):
    assert run(capsys, "check", "A", "B")[1] == "not equivalent: A=1, B=0\n"


def test_check_bound(capsys):
    big = " + ".join(chr(ord("A") + k) for k in range(25))
    code, _, err = run(capsys, "check", big, big)
    assert code == 1 and "bound" in err


# --- synth -----------------------------------------------------------------

def test_synth_aoi_majority(capsys):
    code, out, _ = run(capsys, "synth", "--target", "aoi", "AB + AC + BC")
    assert code == 0
    nl = parse_netlist(out)
    assert stats(nl).counts == {"AND": 3, "OR": 1}


def test_synth_pla(capsys):
    _, out, _ = run(capsys, "synth", "--target", "pla", str(SAMPLES / "majority.pla"))
    assert len(read_pla(out).terms) == 3
    assert sum(1 for line in out.splitlines() if line[:1] in "01-") == 3


def test_synth_pla_capacity_error(capsys):
    code, _, err = run(capsys, "synth", "--target", "pla", "--capacity", "2",
                       str(SAMPLES / "majority.pla"))
    assert code == 1 and "3" in err and "2" in err


def test_synth_pal(capsys):
    code, out, _ = run(capsys, "synth", "--target", "pal", str(SAMPLES / "adder.fn"),
                       "--pal-terms", "4")
    assert code == 0 and ".pal 4" in out


def test_synth_mux(capsys, tmp_path):
    dot = tmp_path / "m.dot"
    code, out, _ = run(capsys, "synth", "--target", "mux", "AB", "--dot", str(dot))
    assert code == 0
    nl = parse_netlist(out)
    for r in range(4):
        a, b = row_bits(r, 2)
        assert eval_comb(nl, {"A": a, "B": b})["F"] == (a & b)
    assert dot.exists()


def test_synth_mux_needs_single_function(capsys):
    code, _, err = run(capsys, "synth", "--target", "mux", str(SAMPLES / "adder.fn"))
    assert code == 1 and "single function" in err


def test_synth_writes_out_file(capsys, tmp_path):
    out_file = tmp_path / "maj.net"
    code, out, _ = run(capsys, "synth", "AB + AC + BC", "--out", str(out_file))
    assert code == 0 and out == ""
    assert parse_netlist(out_file.read_text()).outputs == ("F",)


# --- fsm and sim -----------------------------------------------------------

def test_fsm_counter(capsys, tmp_path):
    net = tmp_path / "counter.net"
    code, out, _ = run(capsys, "fsm", str(SAMPLES / "counter.st"), "--ff", "d", "--out", str(net))
    assert code == 0
    assert out == "Da = Qa'.Qb.Qc + Qa.Qb' + Qa.Qc'\nDb = Qb'.Qc + Qb.Qc'\nDc = Qc'\n"
    code, out, _ = run(capsys, "sim", str(net), "--cycles", "8", "--reset", "000")
    rows = out.splitlines()
    assert rows[0] == "Qa,Qb,Qc"
    assert [r.replace(",", "") for r in rows[1:]] == [
        "001", "010", "011", "100", "101", "110", "111", "000"]
    assert run(capsys, "sim", str(net), "--cycles", "0")[1] == "Qa,Qb,Qc\n"


def test_fsm_toggler_jk(capsys):
    code, out, _ = run(capsys, "fsm", str(SAMPLES / "toggler.st"), "--ff", "jk")
    assert code == 0
    assert out.startswith("# Ja = 1\n# Ka = 1\n")
    assert parse_netlist(out).flops[0].kind == "JK"


def test_fsm_bad_row_names_line(capsys, tmp_path):
    bad = tmp_path / "bad.st"
    bad.write_text("states 2\n00 -> 01\n01 -> 1\n")
    code, _, err = run(capsys, "fsm", str(bad))
    assert code == 1 and "line 3" in err


def test_sim_missing_stimuli(capsys, tmp_path):
    net = tmp_path / "d.net"
    net.write_text("input D\noutput Q\ndff f D D -> Q\n")
    code, _, err = run(capsys, "sim", str(net), "--cycles", "2")
    assert code == 1 and "stimulus" in err
    stim = tmp_path / "s.csv"
    stim.write_text("D\n1\n0\n")
    code, out, _ = run(capsys, "sim", str(net), "--cycles", "2", "--stimuli", str(stim),
                       "--watch", "D,Q")
    assert (code, out) == (0, "D,Q\n1,1\n0,0\n")


def test_sim_unknown_reset(capsys, tmp_path):
    net = tmp_path / "d.net"
    net.write_text("output Q\ngate c CONST1 -> one\ndff f JK one one -> Q\n")
    assert run(capsys, "sim", str(net), "--cycles", "1", "--reset", "x")[1] == "Q\nX\n"
    assert run(capsys, "sim", str(net), "--cycles", "2")[1] == "Q\n1\n0\n"


# --- general ---------------------------------------------------------------

def test_missing_file_and_bad_usage(capsys):
    assert run(capsys, "sim", "/nonexistent.net")[0] == 1
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "minimize", "AB", "--form", "xyz")[0] == 1
    assert run(capsys, "sim", str(SAMPLES / "counter.st"), "--cycles", "-1")[0] == 1


def test_internal_errors_exit_two(capsys, monkeypatch):
    import logicsyn.cli as cli

    def broken(*args, **kwargs):
        raise AssertionError("boom")

    monkeypatch.setattr(cli, "minimize", broken)
    code, _, err = run(capsys, "minimize", "AB")
    assert code == 2 and "boom" in err


def test_output_is_deterministic(capsys):
    first = run(capsys, "synth", str(SAMPLES / "adder.fn"))
    second = run(capsys, "synth", str(SAMPLES / "adder.fn"))
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "logicsyn", "minimize", "AB + AB'"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "A"
