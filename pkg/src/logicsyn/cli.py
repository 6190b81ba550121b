"""Command-line front end.

Exit status is 0 on success, 1 for bad input and 2 when an internal
self-check fails.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import expr as ex
from .errors import FormatError, InvariantError, LogicError
from .minimize import Cover, Form, Strategy, minimize
from .netlist import Netlist, eval_comb, format_netlist, parse_netlist, synth_covers, to_dot
from .pla import read_pla_functions, write_pla
from .seq import (excitation_equations, excitation_names, parse_state_table, read_stimuli,
                  simulate, synth_fsm)
from .techmap import DEFAULT_PAL_TERMS, map_mux, map_pal, map_pla
from .truthtab import (DC, TruthTable, counterexample, format_table, from_expr,
                       kmap_render, parse_table, row_bits)


class UsageError(LogicError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _split_names(text: str | None) -> tuple[str, ...] | None:
    if text is None:
        return None
    names = tuple(text.replace(",", " ").split())
    if len(set(names)) != len(names):
        raise UsageError(f"--order repeats a variable: {text}")
    return names


# --- loading functions -----------------------------------------------------

def _reorder(t: TruthTable, order: tuple[str, ...]) -> TruthTable:
    if sorted(order) != sorted(t.order):
        raise UsageError(f"--order {' '.join(order)} is not a permutation of {' '.join(t.order)}")
    pos = [order.index(v) for v in t.order]

    def value(*bits):
        row = 0
        for p in pos:
            row = (row << 1) | bits[p]
        return t.outputs[row]

    return TruthTable.from_function(order, value)


def _expression_lines(text: str, alphabet) -> dict[str, ex.Expr]:
    out: dict[str, ex.Expr] = {}
    lines = [(k, raw.split("#", 1)[0].strip()) for k, raw in enumerate(text.splitlines(), 1)]
    lines = [(k, line) for k, line in lines if line]
    for k, line in lines:
        if "=" in line:
            name, body = (s.strip() for s in line.split("=", 1))
            if not name or not name.isidentifier():
                raise FormatError(f"bad function name {name!r}", k)
        elif len(lines) == 1:
            name, body = "F", line
        else:
            raise FormatError("expected '<name> = <expression>'", k)
        if name in out:
            raise FormatError(f"function {name!r} defined twice", k)
        try:
            out[name] = ex.parse(body, alphabet)
        except LogicError as err:
            raise FormatError(str(err), k) from None
    if not out:
        raise FormatError("no functions defined")
    return out


def load_functions(source: str, order: tuple[str, ...] | None) -> dict[str, TruthTable]:
    """Read an expression, a ``.tt`` table, a ``.pla`` file or a file of
    ``name = expr`` lines into truth tables sharing one variable order."""
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
        if source.endswith(".pla"):
            tables = read_pla_functions(text)
        elif source.endswith(".tt"):
            tables = {"F": parse_table(text)}
        else:
            return _tables(_expression_lines(text, order), order)
        if order is not None:
            tables = {k: _reorder(t, order) for k, t in tables.items()}
        return tables
    return _tables({"F": ex.parse(source, order)}, order)


def _tables(exprs: dict[str, ex.Expr], order) -> dict[str, TruthTable]:
    if order is None:
        order = tuple(dict.fromkeys(v for e in exprs.values() for v in ex.variables(e)))
    return {k: from_expr(e, order) for k, e in exprs.items()}


def _single(tables: dict[str, TruthTable], what: str) -> tuple[str, TruthTable]:
    if len(tables) != 1:
        raise UsageError(f"{what} takes a single function, got {len(tables)}")
    return next(iter(tables.items()))


# --- output ----------------------------------------------------------------

def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_dot(args, text: str) -> None:
    with open(args.dot, "w", encoding="utf-8") as fh:
        fh.write(text)


def _expr_dot(e: ex.Expr) -> str:
    lines = ["digraph expr {"]
    counter = iter(range(1 << 30))

    def walk(node: ex.Expr) -> str:
        ident = f"n{next(counter)}"
        if node.kind is ex.Kind.VAR:
            label = node.name
        elif node.kind is ex.Kind.CONST:
            label = str(node.value)
        else:
            label = node.kind.value
        lines.append(f'  {ident} [label="{label}"];')
        for child in node.children:
            lines.append(f"  {ident} -> {walk(child)};")
        return ident

    walk(e)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _named(name: str, body: str, tables: dict) -> str:
    return body if list(tables) == ["F"] else f"{name} = {body}"


# --- commands --------------------------------------------------------------

def cmd_parse(args) -> int:
    e = ex.parse(args.expr, _split_names(args.order))
    if args.dot:
        _write_dot(args, _expr_dot(e))
    _emit(args, ex.render(e) + "\n")
    return 0


def cmd_table(args) -> int:
    tables = load_functions(args.source, _split_names(args.order))
    parts = []
    for name, t in tables.items():
        prefix = "" if list(tables) == ["F"] else f"# {name}\n"
        parts.append(prefix + format_table(t))
    _emit(args, "\n".join(parts))
    return 0


def cmd_kmap(args) -> int:
    tables = load_functions(args.source, _split_names(args.order))
    parts = []
    for name, t in tables.items():
        prefix = "" if list(tables) == ["F"] else f"# {name}\n"
        parts.append(prefix + kmap_render(t).text() + "\n")
    _emit(args, "\n".join(parts))
    return 0


def _checked_cover(t: TruthTable, form: Form, strategy: Strategy) -> Cover:
    cover = minimize(t, form, strategy)
    if not t.agrees(cover.table()):
        raise InvariantError(f"minimized cover {cover.render()} disagrees with its table")
    return cover


def cmd_minimize(args) -> int:
    tables = load_functions(args.source, _split_names(args.order))
    form, strategy = Form(args.form), Strategy(args.strategy)
    covers = {name: _checked_cover(t, form, strategy) for name, t in tables.items()}
    out = [_named(name, c.render(), tables) for name, c in covers.items()]
    kind = "terms" if form is Form.SOP else "clauses"
    out += [f"# {name}: {len(c.cubes)} {kind}, {c.literal_count} literals"
            for name, c in covers.items()]
    _emit(args, "\n".join(out) + "\n")
    return 0


def cmd_check(args) -> int:
    order = _split_names(args.order)
    a, b = ex.parse(args.a, order), ex.parse(args.b, order)
    if order is None:
        order = tuple(dict.fromkeys(ex.variables(a) + ex.variables(b)))
    cex = counterexample(a, b, args.bound, order)
    if cex is None:
        _emit(args, "equivalent\n")
    else:
        assignment = ", ".join(f"{k}={v}" for k, v in cex.items())
        _emit(args, f"not equivalent: {assignment}\n")
    return 0


def _verify_netlist(nl: Netlist, tables: dict[str, TruthTable], names: dict[str, str]) -> None:
    order = next(iter(tables.values())).order
    for row in range(1 << len(order)):
        outs = eval_comb(nl, dict(zip(order, row_bits(row, len(order)))))
        for fname, t in tables.items():
            want = t.outputs[row]
            if want is not DC and outs[names[fname]] != want:
                raise InvariantError(f"netlist output {names[fname]} is wrong on row {row}")


def cmd_synth(args) -> int:
    order = _split_names(args.order)
    tables = load_functions(args.source, None if args.target == "mux" else order)
    strategy = Strategy(args.strategy)
    if args.target == "mux":
        name, t = _single(tables, "--target mux")
        nl = map_mux(t, order, output=name)
        _verify_netlist(nl, tables, {name: name})
        text = format_netlist(nl)
    elif args.target == "aoi":
        covers = {name: _checked_cover(t, Form.SOP, strategy) for name, t in tables.items()}
        nl = synth_covers(covers)
        _verify_netlist(nl, tables, {k: k for k in tables})
        comments = [f"{k} = {c.render()}" for k, c in covers.items()]
        text = format_netlist(nl, comments)
    else:
        covers = [_checked_cover(t, Form.SOP, strategy) for t in tables.values()]
        names = list(tables)
        if args.target == "pla":
            prog = map_pla(covers, args.capacity, names)
        else:
            prog = map_pal(covers, args.pal_terms, names)
        for j, t in enumerate(tables.values()):
            if not t.agrees(prog.table(j)):
                raise InvariantError(f"programmed output {names[j]} disagrees with its table")
        if args.dot:
            raise UsageError("--dot applies to gate-level targets only")
        _emit(args, write_pla(prog))
        return 0
    if args.dot:
        _write_dot(args, to_dot(nl))
    _emit(args, text)
    return 0


def cmd_fsm(args) -> int:
    with open(args.table, encoding="utf-8") as fh:
        st = parse_state_table(fh.read())
    nl = synth_fsm(st, args.ff)
    report = []
    for name, t in zip(excitation_names(st, args.ff), excitation_equations(st, args.ff)):
        report.append(f"{name} = {minimize(t).render()}")
    # one clock step from every defined state must land on its table row
    for code in st.defined_states():
        bits = row_bits(code, st.width)
        wave = simulate(nl, 1, reset=bits)
        got = tuple(wave.values[0])
        want = st.rows[code]
        if any(w is not DC and g != w for g, w in zip(got, want)):
            raise InvariantError(f"synthesized machine leaves state {code} for {got}, not {want}")
    if args.dot:
        _write_dot(args, to_dot(nl, "fsm"))
    text = format_netlist(nl, report)
    if args.out:
        sys.stdout.write("\n".join(report) + "\n")
    _emit(args, text)
    return 0


def cmd_sim(args) -> int:
    with open(args.netlist, encoding="utf-8") as fh:
        nl = parse_netlist(fh.read())
    stimuli = None
    if args.stimuli:
        with open(args.stimuli, encoding="utf-8") as fh:
            stimuli = read_stimuli(fh.read())
    if args.reset is None:
        reset = "0" * len(nl.flops)
    elif args.reset.lower() == "x":
        reset = None
    else:
        reset = args.reset
    watch = _split_names(args.watch)
    wave = simulate(nl, args.cycles, stimuli, reset, watch)
    if args.dot:
        _write_dot(args, to_dot(nl))
    _emit(args, wave.to_csv())
    return 0


# --- argument parsing ------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--order", help="variable order, comma or space separated")
    common.add_argument("--out", help="write the result to this file instead of stdout")
    common.add_argument("--dot", help="also write a Graphviz diagram to this file")

    parser = _Parser(prog="logicsyn", description="Two-level logic synthesis toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("parse", parents=[common], help="parse and re-print an expression")
    p.add_argument("expr")
    p.set_defaults(func=cmd_parse)

    for name, func, text in (("table", cmd_table, "print the truth table"),
                             ("kmap", cmd_kmap, "print the Karnaugh map")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("source", help="expression, .tt, .pla or 'name = expr' file")
        p.set_defaults(func=func)

    p = sub.add_parser("minimize", parents=[common], help="minimize to SOP or POS")
    p.add_argument("source")
    p.add_argument("--form", choices=["sop", "pos"], default="sop")
    p.add_argument("--strategy", choices=["exact", "greedy"], default="exact")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("check", parents=[common], help="test two expressions for equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--bound", type=int, default=24, help="maximum number of variables")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synth", parents=[common], help="map functions to gates or arrays")
    p.add_argument("source")
    p.add_argument("--target", choices=["aoi", "pla", "pal", "mux"], default="aoi")
    p.add_argument("--strategy", choices=["exact", "greedy"], default="exact")
    p.add_argument("--capacity", type=int, help="PLA product-term capacity")
    p.add_argument("--pal-terms", type=int, default=DEFAULT_PAL_TERMS,
                   help="product terms per PAL output")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("fsm", parents=[common], help="synthesize a state table")
    p.add_argument("table")
    p.add_argument("--ff", choices=["d", "jk"], default="d", type=str.lower)
    p.set_defaults(func=cmd_fsm)

    p = sub.add_parser("sim", parents=[common], help="clock a netlist and print a waveform")
    p.add_argument("netlist")
    p.add_argument("--cycles", type=int, default=8)
    p.add_argument("--reset", help="initial flip-flop bits (default all 0; 'x' for unknown)")
    p.add_argument("--stimuli", help="CSV of primary-input values, one row per cycle")
    p.add_argument("--watch", help="nets to record (default: primary outputs)")
    p.set_defaults(func=cmd_sim)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "cycles", 0) < 0:
            raise UsageError("--cycles must be non-negative")
        return args.func(args)
    except (InvariantError, AssertionError) as err:
        print(f"internal error: {err}", file=sys.stderr)
        return 2
    except (LogicError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
