"""Gate-level netlists.

Every net has exactly one driver: a primary input, a gate output, or a
flip-flop ``Q``/``Q'``.  Primary nets keep their names and internal nets are
called ``<gate id>_o``.  Values are 0, 1 or ``X`` (``None``) for unknown.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CoverError, FormatError, MissingVariableError, NetlistError
from .minimize import Cover, Cube, Form, Lit

X = None

LOGIC_KINDS = ("AND", "OR", "NOT", "NAND", "NOR", "XOR", "XNOR")
GATE_KINDS = LOGIC_KINDS + ("BUF", "CONST0", "CONST1")
FF_ARITY = {"D": 1, "JK": 2, "RS": 2}


@dataclass(frozen=True)
class Gate:
    id: str
    kind: str
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class FlipFlop:
    id: str
    kind: str
    inputs: tuple[str, ...]
    q: str
    qbar: str | None = None


@dataclass(frozen=True)
class Netlist:
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    gates: tuple[Gate, ...] = ()
    flops: tuple[FlipFlop, ...] = ()
    _topo: tuple[int, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("inputs", "outputs", "gates", "flops"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "_topo", self._validate())

    def _validate(self) -> tuple[int, ...]:
        drivers: dict[str, str] = {}

        def drive(net: str, by: str):
            if not net:
                raise NetlistError(f"{by} drives an empty net name")
            if net in drivers:
                raise NetlistError(f"net {net!r} has two drivers: {drivers[net]} and {by}")
            drivers[net] = by

        ids: set[str] = set()
        for net in self.inputs:
            drive(net, "primary input")
        for g in self.gates:
            if g.id in ids:
                raise NetlistError(f"duplicate element id {g.id!r}")
            ids.add(g.id)
            if g.kind not in GATE_KINDS:
                raise NetlistError(f"gate {g.id}: unknown kind {g.kind!r}")
            arity = len(g.inputs)
            if g.kind in ("NOT", "BUF") and arity != 1:
                raise NetlistError(f"gate {g.id}: {g.kind} takes one input, got {arity}")
            if g.kind.startswith("CONST") and arity:
                raise NetlistError(f"gate {g.id}: constants take no inputs")
            if g.kind in LOGIC_KINDS and g.kind != "NOT" and arity < 2:
                raise NetlistError(f"gate {g.id}: {g.kind} needs at least two inputs")
            drive(g.output, f"gate {g.id}")
        for f in self.flops:
            if f.id in ids:
                raise NetlistError(f"duplicate element id {f.id!r}")
            ids.add(f.id)
            if f.kind not in FF_ARITY:
                raise NetlistError(f"flip-flop {f.id}: unknown kind {f.kind!r}")
            if len(f.inputs) != FF_ARITY[f.kind]:
                raise NetlistError(f"flip-flop {f.id}: {f.kind} takes {FF_ARITY[f.kind]} inputs")
            drive(f.q, f"flip-flop {f.id}")
            if f.qbar is not None:
                drive(f.qbar, f"flip-flop {f.id}")
        used = [n for g in self.gates for n in g.inputs]
        used += [n for f in self.flops for n in f.inputs]
        used += list(self.outputs)
        for net in used:
            if net not in drivers:
                raise NetlistError(f"net {net!r} has no driver")
        return _topological(self.gates)

    @property
    def topological_gates(self) -> tuple[Gate, ...]:
        return tuple(self.gates[i] for i in self._topo)

    def nets(self) -> tuple[str, ...]:
        out = list(self.inputs)
        out += [g.output for g in self.gates]
        for f in self.flops:
            out.append(f.q)
            if f.qbar is not None:
                out.append(f.qbar)
        return tuple(out)


def _topological(gates: Sequence[Gate]) -> tuple[int, ...]:
    # Kahn's algorithm; ties go to the lowest gate index
    producer = {g.output: i for i, g in enumerate(gates)}
    indeg = [0] * len(gates)
    users: dict[int, list[int]] = {i: [] for i in range(len(gates))}
    for i, g in enumerate(gates):
        for net in g.inputs:
            if net in producer:
                indeg[i] += 1
                users[producer[net]].append(i)
    ready = [i for i, d in enumerate(indeg) if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for j in users[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, j)
    if len(order) != len(gates):
        stuck = sorted(gates[i].id for i, d in enumerate(indeg) if d > 0)
        raise NetlistError(f"combinational cycle through gates {', '.join(stuck)}")
    return tuple(order)


# --- evaluation ------------------------------------------------------------

def gate_value(kind: str, values: Sequence[int | None]) -> int | None:
    """Three-valued gate function: X only when the known inputs do not decide."""
    if kind == "CONST0":
        return 0
    if kind == "CONST1":
        return 1
    if kind in ("BUF", "NOT"):
        v = values[0]
        return v if v is X or kind == "BUF" else 1 - v
    if kind in ("AND", "NAND"):
        v = 0 if 0 in values else (X if X in values else 1)
    elif kind in ("OR", "NOR"):
        v = 1 if 1 in values else (X if X in values else 0)
    elif kind in ("XOR", "XNOR"):
        v = X if X in values else sum(values) & 1
    else:
        raise NetlistError(f"unknown gate kind {kind!r}")
    if v is X or kind in ("AND", "OR", "XOR"):
        return v
    return 1 - v


def evaluate_nets(nl: Netlist, sources: Mapping[str, int | None]) -> dict[str, int | None]:
    """Propagate values from primary inputs and flip-flop outputs to every net."""
    values = dict(sources)
    for g in nl.topological_gates:
        values[g.output] = gate_value(g.kind, [values[n] for n in g.inputs])
    return values


def eval_comb(nl: Netlist, inputs: Mapping[str, int]) -> dict[str, int]:
    if nl.flops:
        raise NetlistError("netlist has flip-flops; use seq.simulate")
    sources = {}
    for name in nl.inputs:
        if name not in inputs:
            raise MissingVariableError(name)
        sources[name] = 1 if inputs[name] else 0
    values = evaluate_nets(nl, sources)
    return {o: values[o] for o in nl.outputs}


# --- statistics ------------------------------------------------------------

@dataclass(frozen=True)
class GateStats:
    counts: Counter
    depth: int
    literals: int


def stats(nl: Netlist) -> GateStats:
    counts = Counter(g.kind for g in nl.gates)
    level: dict[str, int] = {}
    for g in nl.topological_gates:
        level[g.output] = 1 + max((level.get(n, 0) for n in g.inputs), default=0)
    inverted = {g.output for g in nl.gates if g.kind == "NOT"}
    sources = set(nl.inputs) | {f.q for f in nl.flops} | {f.qbar for f in nl.flops if f.qbar}
    literals = sum(1 for g in nl.gates if g.kind not in ("NOT", "BUF")
                   for n in g.inputs if n in sources or n in inverted)
    return GateStats(counts, max(level.values(), default=0), literals)


# --- AOI synthesis ---------------------------------------------------------

class AoiBuilder:
    """Accumulates gates for several two-level outputs with shared inverters."""

    def __init__(self, order: Sequence[str]):
        self.order = tuple(order)
        self.inverters: dict[str, Gate] = {}
        self.gates: list[Gate] = []
        self.counter: Counter = Counter()

    def _new_id(self, prefix: str) -> str:
        k = self.counter[prefix]
        self.counter[prefix] += 1
        return f"{prefix}{k}"

    def inverted(self, net: str) -> str:
        if net not in self.inverters:
            gid = f"inv_{net}"
            self.inverters[net] = Gate(gid, "NOT", (net,), f"{gid}_o")
        return self.inverters[net].output

    def add(self, kind: str, inputs: Sequence[str], output: str | None = None,
            prefix: str | None = None) -> str:
        gid = self._new_id(prefix or kind.lower())
        g = Gate(gid, kind, tuple(inputs), output or f"{gid}_o")
        self.gates.append(g)
        return g.output

    def literal_nets(self, cube: Cube, plain_when: Lit) -> list[str]:
        nets = []
        for name, s in zip(self.order, cube.states()):
            if s is Lit.ABSENT:
                continue
            nets.append(name if s is plain_when else self.inverted(name))
        return nets

    def cover(self, cover: Cover, output: str) -> None:
        full = Cube.universe(len(cover.order))
        sop = cover.form is Form.SOP
        if not cover.cubes or full in cover.cubes:
            value = int(sop) if cover.cubes else int(not sop)
            self.add(f"CONST{value}", (), output, prefix="const")
            return
        inner, outer = ("AND", "OR") if sop else ("OR", "AND")
        plain_when = Lit.POS if sop else Lit.NEG
        if len(cover.cubes) == 1:
            nets = self.literal_nets(cover.cubes[0], plain_when)
            if len(nets) == 1:
                self.add("BUF", nets, output)
            else:
                self.add(inner, nets, output)
            return
        terms = []
        for c in cover.cubes:
            nets = self.literal_nets(c, plain_when)
            terms.append(nets[0] if len(nets) == 1 else self.add(inner, nets))
        self.add(outer, terms, output)

    def all_gates(self) -> list[Gate]:
        invs = [self.inverters[n] for n in sorted(self.inverters, key=self._net_rank)]
        return invs + self.gates

    def _net_rank(self, net: str) -> tuple[int, str]:
        return (self.order.index(net) if net in self.order else len(self.order), net)


def synth_covers(covers: Mapping[str, Cover], inputs: Sequence[str] | None = None) -> Netlist:
    """AND-OR-inverter netlist with one output per cover.

    Constant covers become ``CONST0``/``CONST1`` pseudo-gates and a single
    literal is passed through a ``BUF`` so every output keeps its own name.
    """
    covers = dict(covers)
    if inputs is None:
        first = next(iter(covers.values()), None)
        inputs = first.order if first is not None else ()
    b = AoiBuilder(inputs)
    for name, c in covers.items():
        if tuple(c.order) != tuple(inputs):
            raise CoverError(f"cover for {name!r} is over {c.order}, expected {tuple(inputs)}")
        b.cover(c, name)
    return Netlist(tuple(inputs), tuple(covers), tuple(b.all_gates()))


def synth_aoi(cover: Cover, output: str = "F") -> Netlist:
    """Two-level realization of a non-constant cover.

    One shared inverter per complemented variable, one AND per multi-literal
    product term and one OR joining the terms (OR then AND for POS covers).
    """
    if not cover.cubes or Cube.universe(len(cover.order)) in cover.cubes:
        raise CoverError("constant cover has no two-level realization; emit a constant driver")
    return synth_covers({output: cover})


# --- text and DOT formats --------------------------------------------------

def format_netlist(nl: Netlist, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" if c else "#" for c in comments]
    lines += [f"input {n}" for n in nl.inputs]
    lines += [f"output {n}" for n in nl.outputs]
    for g in nl.gates:
        lines.append(" ".join(["gate", g.id, g.kind, *g.inputs, "->", g.output]))
    for f in nl.flops:
        outs = f.q if f.qbar is None else f"{f.q} {f.qbar}"
        lines.append(f"dff {f.id} {f.kind} {' '.join(f.inputs)} -> {outs}")
    return "\n".join(lines) + "\n"


def parse_netlist(text: str) -> Netlist:
    inputs: list[str] = []
    outputs: list[str] = []
    gates: list[Gate] = []
    flops: list[FlipFlop] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        key = words[0]
        if key in ("input", "output"):
            if len(words) != 2:
                raise FormatError(f"expected '{key} <net>'", lineno)
            (inputs if key == "input" else outputs).append(words[1])
        elif key in ("gate", "dff"):
            if "->" not in words or len(words) < 4:
                raise FormatError(f"expected '{key} <id> <KIND> <inputs...> -> <outputs>'", lineno)
            arrow = words.index("->")
            if arrow < 3:
                raise FormatError(f"{key} needs an id and a kind before '->'", lineno)
            ident, kind = words[1], words[2]
            ins, outs = tuple(words[3:arrow]), words[arrow + 1:]
            if key == "gate":
                if len(outs) != 1:
                    raise FormatError("a gate drives exactly one net", lineno)
                gates.append(Gate(ident, kind, ins, outs[0]))
            else:
                if len(outs) not in (1, 2):
                    raise FormatError("a flip-flop drives Q and optionally Q'", lineno)
                flops.append(FlipFlop(ident, kind, ins, outs[0], outs[1] if len(outs) == 2 else None))
        else:
            raise FormatError(f"unknown statement {key!r}", lineno)
    return Netlist(tuple(inputs), tuple(outputs), tuple(gates), tuple(flops))


def to_dot(nl: Netlist, name: str = "netlist") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    driver: dict[str, str] = {}
    for n in nl.inputs:
        node = f"in_{n}"
        lines.append(f'  "{node}" [shape=plaintext, label="{n}"];')
        driver[n] = node
    for g in nl.gates:
        lines.append(f'  "{g.id}" [shape=box, label="{g.kind}\\n{g.id}"];')
        driver[g.output] = g.id
    for f in nl.flops:
        lines.append(f'  "{f.id}" [shape=box3d, label="{f.kind} FF\\n{f.id}"];')
        driver[f.q] = f.id
        if f.qbar is not None:
            driver[f.qbar] = f.id
    for g in nl.gates:
        for n in g.inputs:
            lines.append(f'  "{driver[n]}" -> "{g.id}" [label="{n}"];')
    for f in nl.flops:
        for n in f.inputs:
            lines.append(f'  "{driver[n]}" -> "{f.id}" [label="{n}"];')
    for n in nl.outputs:
        lines.append(f'  "out_{n}" [shape=plaintext, label="{n}"];')
        lines.append(f'  "{driver[n]}" -> "out_{n}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
