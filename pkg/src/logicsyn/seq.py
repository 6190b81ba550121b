"""Flip-flops, state tables, FSM synthesis and clocked simulation.

Storage elements are modelled by their characteristic tables only.  The
simulator is synchronous: each cycle evaluates the combinational logic from
the current ``Q`` values, then every flip-flop updates at once on the rising
edge.  The waveform records the watched nets after each edge.
"""

from __future__ import annotations

import csv
import enum
import io
import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import FormatError, NetlistError, SimulationError
from .minimize import Form, Strategy, minimize
from .netlist import AoiBuilder, FlipFlop, Netlist, X, evaluate_nets
from .truthtab import DC, TruthTable, row_bits

Value = int | None


class FlipFlopKind(str, enum.Enum):
    SR_LATCH = "SR_LATCH"
    RS = "RS"
    JK = "JK"
    D = "D"

    @classmethod
    def _missing_(cls, value):
        if isinstance(value, str):
            key = value.upper().replace("-", "_")
            for member in cls:
                if member.value == key:
                    return member
        return None


class Action(enum.Enum):
    RESET = "reset"
    SET = "set"
    HOLD = "hold"
    TOGGLE = "toggle"
    INVALID = "invalid"


CHARACTERISTIC: dict[FlipFlopKind, dict[tuple[int, ...], Action]] = {
    FlipFlopKind.RS: {(0, 0): Action.HOLD, (0, 1): Action.RESET,
                      (1, 0): Action.SET, (1, 1): Action.INVALID},
    FlipFlopKind.JK: {(0, 0): Action.HOLD, (0, 1): Action.RESET,
                      (1, 0): Action.SET, (1, 1): Action.TOGGLE},
    FlipFlopKind.D: {(0,): Action.RESET, (1,): Action.SET},
    # active-low set and reset
    FlipFlopKind.SR_LATCH: {(0, 1): Action.SET, (1, 0): Action.RESET,
                            (1, 1): Action.HOLD, (0, 0): Action.INVALID},
}


def arity(kind: FlipFlopKind | str) -> int:
    return 1 if FlipFlopKind(kind) is FlipFlopKind.D else 2


def characteristic(kind: FlipFlopKind | str, inputs: Sequence[int]) -> Action:
    kind = FlipFlopKind(kind)
    key = tuple(inputs)
    if len(key) != arity(kind):
        raise ValueError(f"{kind.value} takes {arity(kind)} inputs, got {len(key)}")
    try:
        return CHARACTERISTIC[kind][key]
    except KeyError:
        raise ValueError(f"inputs must be bits, got {key}") from None


def _apply(action: Action, q: int) -> Value:
    if action is Action.SET:
        return 1
    if action is Action.RESET:
        return 0
    if action is Action.HOLD:
        return q
    if action is Action.TOGGLE:
        return 1 - q
    return X


def ff_next(kind: FlipFlopKind | str, inputs: Sequence[Value], q: Value) -> Value:
    """Next ``Q`` after a clock edge; ``X`` for invalid or undecided inputs.

    Unknown inputs or state are resolved by trying every completion; the
    result is defined only when all completions agree.
    """
    kind = FlipFlopKind(kind)
    inputs = tuple(inputs)
    if len(inputs) != arity(kind):
        raise ValueError(f"{kind.value} takes {arity(kind)} inputs, got {len(inputs)}")
    choices = [(0, 1) if v is X else (v,) for v in inputs + (q,)]
    results = set()
    for combo in itertools.product(*choices):
        results.add(_apply(characteristic(kind, combo[:-1]), combo[-1]))
        if len(results) > 1 or X in results:
            return X
    return results.pop()


# --- state tables ----------------------------------------------------------

def state_bit_names(w: int) -> tuple[str, ...]:
    if w <= 26:
        return tuple("Q" + chr(ord("a") + k) for k in range(w))
    return tuple(f"Q{k}" for k in range(w))


@dataclass(frozen=True)
class StateTable:
    """Input-free state table.

    ``rows[code]`` is the next-state vector of present state ``code``; each
    bit is 0, 1 or DC.  An all-DC row is an unspecified state.
    """

    width: int
    rows: tuple[tuple[Value, ...], ...]
    reset: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        if self.width < 1:
            raise ValueError("state width must be at least 1")
        if len(self.rows) != 1 << self.width:
            raise ValueError(f"expected {1 << self.width} rows, got {len(self.rows)}")
        for r in self.rows:
            if len(r) != self.width or any(b not in (0, 1, DC) for b in r):
                raise ValueError(f"next state {r} must have {self.width} bits over 0, 1, DC")
        if self.reset is not None:
            object.__setattr__(self, "reset", tuple(self.reset))
            if len(self.reset) != self.width or set(self.reset) - {0, 1}:
                raise ValueError(f"reset {self.reset} must have {self.width} bits")

    @classmethod
    def from_transitions(cls, width: int, transitions: Mapping[int, int | None],
                         reset: int | None = None) -> StateTable:
        rows = []
        for code in range(1 << width):
            nxt = transitions.get(code)
            rows.append((DC,) * width if nxt is None else row_bits(nxt, width))
        return cls(width, tuple(rows), None if reset is None else row_bits(reset, width))

    @property
    def names(self) -> tuple[str, ...]:
        return state_bit_names(self.width)

    def is_defined(self, code: int) -> bool:
        return all(b is not DC for b in self.rows[code])

    def defined_states(self) -> tuple[int, ...]:
        return tuple(c for c in range(1 << self.width) if self.is_defined(c))

    def next_code(self, code: int) -> int | None:
        if not self.is_defined(code):
            return None
        value = 0
        for b in self.rows[code]:
            value = (value << 1) | b
        return value

    def trajectory(self, start: int, steps: int) -> list[int | None]:
        """States after each of ``steps`` transitions; None once undefined."""
        out: list[int | None] = []
        code: int | None = start
        for _ in range(steps):
            code = None if code is None else self.next_code(code)
            out.append(code)
        return out


@dataclass(frozen=True)
class StateDiagram:
    states: tuple[str, ...]
    transitions: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", dict(self.transitions))
        if not self.states:
            raise ValueError("a state diagram needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state name")
        known = set(self.states)
        for s in self.states:
            if s not in self.transitions:
                raise ValueError(f"state {s!r} has no outgoing transition")
        for src, dst in self.transitions.items():
            if src not in known or dst not in known:
                raise ValueError(f"transition {src!r} -> {dst!r} uses an unknown state")


def encode_states(d: StateDiagram) -> StateTable:
    """Binary codes in declaration order; unused codes are unspecified rows."""
    w = max(1, (len(d.states) - 1).bit_length())
    index = {s: k for k, s in enumerate(d.states)}
    return StateTable.from_transitions(
        w, {index[s]: index[d.transitions[s]] for s in d.states}, reset=0)


def counter_table(width: int = 3) -> StateTable:
    """Modulo ``2**width`` up-counter."""
    size = 1 << width
    return StateTable.from_transitions(width, {k: (k + 1) % size for k in range(size)}, reset=0)


# --- excitation and synthesis ---------------------------------------------

def _suffix(name: str) -> str:
    return name[1:] if name.startswith("Q") and len(name) > 1 else name


def excitation_names(st: StateTable, kind: FlipFlopKind | str) -> tuple[str, ...]:
    kind = _synth_kind(kind)
    names = []
    for q in st.names:
        s = _suffix(q)
        names += [f"D{s}"] if kind is FlipFlopKind.D else [f"J{s}", f"K{s}"]
    return tuple(names)


def _synth_kind(kind: FlipFlopKind | str) -> FlipFlopKind:
    kind = FlipFlopKind(kind)
    if kind not in (FlipFlopKind.D, FlipFlopKind.JK):
        raise ValueError(f"FSM synthesis supports D and JK flip-flops, not {kind.value}")
    return kind


# present -> next: (J, K)
_JK_EXCITATION = {(0, 0): (0, DC), (0, 1): (1, DC), (1, 0): (DC, 1), (1, 1): (DC, 0)}


def excitation_equations(st: StateTable, kind: FlipFlopKind | str = "D") -> list[TruthTable]:
    """One table per flip-flop input over the present-state bits.

    The order matches :func:`excitation_names`: ``Da, Db, ...`` or
    ``Ja, Ka, Jb, Kb, ...``.
    """
    kind = _synth_kind(kind)
    w = st.width
    tables = []
    for i in range(w):
        if kind is FlipFlopKind.D:
            tables.append(TruthTable(st.names, tuple(r[i] for r in st.rows)))
            continue
        js, ks = [], []
        for code, r in enumerate(st.rows):
            present = row_bits(code, w)[i]
            j, k = (DC, DC) if r[i] is DC else _JK_EXCITATION[(present, r[i])]
            js.append(j)
            ks.append(k)
        tables += [TruthTable(st.names, tuple(js)), TruthTable(st.names, tuple(ks))]
    return tables


def synth_fsm(st: StateTable, kind: FlipFlopKind | str = "D") -> Netlist:
    """Flip-flops ``ff_a, ff_b, ...`` with ``Q`` nets ``Qa, Qb, ...`` fed by
    minimized two-level logic.  The state bits are the primary outputs.
    """
    kind = _synth_kind(kind)
    names = excitation_names(st, kind)
    b = AoiBuilder(st.names)
    for name, table in zip(names, excitation_equations(st, kind)):
        b.cover(minimize(table, Form.SOP, Strategy.EXACT), name)
    per = arity(kind)
    flops = tuple(
        FlipFlop(f"ff_{_suffix(q)}", kind.value, names[per * i:per * (i + 1)], q)
        for i, q in enumerate(st.names))
    return Netlist((), st.names, tuple(b.all_gates()), flops)


# --- simulation ------------------------------------------------------------

@dataclass(frozen=True)
class Waveform:
    nets: tuple[str, ...]
    values: tuple[tuple[Value, ...], ...]  # one row per cycle, one entry per net

    @property
    def cycles(self) -> int:
        return len(self.values)

    def trace(self, net: str) -> tuple[Value, ...]:
        k = self.nets.index(net)
        return tuple(row[k] for row in self.values)

    def word(self, t: int, nets: Sequence[str] | None = None) -> str:
        """Values of ``nets`` (default all) at cycle ``t`` as a bit string."""
        nets = self.nets if nets is None else nets
        return "".join(_sym(self.values[t][self.nets.index(n)]) for n in nets)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.nets)
        for row in self.values:
            w.writerow([_sym(v) for v in row])
        return buf.getvalue()


def _sym(v: Value) -> str:
    return "X" if v is X else str(v)


def _reset_values(nl: Netlist, reset) -> dict[str, Value]:
    qs = [f.q for f in nl.flops]
    if reset is None:
        return {q: X for q in qs}
    if isinstance(reset, Mapping):
        unknown = set(reset) - set(qs)
        if unknown:
            raise SimulationError(f"reset names unknown flip-flop outputs {sorted(unknown)}")
        return {q: reset.get(q, X) for q in qs}
    bits = list(reset)
    if len(bits) != len(qs):
        raise SimulationError(f"reset has {len(bits)} bits for {len(qs)} flip-flops")
    out = {}
    for q, b in zip(qs, bits):
        if b in ("X", "x", X):
            out[q] = X
        elif str(b) in ("0", "1"):
            out[q] = int(b)
        else:
            raise SimulationError(f"reset bit {b!r} is not 0, 1 or X")
    return out


def _stimulus(nl: Netlist, stimuli, t: int) -> dict[str, Value]:
    if not nl.inputs:
        return {}
    if stimuli is None:
        raise SimulationError(f"no stimulus for primary input {nl.inputs[0]!r}")
    if isinstance(stimuli, Mapping):
        frame = stimuli
    elif t < len(stimuli):
        frame = stimuli[t]
    else:
        raise SimulationError(f"no stimulus for cycle {t}")
    out = {}
    for name in nl.inputs:
        if name not in frame:
            raise SimulationError(f"no stimulus for primary input {name!r} in cycle {t}")
        v = frame[name]
        out[name] = X if v is X or v in ("X", "x") else int(v)
    return out


def simulate(nl: Netlist, cycles: int, stimuli=None, reset=None,
             watch: Sequence[str] | None = None) -> Waveform:
    """Clock ``nl`` for ``cycles`` rising edges.

    ``stimuli`` is one input mapping per cycle, or a single mapping held
    constant.  ``reset`` gives the initial ``Q`` values as a bit string, a
    sequence in flip-flop order, or a mapping by ``Q`` net; without it every
    flip-flop starts at X.  Row ``t`` of the waveform holds the watched nets
    after edge ``t + 1``, evaluated with that cycle's stimulus.
    """
    if cycles < 0:
        raise ValueError("cycles must be non-negative")
    watch = tuple(nl.outputs if watch is None else watch)
    known = set(nl.nets())
    for net in watch:
        if net not in known:
            raise NetlistError(f"cannot watch unknown net {net!r}")
    state = _reset_values(nl, reset)

    def settle(inputs: dict[str, Value]) -> dict[str, Value]:
        sources = dict(inputs)
        for f in nl.flops:
            q = state[f.q]
            sources[f.q] = q
            if f.qbar is not None:
                sources[f.qbar] = X if q is X else 1 - q
        return evaluate_nets(nl, sources)

    rows = []
    for t in range(cycles):
        inputs = _stimulus(nl, stimuli, t)
        values = settle(inputs)
        state = {f.q: ff_next(f.kind, [values[n] for n in f.inputs], state[f.q])
                 for f in nl.flops}
        values = settle(inputs)
        rows.append(tuple(values[n] for n in watch))
    return Waveform(watch, tuple(rows))


def read_stimuli(text: str) -> list[dict[str, Value]]:
    """CSV with a header of input names and one row of 0/1/X per cycle."""
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and not r[0].lstrip().startswith("#")]
    if not rows:
        return []
    header = [h.strip() for h in rows[0]]
    frames = []
    for k, r in enumerate(rows[1:], 2):
        if len(r) != len(header):
            raise FormatError(f"expected {len(header)} values, got {len(r)}", k)
        frame: dict[str, Value] = {}
        for name, v in zip(header, r):
            v = v.strip()
            if v not in ("0", "1", "X", "x"):
                raise FormatError(f"value {v!r} for {name} is not 0, 1 or X", k)
            frame[name] = X if v in ("X", "x") else int(v)
        frames.append(frame)
    return frames


# --- state-table text format ----------------------------------------------

def _bits(text: str, w: int, lineno: int, allow_dc: bool) -> tuple[Value, ...]:
    allowed = set("01-") if allow_dc else set("01")
    if len(text) != w or set(text) - allowed:
        over = "0, 1, -" if allow_dc else "0, 1"
        raise FormatError(f"expected {w} bits over {over}, got {text!r}", lineno)
    return tuple(DC if ch == "-" else int(ch) for ch in text)


def parse_state_table(text: str) -> StateTable:
    """Read ``states <w>``, an optional ``reset <bits>`` and ``bits -> bits`` rows.

    Present states that are not listed are unspecified.
    """
    w: int | None = None
    reset = None
    rows: dict[int, tuple[Value, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if w is None:
            if len(words) != 2 or words[0] != "states" or not words[1].isdigit() \
                    or int(words[1]) < 1:
                raise FormatError("first line must be 'states <width>' with width >= 1", lineno)
            w = int(words[1])
            continue
        if words[0] == "reset":
            if len(words) != 2:
                raise FormatError("expected 'reset <bits>'", lineno)
            if reset is not None:
                raise FormatError("duplicate reset line", lineno)
            reset = _bits(words[1], w, lineno, allow_dc=False)
            continue
        if line.count("->") != 1:
            raise FormatError("expected '<present> -> <next>'", lineno)
        left, right = (part.split() for part in line.split("->"))
        if len(left) != 1 or len(right) != 1:
            raise FormatError("input-dependent state tables are not supported", lineno)
        _bits(left[0], w, lineno, allow_dc=False)
        code = int(left[0], 2)
        if code in rows:
            raise FormatError(f"duplicate present state {left[0]}", lineno)
        rows[code] = _bits(right[0], w, lineno, allow_dc=True)
    if w is None:
        raise FormatError("missing 'states <width>' header")
    table = tuple(rows.get(c, (DC,) * w) for c in range(1 << w))
    return StateTable(w, table, reset)


def format_state_table(st: StateTable) -> str:
    lines = [f"states {st.width}"]
    if st.reset is not None:
        lines.append("reset " + "".join(map(str, st.reset)))
    for code, r in enumerate(st.rows):
        if all(b is DC for b in r):
            continue
        nxt = "".join("-" if b is DC else str(b) for b in r)
        lines.append(f"{code:0{st.width}b} -> {nxt}")
    return "\n".join(lines) + "\n"
