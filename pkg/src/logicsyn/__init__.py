"""Two-level logic synthesis toolkit."""

from .errors import (BoundExceededError, CapacityError, CoverError, DontCareError, ExprSyntaxError,
                     FormatError, InvariantError, LogicError, MissingVariableError, NetlistError,
                     SimulationError, UnknownVariableError)
from .expr import Expr, Kind, evaluate, parse, render, variables
from .minimize import (EXACT_LIMIT, Cover, Cube, Form, Lit, Strategy, minimize, minimize_pos,
                       minimize_sop, prime_implicants, select_cover)
from .netlist import (FlipFlop, Gate, Netlist, eval_comb, format_netlist, parse_netlist, stats,
                      synth_aoi, synth_covers, to_dot)
from .pla import read_pla, read_pla_functions, write_pla
from .seq import (Action, FlipFlopKind, StateDiagram, StateTable, Waveform, characteristic,
                  encode_states, excitation_equations, ff_next, parse_state_table, simulate,
                  synth_fsm)
from .techmap import PalProgram, PlaProgram, half_adder, map_mux, map_pal, map_pla, mux2
from .truthtab import (DC, TruthTable, canonical_pos, canonical_sop, counterexample, equivalent,
                       from_expr, kmap_render)

__all__ = [name for name in dir() if not name.startswith("_")]
