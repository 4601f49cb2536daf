"""Compositional explicit-state safety checking for a small
TLA-style specification language: decompose a spec by variable
slicing, regroup the slices under a recomposition strategy, and verify
the groups incrementally against an error automaton."""

from .decompose import decompose
from .engine import (Verdict, StatsReport, comp_verify, recomp_verify,
                     run_portfolio)
from .lts import Lts, bisimilar, compose, minimize, pi_reachable, trace_set
from .order import Strategy, data_flow_order, make_strategy, total_order
from .parser import parse, pretty
from .recompose import RecompositionMap, compose_specs, static_reduce
from .semantics import err_lts, eval_expr, init_states, successors, to_lts
from .syntax import SpecAst, SpecError, free_vars, normalize

__all__ = [
    "Lts", "RecompositionMap", "SpecAst", "SpecError", "StatsReport",
    "Strategy", "Verdict", "bisimilar", "comp_verify", "compose",
    "compose_specs", "data_flow_order", "decompose", "err_lts", "eval_expr",
    "free_vars", "init_states", "make_strategy", "minimize", "normalize",
    "parse", "pi_reachable", "pretty", "recomp_verify", "run_portfolio",
    "static_reduce", "successors", "to_lts", "total_order", "trace_set",
]
