"""Exact two-stage stochastic network models via BDD aggregation of recourse levels."""

from .bdd import Bdd, Ordering, compile_ladder, compile_monotone, order_edges, stats
from .errors import (
    InstanceError,
    InvariantError,
    LadderError,
    RecourseUndefinedError,
    ScenBddError,
    SizeCapError,
    ValidationError,
)
from .instance import Edge, Mode, NetworkInstance, load_instance, make_instance, parse_instance
from .mip import emit_mip, solve_by_enumeration, write_lp
from .oracle import oracle_expected
from .pipeline import Compiled, check_against_oracle, compile_instance
from .probability import prob, prob_conditioned, report
from .recourse import CriticalLadder, Level, build_ladder, dump_ladder, load_ladder

__all__ = [
    "Bdd",
    "Compiled",
    "CriticalLadder",
    "Edge",
    "InstanceError",
    "InvariantError",
    "LadderError",
    "Level",
    "Mode",
    "NetworkInstance",
    "Ordering",
    "RecourseUndefinedError",
    "ScenBddError",
    "SizeCapError",
    "ValidationError",
    "build_ladder",
    "check_against_oracle",
    "compile_instance",
    "compile_ladder",
    "compile_monotone",
    "dump_ladder",
    "emit_mip",
    "load_instance",
    "load_ladder",
    "make_instance",
    "oracle_expected",
    "order_edges",
    "parse_instance",
    "prob",
    "prob_conditioned",
    "report",
    "solve_by_enumeration",
    "stats",
    "write_lp",
]
