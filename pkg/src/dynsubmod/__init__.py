"""Fully dynamic monotone submodular maximization under cardinality and matroid constraints."""
from .cardinality_core import CardinalityInstance, check_invariants_card, promote_card
from .errors import DomainError, PreconditionError, SpecError, StreamValidationError
from .guessing import DynamicSolver, GuessFamily, Solution, max_route_width, route
from .harness import RunConfig, RunReport, run
from .leveling import InvariantReport, PromoteResult, PromoteTag
from .matroid_core import MatroidInstance, check_level_invariants, find_min_circuit_swap, promote
from .oracles import (CoverageOracle, CoverageSpec, FunctionOracle, GraphicMatroid, ModularOracle,
                      PartitionMatroid, UniformMatroid, load_oracle_spec, make_coverage_oracle,
                      make_matroid)
from .randomset import RandomSet
from .reference import brute_force_opt, greedy_cardinality, greedy_matroid
from .streams import StreamEvent, generate_stream, parse_stream

__all__ = [
    "CardinalityInstance", "CoverageOracle", "CoverageSpec", "DomainError", "DynamicSolver",
    "FunctionOracle", "GraphicMatroid", "GuessFamily", "InvariantReport", "MatroidInstance",
    "ModularOracle", "PartitionMatroid", "PreconditionError", "PromoteResult", "PromoteTag",
    "RandomSet", "RunConfig", "RunReport", "Solution", "SpecError", "StreamEvent",
    "StreamValidationError", "UniformMatroid", "brute_force_opt", "check_invariants_card",
    "check_level_invariants", "find_min_circuit_swap", "generate_stream", "greedy_cardinality",
    "greedy_matroid", "load_oracle_spec", "make_coverage_oracle", "make_matroid", "max_route_width",
    "parse_stream", "promote", "promote_card", "route", "run",
]
