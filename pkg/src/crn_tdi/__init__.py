"""Endotactic E-graphs and their embedding into toric differential inclusions."""
from .dynamics import RateSchedule, Trajectory, integrate, persistence_report
from .egraph import EGraph, GraphError, is_reversible, is_weakly_reversible, stoichiometric_subspace
from .endotactic import DirectionVerdict, EndotacticResult, check_direction, is_endotactic
from .fan import DegenerateSources, Fan, build_fan, cones_within, fan_rays
from .parser import ParseError, load_network, parse_network, serialize_network
from .tdi import (Counterexample, IsEndotactic, NotEndotactic, SamplerConfig, TdiParams,
                  VerificationReport, drift, embedding_parameters, refute_embedding, tdi_rhs,
                  verify_embedding)

__version__ = "0.1.0"

__all__ = [
    "Counterexample", "DegenerateSources", "DirectionVerdict", "EGraph", "EndotacticResult",
    "Fan", "GraphError", "IsEndotactic", "NotEndotactic", "ParseError", "RateSchedule",
    "SamplerConfig", "TdiParams", "Trajectory", "VerificationReport", "build_fan",
    "check_direction", "cones_within", "drift", "embedding_parameters", "fan_rays",
    "integrate", "is_endotactic", "is_reversible", "is_weakly_reversible", "load_network",
    "parse_network", "persistence_report", "refute_embedding", "serialize_network",
    "stoichiometric_subspace", "tdi_rhs", "verify_embedding",
]
