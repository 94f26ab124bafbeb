"""Singularity types of quiver quotient varieties and quiver moduli spaces."""

__version__ = "0.1.0"

from .quiver import (
    CanonicalSetting,
    Quiver,
    QuiverError,
    QuiverSetting,
    canonicalize,
    isomorphic,
    minimal_cycles,
    quotient_dim,
    ringel,
)
from .reduction import (
    ReductionStep,
    StepKind,
    TypeRecord,
    apply_step,
    is_simple_setting,
    reduce_to_type,
    reduction_trace,
)
from .local import RepType, direct_successors, local_quiver
from .poset import TypePoset, build_poset, enumerate_types, isolated_types
from .moduli import GeneratorSet, ModuliProblem, ModuliReport, analyze, controlling_quiver
from .compactify import SplitPlan, acyclify, control_check, split_vertex

__all__ = [
    "CanonicalSetting",
    "GeneratorSet",
    "ModuliProblem",
    "ModuliReport",
    "Quiver",
    "QuiverError",
    "QuiverSetting",
    "ReductionStep",
    "RepType",
    "SplitPlan",
    "StepKind",
    "TypePoset",
    "TypeRecord",
    "acyclify",
    "analyze",
    "apply_step",
    "build_poset",
    "canonicalize",
    "control_check",
    "controlling_quiver",
    "direct_successors",
    "enumerate_types",
    "is_simple_setting",
    "isolated_types",
    "isomorphic",
    "local_quiver",
    "minimal_cycles",
    "quotient_dim",
    "reduce_to_type",
    "reduction_trace",
    "ringel",
    "split_vertex",
]
