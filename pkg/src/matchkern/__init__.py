"""Exact kernelization for maximizing modular and coverage objectives
under matchoid constraints, offline and in the streaming model."""

from .coverage import CoverageInstance, ValueOracle
from .coverage_oracle import (
    CoverageResult,
    coverage_store_bound,
    extract_coverage_solution,
    streaming_coverage,
    structure_report,
)
from .colorcode import (
    HashFunction,
    draw_hash,
    extract_weighted_solution,
    num_colors,
    perfect_family,
    randomized_kernel,
    randomized_repetitions,
    streaming_max_coverage,
)
from .errors import (
    ContractViolationError,
    DomainError,
    FamilyError,
    MatchkernError,
    MatroidAxiomError,
    ParameterError,
    SchemaError,
    SizeGuardError,
    StreamError,
)
from .matchoid import Matchoid
from .matroids import (
    ExplicitMatroid,
    GraphicMatroid,
    Matroid,
    PartitionMatroid,
    UniformMatroid,
)
from .repset import (
    KernelResult,
    MultiDimSet,
    RepSetStats,
    Weights,
    best_feasible_subset,
    kernel_max_weight,
    rep_bound,
    rep_set,
)
from .stream import stream_init, stream_memory_report, stream_push

__all__ = [
    "ContractViolationError",
    "CoverageInstance",
    "CoverageResult",
    "DomainError",
    "ExplicitMatroid",
    "FamilyError",
    "GraphicMatroid",
    "HashFunction",
    "KernelResult",
    "Matchoid",
    "MatchkernError",
    "Matroid",
    "MatroidAxiomError",
    "MultiDimSet",
    "ParameterError",
    "PartitionMatroid",
    "RepSetStats",
    "SchemaError",
    "SizeGuardError",
    "StreamError",
    "UniformMatroid",
    "ValueOracle",
    "Weights",
    "best_feasible_subset",
    "coverage_store_bound",
    "draw_hash",
    "extract_coverage_solution",
    "extract_weighted_solution",
    "kernel_max_weight",
    "num_colors",
    "perfect_family",
    "randomized_kernel",
    "randomized_repetitions",
    "rep_bound",
    "rep_set",
    "stream_init",
    "stream_memory_report",
    "stream_push",
    "streaming_coverage",
    "streaming_max_coverage",
    "structure_report",
]

__version__ = "0.1.0"
