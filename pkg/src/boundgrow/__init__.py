"""Bound-edge growing network models: generation, prediction, verification."""

from .analytics import DegreeCensus, degree_census, measured_ecum, threshold_stats
from .engine import (
    ConfigError,
    GenerationError,
    GrowthConfig,
    StepTrace,
    grow_step,
    init_model,
    randomize_step,
    rewire_step,
    run,
)
from .graph import (
    DuplicateEdgeError,
    GraphError,
    MissingEdgeError,
    NetworkModel,
    SelfLoopError,
    UnknownVertexError,
)
from .predictor import (
    ExponentBundle,
    ModelParams,
    counts_deterministic,
    counts_randomized,
    exponents,
)
from .seeds import SeedError, SeedGraph, SeedSet, load_seed_set, make_seed, select_bound_vertices
from .verify import PredictionReport, run_full_verification

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegreeCensus",
    "DuplicateEdgeError",
    "ExponentBundle",
    "GenerationError",
    "GraphError",
    "GrowthConfig",
    "MissingEdgeError",
    "ModelParams",
    "NetworkModel",
    "PredictionReport",
    "SeedError",
    "SeedGraph",
    "SeedSet",
    "SelfLoopError",
    "StepTrace",
    "UnknownVertexError",
    "counts_deterministic",
    "counts_randomized",
    "degree_census",
    "exponents",
    "grow_step",
    "init_model",
    "load_seed_set",
    "make_seed",
    "measured_ecum",
    "randomize_step",
    "rewire_step",
    "run",
    "run_full_verification",
    "select_bound_vertices",
    "threshold_stats",
    "__version__",
]
