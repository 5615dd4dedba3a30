"""Column tessellations over planar tessellations: simulation, estimation and
closed-form mean values."""

from .column import ColumnTessellation, ZProcessSpec, assign_marks, build
from .column_stats import ColumnSummary, cross_check, estimate_column
from .errors import TessellationError
from .formulas import (
    PredictionSet,
    check_constraints,
    predict_all,
    predict_all_height1,
)
from .generators import GeneratorSpec, generate, replication_seeds
from .harness import ExperimentConfig, MeanValueReport, predict_only, run_experiment
from .planar import PlanarTessellation, Window, build_from_segments
from .planar_stats import MarkSummary, PlanarSummary, estimate_marks, estimate_planar, pool

__version__ = "0.1.0"

__all__ = [
    "ColumnSummary",
    "ColumnTessellation",
    "ExperimentConfig",
    "GeneratorSpec",
    "MarkSummary",
    "MeanValueReport",
    "PlanarSummary",
    "PlanarTessellation",
    "PredictionSet",
    "TessellationError",
    "Window",
    "ZProcessSpec",
    "assign_marks",
    "build",
    "build_from_segments",
    "check_constraints",
    "cross_check",
    "estimate_column",
    "estimate_marks",
    "estimate_planar",
    "generate",
    "pool",
    "predict_all",
    "predict_all_height1",
    "predict_only",
    "replication_seeds",
    "run_experiment",
]
