"""Synthetic spatial-reasoning benchmark: scenes, specs, datasets, metrics.

The package generates paired (channels, label) segmentation cases whose
ground truth is computed by evaluating small spatial-logic specs, writes
them as reproducible PNG datasets, and scores predictions against them.
"""

from .baselines import BaselineKind, ConfigError, predict
from .config import PipelineConfig, load_config_file, parse_config_text
from .core import (
    BitMask,
    Rng,
    ScalarField,
    derive_case_seed,
    fnv1a64,
    splitmix64_next,
    upsample_nn,
)
from .dataset import (
    CaseRecord,
    DatasetManifest,
    GeneratedCase,
    IoError,
    PredictionSet,
    ValidationError,
    import_predictions,
    read_dataset,
    write_dataset,
)
from .metrics import (
    DimensionError,
    MetricsRow,
    Summary,
    SweepReport,
    SweepRow,
    aggregate,
    confusion,
    dice,
    evaluate_case,
    iou,
    metrics_csv,
    render_triptych,
    summarize,
)
from .pipeline import generate_case, generate_dataset, run_pipeline
from .scenes import (
    Dot,
    DotsConfig,
    DotsScene,
    GenerationError,
    MazeConfig,
    MazeScene,
    RasterSpec,
    dots_ground_truth,
    maze_ground_truth,
    rasterize_dots,
    rasterize_maze,
    sample_dots_scene,
    sample_maze_scene,
)
from .speclib import load_program, spec_names, spec_text

__version__ = "0.1.0"

__all__ = [
    "BaselineKind",
    "BitMask",
    "CaseRecord",
    "ConfigError",
    "DatasetManifest",
    "DimensionError",
    "Dot",
    "DotsConfig",
    "DotsScene",
    "GeneratedCase",
    "GenerationError",
    "IoError",
    "MazeConfig",
    "MazeScene",
    "MetricsRow",
    "PipelineConfig",
    "PredictionSet",
    "RasterSpec",
    "Rng",
    "ScalarField",
    "Summary",
    "SweepReport",
    "SweepRow",
    "ValidationError",
    "aggregate",
    "confusion",
    "derive_case_seed",
    "dice",
    "dots_ground_truth",
    "evaluate_case",
    "fnv1a64",
    "generate_case",
    "generate_dataset",
    "import_predictions",
    "iou",
    "load_config_file",
    "load_program",
    "maze_ground_truth",
    "metrics_csv",
    "parse_config_text",
    "predict",
    "rasterize_dots",
    "rasterize_maze",
    "read_dataset",
    "render_triptych",
    "run_pipeline",
    "sample_dots_scene",
    "sample_maze_scene",
    "spec_names",
    "spec_text",
    "splitmix64_next",
    "summarize",
    "upsample_nn",
    "write_dataset",
]
