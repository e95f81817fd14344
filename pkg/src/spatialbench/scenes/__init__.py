"""Procedural scene generators and their rasterizers."""

from .base import GenerationError, RasterSpec
from .dots import (
    Dot,
    DotsConfig,
    DotsScene,
    dot_distance,
    dots_ground_truth,
    rasterize_dots,
    ref_distance,
    sample_dots_scene,
)
from .maze import (
    MazeConfig,
    MazeScene,
    internal_walls,
    maze_ground_truth,
    rasterize_maze,
    sample_maze_scene,
)

__all__ = [
    "GenerationError",
    "RasterSpec",
    "Dot",
    "DotsConfig",
    "DotsScene",
    "dot_distance",
    "dots_ground_truth",
    "rasterize_dots",
    "ref_distance",
    "sample_dots_scene",
    "MazeConfig",
    "MazeScene",
    "internal_walls",
    "maze_ground_truth",
    "rasterize_maze",
    "sample_maze_scene",
]
