"""Dot scenes: a reference marker plus scattered dots, some within reach.

All geometry lives in the unit square with the same orientation as rasters
(x right, y down). A dot is selected when its continuous shape distance to
the reference square is at most the threshold; the margin keeps every dot's
distance away from the threshold so rasterization at any supported
resolution reproduces the same selection.

Shape distances are Euclidean gaps between shapes: per-axis box gaps
combined by hypot for squares, center distance minus radii (floored at 0)
for disks. The rasterized ground truth thresholds a Euclidean distance
transform, and these are exactly the distances it converges to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import BitMask, Rng
from ..slcs import EvalContext, evaluate
from ..speclib import load_program
from .base import GenerationError, RasterSpec

SHAPES = ("square", "disk")


@dataclass(frozen=True)
class DotsConfig:
    num_dots_min: int = 4
    num_dots_max: int = 10
    radius_min: float = 0.05
    radius_max: float = 0.09
    ref_half_side: float = 0.04
    threshold: float = 0.35
    margin: float = 0.10
    min_separation: float = 0.08
    shape: str = "square"
    min_resolution: int = 16
    max_attempts: int = 10000
    require_mixed: bool = True

    def __post_init__(self):
        if self.num_dots_min < 1 or self.num_dots_max < self.num_dots_min:
            raise ValueError("need 1 <= num_dots_min <= num_dots_max")
        if self.require_mixed and self.num_dots_min < 2:
            raise ValueError("require_mixed needs num_dots_min >= 2")
        if not 0.0 < self.radius_min <= self.radius_max:
            raise ValueError("need 0 < radius_min <= radius_max")
        if self.ref_half_side <= 0.0:
            raise ValueError("ref_half_side must be positive")
        if not 0.0 < self.threshold < math.sqrt(2.0):
            raise ValueError("threshold must be in (0, sqrt(2))")
        if self.margin <= 0.0:
            raise ValueError("margin must be positive")
        if self.min_separation < 0.0:
            raise ValueError("min_separation must be >= 0")
        if self.shape not in SHAPES:
            raise ValueError(f"shape must be one of {SHAPES}, got {self.shape!r}")
        if self.min_resolution < 1:
            raise ValueError("min_resolution must be >= 1")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


@dataclass(frozen=True)
class Dot:
    center: tuple[float, float]
    half_size: float  # half side for squares, radius for disks


@dataclass(frozen=True)
class DotsScene:
    config: DotsConfig
    ref_center: tuple[float, float]
    dots: tuple[Dot, ...]
    selected: frozenset[int]


def _axis_gap(delta: float, reach: float) -> float:
    return max(0.0, abs(delta) - reach)


def ref_distance(dot: Dot, ref_center: tuple[float, float], ref_half: float, shape: str) -> float:
    """Euclidean gap between a dot and the (always square) reference."""
    dx = dot.center[0] - ref_center[0]
    dy = dot.center[1] - ref_center[1]
    if shape == "square":
        return math.hypot(
            _axis_gap(dx, dot.half_size + ref_half),
            _axis_gap(dy, dot.half_size + ref_half),
        )
    return max(0.0, math.hypot(_axis_gap(dx, ref_half), _axis_gap(dy, ref_half)) - dot.half_size)


def dot_distance(a: Dot, b: Dot, shape: str) -> float:
    """Euclidean gap between two dots."""
    dx = a.center[0] - b.center[0]
    dy = a.center[1] - b.center[1]
    if shape == "square":
        reach = a.half_size + b.half_size
        return math.hypot(_axis_gap(dx, reach), _axis_gap(dy, reach))
    return max(0.0, math.hypot(dx, dy) - a.half_size - b.half_size)


def _covers(shape: str, cx: float, cy: float, half: float,
            xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Closed point-in-shape test; the single predicate used everywhere."""
    if shape == "square":
        return (np.abs(xs - cx) <= half) & (np.abs(ys - cy) <= half)
    return (xs - cx) ** 2 + (ys - cy) ** 2 <= half * half


def _covered_indices(shape: str, cx: float, cy: float, half: float,
                     resolution: int) -> np.ndarray:
    """Pixel indices (ix, iy) whose centers lie in the shape; (n, 2) array."""
    r = resolution
    lo_x = max(0, int(math.floor((cx - half) * r - 0.5)))
    hi_x = min(r - 1, int(math.ceil((cx + half) * r - 0.5)))
    lo_y = max(0, int(math.floor((cy - half) * r - 0.5)))
    hi_y = min(r - 1, int(math.ceil((cy + half) * r - 0.5)))
    if hi_x < lo_x or hi_y < lo_y:
        return np.empty((0, 2), dtype=np.int64)
    ix = np.arange(lo_x, hi_x + 1, dtype=np.int64)
    iy = np.arange(lo_y, hi_y + 1, dtype=np.int64)
    xs = (ix + 0.5) / r
    ys = (iy + 0.5) / r
    inside = _covers(shape, cx, cy, half, xs[None, :], ys[:, None])
    pairs = np.argwhere(inside)  # rows of (iy_offset, ix_offset)
    return np.stack([ix[pairs[:, 1]], iy[pairs[:, 0]]], axis=1)


def _raster_selected(dot_px: np.ndarray, ref_px: np.ndarray,
                     threshold: float, resolution: int) -> bool:
    """Would the rasterized distance rule pick this dot at this resolution?"""
    if len(dot_px) == 0 or len(ref_px) == 0:
        return False
    diff = dot_px[:, None, :] - ref_px[None, :, :]
    d2min = int((diff ** 2).sum(axis=2).min())
    return d2min <= (threshold * resolution) ** 2


def sample_dots_scene(seed: int, config: DotsConfig) -> DotsScene:
    """Draw a scene from one splitmix64 stream.

    Draw order: dot count (one bounded draw), reference center (2 uniforms
    per attempt), then per dot 3 uniforms (center x, center y, half size)
    per attempt. A placement is rejected when the shape leaves the unit
    square, covers no pixel center at min_resolution, sits closer than
    min_separation to the reference or an earlier dot, lands within margin
    of the selection threshold, or (for selected dots) would not be picked
    by the rasterized rule at min_resolution. If the finished scene fails
    the mixed-selection requirement it is thrown away and redrawn whole.
    Every placement attempt counts against max_attempts.
    """
    rng = Rng(seed)
    cfg = config
    attempts = 0

    def spend() -> None:
        nonlocal attempts
        attempts += 1
        if attempts > cfg.max_attempts:
            raise GenerationError(
                f"no valid dots scene after {cfg.max_attempts} placement attempts (seed={seed})"
            )

    span = cfg.num_dots_max - cfg.num_dots_min + 1
    while True:
        n = cfg.num_dots_min + rng.below(span)

        while True:
            spend()
            ref = (rng.uniform(), rng.uniform())
            if ref[0] - cfg.ref_half_side < 0.0 or ref[0] + cfg.ref_half_side > 1.0:
                continue
            if ref[1] - cfg.ref_half_side < 0.0 or ref[1] + cfg.ref_half_side > 1.0:
                continue
            ref_px = _covered_indices("square", ref[0], ref[1], cfg.ref_half_side,
                                      cfg.min_resolution)
            if len(ref_px):
                break

        dots: list[Dot] = []
        for _ in range(n):
            while True:
                spend()
                cx, cy = rng.uniform(), rng.uniform()
                half = cfg.radius_min + rng.uniform() * (cfg.radius_max - cfg.radius_min)
                dot = Dot((cx, cy), half)
                if cx - half < 0.0 or cx + half > 1.0 or cy - half < 0.0 or cy + half > 1.0:
                    continue
                dot_px = _covered_indices(cfg.shape, cx, cy, half, cfg.min_resolution)
                if len(dot_px) == 0:
                    continue
                sd = ref_distance(dot, ref, cfg.ref_half_side, cfg.shape)
                if sd < cfg.min_separation:
                    continue
                if abs(sd - cfg.threshold) < cfg.margin:
                    continue
                if any(dot_distance(dot, other, cfg.shape) < cfg.min_separation
                       for other in dots):
                    continue
                if sd <= cfg.threshold - cfg.margin and not _raster_selected(
                        dot_px, ref_px, cfg.threshold, cfg.min_resolution):
                    continue
                dots.append(dot)
                break

        selected = frozenset(
            i for i, dot in enumerate(dots)
            if ref_distance(dot, ref, cfg.ref_half_side, cfg.shape) <= cfg.threshold
        )
        if cfg.require_mixed and not 1 <= len(selected) <= n - 1:
            continue
        return DotsScene(cfg, ref, tuple(dots), selected)


def rasterize_dots(scene: DotsScene, raster: RasterSpec) -> tuple[BitMask, BitMask]:
    """Render a scene to (dots, reference) channel masks.

    A pixel is on when its center ((ix + 0.5) / R, (iy + 0.5) / R) lies in
    the closed shape.
    """
    R = raster.resolution
    coords = (np.arange(R) + 0.5) / R
    xs = coords[None, :]
    ys = coords[:, None]
    cfg = scene.config
    dots = np.zeros((R, R), dtype=bool)
    for dot in scene.dots:
        dots |= _covers(cfg.shape, dot.center[0], dot.center[1], dot.half_size, xs, ys)
    ref = _covers("square", scene.ref_center[0], scene.ref_center[1], cfg.ref_half_side, xs, ys)
    return BitMask(dots), BitMask(ref)


def dots_ground_truth(channels: tuple[BitMask, BitMask], config: DotsConfig,
                      adjacency: int = 4) -> BitMask:
    """Evaluate the dots spec with the threshold scaled to pixel units."""
    resolution = channels[0].width
    ctx = EvalContext(
        channels=tuple(channels),
        params={"D": config.threshold * resolution},
        adjacency=adjacency,
    )
    return evaluate(load_program("dots.sls"), ctx)["label"]
