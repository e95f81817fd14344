"""Shared scene-generation plumbing."""

from __future__ import annotations

from dataclasses import dataclass


class GenerationError(Exception):
    """Raised when rejection sampling exhausts its attempt budget."""


@dataclass(frozen=True)
class RasterSpec:
    """Target raster geometry.

    Resolutions are multiples of 16 so that wall bands, cell pitches and
    shape footprints scale by exact integer factors between resolutions.
    """

    resolution: int

    def __post_init__(self):
        if self.resolution < 16 or self.resolution % 16 != 0:
            raise ValueError(f"resolution must be a positive multiple of 16, got {self.resolution}")

    @property
    def wall_thickness(self) -> int:
        return self.resolution // 16
