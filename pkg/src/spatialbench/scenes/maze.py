"""Grid mazes: sampling, rasterization, ground truth.

A maze is a cells_x by cells_y grid. Every internal wall between two
neighboring cells is opened independently with the configured probability;
the wall set is resampled until the entry cell connects to the exit cell.

Rasterization at resolution R (a multiple of 16) uses wall thickness
t = R / 16 and per-axis cell pitch R / cells. Each cell block contributes
its top t rows and left t columns as wall, and the image's bottom and right
t-bands close the outer border. An open wall clears the shared band between
the two cell interiors, never the wall-line intersections. All coordinates
are linear in R, so doubling R exactly block-doubles every channel.

Channel order: 0 = walls, 1 = entry cell interior, 2 = exit cell interior.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ..core import BitMask, Rng
from ..slcs import EvalContext, evaluate
from ..speclib import load_program
from .base import GenerationError, RasterSpec

LABEL_MODES = ("shortest", "corridor")

# wall id: ("h", cx, cy) separates (cx, cy) from (cx+1, cy);
#          ("v", cx, cy) separates (cx, cy) from (cx, cy+1).
WallId = tuple[str, int, int]


@dataclass(frozen=True)
class MazeConfig:
    cells_x: int = 4
    cells_y: int = 4
    connection_probability: float = 0.7
    label_mode: str = "corridor"
    tol: int = 0
    max_attempts: int = 1000

    def __post_init__(self):
        if self.cells_x < 2 or self.cells_y < 2:
            raise ValueError("maze needs at least 2x2 cells")
        if not 0.0 <= self.connection_probability <= 1.0:
            raise ValueError("connection_probability must be in [0, 1]")
        if self.label_mode not in LABEL_MODES:
            raise ValueError(f"label_mode must be one of {LABEL_MODES}, got {self.label_mode!r}")
        if self.tol < 0:
            raise ValueError("tol must be >= 0")
        if self.max_attempts < 1:
            raise ValueError("max_attempts must be >= 1")


@dataclass(frozen=True)
class MazeScene:
    config: MazeConfig
    entry_cell: tuple[int, int]
    exit_cell: tuple[int, int]
    open_walls: frozenset[WallId]


def internal_walls(config: MazeConfig) -> list[WallId]:
    """All internal walls, in the fixed draw order.

    Row-major over horizontal-neighbor walls first, then row-major over
    vertical-neighbor walls; one uniform draw per wall in this order.
    """
    walls: list[WallId] = []
    for cy in range(config.cells_y):
        for cx in range(config.cells_x - 1):
            walls.append(("h", cx, cy))
    for cy in range(config.cells_y - 1):
        for cx in range(config.cells_x):
            walls.append(("v", cx, cy))
    return walls


def _cells_connected(config: MazeConfig, open_walls: frozenset[WallId],
                     start: tuple[int, int], goal: tuple[int, int]) -> bool:
    neighbors: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for kind, cx, cy in open_walls:
        a = (cx, cy)
        b = (cx + 1, cy) if kind == "h" else (cx, cy + 1)
        neighbors.setdefault(a, []).append(b)
        neighbors.setdefault(b, []).append(a)
    seen = {start}
    queue = deque((start,))
    while queue:
        cell = queue.popleft()
        if cell == goal:
            return True
        for nxt in neighbors.get(cell, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def sample_maze_scene(seed: int, config: MazeConfig, require_connected: bool = True) -> MazeScene:
    """Draw a maze scene from one splitmix64 stream.

    Draw order: entry cell, exit cell (uniform among the remaining cells),
    then one uniform per internal wall. If entry and exit end up in separate
    components the walls are redrawn from the same stream (entry/exit stay
    fixed) up to max_attempts times.

    require_connected=False accepts the first wall draw unconditionally;
    that switches the connectivity guarantee off and exists so the raw
    open-wall rate can be measured.
    """
    rng = Rng(seed)
    n_cells = config.cells_x * config.cells_y
    entry_index = rng.below(n_cells)
    exit_index = rng.below(n_cells - 1)
    if exit_index >= entry_index:
        exit_index += 1
    entry = (entry_index % config.cells_x, entry_index // config.cells_x)
    exit_ = (exit_index % config.cells_x, exit_index // config.cells_x)
    walls = internal_walls(config)
    for _ in range(config.max_attempts):
        open_walls = frozenset(
            wall for wall in walls if rng.uniform() < config.connection_probability
        )
        if not require_connected or _cells_connected(config, open_walls, entry, exit_):
            return MazeScene(config, entry, exit_, open_walls)
    raise GenerationError(
        f"no connected maze after {config.max_attempts} attempts "
        f"(p={config.connection_probability}, seed={seed})"
    )


def _cell_interior(bits: np.ndarray, cx: int, cy: int, pitch_x: int, pitch_y: int,
                   t: int, resolution: int) -> None:
    y0, y1 = cy * pitch_y + t, min((cy + 1) * pitch_y, resolution - t)
    x0, x1 = cx * pitch_x + t, min((cx + 1) * pitch_x, resolution - t)
    bits[y0:y1, x0:x1] = True


def rasterize_maze(scene: MazeScene, raster: RasterSpec) -> tuple[BitMask, BitMask, BitMask]:
    """Render a scene to (walls, entry, exit) channel masks."""
    config = scene.config
    R = raster.resolution
    t = raster.wall_thickness
    if R % config.cells_x or R % config.cells_y:
        raise ValueError(
            f"resolution {R} is not divisible by the cell grid "
            f"{config.cells_x}x{config.cells_y}"
        )
    pitch_x = R // config.cells_x
    pitch_y = R // config.cells_y
    if pitch_x < 2 * t + 1 or pitch_y < 2 * t + 1:
        raise ValueError(
            f"cells are too small at resolution {R}: pitch {pitch_x}x{pitch_y} "
            f"leaves no interior beside {t}-pixel walls"
        )

    walls = np.zeros((R, R), dtype=bool)
    for cy in range(config.cells_y):
        walls[cy * pitch_y : cy * pitch_y + t, :] = True
    for cx in range(config.cells_x):
        walls[:, cx * pitch_x : cx * pitch_x + t] = True
    walls[R - t :, :] = True
    walls[:, R - t :] = True

    # An open wall clears the facing wall band of the far cell between the
    # wall-line intersections; the clamp keeps the outer border closed.
    for kind, cx, cy in scene.open_walls:
        if kind == "h":
            x0 = (cx + 1) * pitch_x
            y0, y1 = cy * pitch_y + t, min((cy + 1) * pitch_y, R - t)
            walls[y0:y1, x0 : x0 + t] = False
        else:
            y0 = (cy + 1) * pitch_y
            x0, x1 = cx * pitch_x + t, min((cx + 1) * pitch_x, R - t)
            walls[y0 : y0 + t, x0:x1] = False

    entry = np.zeros((R, R), dtype=bool)
    exit_ = np.zeros((R, R), dtype=bool)
    _cell_interior(entry, *scene.entry_cell, pitch_x, pitch_y, t, R)
    _cell_interior(exit_, *scene.exit_cell, pitch_x, pitch_y, t, R)
    return BitMask(walls), BitMask(entry), BitMask(exit_)


def maze_ground_truth(channels: tuple[BitMask, BitMask, BitMask], config: MazeConfig,
                      adjacency: int = 4) -> BitMask:
    """Evaluate the configured label spec on rendered maze channels."""
    name = "maze_shortest.sls" if config.label_mode == "shortest" else "maze_corridor.sls"
    ctx = EvalContext(
        channels=tuple(channels),
        params={"tol": float(config.tol)},
        adjacency=adjacency,
    )
    return evaluate(load_program(name), ctx)["label"]
