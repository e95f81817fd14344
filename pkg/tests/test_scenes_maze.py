from collections import deque

import numpy as np
import pytest

from spatialbench.core import upsample_nn
from spatialbench.scenes import (
    GenerationError,
    MazeConfig,
    MazeScene,
    RasterSpec,
    internal_walls,
    maze_ground_truth,
    rasterize_maze,
    sample_maze_scene,
)

from oracles import optimal_path_union, touch_oracle


def cells_reachable(scene: MazeScene) -> bool:
    """Cell-graph BFS over open walls, written from scratch for the test."""
    adj: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for kind, cx, cy in scene.open_walls:
        a = (cx, cy)
        b = (cx + 1, cy) if kind == "h" else (cx, cy + 1)
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = {scene.entry_cell}
    queue = deque([scene.entry_cell])
    while queue:
        cell = queue.popleft()
        for nxt in adj.get(cell, ()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return scene.exit_cell in seen


class TestConfig:
    def test_defaults(self):
        config = MazeConfig()
        assert (config.cells_x, config.cells_y) == (4, 4)
        assert config.connection_probability == 0.7
        assert config.label_mode == "corridor"
        assert config.tol == 0

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"cells_x": 1},
            {"cells_y": 0},
            {"connection_probability": 1.5},
            {"connection_probability": -0.1},
            {"label_mode": "widest"},
            {"tol": -1},
            {"max_attempts": 0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            MazeConfig(**kwargs)


class TestInternalWalls:
    def test_count_matches_grid_formula(self):
        # (cells_x - 1) * cells_y horizontal + cells_x * (cells_y - 1) vertical
        assert len(internal_walls(MazeConfig())) == 24
        assert len(internal_walls(MazeConfig(cells_x=2, cells_y=3))) == 7

    def test_order_h_then_v_row_major(self):
        walls = internal_walls(MazeConfig(cells_x=3, cells_y=2))
        assert walls == [
            ("h", 0, 0),
            ("h", 1, 0),
            ("h", 0, 1),
            ("h", 1, 1),
            ("v", 0, 0),
            ("v", 1, 0),
            ("v", 2, 0),
        ]


class TestSampling:
    def test_deterministic(self):
        a = sample_maze_scene(123, MazeConfig())
        b = sample_maze_scene(123, MazeConfig())
        assert a == b

    def test_seed_changes_scene(self):
        assert sample_maze_scene(1, MazeConfig()) != sample_maze_scene(2, MazeConfig())

    def test_entry_differs_from_exit_and_both_in_grid(self):
        for seed in range(50):
            scene = sample_maze_scene(seed, MazeConfig())
            assert scene.entry_cell != scene.exit_cell
            for cx, cy in (scene.entry_cell, scene.exit_cell):
                assert 0 <= cx < 4 and 0 <= cy < 4

    def test_connectivity_guarantee(self):
        for seed in range(50):
            assert cells_reachable(sample_maze_scene(seed, MazeConfig()))

    def test_probability_one_opens_everything(self):
        config = MazeConfig(connection_probability=1.0)
        scene = sample_maze_scene(7, config)
        assert scene.open_walls == frozenset(internal_walls(config))

    def test_probability_zero_cannot_connect(self):
        config = MazeConfig(connection_probability=0.0, max_attempts=10)
        with pytest.raises(GenerationError, match="no connected maze"):
            sample_maze_scene(7, config)

    def test_unchecked_sampling_skips_the_guarantee(self):
        config = MazeConfig(connection_probability=0.0, max_attempts=10)
        scene = sample_maze_scene(7, config, require_connected=False)
        assert scene.open_walls == frozenset()


class TestRasterization:
    def test_closed_2x2_wall_pixel_count(self):
        # R=16, 2x2 cells: wall lines at rows/cols 0 and 8 plus the closing
        # 15-band; 3 rows + 3 cols - 9 shared intersections = 87 pixels
        config = MazeConfig(cells_x=2, cells_y=2)
        scene = MazeScene(config, (0, 0), (1, 1), frozenset())
        walls, entry, exit_ = rasterize_maze(scene, RasterSpec(16))
        assert walls.count == 87
        assert entry.count == 49  # 7x7 interior
        assert exit_.count == 36  # 6x6: clipped by the bottom/right border band

    def test_open_wall_clears_shared_band_only(self):
        config = MazeConfig(cells_x=2, cells_y=2)
        closed = MazeScene(config, (0, 0), (1, 1), frozenset())
        opened = MazeScene(config, (0, 0), (1, 1), frozenset({("h", 0, 0)}))
        walls_closed = rasterize_maze(closed, RasterSpec(16))[0].bits
        walls_open = rasterize_maze(opened, RasterSpec(16))[0].bits
        diff = walls_closed & ~walls_open
        # the shared band between cells (0,0) and (1,0): column 8, rows 1..7
        expected = np.zeros((16, 16), dtype=bool)
        expected[1:8, 8] = True
        assert np.array_equal(diff, expected)
        assert not (walls_open & ~walls_closed).any()

    def test_border_stays_closed(self):
        for seed in range(10):
            scene = sample_maze_scene(seed, MazeConfig())
            walls = rasterize_maze(scene, RasterSpec(16))[0].bits
            assert walls[0].all() and walls[-1].all()
            assert walls[:, 0].all() and walls[:, -1].all()

    def test_channels_are_consistent(self):
        for seed in range(10):
            scene = sample_maze_scene(seed, MazeConfig())
            walls, entry, exit_ = rasterize_maze(scene, RasterSpec(32))
            assert (entry & walls).count == 0
            assert (exit_ & walls).count == 0
            assert (entry & exit_).count == 0
            assert entry.count > 0 and exit_.count > 0

    def test_entry_interior_geometry_at_16(self):
        config = MazeConfig()
        scene = MazeScene(config, (1, 2), (0, 0), frozenset())
        _, entry, _ = rasterize_maze(scene, RasterSpec(16))
        expected = np.zeros((16, 16), dtype=bool)
        expected[9:12, 5:8] = True  # pitch 4, wall 1: rows/cols cy*4+1 .. +3
        assert np.array_equal(entry.bits, expected)

    def test_resolution_must_fit_grid(self):
        scene = sample_maze_scene(3, MazeConfig(cells_x=3, cells_y=3))
        with pytest.raises(ValueError, match="not divisible"):
            rasterize_maze(scene, RasterSpec(16))

    def test_cells_too_small_for_walls(self):
        scene = sample_maze_scene(3, MazeConfig(cells_x=8, cells_y=8))
        with pytest.raises(ValueError, match="too small"):
            rasterize_maze(scene, RasterSpec(16))

    def test_block_doubling_is_exact(self):
        # same scene at R and 2R: every channel upsamples bit-for-bit
        for seed in range(8):
            scene = sample_maze_scene(seed, MazeConfig())
            low = rasterize_maze(scene, RasterSpec(16))
            high = rasterize_maze(scene, RasterSpec(32))
            for lo, hi in zip(low, high):
                assert upsample_nn(lo, 2) == hi


class TestGroundTruth:
    def test_corridor_matches_component_oracle(self):
        config = MazeConfig(label_mode="corridor")
        for seed in range(10):
            scene = sample_maze_scene(seed, config)
            channels = rasterize_maze(scene, RasterSpec(16))
            label = maze_ground_truth(channels, config).bits
            free = ~channels[0].bits
            expected = touch_oracle(free, channels[1].bits) & touch_oracle(
                free, channels[2].bits
            )
            assert np.array_equal(label, expected)

    def test_shortest_matches_path_union_oracle(self):
        config = MazeConfig(label_mode="shortest")
        for seed in range(10):
            scene = sample_maze_scene(seed, config)
            channels = rasterize_maze(scene, RasterSpec(16))
            label = maze_ground_truth(channels, config).bits
            expected = optimal_path_union(
                ~channels[0].bits, channels[1].bits, channels[2].bits
            )
            assert np.array_equal(label, expected)

    def test_tol_widens_the_shortest_band(self):
        config = MazeConfig(label_mode="shortest")
        widened = MazeConfig(label_mode="shortest", tol=4)
        scene = sample_maze_scene(5, config)
        channels = rasterize_maze(scene, RasterSpec(16))
        tight = maze_ground_truth(channels, config)
        loose = maze_ground_truth(channels, widened)
        assert (tight.bits <= loose.bits).all()
        expected = optimal_path_union(
            ~channels[0].bits, channels[1].bits, channels[2].bits, tol=4.0
        )
        assert np.array_equal(loose.bits, expected)

    def test_corridor_contains_shortest(self):
        for seed in range(10):
            scene = sample_maze_scene(seed, MazeConfig())
            channels = rasterize_maze(scene, RasterSpec(16))
            corridor = maze_ground_truth(channels, MazeConfig(label_mode="corridor"))
            shortest = maze_ground_truth(channels, MazeConfig(label_mode="shortest"))
            assert (shortest.bits <= corridor.bits).all()
            assert shortest.count > 0

    def test_corridor_covers_entry_and_exit_interiors(self):
        for seed in range(10):
            scene = sample_maze_scene(seed, MazeConfig())
            channels = rasterize_maze(scene, RasterSpec(16))
            label = maze_ground_truth(channels, MazeConfig(label_mode="corridor"))
            assert (channels[1].bits <= label.bits).all()
            assert (channels[2].bits <= label.bits).all()

    def test_corridor_label_survives_block_doubling(self):
        config = MazeConfig(label_mode="corridor")
        for seed in range(8):
            scene = sample_maze_scene(seed, config)
            low = maze_ground_truth(rasterize_maze(scene, RasterSpec(16)), config)
            high = maze_ground_truth(rasterize_maze(scene, RasterSpec(32)), config)
            assert upsample_nn(low, 2) == high
