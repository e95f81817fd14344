"""Raster operators backing the spec-language builtins.

All operators treat masks as subsets of the pixel grid with the shared
package coordinate convention. Adjacency is 4 (edge neighbors) or 8 (edge
plus diagonal); pixels outside the image exist for no operator, except that
`op_interior` counts them as absent from the mask (border pixels therefore
never belong to the interior).
"""

from __future__ import annotations

from collections import deque

import numpy as np

from ..core import BitMask, ScalarField
from .errors import EvalError

# Squared-distance sentinel for "no on-pixel anywhere". Chosen so that
# _COL_INF**2 plus any in-image offset stays far below int64 overflow while
# exceeding every reachable squared distance.
_COL_INF = 1 << 20

_OFFSETS4 = ((0, -1), (0, 1), (-1, 0), (1, 0))
_OFFSETS8 = _OFFSETS4 + ((-1, -1), (-1, 1), (1, -1), (1, 1))


def _offsets(adjacency: int):
    if adjacency == 4:
        return _OFFSETS4
    if adjacency == 8:
        return _OFFSETS8
    raise ValueError(f"adjacency must be 4 or 8, got {adjacency}")


def _dilate(bits: np.ndarray, adjacency: int) -> np.ndarray:
    out = bits.copy()
    h, w = bits.shape
    for dy, dx in _offsets(adjacency):
        src_y = slice(max(0, -dy), h - max(0, dy))
        dst_y = slice(max(0, dy), h - max(0, -dy))
        src_x = slice(max(0, -dx), w - max(0, dx))
        dst_x = slice(max(0, dx), w - max(0, -dx))
        out[dst_y, dst_x] |= bits[src_y, src_x]
    return out


def op_near(a: BitMask, adjacency: int = 4) -> BitMask:
    """Closure: `a` plus every pixel adjacent to it."""
    return BitMask(_dilate(a.bits, adjacency))


def op_interior(a: BitMask, adjacency: int = 4) -> BitMask:
    """Pixels of `a` whose whole neighborhood lies in `a`.

    Pixels outside the image count as not in `a`, so border pixels are
    never interior.
    """
    h, w = a.bits.shape
    padded = np.zeros((h + 2, w + 2), dtype=bool)
    padded[1:-1, 1:-1] = a.bits
    out = a.bits.copy()
    for dy, dx in _offsets(adjacency):
        out &= padded[1 + dy : h + 1 + dy, 1 + dx : w + 1 + dx]
    return BitMask(out)


def connected_components(a: BitMask, adjacency: int = 4) -> np.ndarray:
    """Label connected components of `a`.

    Returns an int32 array: 0 for background, component ids 1..n assigned in
    raster-scan order of each component's first pixel.
    """
    offsets = _offsets(adjacency)
    bits = a.bits
    h, w = bits.shape
    labels = np.zeros((h, w), dtype=np.int32)
    next_id = 1
    for y, x in np.argwhere(bits):
        if labels[y, x]:
            continue
        labels[y, x] = next_id
        queue = deque(((int(y), int(x)),))
        while queue:
            cy, cx = queue.popleft()
            for dy, dx in offsets:
                ny, nx = cy + dy, cx + dx
                if 0 <= ny < h and 0 <= nx < w and bits[ny, nx] and not labels[ny, nx]:
                    labels[ny, nx] = next_id
                    queue.append((ny, nx))
        next_id += 1
    return labels


def op_touch(a: BitMask, b: BitMask, adjacency: int = 4) -> BitMask:
    """Union of the connected components of `a` that intersect `b`."""
    if a.bits.shape != b.bits.shape:
        raise ValueError(f"mask dimensions differ: {a.bits.shape} vs {b.bits.shape}")
    labels = connected_components(a, adjacency)
    hit = np.unique(labels[a.bits & b.bits])
    hit = hit[hit > 0]
    return BitMask(np.isin(labels, hit))


def dt_squared(a: BitMask) -> np.ndarray:
    """Exact squared Euclidean distance to the nearest on-pixel.

    Returns int64; -1 marks unreachable pixels (only when `a` is empty).
    Pixel centers are the lattice points, so every value is an integer and
    the result matches brute-force minimization exactly.

    Two passes: per-column nearest on-row distances, then for each row the
    minimum of (dx**2 + column_distance**2) over source columns. Both are
    integer computations, so no floating-point rounding is involved.
    """
    bits = a.bits
    h, w = bits.shape
    col = np.full((h, w), _COL_INF, dtype=np.int64)
    col[bits] = 0
    for y in range(1, h):
        np.minimum(col[y], col[y - 1] + 1, out=col[y])
    for y in range(h - 2, -1, -1):
        np.minimum(col[y], col[y + 1] + 1, out=col[y])
    col2 = col * col
    xs = np.arange(w, dtype=np.int64)
    sep2 = (xs[:, None] - xs[None, :]) ** 2  # sep2[x, source_x]
    d2 = np.empty((h, w), dtype=np.int64)
    for y in range(h):
        np.min(sep2 + col2[y][None, :], axis=1, out=d2[y])
    d2[d2 >= _COL_INF * _COL_INF] = -1
    return d2


def op_dt(a: BitMask) -> ScalarField:
    """Euclidean distance transform; +inf everywhere when `a` is empty."""
    d2 = dt_squared(a)
    values = np.sqrt(d2, where=d2 >= 0, out=np.full(d2.shape, np.inf))
    return ScalarField(values)


def op_gdt(space: BitMask, src: BitMask, adjacency: int = 4) -> ScalarField:
    """Geodesic distance: unit-cost BFS steps within `space` from `src`.

    Sources are the pixels of `src` that lie in `space`; pixels not reached
    (including everything outside `space`) are +inf.
    """
    if space.bits.shape != src.bits.shape:
        raise ValueError(f"mask dimensions differ: {space.bits.shape} vs {src.bits.shape}")
    dist = np.full(space.bits.shape, np.inf)
    frontier = space.bits & src.bits
    dist[frontier] = 0.0
    step = 0
    while frontier.any():
        step += 1
        frontier = _dilate(frontier, adjacency) & space.bits & np.isinf(dist)
        dist[frontier] = step
    return ScalarField(dist)


def op_minval(f: ScalarField) -> float:
    """Smallest finite value of the field; EvalError if none exists."""
    finite = f.values[np.isfinite(f.values)]
    if finite.size == 0:
        raise EvalError("minval: field has no finite values")
    return float(finite.min())
