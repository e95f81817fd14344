"""Raster primitives and deterministic randomness shared by every stage.

Coordinate convention, fixed for the whole package and all file formats:
row-major storage, origin at the top-left pixel, x grows rightward, y grows
downward. A pixel (x, y) lives at array index [y, x].

Randomness is splitmix64 end to end. Every consumer owns exactly one stream;
streams never fork implicitly, and per-case seeds are derived from the master
seed so that generation order (tasks, resolutions, case indices, worker count)
cannot change any output.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def splitmix64_next(state: int) -> tuple[int, int]:
    """One splitmix64 step; returns (new_state, output), both 64-bit wrapping."""
    state = (state + _GAMMA) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return state, z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    """64-bit FNV-1a hash of the UTF-8 encoding of `text`."""
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = ((h ^ byte) * _FNV_PRIME) & MASK64
    return h


def derive_case_seed(master_seed: int, task_tag: str, resolution: int, case_index: int) -> int:
    """Seed for one generated case, independent of generation order.

    The splitmix64 stream is keyed by master_seed XOR fnv1a64(task_tag) XOR
    resolution and advanced case_index + 1 steps; the last output is the seed.
    Distinct (task_tag, resolution, case_index) triples therefore get
    independent seeds no matter how the surrounding loops are arranged.
    """
    if case_index < 0:
        raise ValueError("case_index must be >= 0")
    state = (master_seed ^ fnv1a64(task_tag) ^ (resolution & MASK64)) & MASK64
    out = 0
    for _ in range(case_index + 1):
        state, out = splitmix64_next(state)
    return out


class Rng:
    """splitmix64 generator. One owner per stream; state advances in place."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state, out = splitmix64_next(self.state)
        return out

    def uniform(self) -> float:
        """Uniform float in [0, 1), built from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection sampling.

        Draws >= floor(2**64 / n) * n are rejected so every residue is
        equally likely.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        limit = (2**64 // n) * n
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n


class BitMask:
    """Immutable 2D boolean raster.

    Wraps a read-only numpy bool array of shape (height, width). Logical
    operators (&, |, ^, ~) combine masks of equal dimensions; equality is
    exact per-pixel agreement including dimensions.
    """

    __slots__ = ("bits",)

    def __init__(self, bits) -> None:
        arr = np.array(bits, dtype=bool, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"BitMask needs a 2D array with positive dims, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    def __setattr__(self, name, value):
        raise AttributeError("BitMask is immutable")

    @classmethod
    def empty(cls, width: int, height: int) -> "BitMask":
        return cls(np.zeros((height, width), dtype=bool))

    @classmethod
    def full(cls, width: int, height: int) -> "BitMask":
        return cls(np.ones((height, width), dtype=bool))

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        """(height, width), matching the numpy array underneath."""
        return self.bits.shape

    @property
    def count(self) -> int:
        """Number of on pixels."""
        return int(np.count_nonzero(self.bits))

    def get(self, x: int, y: int) -> bool:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise IndexError(f"pixel ({x}, {y}) outside {self.width}x{self.height} mask")
        return bool(self.bits[y, x])

    def set(self, x: int, y: int, value: bool) -> "BitMask":
        """Copy of this mask with one pixel replaced (masks are immutable)."""
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise IndexError(f"pixel ({x}, {y}) outside {self.width}x{self.height} mask")
        out = self.bits.copy()
        out[y, x] = value
        return BitMask(out)

    def same_shape(self, other: "BitMask") -> bool:
        return self.bits.shape == other.bits.shape

    def to_u8(self, on_value: int = 255) -> np.ndarray:
        """uint8 image with `on_value` where the mask is on, 0 elsewhere."""
        if not 1 <= on_value <= 255:
            raise ValueError("on_value must be in [1, 255]")
        return np.where(self.bits, np.uint8(on_value), np.uint8(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMask):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits))

    def _check_dims(self, other: "BitMask") -> None:
        if self.bits.shape != other.bits.shape:
            raise ValueError(f"mask dimensions differ: {self.bits.shape} vs {other.bits.shape}")

    def __and__(self, other: "BitMask") -> "BitMask":
        self._check_dims(other)
        return BitMask(self.bits & other.bits)

    def __or__(self, other: "BitMask") -> "BitMask":
        self._check_dims(other)
        return BitMask(self.bits | other.bits)

    def __xor__(self, other: "BitMask") -> "BitMask":
        self._check_dims(other)
        return BitMask(self.bits ^ other.bits)

    def __invert__(self) -> "BitMask":
        return BitMask(~self.bits)

    def __repr__(self) -> str:
        return f"BitMask({self.width}x{self.height}, count={self.count})"


class ScalarField:
    """Immutable 2D float64 raster; +inf allowed, NaN never."""

    __slots__ = ("values",)

    def __init__(self, values) -> None:
        arr = np.array(values, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"ScalarField needs a 2D array with positive dims, got shape {arr.shape}")
        if np.isnan(arr).any():
            raise ValueError("ScalarField may not contain NaN")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarField is immutable")

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarField):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"ScalarField({self.width}x{self.height})"


def upsample_nn(mask: BitMask, factor: int) -> BitMask:
    """Nearest-neighbor upsampling: out(x, y) = in(x // factor, y // factor)."""
    if factor < 1:
        raise ValueError("factor must be >= 1")
    if factor == 1:
        return mask
    return BitMask(np.repeat(np.repeat(mask.bits, factor, axis=0), factor, axis=1))
