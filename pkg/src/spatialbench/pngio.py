"""Minimal PNG writer plus Pillow-backed readers.

Encoding is part of the on-disk format contract: fixed zlib level, filter 0
on every scanline, one IDAT chunk. Two runs over the same pixels produce the
same bytes, which lets tests hash whole dataset trees. Pillow only decodes.
"""

from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np
from PIL import Image

_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_ZLIB_LEVEL = 6


def _chunk(kind: bytes, payload: bytes) -> bytes:
    crc = zlib.crc32(kind + payload) & 0xFFFFFFFF
    return struct.pack(">I", len(payload)) + kind + payload + struct.pack(">I", crc)


def encode_png(array: np.ndarray) -> bytes:
    """Encode a (h, w) grayscale or (h, w, 3) RGB uint8 array."""
    arr = np.ascontiguousarray(array, dtype=np.uint8)
    if arr.ndim == 2:
        color_type = 0
    elif arr.ndim == 3 and arr.shape[2] == 3:
        color_type = 2
    else:
        raise ValueError(f"expected (h, w) or (h, w, 3) uint8 array, got shape {array.shape}")
    height, width = arr.shape[:2]
    ihdr = struct.pack(">IIBBBBB", width, height, 8, color_type, 0, 0, 0)
    rows = arr.reshape(height, -1)
    raw = b"".join(b"\x00" + rows[y].tobytes() for y in range(height))
    return (
        _SIGNATURE
        + _chunk(b"IHDR", ihdr)
        + _chunk(b"IDAT", zlib.compress(raw, _ZLIB_LEVEL))
        + _chunk(b"IEND", b"")
    )


def write_png(path: str | Path, array: np.ndarray) -> None:
    Path(path).write_bytes(encode_png(array))


def read_gray(path: str | Path) -> np.ndarray:
    """Decode a PNG that must be 8-bit grayscale; returns (h, w) uint8."""
    with Image.open(path) as img:
        if img.mode != "L":
            raise ValueError(f"{path}: expected 8-bit grayscale, got mode {img.mode}")
        return np.asarray(img, dtype=np.uint8)


def read_foreground(path: str | Path) -> np.ndarray:
    """Decode any PNG to a bool mask: every nonzero pixel is foreground.

    Accepts grayscale or color in any value convention (1, 255, ...); alpha
    is ignored so fully opaque images do not read as all-foreground.
    """
    with Image.open(path) as img:
        if img.mode == "P":
            img = img.convert("RGB")
        arr = np.asarray(img)
    if arr.ndim == 3:
        arr = arr[..., :3].max(axis=2)
    return arr != 0
