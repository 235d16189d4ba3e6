"""Float32 little-endian matrix container shared by the vector index and reader heads.

Block layout: 16-byte header (magic ``QFVI``, u32 dim, u32 count, u32 reserved)
followed by ``count`` rows of ``dim`` float32 values, row-major.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import BinaryIO

import numpy as np

MAGIC = b"QFVI"
_HEADER = struct.Struct("<4sIII")


class ContainerError(ValueError):
    """Raised when a matrix container is malformed."""


def write_matrix(fh: BinaryIO, matrix: np.ndarray) -> None:
    arr = np.ascontiguousarray(matrix, dtype="<f4")
    if arr.ndim != 2:
        raise ContainerError(f"expected a 2-d matrix, got shape {arr.shape}")
    count, dim = arr.shape
    fh.write(_HEADER.pack(MAGIC, dim, count, 0))
    fh.write(arr.tobytes())


def read_matrix(fh: BinaryIO) -> np.ndarray:
    header = fh.read(_HEADER.size)
    if len(header) != _HEADER.size:
        raise ContainerError("truncated container header")
    magic, dim, count, _ = _HEADER.unpack(header)
    if magic != MAGIC:
        raise ContainerError(f"bad magic {magic!r}")
    payload = fh.read(4 * dim * count)
    if len(payload) != 4 * dim * count:
        raise ContainerError("truncated container payload")
    return np.frombuffer(payload, dtype="<f4").reshape(count, dim).copy()


def save_matrices(path: Path | str, matrices: list[np.ndarray]) -> None:
    """Write several blocks back to back (the reader's heads.bin layout)."""
    with open(path, "wb") as fh:
        for m in matrices:
            write_matrix(fh, m)


def load_matrices(path: Path | str) -> list[np.ndarray]:
    out = []
    with open(path, "rb") as fh:
        while True:
            probe = fh.peek(1) if hasattr(fh, "peek") else fh.read(0)
            if not probe:
                break
            out.append(read_matrix(fh))
    return out
