"""Raw block files: little-endian float32, row-major x-fastest, channels interleaved.

There is no header; dimensions travel in the GAD data list entry.  Files follow
the convention ``data/<field>_t<t:04>_q<|q|>.f32``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Tuple

import numpy as np

from .grid import GridMeta, VolumeBlock


def block_filename(field: str, t: int, q: int) -> str:
    return f"{field}_t{t:04d}_q{abs(q)}.f32"


def write_block(path, block: VolumeBlock) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(block_bytes(block))
    return path


def block_bytes(block: VolumeBlock) -> bytes:
    return np.ascontiguousarray(block.samples).astype("<f4").tobytes()


def read_block(
    path,
    dims: Tuple[int, int, int],
    channels: int,
    quality: int = 0,
    field_name: str = "",
) -> VolumeBlock:
    path = Path(path)
    raw = np.frombuffer(path.read_bytes(), dtype="<f4")
    dx, dy, dz = dims
    expected = dx * dy * dz * channels
    if raw.size != expected:
        raise ValueError(
            f"{path}: {raw.size} samples, expected {expected} for dims {dims} x{channels}"
        )
    samples = raw.reshape(dz, dy, dx, channels).astype(np.float64)
    meta = GridMeta(dims=dims, channels=channels, field_name=field_name)
    return VolumeBlock(meta=meta, box=((0, 0, 0), dims), quality=quality, samples=samples)


def samples_from_bytes(
    payload: bytes, dims: Tuple[int, int, int], channels: int
) -> np.ndarray:
    dx, dy, dz = dims
    expected = dx * dy * dz * channels
    raw = np.frombuffer(payload, dtype="<f4")
    if raw.size != expected:
        raise ValueError(f"payload has {raw.size} samples, expected {expected}")
    return raw.reshape(dz, dy, dx, channels).astype(np.float64)
