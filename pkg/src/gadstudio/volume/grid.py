"""Structured grids with quality-level downsampling.

Quality is a non-positive integer q; the total voxel count at quality q is a
2^q fraction of the base grid.  Each unit of |q| is one axis halving, applied
round-robin to the currently largest axis (ties broken x, then y, then z).
Halving box-averages adjacent voxel pairs; an odd trailing voxel is copied
through unaveraged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np


class InvalidQuality(ValueError):
    """Quality levels are integers <= 0."""


class OutOfBounds(ValueError):
    """Requested region or timestep lies outside the dataset."""


@dataclass(frozen=True)
class GridMeta:
    dims: Tuple[int, int, int]
    channels: int
    spacing: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    origin: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    field_name: str = ""
    timestep_count: int = 1
    timestep_stride_hours: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "spacing", tuple(float(s) for s in self.spacing))
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))
        if any(d < 1 for d in self.dims):
            raise ValueError(f"dims must all be >= 1, got {self.dims}")
        if any(s <= 0 for s in self.spacing):
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if self.channels not in (1, 3):
            raise ValueError(f"channels must be 1 or 3, got {self.channels}")
        if self.timestep_count < 1:
            raise ValueError("timestep_count must be positive")


@dataclass(frozen=True)
class VolumeBlock:
    """A dense sub-grid at some quality level.

    ``samples`` is float64, shaped (dz, dy, dx, channels) so that the raw
    C-order byte stream is x-fastest with interleaved channels, matching the
    on-disk block format.  ``box`` records the source region in base-resolution
    voxel coordinates.
    """

    meta: GridMeta
    box: Tuple[Tuple[int, int, int], Tuple[int, int, int]]
    quality: int
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        lo, hi = self.box
        object.__setattr__(self, "box", (tuple(int(v) for v in lo), tuple(int(v) for v in hi)))
        dx, dy, dz = self.meta.dims
        expected = (dz, dy, dx, self.meta.channels)
        if self.samples.shape != expected:
            raise ValueError(f"samples shape {self.samples.shape} != {expected}")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("block contains non-finite samples")

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.meta.dims

    @property
    def channels(self) -> int:
        return self.meta.channels


@dataclass(frozen=True)
class QualityLevel:
    q: int
    effective_dims: Tuple[int, int, int]

    @property
    def voxel_fraction(self) -> float:
        return 2.0**self.q


def resolution_fraction(q: int) -> float:
    """Total-voxel fraction at quality q: 2^q (q=0 is full resolution)."""
    if q > 0:
        raise InvalidQuality(f"quality must be <= 0, got {q}")
    return 2.0**q


def halving_order(dims: Tuple[int, int, int], count: int) -> list:
    """Axis indices (0=x, 1=y, 2=z) halved in order for ``count`` halvings."""
    sizes = list(dims)
    order = []
    for _ in range(count):
        axis = max(range(3), key=lambda a: (sizes[a], -a))
        order.append(axis)
        sizes[axis] = math.ceil(sizes[axis] / 2)
    return order


def quality_level(dims: Tuple[int, int, int], q: int) -> QualityLevel:
    if q > 0:
        raise InvalidQuality(f"quality must be <= 0, got {q}")
    sizes = list(dims)
    for axis in halving_order(dims, -q):
        sizes[axis] = math.ceil(sizes[axis] / 2)
    return QualityLevel(q=q, effective_dims=tuple(sizes))


def _halve_axis(samples: np.ndarray, array_axis: int) -> np.ndarray:
    n = samples.shape[array_axis]
    m = n // 2
    even = samples.take(range(0, 2 * m, 2), axis=array_axis)
    odd = samples.take(range(1, 2 * m, 2), axis=array_axis)
    out = (even + odd) / 2.0
    if n % 2:
        out = np.concatenate([out, samples.take([n - 1], axis=array_axis)], axis=array_axis)
    return out


def downsample(block: VolumeBlock, target_q: int) -> VolumeBlock:
    """Reduce a block to a coarser quality by successive pair-averaging."""
    if target_q >= block.quality:
        raise InvalidQuality(
            f"target quality {target_q} must be below block quality {block.quality}"
        )
    samples = block.samples
    dims = list(block.meta.dims)
    for axis in halving_order(tuple(dims), block.quality - target_q):
        samples = _halve_axis(samples, array_axis=2 - axis)
        dims[axis] = math.ceil(dims[axis] / 2)
    meta = GridMeta(
        dims=tuple(dims),
        channels=block.meta.channels,
        spacing=block.meta.spacing,
        origin=block.meta.origin,
        field_name=block.meta.field_name,
        timestep_count=block.meta.timestep_count,
        timestep_stride_hours=block.meta.timestep_stride_hours,
    )
    return VolumeBlock(meta=meta, box=block.box, quality=target_q, samples=samples)
