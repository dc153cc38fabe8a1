"""Deterministic analytic fields standing in for real ocean model output.

Three generators cover the shapes the animation pipeline needs: a scalar blob
orbiting the domain center (eddy-like), a bounded salinity-style gradient with
a drifting high-salinity lens, and a solid-body rotation velocity field.  All
are pure functions of (kind, grid, timestep) so every caller reproduces
bit-identical sample arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .grid import GridMeta, InvalidQuality, OutOfBounds, VolumeBlock, downsample

ROTATING_EDDY = "rotating_eddy_scalar"
BASIN_SALINITY = "basin_salinity_scalar"
VORTEX_VELOCITY = "vortex_velocity"

KINDS = (ROTATING_EDDY, BASIN_SALINITY, VORTEX_VELOCITY)


def _voxel_centers(meta: GridMeta):
    """World coordinates of voxel centers, each shaped (dz, dy, dx)."""
    dx, dy, dz = meta.dims
    sx, sy, sz = meta.spacing
    ox, oy, oz = meta.origin
    x = ox + sx * (np.arange(dx, dtype=np.float64) + 0.5)
    y = oy + sy * (np.arange(dy, dtype=np.float64) + 0.5)
    z = oz + sz * (np.arange(dz, dtype=np.float64) + 0.5)
    zz, yy, xx = np.meshgrid(z, y, x, indexing="ij")
    return xx, yy, zz


def _world_center(meta: GridMeta) -> Tuple[float, float, float]:
    return tuple(
        o + s * d / 2.0 for o, s, d in zip(meta.origin, meta.spacing, meta.dims)
    )


def _extent(meta: GridMeta) -> Tuple[float, float, float]:
    return tuple(s * d for s, d in zip(meta.spacing, meta.dims))


def generate_synthetic(kind: str, meta: GridMeta, t: int) -> VolumeBlock:
    """Full-domain block at quality 0 for timestep ``t``."""
    if kind not in KINDS:
        raise ValueError(f"unknown synthetic field kind {kind!r}")
    dx, dy, dz = meta.dims
    phase = (t % meta.timestep_count) / meta.timestep_count

    if kind == ROTATING_EDDY:
        xx, yy, zz = _voxel_centers(meta)
        cx, cy, cz = _world_center(meta)
        ex, ey, ez = _extent(meta)
        radius = 0.25 * min(ex, ey)
        sigma = 0.15 * min(ex, ey, ez)
        theta = 2.0 * math.pi * phase
        bx = cx + radius * math.cos(theta)
        by = cy + radius * math.sin(theta)
        d2 = (xx - bx) ** 2 + (yy - by) ** 2 + (zz - cz) ** 2
        # a static warm-core background keeps the whole domain visible; the
        # orbiting blob rides on top of it; total stays inside [0, 1]
        r2 = (xx - cx) ** 2 + (yy - cy) ** 2
        background = 0.3 * np.exp(-r2 / (2.0 * (0.5 * min(ex, ey)) ** 2))
        values = background + 0.7 * np.exp(-d2 / (2.0 * sigma * sigma))
        samples = values[..., None]
        channels = 1

    elif kind == BASIN_SALINITY:
        # index-normalized coordinates keep the range independent of spacing
        xn = (np.arange(dx, dtype=np.float64) + 0.5) / dx
        yn = (np.arange(dy, dtype=np.float64) + 0.5) / dy
        zn = (np.arange(dz, dtype=np.float64) + 0.5) / dz
        zzn, yyn, xxn = np.meshgrid(zn, yn, xn, indexing="ij")
        lens_x, lens_z = 0.65, 0.5
        lens_y = 0.3 + 0.4 * phase
        sigma = 0.15
        d2 = (xxn - lens_x) ** 2 + (yyn - lens_y) ** 2 + (zzn - lens_z) ** 2
        # 33 + 3*x + 1.8*lens stays inside [33, 38] by construction
        values = 33.0 + 3.0 * xxn + 1.8 * np.exp(-d2 / (2.0 * sigma * sigma))
        samples = values[..., None]
        channels = 1

    else:  # VORTEX_VELOCITY: omega = 1 solid-body rotation about the z axis
        xx, yy, _ = _voxel_centers(meta)
        cx, cy, _ = _world_center(meta)
        vx = -(yy - cy)
        vy = xx - cx
        vz = np.zeros_like(vx)
        samples = np.stack([vx, vy, vz], axis=-1)
        channels = 3

    block_meta = GridMeta(
        dims=meta.dims,
        channels=channels,
        spacing=meta.spacing,
        origin=meta.origin,
        field_name=meta.field_name or kind,
        timestep_count=meta.timestep_count,
        timestep_stride_hours=meta.timestep_stride_hours,
    )
    return VolumeBlock(
        meta=block_meta,
        box=((0, 0, 0), meta.dims),
        quality=0,
        samples=np.ascontiguousarray(samples),
    )


@dataclass(frozen=True)
class SyntheticVolume:
    """A named analytic field over a grid, addressable by region and quality."""

    kind: str
    meta: GridMeta


def extract_roi(
    source: SyntheticVolume,
    box: Tuple[Tuple[int, int, int], Tuple[int, int, int]],
    q: int,
    t: int,
) -> VolumeBlock:
    """Sub-grid of the field at timestep ``t``, downsampled to quality ``q``.

    Defined as extract-then-downsample, so extract_roi(box, q) equals
    downsample(extract_roi(box, 0), q) elementwise.
    """
    if q > 0:
        raise InvalidQuality(f"quality must be <= 0, got {q}")
    meta = source.meta
    if not 0 <= t < meta.timestep_count:
        raise OutOfBounds(f"timestep {t} outside [0, {meta.timestep_count})")
    (x1, y1, z1), (x2, y2, z2) = box
    dx, dy, dz = meta.dims
    if not (0 <= x1 < x2 <= dx and 0 <= y1 < y2 <= dy and 0 <= z1 < z2 <= dz):
        raise OutOfBounds(f"box {box} outside dims {meta.dims}")

    full = generate_synthetic(source.kind, meta, t)
    sub = np.ascontiguousarray(full.samples[z1:z2, y1:y2, x1:x2, :])
    sub_meta = GridMeta(
        dims=(x2 - x1, y2 - y1, z2 - z1),
        channels=full.meta.channels,
        spacing=meta.spacing,
        origin=tuple(
            o + s * lo for o, s, lo in zip(meta.origin, meta.spacing, (x1, y1, z1))
        ),
        field_name=full.meta.field_name,
        timestep_count=meta.timestep_count,
        timestep_stride_hours=meta.timestep_stride_hours,
    )
    block = VolumeBlock(
        meta=sub_meta, box=((x1, y1, z1), (x2, y2, z2)), quality=0, samples=sub
    )
    if q < 0:
        block = downsample(block, q)
    return block
