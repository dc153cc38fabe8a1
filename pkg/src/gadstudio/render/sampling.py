"""Trilinear sampling of dense blocks in voxel-index world coordinates.

Voxel centers live at index + 0.5 per axis; sampling clamps to the edge so
positions slightly outside the grid read border values.
"""

from __future__ import annotations

import numpy as np


def trilinear(samples: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Sample a (dz, dy, dx, C) grid at (N, 3) world positions -> (N, C)."""
    dz, dy, dx, channels = samples.shape
    flat = samples.reshape(-1, channels)

    gx = np.clip(positions[:, 0] - 0.5, 0.0, dx - 1.0)
    gy = np.clip(positions[:, 1] - 0.5, 0.0, dy - 1.0)
    gz = np.clip(positions[:, 2] - 0.5, 0.0, dz - 1.0)

    x0 = np.floor(gx).astype(np.intp)
    y0 = np.floor(gy).astype(np.intp)
    z0 = np.floor(gz).astype(np.intp)
    x1 = np.minimum(x0 + 1, dx - 1)
    y1 = np.minimum(y0 + 1, dy - 1)
    z1 = np.minimum(z0 + 1, dz - 1)
    fx = (gx - x0)[:, None]
    fy = (gy - y0)[:, None]
    fz = (gz - z0)[:, None]

    def at(z, y, x):
        return flat[(z * dy + y) * dx + x]

    c00 = at(z0, y0, x0) * (1 - fx) + at(z0, y0, x1) * fx
    c01 = at(z0, y1, x0) * (1 - fx) + at(z0, y1, x1) * fx
    c10 = at(z1, y0, x0) * (1 - fx) + at(z1, y0, x1) * fx
    c11 = at(z1, y1, x0) * (1 - fx) + at(z1, y1, x1) * fx
    c0 = c00 * (1 - fy) + c01 * fy
    c1 = c10 * (1 - fy) + c11 * fy
    return c0 * (1 - fz) + c1 * fz
