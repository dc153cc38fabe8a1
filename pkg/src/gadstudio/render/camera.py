"""Perspective camera math shared by the raymarcher and the line overlay.

World coordinates are the block's voxel-index space: the volume spans
[0, dims] with unit spacing, and a camera `fov_y` degrees tall.  The ray
generator and the point projector are exact inverses of each other so
overlays land on the pixels the volume renderer would hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..gad import Camera
from .errors import InvalidState


@dataclass(frozen=True)
class RenderSettings:
    width: int = 256
    height: int = 256
    background: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    sample_step: float = 0.0  # 0 means 0.5 * min voxel spacing
    early_termination_alpha: float = 0.99
    fov_y: float = 60.0

    def step(self, reference_step: float = 1.0) -> float:
        return self.sample_step if self.sample_step > 0 else 0.5 * reference_step


@dataclass(frozen=True)
class CameraBasis:
    eye: np.ndarray
    right: np.ndarray
    up: np.ndarray
    forward: np.ndarray
    half_w: float
    half_h: float


def camera_basis(camera: Camera, settings: RenderSettings) -> CameraBasis:
    forward = np.asarray(camera.direction, dtype=np.float64)
    n = np.linalg.norm(forward)
    if n < 1e-9:
        raise InvalidState("camera direction has zero length")
    forward = forward / n
    up_hint = np.asarray(camera.up, dtype=np.float64)
    right = np.cross(forward, up_hint)
    rn = np.linalg.norm(right)
    if rn < 1e-9:
        raise InvalidState("camera direction and up are parallel")
    right = right / rn
    true_up = np.cross(right, forward)
    half_h = math.tan(math.radians(settings.fov_y) / 2.0)
    half_w = half_h * settings.width / settings.height
    return CameraBasis(
        eye=np.asarray(camera.position, dtype=np.float64),
        right=right,
        up=true_up,
        forward=forward,
        half_w=half_w,
        half_h=half_h,
    )


def ray_directions(basis: CameraBasis, settings: RenderSettings) -> np.ndarray:
    """Normalized ray directions through every pixel center, shape (H*W, 3)."""
    w, h = settings.width, settings.height
    ndc_x = (np.arange(w, dtype=np.float64) + 0.5) / w * 2.0 - 1.0
    ndc_y = 1.0 - (np.arange(h, dtype=np.float64) + 0.5) / h * 2.0
    dirs = (
        basis.forward[None, None, :]
        + ndc_x[None, :, None] * basis.half_w * basis.right[None, None, :]
        + ndc_y[:, None, None] * basis.half_h * basis.up[None, None, :]
    )
    dirs = dirs.reshape(-1, 3)
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return dirs


def project_points(
    points: np.ndarray, basis: CameraBasis, settings: RenderSettings
) -> Tuple[np.ndarray, np.ndarray]:
    """Pixel coordinates and camera depth for world points, shape (N, 2), (N,)."""
    rel = np.asarray(points, dtype=np.float64) - basis.eye
    x_cam = rel @ basis.right
    y_cam = rel @ basis.up
    z_cam = rel @ basis.forward
    with np.errstate(divide="ignore", invalid="ignore"):
        ndc_x = x_cam / (z_cam * basis.half_w)
        ndc_y = y_cam / (z_cam * basis.half_h)
    px = (ndc_x + 1.0) / 2.0 * settings.width - 0.5
    py = (1.0 - ndc_y) / 2.0 * settings.height - 0.5
    return np.stack([px, py], axis=-1), z_cam


def intersect_box(
    origin: np.ndarray, dirs: np.ndarray, bmin: np.ndarray, bmax: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Slab test: (t_entry, t_exit) per ray; misses have t_exit <= t_entry."""
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / dirs
        t0 = (bmin[None, :] - origin[None, :]) * inv
        t1 = (bmax[None, :] - origin[None, :]) * inv
    near = np.minimum(t0, t1)
    far = np.maximum(t0, t1)
    # 0/0 happens when the origin sits exactly on a slab face of a parallel
    # axis; treat that as inside the slab
    near = np.nan_to_num(near, nan=-np.inf)
    far = np.nan_to_num(far, nan=np.inf)
    t_entry = np.maximum(near.max(axis=1), 0.0)
    t_exit = far.min(axis=1)
    return t_entry, t_exit
