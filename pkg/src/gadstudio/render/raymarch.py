"""Reference CPU volume renderer: front-to-back alpha compositing.

Per pixel: cast a perspective ray, clip it against the scene bounding box
(and the binding's clip box when set), sample the field trilinearly every
``sample_step`` world units starting at the entry point, map samples through
the transfer function, and composite front to back with the opacity
correction

    alpha' = 1 - (1 - alpha) ** (sample_step / reference_step)

where reference_step is the minimum voxel spacing, so opacity settings are
independent of the chosen step.  Rays stop early once accumulated alpha
reaches the termination threshold; whatever transparency remains is filled
with the background color.
"""

from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from ..gad import RenderState, SceneDataBinding
from ..volume import VolumeBlock
from .camera import RenderSettings, camera_basis, intersect_box, ray_directions
from .image import Image, from_float_rgba
from .sampling import trilinear

REFERENCE_STEP = 1.0  # minimum voxel spacing in index-world coordinates


def _tf_table(binding: SceneDataBinding):
    pts = binding.transfer_function.control_points
    xs = np.array([p[0] for p in pts], dtype=np.float64)
    table = np.array(
        [[p[1][0], p[1][1], p[1][2], p[2]] for p in pts], dtype=np.float64
    )
    return xs, table


def _clip_bounds(
    state: RenderState, binding: Optional[SceneDataBinding]
) -> Tuple[np.ndarray, np.ndarray]:
    bmin = np.asarray(state.bounding_box[0], dtype=np.float64)
    bmax = np.asarray(state.bounding_box[1], dtype=np.float64)
    if binding is not None and binding.clip_box is not None:
        clo, chi = binding.clip_box
        extent = bmax - bmin
        cmin = bmin + np.asarray(clo) * extent
        cmax = bmin + np.asarray(chi) * extent
        bmin = np.maximum(bmin, cmin)
        bmax = np.minimum(bmax, cmax)
    return bmin, bmax


def raymarch_float(
    state: RenderState,
    block: VolumeBlock,
    settings: RenderSettings,
    binding: Optional[SceneDataBinding] = None,
) -> np.ndarray:
    """Float RGBA buffer (H, W, 4); alpha is the accumulated opacity."""
    if block.meta.channels != 1:
        raise ValueError("raymarch needs a scalar block")
    if binding is None:
        binding = state.bindings[0]

    basis = camera_basis(state.camera, settings)
    dirs = ray_directions(basis, settings)
    bmin, bmax = _clip_bounds(state, binding)
    step = settings.step(REFERENCE_STEP)
    xs, table = _tf_table(binding)
    grid = block.samples

    n_rays = dirs.shape[0]
    color = np.zeros((n_rays, 3), dtype=np.float64)
    alpha = np.zeros(n_rays, dtype=np.float64)

    if np.all(bmax > bmin):
        t_entry, t_exit = intersect_box(basis.eye, dirs, bmin, bmax)
        active = np.nonzero(t_exit > t_entry)[0]
        t = t_entry[active]
        exit_t = t_exit[active]
        exponent = step / REFERENCE_STEP
        threshold = settings.early_termination_alpha
        while active.size:
            pos = basis.eye[None, :] + dirs[active] * t[:, None]
            values = trilinear(grid, pos)[:, 0]
            mapped = np.stack(
                [np.interp(values, xs, table[:, c]) for c in range(4)], axis=-1
            )
            a_corr = 1.0 - np.power(1.0 - mapped[:, 3], exponent)
            weight = (1.0 - alpha[active]) * a_corr
            color[active] += weight[:, None] * mapped[:, :3]
            alpha[active] += weight
            t = t + step
            keep = (t < exit_t) & (alpha[active] < threshold)
            active = active[keep]
            t = t[keep]
            exit_t = exit_t[keep]

    background = np.asarray(settings.background, dtype=np.float64)
    rgb = color + (1.0 - alpha)[:, None] * background[None, :]
    out = np.concatenate([rgb, alpha[:, None]], axis=1)
    return out.reshape(settings.height, settings.width, 4)


def raymarch(
    state: RenderState,
    block: VolumeBlock,
    settings: RenderSettings,
    binding: Optional[SceneDataBinding] = None,
) -> Image:
    return from_float_rgba(raymarch_float(state, block, settings, binding))
