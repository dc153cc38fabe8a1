"""Streamline tracing through vector blocks with classical fourth-order
Runge-Kutta, plus speed-based coloring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..gad import StreamlineParams
from ..volume import VolumeBlock
from .sampling import trilinear

STAGNANT_SPEED = 1e-6


@dataclass(frozen=True)
class Streamline:
    vertices: np.ndarray  # (n, 3) world positions
    speeds: np.ndarray  # (n,) velocity magnitude at each vertex

    def __post_init__(self):
        if len(self.vertices) != len(self.speeds) or len(self.vertices) < 1:
            raise ValueError("a streamline needs matching vertices and speeds, at least one")


def _velocity(block: VolumeBlock, points: np.ndarray) -> np.ndarray:
    return trilinear(block.samples, points)


def _inside(points: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return np.all((points >= lo) & (points <= hi), axis=-1)


def seed_lattice(
    lo: np.ndarray, hi: np.ndarray, density: int
) -> np.ndarray:
    """Uniform density^3 lattice of cell centers inside [lo, hi]."""
    axes = [
        lo[a] + (np.arange(density, dtype=np.float64) + 0.5) * (hi[a] - lo[a]) / density
        for a in range(3)
    ]
    zz, yy, xx = np.meshgrid(axes[2], axes[1], axes[0], indexing="ij")
    return np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=-1)


def trace_streamlines(
    block: VolumeBlock,
    params: StreamlineParams,
    region: Optional[Tuple[np.ndarray, np.ndarray]] = None,
) -> List[Streamline]:
    """Integrate from a uniform seed lattice until a line leaves the domain,
    stagnates (speed < 1e-6), or hits the step budget.

    All live lines advance together so the integrator stays vectorized.
    """
    if block.meta.channels != 3:
        raise ValueError("streamline tracing needs a 3-channel block")
    dims = np.asarray(block.meta.dims, dtype=np.float64)
    domain_lo = np.zeros(3)
    domain_hi = dims
    if region is None:
        seed_lo, seed_hi = domain_lo, domain_hi
    else:
        seed_lo = np.maximum(np.asarray(region[0], dtype=np.float64), domain_lo)
        seed_hi = np.minimum(np.asarray(region[1], dtype=np.float64), domain_hi)

    seeds = seed_lattice(seed_lo, seed_hi, params.seed_density)
    n = len(seeds)
    h = params.step_size

    vertices: List[List[np.ndarray]] = [[p] for p in seeds]
    v0 = _velocity(block, seeds)
    speed0 = np.linalg.norm(v0, axis=-1)
    speeds: List[List[float]] = [[float(s)] for s in speed0]

    pos = seeds.copy()
    live = speed0 >= STAGNANT_SPEED
    live_idx = np.nonzero(live)[0]
    pos = pos[live_idx]

    for _ in range(params.max_steps):
        if not live_idx.size:
            break
        k1 = _velocity(block, pos)
        k2 = _velocity(block, pos + (h / 2.0) * k1)
        k3 = _velocity(block, pos + (h / 2.0) * k2)
        k4 = _velocity(block, pos + h * k3)
        nxt = pos + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

        inside = _inside(nxt, domain_lo, domain_hi)
        v_next = _velocity(block, nxt)
        speed_next = np.linalg.norm(v_next, axis=-1)

        for j in np.nonzero(inside)[0]:
            idx = live_idx[j]
            vertices[idx].append(nxt[j])
            speeds[idx].append(float(speed_next[j]))

        keep = inside & (speed_next >= STAGNANT_SPEED)
        live_idx = live_idx[keep]
        pos = nxt[keep]

    return [
        Streamline(vertices=np.asarray(v), speeds=np.asarray(s))
        for v, s in zip(vertices, speeds)
    ]


def diverging_color(normalized: np.ndarray) -> np.ndarray:
    """Blue -> white -> red over [0, 1]; input is clamped."""
    u = np.clip(normalized, 0.0, 1.0)[..., None]
    blue = np.array([0.0, 0.0, 1.0])
    white = np.array([1.0, 1.0, 1.0])
    red = np.array([1.0, 0.0, 0.0])
    low = blue + (white - blue) * (2.0 * u)
    high = white + (red - white) * (2.0 * u - 1.0)
    return np.where(u <= 0.5, low, high)


def color_by_speed(
    lines: List[Streamline], speed_range: Tuple[float, float]
) -> List[Tuple[Streamline, np.ndarray]]:
    """Per-vertex RGB from the diverging map over normalized speed."""
    lo, hi = speed_range
    if not lo < hi:
        raise ValueError(f"speed range must have min < max, got {speed_range}")
    out = []
    for line in lines:
        u = (line.speeds - lo) / (hi - lo)
        out.append((line, diverging_color(u)))
    return out
