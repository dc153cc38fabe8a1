"""Resolve an AnimationSpec into fetched blocks plus a generated GAD bundle."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..gad import (
    Camera,
    DataEntry,
    GadDocument,
    GadHeader,
    Keyframe,
    SceneDataBinding,
    StreamlineParams,
    TransferFunction,
    parse_gad,
    serialize_gad,
)
from ..gad.io import wire_float
from ..volume import GridMeta, VolumeBlock, block_filename, write_block
from .cache import CacheIndex
from .client import DatasetClient
from .datasets import VELOCITY_COMPONENTS
from .spec import AnimationSpec, animation_id

DEFAULT_SEED_DENSITY = 4
DEFAULT_STEP_SIZE = 0.5
DEFAULT_MAX_STEPS = 256
VELOCITY_FIELD = "velocity"

ProgressFn = Callable[[int, int], None]


def default_camera(dims: Tuple[int, int, int]) -> Camera:
    """Looking down +z from 1.5x the box diagonal, up along +y."""
    cx, cy, cz = (d / 2.0 for d in dims)
    diagonal = math.sqrt(sum(float(d) * d for d in dims))
    return Camera(
        position=(cx, cy, wire_float(cz + 1.5 * diagonal)),
        direction=(0.0, 0.0, -1.0),
        up=(0.0, 1.0, 0.0),
    )


def _safe_domain(lo: float, hi: float) -> Tuple[float, float]:
    # a flat field (e.g. vertical velocity of a 2D flow) would otherwise
    # produce an illegal zero-width transfer function domain
    if hi > lo:
        return (lo, hi)
    return (lo, lo + 1.0)


def grayscale_tf(value_range: Tuple[float, float], top_opacity: float = 0.8) -> TransferFunction:
    """Black-to-white ramp with a slow opacity onset: low values stay thin so
    interior structure is not fogged out before rays reach it."""
    lo, hi = _safe_domain(*value_range)
    mid = wire_float(lo + 0.7 * (hi - lo))
    return TransferFunction(
        control_points=(
            (lo, (0.0, 0.0, 0.0), 0.0),
            (mid, (0.7, 0.7, 0.7), 0.1),
            (hi, (1.0, 1.0, 1.0), top_opacity),
        ),
        domain=(lo, hi),
    )


def diverging_speed_tf(speed_range: Tuple[float, float]) -> TransferFunction:
    lo, hi = _safe_domain(*speed_range)
    mid = wire_float((lo + hi) / 2.0)
    return TransferFunction(
        control_points=(
            (lo, (0.0, 0.0, 1.0), 0.8),
            (mid, (1.0, 1.0, 1.0), 0.8),
            (hi, (1.0, 0.0, 0.0), 0.8),
        ),
        domain=(lo, hi),
    )


def _combine_velocity(components: List[VolumeBlock]) -> VolumeBlock:
    u, v, w = components
    samples = np.concatenate([u.samples, v.samples, w.samples], axis=-1)
    meta = GridMeta(
        dims=u.meta.dims,
        channels=3,
        spacing=u.meta.spacing,
        origin=u.meta.origin,
        field_name=VELOCITY_FIELD,
        timestep_count=u.meta.timestep_count,
        timestep_stride_hours=u.meta.timestep_stride_hours,
    )
    return VolumeBlock(meta=meta, box=u.box, quality=u.quality, samples=samples)


def materialize(
    spec: AnimationSpec,
    client: DatasetClient,
    cache: CacheIndex,
    concurrency: int = 4,
    progress: Optional[ProgressFn] = None,
) -> Tuple[GadDocument, Path, bool]:
    """Return (document, gad_root, cache_hit).

    On a hit the stored GAD is loaded with zero network requests.  On a miss
    every requested timestep is fetched (velocity components too when
    streamlines are on), block files and GAD documents are written under the
    cache, and the index entry is inserted only after all files exist.
    """
    spec.validate()
    aid = str(animation_id(spec))

    with cache.animation_lock(aid):
        entry = cache.lookup(aid)
        if entry is not None:
            return parse_gad(entry.gad_root), entry.gad_root, True

        descriptor = client.descriptor(spec.dataset)
        field_range = descriptor.field_range(spec.field)
        timesteps = list(spec.timesteps())
        gad_root = cache.root / aid
        data_dir = gad_root / "data"
        data_dir.mkdir(parents=True, exist_ok=True)

        done = 0

        def fetch_one(t: int) -> Tuple[int, VolumeBlock, Optional[VolumeBlock]]:
            scalar = client.fetch_block(spec.dataset, spec.field, t, spec.quality, spec.box)
            velocity = None
            if spec.streamlines:
                parts = [
                    client.fetch_block(spec.dataset, comp, t, spec.quality, spec.box)
                    for comp in VELOCITY_COMPONENTS
                ]
                velocity = _combine_velocity(parts)
            return t, scalar, velocity

        results: Dict[int, Tuple[VolumeBlock, Optional[VolumeBlock]]] = {}
        workers = max(1, min(concurrency, len(timesteps)))
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for t, scalar, velocity in pool.map(fetch_one, timesteps):
                results[t] = (scalar, velocity)
                done += 1
                if progress is not None:
                    progress(done, len(timesteps))

        speed_lo = math.inf
        speed_hi = -math.inf
        if spec.streamlines:
            for _, velocity in results.values():
                speed = np.sqrt((velocity.samples**2).sum(axis=-1))
                speed_lo = min(speed_lo, float(speed.min()))
                speed_hi = max(speed_hi, float(speed.max()))
            speed_lo = wire_float(speed_lo)
            speed_hi = wire_float(speed_hi)

        entries: List[DataEntry] = []
        keyframes: List[Keyframe] = []
        block_files: List[str] = []
        for i, t in enumerate(timesteps):
            scalar, velocity = results[t]
            dims = scalar.meta.dims
            scalar_name = f"data/{block_filename(spec.field, t, spec.quality)}"
            write_block(gad_root / scalar_name, scalar)
            block_files.append(scalar_name)
            scalar_id = len(entries)
            entries.append(
                DataEntry(
                    id=scalar_id,
                    path=scalar_name,
                    dims=dims,
                    channels=1,
                    data_type="structured",
                    field_name=spec.field,
                    value_range=field_range,
                )
            )
            bindings = [
                SceneDataBinding(
                    data_index=scalar_id,
                    transfer_function=grayscale_tf(field_range),
                )
            ]
            if spec.streamlines:
                velocity_name = f"data/{block_filename(VELOCITY_FIELD, t, spec.quality)}"
                write_block(gad_root / velocity_name, velocity)
                block_files.append(velocity_name)
                velocity_id = len(entries)
                entries.append(
                    DataEntry(
                        id=velocity_id,
                        path=velocity_name,
                        dims=dims,
                        channels=3,
                        data_type="streamline",
                        field_name=VELOCITY_FIELD,
                        value_range=(speed_lo, speed_hi),
                    )
                )
                bindings.append(
                    SceneDataBinding(
                        data_index=velocity_id,
                        transfer_function=diverging_speed_tf((speed_lo, speed_hi)),
                        streamline_params=StreamlineParams(
                            seed_density=DEFAULT_SEED_DENSITY,
                            step_size=DEFAULT_STEP_SIZE,
                            max_steps=DEFAULT_MAX_STEPS,
                        ),
                    )
                )
            keyframes.append(
                Keyframe(
                    frame_range=(i, i),
                    bounding_box=((0, 0, 0), dims),
                    camera=default_camera(dims),
                    scene_data=tuple(bindings),
                )
            )

        header = GadHeader(
            version="1.0",
            data_list_ref="datalist.gad.json",
            keyframe_refs=tuple(f"kf_{i:05d}.gad.json" for i in range(len(keyframes))),
        )
        doc = GadDocument(header=header, data_list=tuple(entries), keyframes=tuple(keyframes))
        written = serialize_gad(doc, gad_root)
        files = block_files + [p.relative_to(gad_root).as_posix() for p in written]
        cache.insert(aid, gad_root, files)
        return doc, gad_root, False
