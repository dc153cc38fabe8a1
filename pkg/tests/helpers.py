"""Shared factories for tests: hand-built and randomized GAD documents.

Random documents quantize every real value to the wire precision (nine
significant digits) so serialize -> parse is an exact round trip.
"""

from __future__ import annotations

import math
import random
from typing import List, Optional

from gadstudio.gad import (
    Camera,
    DataEntry,
    GadDocument,
    GadHeader,
    Keyframe,
    SceneDataBinding,
    StreamlineParams,
    TransferFunction,
)


def qf(x: float) -> float:
    """Quantize to nine significant digits, the serializer's float precision."""
    return float(format(x, ".9g"))


def unit_camera(position=(0.0, 0.0, 10.0), direction=(0.0, 0.0, -1.0), up=(0.0, 1.0, 0.0)) -> Camera:
    return Camera(position=position, direction=direction, up=up)


def simple_tf(domain=(0.0, 1.0), opacity=(0.0, 0.8)) -> TransferFunction:
    lo, hi = domain
    return TransferFunction(
        control_points=(
            (lo, (0.0, 0.0, 0.0), opacity[0]),
            (hi, (1.0, 1.0, 1.0), opacity[1]),
        ),
        domain=domain,
    )


def scalar_entry(i: int, field: str = "salinity", dims=(16, 16, 8), rng=(0.0, 1.0)) -> DataEntry:
    return DataEntry(
        id=i,
        path=f"data/{field}_t{i:04d}_q0.f32",
        dims=dims,
        channels=1,
        data_type="structured",
        field_name=field,
        value_range=rng,
    )


def simple_doc(n_keyframes: int = 3, dims=(16, 16, 8)) -> GadDocument:
    header = GadHeader(
        version="1.0",
        data_list_ref="datalist.gad.json",
        keyframe_refs=tuple(f"kf_{i:05d}.gad.json" for i in range(n_keyframes)),
    )
    entries = tuple(scalar_entry(i, dims=dims) for i in range(n_keyframes))
    keyframes = []
    for i in range(n_keyframes):
        keyframes.append(
            Keyframe(
                frame_range=(i, i),
                bounding_box=((0, 0, 0), dims),
                camera=unit_camera(position=(float(i), 0.0, 20.0)),
                scene_data=(
                    SceneDataBinding(data_index=i, transfer_function=simple_tf()),
                ),
            )
        )
    return GadDocument(header=header, data_list=entries, keyframes=tuple(keyframes))


def _rand_unit(rnd: random.Random):
    while True:
        v = (rnd.uniform(-1, 1), rnd.uniform(-1, 1), rnd.uniform(-1, 1))
        n = math.sqrt(sum(c * c for c in v))
        if n > 0.1:
            return tuple(qf(c / n) for c in v)


def _rand_camera(rnd: random.Random) -> Camera:
    direction = _rand_unit(rnd)
    while True:
        up = _rand_unit(rnd)
        d = sum(a * b for a, b in zip(direction, up))
        if abs(d) < 0.9:
            break
    position = tuple(qf(rnd.uniform(-100, 100)) for _ in range(3))
    return Camera(position=position, direction=direction, up=up)


def _rand_tf(rnd: random.Random, domain=None) -> TransferFunction:
    if domain is None:
        lo = qf(rnd.uniform(-10, 10))
        hi = qf(lo + rnd.uniform(1, 20))
        domain = (lo, hi)
    lo, hi = domain
    n_mid = rnd.randint(0, 4)
    mids = sorted({qf(rnd.uniform(lo + 1e-3, hi - 1e-3)) for _ in range(n_mid)})
    values = [lo] + [m for m in mids if lo < m < hi] + [hi]
    points = tuple(
        (
            v,
            tuple(qf(rnd.random()) for _ in range(3)),
            qf(rnd.random()),
        )
        for v in values
    )
    return TransferFunction(control_points=points, domain=domain)


def _maybe_extra(rnd: random.Random) -> dict:
    if rnd.random() < 0.7:
        return {}
    keys = ["note", "author", "tag", "weight"]
    out = {}
    for key in rnd.sample(keys, rnd.randint(1, 2)):
        choice = rnd.random()
        if choice < 0.4:
            out[key] = rnd.randint(0, 99)
        elif choice < 0.7:
            out[key] = qf(rnd.uniform(-5, 5))
        else:
            out[key] = f"x{rnd.randint(0, 999)}"
    return out


def violating_documents():
    """One deliberately broken document per type invariant, with the path
    fragment a diagnostic must land on."""
    import dataclasses

    def kf_change(doc, i, **changes):
        kfs = list(doc.keyframes)
        kfs[i] = dataclasses.replace(kfs[i], **changes)
        return dataclasses.replace(doc, keyframes=tuple(kfs))

    def entry_change(doc, i, **changes):
        entries = list(doc.data_list)
        entries[i] = dataclasses.replace(entries[i], **changes)
        return dataclasses.replace(doc, data_list=tuple(entries))

    def binding_change(doc, **changes):
        kf = doc.keyframes[0]
        binding = dataclasses.replace(kf.scene_data[0], **changes)
        return kf_change(doc, 0, scene_data=(binding,))

    base = simple_doc(2)
    one = simple_doc(1)
    sp = StreamlineParams(seed_density=2, step_size=0.1, max_steps=10)
    bad_tf_unsorted = TransferFunction(
        control_points=((0.0, (0, 0, 0), 0.0), (0.9, (0, 0, 0), 0.1), (0.5, (0, 0, 0), 0.2), (1.0, (1, 1, 1), 1.0)),
        domain=(0.0, 1.0),
    )
    bad_tf_one = TransferFunction(control_points=((0.0, (0, 0, 0), 0.5),), domain=(0.0, 1.0))
    bad_tf_domain = TransferFunction(
        control_points=((0.2, (0, 0, 0), 0.0), (0.8, (1, 1, 1), 1.0)), domain=(0.0, 1.0)
    )
    bad_tf_color = TransferFunction(
        control_points=((0.0, (0, 0, 1.5), 0.0), (1.0, (1, 1, 1), 1.0)), domain=(0.0, 1.0)
    )

    header_empty = dataclasses.replace(
        one, header=dataclasses.replace(one.header, keyframe_refs=()), keyframes=()
    )
    header_dup = dataclasses.replace(
        base,
        header=dataclasses.replace(
            base.header, keyframe_refs=(base.header.keyframe_refs[0],) * 2
        ),
    )

    return [
        ("header.keyframes non-empty", header_empty, "header.keyframes"),
        ("header.keyframes no duplicates", header_dup, "header.keyframes"),
        ("streamline entry needs 3 channels", entry_change(one, 0, data_type="streamline"), "channels"),
        ("structured entry needs 1 channel", entry_change(one, 0, channels=3), "channels"),
        ("value range ordered", entry_change(one, 0, value_range=(9.0, 1.0)), "range"),
        ("entry ids contiguous", entry_change(base, 1, id=5), "data_list[1].id"),
        ("camera direction unit", kf_change(one, 0, camera=Camera((0, 0, 9), (0, 0, -3), (0, 1, 0))), "camera.direction"),
        ("camera up unit", kf_change(one, 0, camera=Camera((0, 0, 9), (0, 0, -1), (0, 0, 0))), "camera.up"),
        ("camera not parallel", kf_change(one, 0, camera=Camera((0, 0, 9), (0, 0, -1), (0, 0, 1))), "camera"),
        ("bbox min < max", kf_change(one, 0, bounding_box=((0, 0, 0), (16, 0, 8))), "bbox"),
        ("frame range ordered", kf_change(one, 0, frame_range=(4, 1)), "frames"),
        ("keyframes non-overlapping", kf_change(kf_change(base, 0, frame_range=(0, 3)), 1, frame_range=(2, 5)), "frames"),
        ("per-frame camera count", kf_change(one, 0, frame_range=(0, 2), per_frame_cameras=(unit_camera(),)), "cameras"),
        ("streamline params iff streamline entry", binding_change(one, streamline_params=sp), "streamline"),
        ("streamline entry needs params", entry_change(binding_change(one, streamline_params=None), 0, data_type="streamline", channels=3), "streamline"),
        ("data index in range", binding_change(one, data_index=7), "data"),
        ("tf needs two points", binding_change(one, transfer_function=bad_tf_one), "tf.points"),
        ("tf strictly ascending", binding_change(one, transfer_function=bad_tf_unsorted), "tf.points"),
        ("tf endpoints at domain", binding_change(one, transfer_function=bad_tf_domain), "tf.points"),
        ("tf colors in unit range", binding_change(one, transfer_function=bad_tf_color), "tf.points"),
        ("clip box inside unit cube", binding_change(one, clip_box=((0.0, 0.0, 0.0), (2.0, 1.0, 1.0))), "clip"),
        ("interp kind supported", binding_change(one, interp="cubic"), "interp"),
    ]


def random_doc(rnd: random.Random) -> GadDocument:
    """A valid randomized document with wire-precision floats."""
    n_entries = rnd.randint(1, 5)
    entries: List[DataEntry] = []
    for i in range(n_entries):
        streamline = rnd.random() < 0.3
        lo = qf(rnd.uniform(-50, 50))
        entries.append(
            DataEntry(
                id=i,
                path=f"data/blk_{i:04d}.f32",
                dims=tuple(rnd.randint(1, 64) for _ in range(3)),
                channels=3 if streamline else 1,
                data_type="streamline" if streamline else "structured",
                field_name=rnd.choice(["salinity", "temperature", "velocity", "speed"]),
                value_range=(lo, qf(lo + rnd.uniform(0, 10))),
                extra=_maybe_extra(rnd),
            )
        )

    n_kf = rnd.randint(1, 6)
    keyframes = []
    frame = 0
    for i in range(n_kf):
        start = frame + (rnd.randint(1, 5) if i else 0)
        end = start + rnd.randint(0, 4)
        frame = end
        lo = tuple(rnd.randint(0, 10) for _ in range(3))
        hi = tuple(a + rnd.randint(1, 50) for a in lo)
        bindings = []
        for _ in range(rnd.randint(1, 3)):
            idx = rnd.randrange(n_entries)
            entry = entries[idx]
            sp: Optional[StreamlineParams] = None
            if entry.data_type == "streamline":
                sp = StreamlineParams(
                    seed_density=rnd.randint(1, 5),
                    step_size=qf(rnd.uniform(0.05, 1.0)),
                    max_steps=rnd.randint(1, 300),
                )
            clip = None
            if rnd.random() < 0.3:
                clo = tuple(qf(rnd.uniform(0.0, 0.4)) for _ in range(3))
                chi = tuple(qf(c + rnd.uniform(0.1, 0.5)) for c in clo)
                chi = tuple(min(c, 1.0) for c in chi)
                clip = (clo, chi)
            bindings.append(
                SceneDataBinding(
                    data_index=idx,
                    transfer_function=_rand_tf(rnd),
                    clip_box=clip,
                    streamline_params=sp,
                    extra=_maybe_extra(rnd),
                )
            )
        pfc = None
        if rnd.random() < 0.25:
            pfc = tuple(_rand_camera(rnd) for _ in range(end - start + 1))
        keyframes.append(
            Keyframe(
                frame_range=(start, end),
                bounding_box=(lo, hi),
                camera=_rand_camera(rnd),
                scene_data=tuple(bindings),
                per_frame_cameras=pfc,
                extra=_maybe_extra(rnd),
            )
        )

    header = GadHeader(
        version="1.0",
        data_list_ref="datalist.gad.json",
        keyframe_refs=tuple(f"kf_{i:05d}.gad.json" for i in range(n_kf)),
        extra=_maybe_extra(rnd),
    )
    return GadDocument(header=header, data_list=tuple(entries), keyframes=tuple(keyframes))
