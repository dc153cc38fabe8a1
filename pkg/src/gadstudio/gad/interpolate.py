"""Temporal interpolation: cameras, transfer functions, and keyframe expansion."""

from __future__ import annotations

import math
from bisect import bisect_right
from typing import List, Tuple

from .errors import DegenerateBlend, DomainMismatch, InvalidDocument
from .types import (
    Camera,
    GadDocument,
    Keyframe,
    RenderState,
    SceneDataBinding,
    TransferFunction,
    Vec3,
)

PARALLEL_TOL = 1e-6
DEGENERATE_NORM = 1e-9


def _norm(v: Vec3) -> float:
    return math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])


def _normalize(v: Vec3) -> Vec3:
    n = _norm(v)
    if n < DEGENERATE_NORM:
        raise DegenerateBlend(f"cannot normalize near-zero vector {v}")
    return (v[0] / n, v[1] / n, v[2] / n)


def _lerp3(a: Vec3, b: Vec3, t: float) -> Vec3:
    return (
        (1.0 - t) * a[0] + t * b[0],
        (1.0 - t) * a[1] + t * b[1],
        (1.0 - t) * a[2] + t * b[2],
    )


def _dot(a: Vec3, b: Vec3) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def interpolate_camera(a: Camera, b: Camera, t: float) -> Camera:
    """Blend two cameras: linear position, normalized-linear orientation.

    Endpoints are exact: t=0 returns ``a`` unchanged, t=1 returns ``b``.
    Raises DegenerateBlend when the blended direction or up vector collapses
    (antipodal inputs) or the result has parallel direction and up.
    """
    if t == 0.0:
        return a
    if t == 1.0:
        return b
    position = _lerp3(a.position, b.position, t)
    direction = _normalize(_lerp3(a.direction, b.direction, t))
    up = _normalize(_lerp3(a.up, b.up, t))
    if abs(_dot(direction, up)) >= 1.0 - PARALLEL_TOL:
        raise DegenerateBlend("blended camera direction and up are parallel")
    return Camera(position=position, direction=direction, up=up)


def eval_tf(tf: TransferFunction, s: float) -> Tuple[Vec3, float]:
    """Evaluate color and opacity at ``s``, clamping outside the domain."""
    pts = tf.control_points
    if s <= pts[0][0]:
        return pts[0][1], pts[0][2]
    if s >= pts[-1][0]:
        return pts[-1][1], pts[-1][2]
    values = [p[0] for p in pts]
    i = bisect_right(values, s) - 1
    s0, c0, o0 = pts[i]
    s1, c1, o1 = pts[i + 1]
    u = (s - s0) / (s1 - s0)
    return _lerp3(c0, c1, u), (1.0 - u) * o0 + u * o1


def interpolate_tf(a: TransferFunction, b: TransferFunction, t: float) -> TransferFunction:
    """Pointwise blend of two piecewise-linear transfer functions.

    The result is built on the union of both control-point abscissas so the
    blend is exact at every scalar value, not just at shared knots.
    """
    if a.domain != b.domain:
        raise DomainMismatch(f"domains differ: {a.domain} vs {b.domain}")
    if t == 0.0:
        return a
    if t == 1.0:
        return b
    knots = sorted({p[0] for p in a.control_points} | {p[0] for p in b.control_points})
    points = []
    for s in knots:
        ca, oa = eval_tf(a, s)
        cb, ob = eval_tf(b, s)
        points.append((s, _lerp3(ca, cb, t), (1.0 - t) * oa + t * ob))
    return TransferFunction(control_points=tuple(points), domain=a.domain)


def _camera_at_start(kf: Keyframe) -> Camera:
    if kf.per_frame_cameras:
        return kf.per_frame_cameras[0]
    return kf.camera


def _camera_at_end(kf: Keyframe) -> Camera:
    if kf.per_frame_cameras:
        return kf.per_frame_cameras[-1]
    return kf.camera


def _blend_bindings(
    left: Keyframe, right: Keyframe, t: float
) -> Tuple[SceneDataBinding, ...]:
    """Bindings in a keyframe gap: structure held from the left keyframe,
    transfer functions blended toward the right where a positional match with
    an identical domain exists."""
    out: List[SceneDataBinding] = []
    for j, binding in enumerate(left.scene_data):
        tf = binding.transfer_function
        if j < len(right.scene_data):
            other = right.scene_data[j].transfer_function
            if other.domain == tf.domain:
                tf = interpolate_tf(tf, other, t)
        if tf is binding.transfer_function:
            out.append(binding)
        else:
            out.append(
                SceneDataBinding(
                    data_index=binding.data_index,
                    transfer_function=tf,
                    clip_box=binding.clip_box,
                    streamline_params=binding.streamline_params,
                    interp=binding.interp,
                    extra=binding.extra,
                )
            )
    return tuple(out)


def expand_keyframes(doc: GadDocument) -> List[RenderState]:
    """Materialize one RenderState per frame from the first keyframe's start
    to the last keyframe's end.

    Inside a keyframe's own frame range every attribute holds that keyframe's
    value (per-frame cameras override when present).  Between keyframe i's end
    and keyframe i+1's start, the camera and matching transfer functions blend
    with t = (frame - end_i) / (start_{i+1} - end_i); other attributes hold the
    left keyframe's values until the next range begins.
    """
    from .validate import validate_gad  # cycle: validate needs types only

    errors = [d for d in validate_gad(doc) if d.severity == "error"]
    if errors:
        raise InvalidDocument(errors)

    kfs = doc.keyframes
    states: List[RenderState] = []
    first = kfs[0].frame_range[0]
    last = kfs[-1].frame_range[1]
    starts = [kf.frame_range[0] for kf in kfs]

    for frame in range(first, last + 1):
        # rightmost keyframe whose range started at or before this frame
        i = bisect_right(starts, frame) - 1
        kf = kfs[i]
        s, e = kf.frame_range
        if frame <= e:
            camera = kf.camera
            if kf.per_frame_cameras:
                camera = kf.per_frame_cameras[frame - s]
            states.append(
                RenderState(
                    frame_number=frame,
                    camera=camera,
                    bindings=kf.scene_data,
                    bounding_box=kf.bounding_box,
                )
            )
        else:
            nxt = kfs[i + 1]
            t = (frame - e) / (nxt.frame_range[0] - e)
            camera = interpolate_camera(_camera_at_end(kf), _camera_at_start(nxt), t)
            states.append(
                RenderState(
                    frame_number=frame,
                    camera=camera,
                    bindings=_blend_bindings(kf, nxt, t),
                    bounding_box=kf.bounding_box,
                )
            )
    return states
