"""Invariant checking for GAD documents.

Every structural invariant maps to at least one diagnostic so broken documents
can be reported field by field instead of failing on first error.
"""

from __future__ import annotations

import math
from typing import List

from .types import Camera, Diagnostic, GadDocument, TransferFunction

UNIT_TOL = 1e-6


def _err(path: str, message: str) -> Diagnostic:
    return Diagnostic(severity="error", path=path, message=message)


def _check_camera(camera: Camera, path: str, out: List[Diagnostic]) -> None:
    for name, vec in (("direction", camera.direction), ("up", camera.up)):
        n = math.sqrt(sum(c * c for c in vec))
        if abs(n - 1.0) > UNIT_TOL:
            out.append(_err(f"{path}.{name}", f"|{name}| = {n:.6g}, expected 1"))
    n_dir = math.sqrt(sum(c * c for c in camera.direction))
    n_up = math.sqrt(sum(c * c for c in camera.up))
    if n_dir > 0 and n_up > 0:
        d = sum(a * b for a, b in zip(camera.direction, camera.up)) / (n_dir * n_up)
        if abs(d) >= 1.0 - UNIT_TOL:
            out.append(_err(path, "direction and up are parallel"))
    for name, vec in (("position", camera.position), ("direction", camera.direction), ("up", camera.up)):
        if not all(math.isfinite(c) for c in vec):
            out.append(_err(f"{path}.{name}", "non-finite component"))


def _check_tf(tf: TransferFunction, path: str, out: List[Diagnostic]) -> None:
    pts = tf.control_points
    if len(pts) < 2:
        out.append(_err(f"{path}.points", f"{len(pts)} control points, need at least 2"))
        return
    for i in range(1, len(pts)):
        if not pts[i][0] > pts[i - 1][0]:
            out.append(
                _err(f"{path}.points[{i}]", "control points not strictly ascending")
            )
    lo, hi = tf.domain
    if pts[0][0] != lo:
        out.append(_err(f"{path}.points[0]", f"first point {pts[0][0]} != domain min {lo}"))
    if pts[-1][0] != hi:
        out.append(
            _err(f"{path}.points[{len(pts) - 1}]", f"last point {pts[-1][0]} != domain max {hi}")
        )
    for i, (_, color, opacity) in enumerate(pts):
        if not all(0.0 <= c <= 1.0 for c in color):
            out.append(_err(f"{path}.points[{i}]", f"color {color} outside [0,1]"))
        if not 0.0 <= opacity <= 1.0:
            out.append(_err(f"{path}.points[{i}]", f"opacity {opacity} outside [0,1]"))


def validate_gad(doc: GadDocument) -> List[Diagnostic]:
    """Check every type invariant; an empty list means the document is valid."""
    out: List[Diagnostic] = []
    header = doc.header

    if not header.keyframe_refs:
        out.append(_err("header.keyframes", "empty keyframe list"))
    if len(set(header.keyframe_refs)) != len(header.keyframe_refs):
        out.append(_err("header.keyframes", "duplicate keyframe references"))
    if len(header.keyframe_refs) != len(doc.keyframes):
        out.append(
            _err(
                "header.keyframes",
                f"{len(header.keyframe_refs)} refs but {len(doc.keyframes)} keyframes",
            )
        )

    for i, entry in enumerate(doc.data_list):
        path = f"data_list[{i}]"
        if entry.id != i:
            out.append(_err(f"{path}.id", f"id {entry.id}, expected contiguous index {i}"))
        if entry.data_type not in ("structured", "streamline"):
            out.append(_err(f"{path}.data_type", f"unknown data type {entry.data_type!r}"))
        if entry.data_type == "streamline" and entry.channels != 3:
            out.append(_err(f"{path}.channels", "streamline data requires 3 channels"))
        if entry.data_type == "structured" and entry.channels != 1:
            out.append(_err(f"{path}.channels", "structured data requires 1 channel"))
        if not all(d >= 1 for d in entry.dims):
            out.append(_err(f"{path}.dims", f"non-positive dimension in {entry.dims}"))
        if entry.value_range[0] > entry.value_range[1]:
            out.append(_err(f"{path}.range", f"min {entry.value_range[0]} > max {entry.value_range[1]}"))

    prev_end = None
    for i, kf in enumerate(doc.keyframes):
        path = f"keyframes[{i}]"
        s, e = kf.frame_range
        if s < 0 or e < s:
            out.append(_err(f"{path}.frames", f"bad frame range [{s}, {e}]"))
        if prev_end is not None and s <= prev_end:
            out.append(_err(f"{path}.frames", "keyframe ranges overlap or are unsorted"))
        prev_end = e if prev_end is None or e > prev_end else prev_end
        lo, hi = kf.bounding_box
        if not all(a < b for a, b in zip(lo, hi)):
            out.append(_err(f"{path}.bbox", f"bounding box min {lo} not < max {hi}"))
        _check_camera(kf.camera, f"{path}.camera", out)
        if kf.per_frame_cameras is not None:
            expected = e - s + 1
            if len(kf.per_frame_cameras) != expected:
                out.append(
                    _err(
                        f"{path}.cameras",
                        f"{len(kf.per_frame_cameras)} per-frame cameras for {expected} frames",
                    )
                )
            for j, cam in enumerate(kf.per_frame_cameras):
                _check_camera(cam, f"{path}.cameras[{j}]", out)

        for j, binding in enumerate(kf.scene_data):
            bpath = f"{path}.scene[{j}]"
            if not 0 <= binding.data_index < len(doc.data_list):
                out.append(_err(f"{bpath}.data", f"data index {binding.data_index} out of range"))
            else:
                entry = doc.data_list[binding.data_index]
                is_stream = entry.data_type == "streamline"
                if is_stream and binding.streamline_params is None:
                    out.append(_err(f"{bpath}.streamline", "streamline entry bound without streamline params"))
                if not is_stream and binding.streamline_params is not None:
                    out.append(_err(f"{bpath}.streamline", "streamline params on a structured entry"))
            if binding.streamline_params is not None:
                sp = binding.streamline_params
                if sp.seed_density < 1 or sp.step_size <= 0 or sp.max_steps < 1:
                    out.append(_err(f"{bpath}.streamline", "non-positive streamline parameter"))
            if binding.clip_box is not None:
                clo, chi = binding.clip_box
                inside = all(0.0 <= a <= 1.0 and 0.0 <= b <= 1.0 for a, b in zip(clo, chi))
                if not inside or not all(a < b for a, b in zip(clo, chi)):
                    out.append(_err(f"{bpath}.clip", f"clip box {binding.clip_box} not a valid unit sub-box"))
            if binding.interp != "linear":
                out.append(_err(f"{bpath}.interp", f"unsupported interpolation kind {binding.interp!r}"))
            _check_tf(binding.transfer_function, f"{bpath}.tf", out)

    return out
