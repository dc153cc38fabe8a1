"""Reading and writing GAD document trees.

Layout under a root directory:

    header.gad.json      {"version": "1.0", "data_list": "datalist.gad.json",
                          "keyframes": ["kf_00000.gad.json", ...]}
    datalist.gad.json    [{"id": 0, "path": "data/salinity_t0000_q0.f32",
                           "dims": [128, 128, 32], "channels": 1,
                           "data_type": "structured", "field": "salinity",
                           "range": [33.0, 38.0]}, ...]
    kf_00000.gad.json    {"frames": [0, 0], "bbox": [[0,0,0],[128,128,32]],
                          "camera": {"pos": [...], "dir": [...], "up": [...]},
                          "scene": [{"data": 0, "tf": {...}, "clip": null,
                                     "interp": "linear"}]}

Serialization is deterministic: fixed key order, floats printed with nine
significant digits, unknown fields carried through verbatim (sorted last).
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

from .errors import (
    IntegrityViolation,
    InvalidDocument,
    IoFailure,
    MissingFile,
    SchemaViolation,
)
from .types import (
    Camera,
    DataEntry,
    GadDocument,
    GadHeader,
    Keyframe,
    SceneDataBinding,
    StreamlineParams,
    TransferFunction,
)
from .validate import validate_gad

HEADER_NAME = "header.gad.json"
DATALIST_NAME = "datalist.gad.json"
FLOAT_DIGITS = 9


# ---------------------------------------------------------------------------
# canonical JSON emission


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"non-finite value {x} cannot be serialized")
    return format(x, f".{FLOAT_DIGITS}g")


def wire_float(x: float) -> float:
    """Quantize to the serialized precision.

    Computed values headed into a document should pass through this so the
    in-memory document equals its own serialize/parse round trip.
    """
    return float(format_float(float(x)))


def dumps_canonical(value: Any, indent: int = 0) -> str:
    """JSON text with deterministic key order and fixed float formatting."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        parts = [
            f"{inner}{json.dumps(str(k))}: {dumps_canonical(v, indent + 1)}"
            for k, v in value.items()
        ]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        parts = [dumps_canonical(v, indent + 1) for v in value]
        flat = "[" + ", ".join(parts) + "]"
        if "\n" not in flat and len(flat) <= 100:
            return flat
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, int):
        return str(value)
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot serialize value of type {type(value).__name__}")


def _with_extras(known: Dict[str, Any], extra) -> Dict[str, Any]:
    out = dict(known)
    for key in sorted(extra):
        if key not in out:
            out[key] = extra[key]
    return out


# ---------------------------------------------------------------------------
# document -> JSON trees


def _camera_json(camera: Camera) -> Dict[str, Any]:
    return {
        "pos": list(camera.position),
        "dir": list(camera.direction),
        "up": list(camera.up),
    }


def _tf_json(tf: TransferFunction) -> Dict[str, Any]:
    return {
        "domain": list(tf.domain),
        "points": [[s, list(color), opacity] for s, color, opacity in tf.control_points],
    }


def _binding_json(binding: SceneDataBinding) -> Dict[str, Any]:
    known: Dict[str, Any] = {
        "data": binding.data_index,
        "tf": _tf_json(binding.transfer_function),
        "clip": None
        if binding.clip_box is None
        else [list(binding.clip_box[0]), list(binding.clip_box[1])],
        "interp": binding.interp,
    }
    if binding.streamline_params is not None:
        sp = binding.streamline_params
        known["streamline"] = {
            "seed_density": sp.seed_density,
            "step_size": sp.step_size,
            "max_steps": sp.max_steps,
        }
    return _with_extras(known, binding.extra)


def _keyframe_json(kf: Keyframe) -> Dict[str, Any]:
    known: Dict[str, Any] = {
        "frames": list(kf.frame_range),
        "bbox": [list(kf.bounding_box[0]), list(kf.bounding_box[1])],
        "camera": _camera_json(kf.camera),
        "scene": [_binding_json(b) for b in kf.scene_data],
    }
    if kf.per_frame_cameras is not None:
        known["cameras"] = [_camera_json(c) for c in kf.per_frame_cameras]
    return _with_extras(known, kf.extra)


def _entry_json(entry: DataEntry) -> Dict[str, Any]:
    known: Dict[str, Any] = {
        "id": entry.id,
        "path": entry.path,
        "dims": list(entry.dims),
        "channels": entry.channels,
        "data_type": entry.data_type,
        "field": entry.field_name,
        "range": list(entry.value_range),
    }
    return _with_extras(known, entry.extra)


def _header_json(header: GadHeader) -> Dict[str, Any]:
    known: Dict[str, Any] = {
        "version": header.version,
        "data_list": header.data_list_ref,
        "keyframes": list(header.keyframe_refs),
    }
    return _with_extras(known, header.extra)


def document_to_tree(doc: GadDocument) -> Dict[str, Any]:
    """The whole document as one JSON tree (header, data list, keyframes)."""
    return {
        "header": _header_json(doc.header),
        "datalist": [_entry_json(e) for e in doc.data_list],
        "keyframes": [_keyframe_json(kf) for kf in doc.keyframes],
    }


def keyframe_to_tree(kf: Keyframe) -> Dict[str, Any]:
    return _keyframe_json(kf)


def keyframe_from_tree(tree: Any, path: str = "keyframe") -> Keyframe:
    return _parse_keyframe(tree, path)


def serialize_gad(doc: GadDocument, root_path) -> List[Path]:
    """Write one header, one data list, and one file per keyframe.

    Output is byte-deterministic for a given document.  The document is
    validated first; invariant failures raise InvalidDocument without writing.
    """
    errors = [d for d in validate_gad(doc) if d.severity == "error"]
    if errors:
        raise InvalidDocument(errors)
    root = Path(root_path)
    written: List[Path] = []
    try:
        root.mkdir(parents=True, exist_ok=True)
        files = [(HEADER_NAME, _header_json(doc.header))]
        files.append((doc.header.data_list_ref, [_entry_json(e) for e in doc.data_list]))
        for ref, kf in zip(doc.header.keyframe_refs, doc.keyframes):
            files.append((ref, _keyframe_json(kf)))
        for name, tree in files:
            path = root / name
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(dumps_canonical(tree) + "\n", encoding="utf-8")
            written.append(path)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return written


# ---------------------------------------------------------------------------
# JSON trees -> document, with field-path error reporting


def _want(tree: Dict[str, Any], key: str, path: str) -> Any:
    if not isinstance(tree, dict):
        raise SchemaViolation(path, f"expected an object, got {type(tree).__name__}")
    if key not in tree:
        raise SchemaViolation(f"{path}.{key}", "missing required field")
    return tree[key]


def _as_float(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaViolation(path, f"expected a number, got {value!r}")
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaViolation(path, f"expected an integer, got {value!r}")
    return value


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise SchemaViolation(path, f"expected a string, got {value!r}")
    return value


def _as_vec(value: Any, path: str, n: int = 3) -> Tuple[float, ...]:
    if not isinstance(value, list) or len(value) != n:
        raise SchemaViolation(path, f"expected a list of {n} numbers, got {value!r}")
    return tuple(_as_float(v, f"{path}[{i}]") for i, v in enumerate(value))


def _as_ivec(value: Any, path: str, n: int = 3) -> Tuple[int, ...]:
    if not isinstance(value, list) or len(value) != n:
        raise SchemaViolation(path, f"expected a list of {n} integers, got {value!r}")
    return tuple(_as_int(v, f"{path}[{i}]") for i, v in enumerate(value))


def _extras(tree: Dict[str, Any], known: Sequence[str]) -> Dict[str, Any]:
    return {k: v for k, v in tree.items() if k not in known}


def _parse_camera(tree: Any, path: str) -> Camera:
    return Camera(
        position=_as_vec(_want(tree, "pos", path), f"{path}.pos"),
        direction=_as_vec(_want(tree, "dir", path), f"{path}.dir"),
        up=_as_vec(_want(tree, "up", path), f"{path}.up"),
    )


def _parse_tf(tree: Any, path: str) -> TransferFunction:
    domain = _as_vec(_want(tree, "domain", path), f"{path}.domain", n=2)
    raw_points = _want(tree, "points", path)
    if not isinstance(raw_points, list):
        raise SchemaViolation(f"{path}.points", "expected a list")
    points = []
    for i, p in enumerate(raw_points):
        ppath = f"{path}.points[{i}]"
        if not isinstance(p, list) or len(p) != 3:
            raise SchemaViolation(ppath, "expected [value, [r,g,b], opacity]")
        points.append(
            (
                _as_float(p[0], f"{ppath}[0]"),
                _as_vec(p[1], f"{ppath}[1]"),
                _as_float(p[2], f"{ppath}[2]"),
            )
        )
    return TransferFunction(control_points=tuple(points), domain=domain)


def _parse_binding(tree: Any, path: str) -> SceneDataBinding:
    if not isinstance(tree, dict):
        raise SchemaViolation(path, "expected an object")
    clip_raw = tree.get("clip")
    clip = None
    if clip_raw is not None:
        if not isinstance(clip_raw, list) or len(clip_raw) != 2:
            raise SchemaViolation(f"{path}.clip", "expected [[x,y,z],[x,y,z]] or null")
        clip = (
            _as_vec(clip_raw[0], f"{path}.clip[0]"),
            _as_vec(clip_raw[1], f"{path}.clip[1]"),
        )
    sp = None
    if tree.get("streamline") is not None:
        sp_tree = tree["streamline"]
        sp = StreamlineParams(
            seed_density=_as_int(_want(sp_tree, "seed_density", f"{path}.streamline"), f"{path}.streamline.seed_density"),
            step_size=_as_float(_want(sp_tree, "step_size", f"{path}.streamline"), f"{path}.streamline.step_size"),
            max_steps=_as_int(_want(sp_tree, "max_steps", f"{path}.streamline"), f"{path}.streamline.max_steps"),
        )
    interp = tree.get("interp", "linear")
    return SceneDataBinding(
        data_index=_as_int(_want(tree, "data", path), f"{path}.data"),
        transfer_function=_parse_tf(_want(tree, "tf", path), f"{path}.tf"),
        clip_box=clip,
        streamline_params=sp,
        interp=_as_str(interp, f"{path}.interp"),
        extra=_extras(tree, ("data", "tf", "clip", "interp", "streamline")),
    )


def _parse_keyframe(tree: Any, path: str) -> Keyframe:
    if not isinstance(tree, dict):
        raise SchemaViolation(path, "expected an object")
    frames = _as_ivec(_want(tree, "frames", path), f"{path}.frames", n=2)
    bbox_raw = _want(tree, "bbox", path)
    if not isinstance(bbox_raw, list) or len(bbox_raw) != 2:
        raise SchemaViolation(f"{path}.bbox", "expected [[x,y,z],[x,y,z]]")
    bbox = (
        _as_ivec(bbox_raw[0], f"{path}.bbox[0]"),
        _as_ivec(bbox_raw[1], f"{path}.bbox[1]"),
    )
    scene_raw = _want(tree, "scene", path)
    if not isinstance(scene_raw, list):
        raise SchemaViolation(f"{path}.scene", "expected a list")
    scene = tuple(
        _parse_binding(b, f"{path}.scene[{j}]") for j, b in enumerate(scene_raw)
    )
    cameras = None
    if tree.get("cameras") is not None:
        if not isinstance(tree["cameras"], list):
            raise SchemaViolation(f"{path}.cameras", "expected a list")
        cameras = tuple(
            _parse_camera(c, f"{path}.cameras[{j}]") for j, c in enumerate(tree["cameras"])
        )
    return Keyframe(
        frame_range=frames,
        bounding_box=bbox,
        camera=_parse_camera(_want(tree, "camera", path), f"{path}.camera"),
        scene_data=scene,
        per_frame_cameras=cameras,
        extra=_extras(tree, ("frames", "bbox", "camera", "scene", "cameras")),
    )


def _parse_entry(tree: Any, path: str) -> DataEntry:
    if not isinstance(tree, dict):
        raise SchemaViolation(path, "expected an object")
    return DataEntry(
        id=_as_int(_want(tree, "id", path), f"{path}.id"),
        path=_as_str(_want(tree, "path", path), f"{path}.path"),
        dims=_as_ivec(_want(tree, "dims", path), f"{path}.dims"),
        channels=_as_int(_want(tree, "channels", path), f"{path}.channels"),
        data_type=_as_str(_want(tree, "data_type", path), f"{path}.data_type"),
        field_name=_as_str(_want(tree, "field", path), f"{path}.field"),
        value_range=_as_vec(_want(tree, "range", path), f"{path}.range", n=2),
        extra=_extras(tree, ("id", "path", "dims", "channels", "data_type", "field", "range")),
    )


def _load_json(path: Path, label: str) -> Any:
    if not path.is_file():
        raise MissingFile(f"{label}: {path} does not exist")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaViolation(label, f"not valid JSON: {exc}") from exc


def parse_gad(root_path, strict: bool = True) -> GadDocument:
    """Load the header, data list, and keyframe documents under ``root_path``.

    With ``strict`` (default) the parsed document must satisfy every type
    invariant: referential failures raise IntegrityViolation, field-level
    failures raise SchemaViolation.  ``strict=False`` parses structure only
    so damaged documents can still be inspected with validate_gad.
    """
    root = Path(root_path)
    header_tree = _load_json(root / HEADER_NAME, "header")
    version = _as_str(_want(header_tree, "version", "header"), "header.version")
    data_list_ref = _as_str(_want(header_tree, "data_list", "header"), "header.data_list")
    refs_raw = _want(header_tree, "keyframes", "header")
    if not isinstance(refs_raw, list):
        raise SchemaViolation("header.keyframes", "expected a list")
    refs = tuple(_as_str(r, f"header.keyframes[{i}]") for i, r in enumerate(refs_raw))
    header = GadHeader(
        version=version,
        data_list_ref=data_list_ref,
        keyframe_refs=refs,
        extra=_extras(header_tree, ("version", "data_list", "keyframes")),
    )

    datalist_tree = _load_json(root / data_list_ref, "data_list")
    if not isinstance(datalist_tree, list):
        raise SchemaViolation("data_list", "expected a list of entries")
    entries = tuple(
        _parse_entry(e, f"data_list[{i}]") for i, e in enumerate(datalist_tree)
    )

    keyframes = []
    for i, ref in enumerate(refs):
        kf_tree = _load_json(root / ref, f"keyframes[{i}]")
        keyframes.append(_parse_keyframe(kf_tree, f"keyframes[{i}]"))

    doc = GadDocument(header=header, data_list=entries, keyframes=tuple(keyframes))
    if strict:
        errors = [d for d in validate_gad(doc) if d.severity == "error"]
        integrity = [
            d
            for d in errors
            if "data index" in d.message or "overlap" in d.message or "refs but" in d.message
        ]
        if integrity:
            raise IntegrityViolation("; ".join(f"{d.path}: {d.message}" for d in integrity))
        if errors:
            first = errors[0]
            raise SchemaViolation(first.path, first.message)
    return doc
