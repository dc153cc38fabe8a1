"""Domain types for the GAD (Generalized Animation Descriptor) format.

A GAD animation is three layers of documents: a header, a data list, and one
document per keyframe.  These types are plain immutable containers; invariant
checking lives in :mod:`gadstudio.gad.validate` so that deliberately broken
documents can still be constructed and diagnosed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Sequence, Tuple

Vec3 = Tuple[float, float, float]
IVec3 = Tuple[int, int, int]
# (scalar value, (r, g, b), opacity)
ControlPoint = Tuple[float, Vec3, float]


def _v3(value: Sequence[float]) -> Vec3:
    a, b, c = value
    return (float(a), float(b), float(c))


def _iv3(value: Sequence[int]) -> IVec3:
    a, b, c = value
    return (int(a), int(b), int(c))


@dataclass(frozen=True)
class Diagnostic:
    """One validation finding: severity, path to the field, and message."""

    severity: str  # "error" | "warning"
    path: str
    message: str


@dataclass(frozen=True)
class GadHeader:
    version: str
    data_list_ref: str
    keyframe_refs: Tuple[str, ...]
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "keyframe_refs", tuple(self.keyframe_refs))
        object.__setattr__(self, "extra", dict(self.extra))


@dataclass(frozen=True)
class DataEntry:
    id: int
    path: str
    dims: IVec3
    channels: int
    data_type: str  # "structured" | "streamline"
    field_name: str
    value_range: Tuple[float, float]
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dims", _iv3(self.dims))
        lo, hi = self.value_range
        object.__setattr__(self, "value_range", (float(lo), float(hi)))
        object.__setattr__(self, "extra", dict(self.extra))


@dataclass(frozen=True)
class Camera:
    position: Vec3
    direction: Vec3
    up: Vec3

    def __post_init__(self):
        object.__setattr__(self, "position", _v3(self.position))
        object.__setattr__(self, "direction", _v3(self.direction))
        object.__setattr__(self, "up", _v3(self.up))


@dataclass(frozen=True)
class TransferFunction:
    """Piecewise-linear map from a scalar field value to color and opacity."""

    control_points: Tuple[ControlPoint, ...]
    domain: Tuple[float, float]

    def __post_init__(self):
        pts = tuple(
            (float(s), _v3(color), float(opacity))
            for s, color, opacity in self.control_points
        )
        object.__setattr__(self, "control_points", pts)
        lo, hi = self.domain
        object.__setattr__(self, "domain", (float(lo), float(hi)))


@dataclass(frozen=True)
class StreamlineParams:
    seed_density: int
    step_size: float
    max_steps: int


@dataclass(frozen=True)
class SceneDataBinding:
    data_index: int
    transfer_function: TransferFunction
    clip_box: Optional[Tuple[Vec3, Vec3]] = None
    streamline_params: Optional[StreamlineParams] = None
    interp: str = "linear"
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.clip_box is not None:
            lo, hi = self.clip_box
            object.__setattr__(self, "clip_box", (_v3(lo), _v3(hi)))
        object.__setattr__(self, "extra", dict(self.extra))


@dataclass(frozen=True)
class Keyframe:
    frame_range: Tuple[int, int]
    bounding_box: Tuple[IVec3, IVec3]
    camera: Camera
    scene_data: Tuple[SceneDataBinding, ...]
    per_frame_cameras: Optional[Tuple[Camera, ...]] = None
    extra: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        s, e = self.frame_range
        object.__setattr__(self, "frame_range", (int(s), int(e)))
        lo, hi = self.bounding_box
        object.__setattr__(self, "bounding_box", (_iv3(lo), _iv3(hi)))
        object.__setattr__(self, "scene_data", tuple(self.scene_data))
        if self.per_frame_cameras is not None:
            object.__setattr__(self, "per_frame_cameras", tuple(self.per_frame_cameras))
        object.__setattr__(self, "extra", dict(self.extra))


@dataclass(frozen=True)
class GadDocument:
    header: GadHeader
    data_list: Tuple[DataEntry, ...]
    keyframes: Tuple[Keyframe, ...]

    def __post_init__(self):
        object.__setattr__(self, "data_list", tuple(self.data_list))
        object.__setattr__(self, "keyframes", tuple(self.keyframes))


@dataclass(frozen=True)
class RenderState:
    """Fully resolved per-frame scene: what a backend needs to draw one frame."""

    frame_number: int
    camera: Camera
    bindings: Tuple[SceneDataBinding, ...]
    bounding_box: Tuple[IVec3, IVec3]

    def __post_init__(self):
        object.__setattr__(self, "bindings", tuple(self.bindings))
