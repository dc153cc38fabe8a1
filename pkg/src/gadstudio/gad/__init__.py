"""GAD: the three-file keyframe animation description format."""

from .errors import (
    DegenerateBlend,
    DomainMismatch,
    GadError,
    IntegrityViolation,
    InvalidDocument,
    IoFailure,
    MissingFile,
    SchemaViolation,
)
from .interpolate import (
    eval_tf,
    expand_keyframes,
    interpolate_camera,
    interpolate_tf,
)
from .io import (
    DATALIST_NAME,
    HEADER_NAME,
    document_to_tree,
    dumps_canonical,
    keyframe_from_tree,
    keyframe_to_tree,
    parse_gad,
    serialize_gad,
)
from .types import (
    Camera,
    DataEntry,
    Diagnostic,
    GadDocument,
    GadHeader,
    Keyframe,
    RenderState,
    SceneDataBinding,
    StreamlineParams,
    TransferFunction,
)
from .validate import validate_gad

__all__ = [
    "Camera",
    "DataEntry",
    "Diagnostic",
    "GadDocument",
    "GadHeader",
    "Keyframe",
    "RenderState",
    "SceneDataBinding",
    "StreamlineParams",
    "TransferFunction",
    "GadError",
    "MissingFile",
    "SchemaViolation",
    "IntegrityViolation",
    "InvalidDocument",
    "IoFailure",
    "DegenerateBlend",
    "DomainMismatch",
    "parse_gad",
    "serialize_gad",
    "validate_gad",
    "eval_tf",
    "interpolate_tf",
    "interpolate_camera",
    "expand_keyframes",
    "dumps_canonical",
    "document_to_tree",
    "keyframe_to_tree",
    "keyframe_from_tree",
    "HEADER_NAME",
    "DATALIST_NAME",
]
