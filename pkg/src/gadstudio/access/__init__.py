"""Remote block access, the animation cache, and GAD materialization."""

from .cache import CacheEntry, CacheIndex
from .client import DatasetClient
from .datasets import (
    VELOCITY_COMPONENTS,
    DatasetDescriptor,
    FieldDef,
    SyntheticDataset,
    mini_ocean,
)
from .errors import AccessError, CacheCorrupt, NotFound, RangeError, Transport
from .materialize import (
    VELOCITY_FIELD,
    default_camera,
    diverging_speed_tf,
    grayscale_tf,
    materialize,
)
from .server import create_dataset_app
from .spec import AnimationId, AnimationSpec, animation_id, apply_deltas, parse_animation_id

__all__ = [
    "AnimationSpec",
    "AnimationId",
    "animation_id",
    "parse_animation_id",
    "apply_deltas",
    "DatasetDescriptor",
    "SyntheticDataset",
    "FieldDef",
    "mini_ocean",
    "VELOCITY_COMPONENTS",
    "VELOCITY_FIELD",
    "CacheIndex",
    "CacheEntry",
    "DatasetClient",
    "materialize",
    "default_camera",
    "grayscale_tf",
    "diverging_speed_tf",
    "create_dataset_app",
    "AccessError",
    "NotFound",
    "RangeError",
    "Transport",
    "CacheCorrupt",
]
