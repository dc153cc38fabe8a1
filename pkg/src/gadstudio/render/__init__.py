"""Rendering: CPU raymarcher, streamline tracing, line overlay, frame driver."""

from .backend import (
    BlockResolver,
    MemoryTracker,
    ReferenceBackend,
    RendererBackend,
    RenderStats,
    render_animation,
    render_animation_with_stats,
)
from .camera import CameraBasis, RenderSettings, camera_basis, project_points, ray_directions
from .errors import BackendFailure, InvalidState, IoFailure, MissingBlock, RenderError
from .image import Image, from_float_rgba, ppm_bytes, solid, write_image
from .lines import rasterize_lines
from .raymarch import raymarch, raymarch_float
from .streamlines import Streamline, color_by_speed, diverging_color, trace_streamlines

__all__ = [
    "RenderSettings",
    "CameraBasis",
    "camera_basis",
    "ray_directions",
    "project_points",
    "Image",
    "from_float_rgba",
    "solid",
    "ppm_bytes",
    "write_image",
    "raymarch",
    "raymarch_float",
    "Streamline",
    "trace_streamlines",
    "color_by_speed",
    "diverging_color",
    "rasterize_lines",
    "RendererBackend",
    "ReferenceBackend",
    "BlockResolver",
    "MemoryTracker",
    "RenderStats",
    "render_animation",
    "render_animation_with_stats",
    "RenderError",
    "MissingBlock",
    "BackendFailure",
    "InvalidState",
    "IoFailure",
]
