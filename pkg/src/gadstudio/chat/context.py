"""Context building: dataset summary, parameter template, and tool schemas."""

from __future__ import annotations

import json
from typing import List, Sequence, Tuple

from ..access import AnimationSpec, DatasetDescriptor
from .session import spec_to_json

PROPOSE_TOOL = "propose_animation"
CRITIQUE_TOOL = "critique_animation"


def _bounded_int(minimum: int, maximum: int, description: str) -> dict:
    return {"type": "integer", "minimum": minimum, "maximum": maximum, "description": description}


def _spec_properties(descriptor: DatasetDescriptor) -> dict:
    dx, dy, dz = descriptor.base_dims
    t_max = descriptor.timestep_count - 1
    return {
        "x1": _bounded_int(0, dx - 1, "region min voxel, x axis"),
        "y1": _bounded_int(0, dy - 1, "region min voxel, y axis"),
        "z1": _bounded_int(0, dz - 1, "region min voxel, z axis"),
        "x2": _bounded_int(1, dx, "region max voxel (exclusive), x axis"),
        "y2": _bounded_int(1, dy, "region max voxel (exclusive), y axis"),
        "z2": _bounded_int(1, dz, "region max voxel (exclusive), z axis"),
        "t1": _bounded_int(0, t_max, "first timestep"),
        "t2": _bounded_int(0, t_max, "last timestep (inclusive)"),
        "step": _bounded_int(1, descriptor.timestep_count, "timestep stride"),
        "quality": _bounded_int(-16, 0, "resolution level; the volume keeps 2^quality of its voxels"),
        "field": {
            "type": "string",
            "enum": list(descriptor.field_names()),
            "description": "which field to volume-render",
        },
        "streamlines": {
            "type": "boolean",
            "description": "overlay streamlines traced from the velocity fields",
        },
    }


def propose_tool_schema(descriptor: DatasetDescriptor) -> dict:
    properties = _spec_properties(descriptor)
    return {
        "type": "function",
        "function": {
            "name": PROPOSE_TOOL,
            "description": "Set the animation parameters for the user's request.",
            "parameters": {
                "type": "object",
                "properties": properties,
                "required": list(properties.keys()),
            },
        },
    }


def critique_tool_schema(descriptor: DatasetDescriptor) -> dict:
    properties = dict(_spec_properties(descriptor))
    properties["commentary"] = {
        "type": "string",
        "description": "assessment of the rendered frames",
    }
    return {
        "type": "function",
        "function": {
            "name": CRITIQUE_TOOL,
            "description": "Suggest parameter adjustments after viewing rendered frames. "
            "Include only the parameters that should change.",
            "parameters": {
                "type": "object",
                "properties": properties,
                "required": ["commentary"],
            },
        },
    }


def build_context(
    descriptor: DatasetDescriptor,
    examples: Sequence[Tuple[str, AnimationSpec]] = (),
) -> Tuple[str, List[dict]]:
    """System prompt plus tool schemas; deterministic for equal inputs."""
    dx, dy, dz = descriptor.base_dims
    lines = [
        "You translate a scientist's description of an ocean phenomenon into "
        "volume-animation parameters via tool calls.",
        "",
        f"Dataset: {descriptor.name}",
        f"Grid: {dx} x {dy} x {dz} voxels (x, y, z).",
        f"Timesteps: 0..{descriptor.timestep_count - 1}, "
        f"{descriptor.timestep_stride_hours:g} hours apart.",
        "Fields:",
    ]
    for name, _, rng in descriptor.fields_available:
        lines.append(f"  - {name}: values in [{rng[0]:g}, {rng[1]:g}]")
    lines += [
        "",
        "Quality q (an integer <= 0) keeps a 2^q fraction of the voxels; "
        "q=0 is full resolution, q=-8 keeps 1/256.",
        "Start exploratory requests at low resolution and refine.",
        "",
        "Parameter template:",
        json.dumps(
            {
                "x1": 0, "y1": 0, "z1": 0,
                "x2": dx, "y2": dy, "z2": dz,
                "t1": 0, "t2": min(9, descriptor.timestep_count - 1), "step": 1,
                "quality": -8,
                "field": descriptor.field_names()[0],
                "streamlines": False,
            }
        ),
    ]
    if examples:
        lines.append("")
        lines.append("Known parameter sets that worked well:")
        for phenomenon, spec in examples:
            lines.append(f"  - {phenomenon}: {json.dumps(spec_to_json(spec))}")
    prompt = "\n".join(lines)
    return prompt, [propose_tool_schema(descriptor), critique_tool_schema(descriptor)]
