"""Action planning and animation evaluation against a tool-calling model."""

from __future__ import annotations

import base64
import json
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

from ..access import AnimationSpec, DatasetDescriptor
from .context import CRITIQUE_TOOL, PROPOSE_TOOL, build_context
from .errors import MalformedToolCall
from .llm import EVALUATE_PREFIX, LlmClient
from .session import (
    ChatMessage,
    ChatSession,
    Critique,
    SessionContext,
    SpecProposal,
    next_session_id,
    spec_to_json,
)

MAX_TOOL_ATTEMPTS = 3  # one call plus two reprompts
EVALUATION_FRAME_BUDGET = 5


def new_session(
    descriptor: DatasetDescriptor,
    examples: Sequence[Tuple[str, AnimationSpec]] = (),
    session_id: str = "",
) -> ChatSession:
    prompt, tools = build_context(descriptor, examples)
    context = SessionContext(
        descriptor=descriptor,
        system_prompt=prompt,
        tools=tools,
        examples=tuple(examples),
    )
    return ChatSession(id=session_id or next_session_id(), context=context)


def clamp_to_dataset(
    args: Dict[str, Any], descriptor: DatasetDescriptor, dataset: str
) -> Tuple[AnimationSpec, List[str]]:
    """Coerce raw tool arguments into a valid spec, noting every adjustment."""
    notes: List[str] = []
    dx, dy, dz = descriptor.base_dims
    t_max = descriptor.timestep_count - 1

    def clamp(name: str, value: int, lo: int, hi: int) -> int:
        clamped = min(max(int(value), lo), hi)
        if clamped != int(value):
            notes.append(f"{name}: {value} -> {clamped}")
        return clamped

    x1 = clamp("x1", args.get("x1", 0), 0, dx - 1)
    y1 = clamp("y1", args.get("y1", 0), 0, dy - 1)
    z1 = clamp("z1", args.get("z1", 0), 0, dz - 1)
    x2 = clamp("x2", args.get("x2", dx), x1 + 1, dx)
    y2 = clamp("y2", args.get("y2", dy), y1 + 1, dy)
    z2 = clamp("z2", args.get("z2", dz), z1 + 1, dz)
    t1 = clamp("t1", args.get("t1", 0), 0, t_max)
    t2 = clamp("t2", args.get("t2", t_max), t1, t_max)
    step = clamp("step", args.get("step", 1), 1, max(1, t2 - t1 + 1))
    quality = clamp("quality", args.get("quality", 0), -16, 0)

    field = args.get("field", "")
    if field not in descriptor.field_names():
        raise MalformedToolCall(
            f"field {field!r} is not in the dataset (have {descriptor.field_names()})"
        )
    spec = AnimationSpec(
        box=((x1, y1, z1), (x2, y2, z2)),
        time=(t1, t2, step),
        quality=quality,
        field=field,
        streamlines=bool(args.get("streamlines", False)),
        dataset=dataset,
    )
    spec.validate()
    return spec, notes


def _call_tool(
    session: ChatSession, llm: LlmClient, tool_name: str, reprompt: str
):
    tools = session.context.tools
    for attempt in range(MAX_TOOL_ATTEMPTS):
        reply = llm.complete(session.messages_for_llm(), tools)
        if reply.tool_call is not None and reply.tool_call.name == tool_name:
            return reply
        session.append(
            ChatMessage(role="assistant", content=reply.text or "")
        )
        if attempt < MAX_TOOL_ATTEMPTS - 1:
            session.append(ChatMessage(role="user", content=reprompt))
    raise MalformedToolCall(
        f"no {tool_name} call after {MAX_TOOL_ATTEMPTS} attempts"
    )


def plan_action(session: ChatSession, user_text: str, llm: LlmClient) -> SpecProposal:
    """Send the full history plus the new request; parse the proposal."""
    session.append(ChatMessage(role="user", content=user_text))
    reply = _call_tool(
        session,
        llm,
        PROPOSE_TOOL,
        f"Please answer with a {PROPOSE_TOOL} tool call setting every parameter.",
    )
    dataset = session.context.descriptor.name
    spec, notes = clamp_to_dataset(
        reply.tool_call.arguments, session.context.descriptor, dataset
    )
    proposal = SpecProposal(
        spec=spec,
        rationale=reply.text or "",
        confidence=0.9,
        clamped=bool(notes),
        adjustments=tuple(notes),
    )
    session.append(ChatMessage(role="assistant", content=reply.text or ""))
    session.append(ChatMessage(role="tool", content=proposal.payload()))
    return proposal


def sample_frame_indices(frame_count: int, budget: int = EVALUATION_FRAME_BUDGET) -> List[int]:
    """Uniform sample of min(budget, n) indices, first and last always in."""
    if frame_count <= budget:
        return list(range(frame_count))
    span = frame_count - 1
    return [int(i * span / (budget - 1) + 0.5) for i in range(budget)]


def _attach(path) -> str:
    data = base64.b64encode(Path(path).read_bytes()).decode("ascii")
    return f"data:application/octet-stream;base64,{data}"


_DELTA_FIELDS = ("quality", "streamlines", "field")
_BOX_KEYS = ("x1", "y1", "z1", "x2", "y2", "z2")
_TIME_KEYS = ("t1", "t2", "step")


def _deltas_from_args(args: Dict[str, Any], spec: AnimationSpec) -> Dict[str, Any]:
    deltas: Dict[str, Any] = {}
    for key in _DELTA_FIELDS:
        if key in args:
            deltas[key] = args[key]
    if any(k in args for k in _BOX_KEYS):
        (x1, y1, z1), (x2, y2, z2) = spec.box
        current = dict(zip(_BOX_KEYS, (x1, y1, z1, x2, y2, z2)))
        current.update({k: int(args[k]) for k in _BOX_KEYS if k in args})
        deltas["box"] = (
            (current["x1"], current["y1"], current["z1"]),
            (current["x2"], current["y2"], current["z2"]),
        )
    if any(k in args for k in _TIME_KEYS):
        current = dict(zip(_TIME_KEYS, spec.time))
        current.update({k: int(args[k]) for k in _TIME_KEYS if k in args})
        deltas["time"] = (current["t1"], current["t2"], current["step"])
    return deltas


def evaluate_animation(
    session: ChatSession,
    frames: Sequence,
    spec: AnimationSpec,
    llm: LlmClient,
) -> Critique:
    """Attach a uniform sample of frames and request a structured critique."""
    if not frames:
        raise ValueError("no frames to evaluate")
    indices = sample_frame_indices(len(frames))
    attachments = tuple(_attach(frames[i]) for i in indices)
    session.append(
        ChatMessage(
            role="user",
            content=EVALUATE_PREFIX + json.dumps(spec_to_json(spec)),
            attachments=attachments,
        )
    )
    reply = _call_tool(
        session,
        llm,
        CRITIQUE_TOOL,
        f"Please answer with a {CRITIQUE_TOOL} tool call.",
    )
    args = dict(reply.tool_call.arguments)
    commentary = str(args.pop("commentary", ""))
    critique = Critique(suggested_deltas=_deltas_from_args(args, spec), commentary=commentary)
    session.append(ChatMessage(role="assistant", content=commentary))
    session.append(ChatMessage(role="tool", content=critique.payload()))
    return critique
