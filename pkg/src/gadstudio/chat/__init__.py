"""Conversational and parameter-driven animation scripting."""

from .context import CRITIQUE_TOOL, PROPOSE_TOOL, build_context
from .errors import InvalidChoice, LlmTransport, MalformedToolCall, ScriptingError
from .llm import EndpointLlmClient, LlmClient, LlmReply, MockLlmClient, ToolCall
from .loop import PRESETS, MenuSelection, basic_generate, frames_dirname, menu, render_bundle, run_loop
from .planner import (
    clamp_to_dataset,
    evaluate_animation,
    new_session,
    plan_action,
    sample_frame_indices,
)
from .session import (
    ChatMessage,
    ChatSession,
    Critique,
    SessionContext,
    SpecProposal,
    spec_from_json,
    spec_to_json,
)

__all__ = [
    "build_context",
    "PROPOSE_TOOL",
    "CRITIQUE_TOOL",
    "ChatMessage",
    "ChatSession",
    "SessionContext",
    "SpecProposal",
    "Critique",
    "spec_to_json",
    "spec_from_json",
    "LlmClient",
    "LlmReply",
    "ToolCall",
    "MockLlmClient",
    "EndpointLlmClient",
    "new_session",
    "plan_action",
    "evaluate_animation",
    "sample_frame_indices",
    "clamp_to_dataset",
    "run_loop",
    "basic_generate",
    "render_bundle",
    "frames_dirname",
    "menu",
    "MenuSelection",
    "PRESETS",
    "ScriptingError",
    "LlmTransport",
    "MalformedToolCall",
    "InvalidChoice",
]
