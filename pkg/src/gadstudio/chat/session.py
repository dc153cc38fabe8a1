"""Conversation state for the scripting loop.

History is append-only; the dataset context is fixed when the session is
created and every later exchange is layered on top of it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from ..access import AnimationSpec, DatasetDescriptor

_session_counter = itertools.count(1)


@dataclass(frozen=True)
class ChatMessage:
    role: str  # system | user | assistant | tool
    content: str
    attachments: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.attachments is not None:
            object.__setattr__(self, "attachments", tuple(self.attachments))


@dataclass(frozen=True)
class SpecProposal:
    spec: AnimationSpec
    rationale: str
    confidence: float
    clamped: bool = False
    adjustments: Tuple[str, ...] = ()

    def payload(self) -> str:
        return json.dumps(
            {
                "kind": "proposal",
                "spec": spec_to_json(self.spec),
                "rationale": self.rationale,
                "confidence": self.confidence,
                "clamped": self.clamped,
                "adjustments": list(self.adjustments),
            }
        )


@dataclass(frozen=True)
class Critique:
    suggested_deltas: Dict[str, Any]
    commentary: str

    def payload(self) -> str:
        deltas = dict(self.suggested_deltas)
        if "box" in deltas:
            deltas["box"] = [list(deltas["box"][0]), list(deltas["box"][1])]
        return json.dumps(
            {"kind": "critique", "deltas": deltas, "commentary": self.commentary}
        )


@dataclass
class SessionContext:
    descriptor: DatasetDescriptor
    system_prompt: str
    tools: List[dict]
    examples: Tuple[Tuple[str, AnimationSpec], ...]


@dataclass
class ChatSession:
    id: str
    context: SessionContext
    history: List[ChatMessage] = field(default_factory=list)
    produced_animations: List[str] = field(default_factory=list)

    def append(self, message: ChatMessage) -> None:
        self.history.append(message)

    def messages_for_llm(self) -> List[ChatMessage]:
        system = ChatMessage(role="system", content=self.context.system_prompt)
        return [system] + list(self.history)


def spec_to_json(spec: AnimationSpec) -> dict:
    return {
        "dataset": spec.dataset,
        "field": spec.field,
        "box": [list(spec.box[0]), list(spec.box[1])],
        "time": list(spec.time),
        "quality": spec.quality,
        "streamlines": spec.streamlines,
    }


def spec_from_json(tree: dict) -> AnimationSpec:
    return AnimationSpec(
        box=(tuple(tree["box"][0]), tuple(tree["box"][1])),
        time=tuple(tree["time"]),
        quality=int(tree["quality"]),
        field=tree["field"],
        streamlines=bool(tree.get("streamlines", False)),
        dataset=tree.get("dataset", ""),
    )


def next_session_id() -> str:
    return f"session-{next(_session_counter):04d}"
