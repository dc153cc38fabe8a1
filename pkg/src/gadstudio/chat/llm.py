"""Language-model clients: the behavioral contract, a deterministic mock, and
a chat-completions endpoint adapter."""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Protocol

import httpx

from ..access import DatasetDescriptor
from .context import CRITIQUE_TOOL, PROPOSE_TOOL
from .errors import LlmTransport
from .session import ChatMessage

EVALUATE_PREFIX = "Evaluate the rendered animation for spec: "


@dataclass(frozen=True)
class ToolCall:
    name: str
    arguments: Dict


@dataclass(frozen=True)
class LlmReply:
    text: Optional[str] = None
    tool_call: Optional[ToolCall] = None


class LlmClient(Protocol):
    def complete(self, messages: List[ChatMessage], tools: List[dict]) -> LlmReply:
        ...


# region keyword -> fractional box (x1, y1, z1, x2, y2, z2) of the grid
_REGIONS = {
    "mediterranean": (0.125, 0.375, 0.0, 0.75, 0.875, 0.5),
    "red sea": (0.5, 0.125, 0.0, 0.9375, 0.625, 0.75),
    "agulhas": (0.1875, 0.1875, 0.0, 0.8125, 0.8125, 1.0),
}
_DEFAULT_REGION = (0.25, 0.25, 0.0, 0.75, 0.75, 1.0)


class MockLlmClient:
    """Scripted stand-in for a multimodal model.

    Planning requests are answered from keywords in the user text; evaluation
    requests walk the quality ladder -8 -> -6 (adding streamlines) -> -4 and
    then declare the animation satisfactory.  Replies are a pure function of
    the message list, so whole sessions replay byte-identically.
    """

    def __init__(self, descriptor: DatasetDescriptor):
        self._descriptor = descriptor

    def complete(self, messages: List[ChatMessage], tools: List[dict]) -> LlmReply:
        last_user = next(
            (m for m in reversed(messages) if m.role == "user"), None
        )
        if last_user is None:
            return LlmReply(text="Describe the phenomenon you would like to animate.")
        if last_user.content.startswith(EVALUATE_PREFIX):
            return self._evaluate(last_user.content)
        return self._plan(last_user.content)

    def _plan(self, text: str) -> LlmReply:
        lowered = text.lower()
        descriptor = self._descriptor
        dx, dy, dz = descriptor.base_dims

        field = next(
            (name for name in descriptor.field_names() if name.lower() in lowered),
            "temperature" if "temperature" in descriptor.field_names() else descriptor.field_names()[0],
        )
        fx1, fy1, fz1, fx2, fy2, fz2 = _DEFAULT_REGION
        for keyword, box in _REGIONS.items():
            if keyword in lowered:
                fx1, fy1, fz1, fx2, fy2, fz2 = box
                break

        # "N days" means N samples spaced 24 hours apart
        count = 10
        match = re.search(r"(\d+)\s*(day|timestep|frame)", lowered)
        if match:
            count = max(1, int(match.group(1)))
        step = max(1, round(24.0 / descriptor.timestep_stride_hours))
        t2 = min((count - 1) * step, descriptor.timestep_count - 1)

        args = {
            "x1": int(fx1 * dx), "y1": int(fy1 * dy), "z1": int(fz1 * dz),
            "x2": int(fx2 * dx), "y2": int(fy2 * dy), "z2": int(fz2 * dz),
            "t1": 0, "t2": t2, "step": step,
            "quality": 0 if "full resolution" in lowered else -8,
            "field": field,
            "streamlines": "streamline" in lowered or "current" in lowered,
        }
        return LlmReply(
            text=f"Starting with a low-resolution draft of {field} over the requested region.",
            tool_call=ToolCall(name=PROPOSE_TOOL, arguments=args),
        )

    def _evaluate(self, content: str) -> LlmReply:
        spec_tree = json.loads(content[len(EVALUATE_PREFIX):])
        quality = int(spec_tree["quality"])
        if quality <= -8:
            args = {
                "commentary": "The draft shows the structure but is too coarse; "
                "raise the resolution and trace the velocity field as streamlines "
                "to highlight the rotating currents.",
                "quality": -6,
                "streamlines": True,
            }
        elif quality <= -6:
            args = {
                "commentary": "Streamlines read well; one more resolution step "
                "will sharpen the volume.",
                "quality": -4,
            }
        else:
            args = {"commentary": "The animation looks good; no further changes."}
        return LlmReply(tool_call=ToolCall(name=CRITIQUE_TOOL, arguments=args))


class EndpointLlmClient:
    """Adapter for any chat-completions endpoint with function calling.

    The API key is read from the named environment variable, never passed on
    the command line.
    """

    def __init__(
        self,
        url: str,
        model: str = "default",
        api_key_env: str = "LLM_API_KEY",
        http: Optional[httpx.Client] = None,
        timeout: float = 60.0,
    ):
        self._url = url
        self._model = model
        self._api_key = os.environ.get(api_key_env, "")
        self._http = http if http is not None else httpx.Client(timeout=timeout)

    def complete(self, messages: List[ChatMessage], tools: List[dict]) -> LlmReply:
        payload = {
            "model": self._model,
            "messages": [self._message_json(m) for m in messages],
            "tools": tools,
        }
        headers = {}
        if self._api_key:
            headers["Authorization"] = f"Bearer {self._api_key}"
        try:
            response = self._http.post(self._url, json=payload, headers=headers)
        except httpx.HTTPError as exc:
            raise LlmTransport(str(exc)) from exc
        if response.status_code != 200:
            raise LlmTransport(f"HTTP {response.status_code}: {response.text[:200]}")
        try:
            message = response.json()["choices"][0]["message"]
        except (KeyError, IndexError, ValueError) as exc:
            raise LlmTransport(f"unparseable completion: {exc}") from exc
        calls = message.get("tool_calls") or []
        if calls:
            fn = calls[0]["function"]
            try:
                arguments = json.loads(fn.get("arguments", "{}"))
            except ValueError:
                arguments = {}
            return LlmReply(
                text=message.get("content"),
                tool_call=ToolCall(name=fn["name"], arguments=arguments),
            )
        return LlmReply(text=message.get("content"))

    @staticmethod
    def _message_json(message: ChatMessage) -> dict:
        if message.attachments:
            content = [{"type": "text", "text": message.content}]
            for ref in message.attachments:
                content.append({"type": "image_url", "image_url": {"url": ref}})
            return {"role": message.role, "content": content}
        role = "user" if message.role == "tool" else message.role
        return {"role": role, "content": message.content}
