"""Request/response bodies for the HTTP facade."""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from ..access import AnimationSpec


class SpecModel(BaseModel):
    dataset: str = "mini-ocean"
    field: str
    box: Tuple[Tuple[int, int, int], Tuple[int, int, int]]
    time: Tuple[int, int, int]
    quality: int = 0
    streamlines: bool = False

    def to_spec(self) -> AnimationSpec:
        return AnimationSpec(
            box=self.box,
            time=self.time,
            quality=self.quality,
            field=self.field,
            streamlines=self.streamlines,
            dataset=self.dataset,
        )

    @classmethod
    def from_spec(cls, spec: AnimationSpec) -> "SpecModel":
        return cls(
            dataset=spec.dataset,
            field=spec.field,
            box=spec.box,
            time=spec.time,
            quality=spec.quality,
            streamlines=spec.streamlines,
        )


class JobModel(BaseModel):
    id: str
    state: str
    progress: float = Field(ge=0.0, le=1.0)
    frame_count: int = 0
    error: Optional[str] = None
    fetched_timesteps: int = 0
    total_timesteps: int = 0
    frames_written: int = 0


class SubmitResponse(BaseModel):
    job_id: str
    job: JobModel


class ProposalModel(BaseModel):
    spec: SpecModel
    rationale: str
    confidence: float
    clamped: bool
    adjustments: List[str] = []


class CritiqueModel(BaseModel):
    deltas: Dict[str, Any]
    commentary: str


class ChatMessageIn(BaseModel):
    text: str


class ChatReply(BaseModel):
    reply: str
    proposal: Optional[ProposalModel] = None
    critique: Optional[CritiqueModel] = None
    job_id: Optional[str] = None


class ChatHistoryEntry(BaseModel):
    role: str
    content: str
    attachment_count: int = 0


class SessionState(BaseModel):
    session_id: str
    dataset: str
    history: List[ChatHistoryEntry]
    produced_animations: List[str]
    proposal: Optional[ProposalModel] = None
    critique: Optional[CritiqueModel] = None
    job_id: Optional[str] = None


class SessionCreated(BaseModel):
    session_id: str


class ErrorBody(BaseModel):
    code: str
    message: str
    http_status: int
