"""HTTP facade exposing animations, job progress, frames, and chat."""

from .app import ServiceConfig, create_app, serve
from .jobs import DONE, FAILED, FETCHING, QUEUED, RENDERING, Job, JobManager, UnknownJob
from .models import (
    ChatMessageIn,
    ChatReply,
    CritiqueModel,
    ErrorBody,
    JobModel,
    ProposalModel,
    SessionState,
    SpecModel,
)

__all__ = [
    "create_app",
    "serve",
    "ServiceConfig",
    "JobManager",
    "Job",
    "UnknownJob",
    "QUEUED",
    "FETCHING",
    "RENDERING",
    "DONE",
    "FAILED",
    "SpecModel",
    "JobModel",
    "ProposalModel",
    "CritiqueModel",
    "ChatMessageIn",
    "ChatReply",
    "SessionState",
    "ErrorBody",
]
