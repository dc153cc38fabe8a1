"""HTTP facade over scripting, data access, and rendering.

Endpoints:

    GET  /healthz
    GET  /v1/datasets
    POST /v1/animations                      202 {job_id} (200 when already done)
    GET  /v1/animations/{id}                 job snapshot
    GET  /v1/animations/{id}/frames/{n}      one rendered frame
    GET  /v1/animations/{id}/gad             GAD bundle as a zip archive
    POST /v1/chat/sessions                   {session_id}
    POST /v1/chat/sessions/{id}/messages     {reply, proposal?, critique?, job_id?}
    GET  /v1/chat/sessions/{id}              reconstructable session state

Chat messages drive the loop: free text plans a proposal, "accept" submits the
current proposal (applying any pending critique first), "evaluate" critiques
the finished frames of the session's last job.
"""

from __future__ import annotations

import io
import threading
import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from ..access import (
    AccessError,
    CacheIndex,
    DatasetClient,
    NotFound,
    RangeError,
    Transport,
)
from ..chat import (
    ChatSession,
    Critique,
    EndpointLlmClient,
    LlmTransport,
    MalformedToolCall,
    MockLlmClient,
    SpecProposal,
    clamp_to_dataset,
    evaluate_animation,
    new_session,
    plan_action,
    spec_to_json,
)
from ..render import RenderSettings
from .jobs import DONE, JobManager, UnknownJob
from .models import (
    ChatHistoryEntry,
    ChatMessageIn,
    ChatReply,
    CritiqueModel,
    ErrorBody,
    JobModel,
    ProposalModel,
    SessionCreated,
    SessionState,
    SpecModel,
    SubmitResponse,
)


@dataclass
class ServiceConfig:
    dataset_server_url: str = "http://127.0.0.1:8801"
    default_dataset: str = "mini-ocean"
    cache_root: str = ".gad-cache"
    llm: str = "mock"  # "mock" | "endpoint"
    llm_url: str = ""
    llm_model: str = "default"
    llm_key_env: str = "LLM_API_KEY"
    width: int = 256
    height: int = 256
    workers: int = 2
    frontend_dir: Optional[str] = None


@dataclass
class ServiceChatSession:
    chat: ChatSession
    proposal: Optional[SpecProposal] = None
    critique: Optional[Critique] = None
    job_id: Optional[str] = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def _proposal_model(proposal: SpecProposal) -> ProposalModel:
    return ProposalModel(
        spec=SpecModel(**spec_to_json(proposal.spec)),
        rationale=proposal.rationale,
        confidence=proposal.confidence,
        clamped=proposal.clamped,
        adjustments=list(proposal.adjustments),
    )


def _critique_model(critique: Critique) -> CritiqueModel:
    deltas = dict(critique.suggested_deltas)
    if "box" in deltas:
        deltas["box"] = [list(deltas["box"][0]), list(deltas["box"][1])]
    if "time" in deltas:
        deltas["time"] = list(deltas["time"])
    return CritiqueModel(deltas=deltas, commentary=critique.commentary)


def create_app(
    config: Optional[ServiceConfig] = None,
    dataset_client: Optional[DatasetClient] = None,
) -> FastAPI:
    config = config or ServiceConfig()
    client = dataset_client or DatasetClient(base_url=config.dataset_server_url)
    cache = CacheIndex(config.cache_root)
    settings = RenderSettings(width=config.width, height=config.height)
    jobs = JobManager(client, cache, settings, workers=config.workers)

    def make_llm(descriptor):
        if config.llm == "endpoint" and config.llm_url:
            return EndpointLlmClient(
                config.llm_url, model=config.llm_model, api_key_env=config.llm_key_env
            )
        return MockLlmClient(descriptor)

    app = FastAPI(title="gad-studio service")
    app.state.jobs = jobs
    app.state.cache = cache
    app.state.client = client
    app.state.settings = settings
    sessions: Dict[str, ServiceChatSession] = {}
    app.state.sessions = sessions

    # ---- error taxonomy ---------------------------------------------------

    def _error(status: int, code: str, message: str) -> JSONResponse:
        body = ErrorBody(code=code, message=message, http_status=status)
        return JSONResponse(status_code=status, content=body.model_dump())

    @app.exception_handler(ValueError)
    async def _on_validation(request: Request, exc: ValueError):
        return _error(400, "validation", str(exc))

    @app.exception_handler(NotFound)
    async def _on_not_found(request: Request, exc: NotFound):
        return _error(404, "not_found", str(exc))

    @app.exception_handler(UnknownJob)
    async def _on_unknown_job(request: Request, exc: UnknownJob):
        return _error(404, "unknown_job", str(exc))

    @app.exception_handler(RangeError)
    async def _on_range(request: Request, exc: RangeError):
        return _error(416, "range", str(exc))

    @app.exception_handler(Transport)
    async def _on_upstream(request: Request, exc: Transport):
        return _error(502, "upstream", str(exc))

    @app.exception_handler(LlmTransport)
    async def _on_llm(request: Request, exc: LlmTransport):
        return _error(502, "llm_upstream", str(exc))

    @app.exception_handler(MalformedToolCall)
    async def _on_malformed(request: Request, exc: MalformedToolCall):
        return _error(502, "llm_malformed", str(exc))

    @app.exception_handler(AccessError)
    async def _on_access(request: Request, exc: AccessError):
        return _error(500, "internal", str(exc))

    # ---- health and datasets ----------------------------------------------

    @app.get("/healthz")
    def healthz():
        dependencies = {"cache": "ok"}
        try:
            client.list_datasets()
            dependencies["dataset_server"] = "ok"
        except AccessError:
            dependencies["dataset_server"] = "unreachable"
        status = "ok" if dependencies["dataset_server"] == "ok" else "degraded"
        return {"status": status, "dependencies": dependencies}

    @app.get("/v1/datasets")
    def list_datasets():
        return [d.to_json() for d in client.list_datasets()]

    # ---- animations ---------------------------------------------------------

    @app.post("/v1/animations")
    def submit_animation(body: SpecModel):
        job, already_done = jobs.submit(body.to_spec())
        payload = SubmitResponse(job_id=job.id, job=JobModel(**job.snapshot()))
        return JSONResponse(
            status_code=200 if already_done else 202, content=payload.model_dump()
        )

    @app.get("/v1/animations/{job_id}")
    def job_progress(job_id: str):
        job = jobs.get(job_id)
        return JobModel(**job.snapshot()).model_dump()

    @app.get("/v1/animations/{job_id}/frames/{n}")
    def get_frame(job_id: str, n: int):
        frames = jobs.frames_of(job_id)
        if n < 0 or n >= len(frames):
            return _error(404, "unknown_frame", f"frame {n} not available (have {len(frames)})")
        return FileResponse(
            frames[n],
            media_type="image/x-portable-pixmap",
            headers={"Cache-Control": "public, max-age=31536000, immutable"},
        )

    @app.get("/v1/animations/{job_id}/doc")
    def get_document(job_id: str):
        from ..gad import document_to_tree, parse_gad

        root = jobs.gad_root_of(job_id)
        if not root.is_dir():
            return _error(404, "unknown_job", f"no bundle for {job_id}")
        return document_to_tree(parse_gad(root))

    @app.post("/v1/animations/{job_id}/doc")
    def post_document(job_id: str, body: dict):
        """Re-render an animation with edited keyframes (the UI's Export).

        The edited keyframes replace the stored ones, are validated server
        side, and render as a derived job that reuses the base blocks.  An
        unchanged document resolves to the base job: a pure cache hit."""
        import dataclasses as dc
        import hashlib

        from ..gad import (
            InvalidDocument,
            SchemaViolation,
            dumps_canonical,
            keyframe_from_tree,
            keyframe_to_tree,
            parse_gad,
            validate_gad,
        )

        base_id = job_id.split("~", 1)[0]
        root = cache.root / base_id
        if not root.is_dir():
            return _error(404, "unknown_job", f"no bundle for {base_id}")
        stored = parse_gad(root)
        raw_keyframes = body.get("keyframes")
        if not isinstance(raw_keyframes, list) or not raw_keyframes:
            return _error(400, "validation", "body must carry a non-empty keyframes list")
        try:
            keyframes = tuple(
                keyframe_from_tree(tree, f"keyframes[{i}]")
                for i, tree in enumerate(raw_keyframes)
            )
        except SchemaViolation as exc:
            return _error(400, "validation", str(exc))
        edited = dc.replace(
            stored,
            header=dc.replace(
                stored.header,
                keyframe_refs=tuple(f"kf_{i:05d}.gad.json" for i in range(len(keyframes))),
            ),
            keyframes=keyframes,
        )
        diagnostics = [d for d in validate_gad(edited) if d.severity == "error"]
        if diagnostics:
            return JSONResponse(
                status_code=400,
                content={
                    "code": "validation",
                    "message": "edited document fails validation",
                    "http_status": 400,
                    "diagnostics": [
                        {"severity": d.severity, "path": d.path, "message": d.message}
                        for d in diagnostics
                    ],
                },
            )

        if edited == stored:
            # unchanged export: reuse the base animation wholesale
            job, already_done = jobs.submit(stored_spec_of(base_id))
            payload = SubmitResponse(job_id=job.id, job=JobModel(**job.snapshot()))
            return JSONResponse(
                status_code=200 if already_done else 202, content=payload.model_dump()
            )

        digest = hashlib.sha256(
            dumps_canonical([keyframe_to_tree(kf) for kf in keyframes]).encode()
        ).hexdigest()[:8]
        edit_id = f"{base_id}~{digest}"
        edited_root = cache.root / base_id / "edits" / digest
        if not edited_root.is_dir():
            (edited_root / "data").mkdir(parents=True, exist_ok=True)
            import os

            for entry in stored.data_list:
                target = edited_root / entry.path
                if not target.exists():
                    os.link(root / entry.path, target)
            from ..gad import serialize_gad

            try:
                serialize_gad(edited, edited_root)
            except InvalidDocument as exc:
                return _error(400, "validation", str(exc))
        job, already_done = jobs.submit_edited(
            edit_id, edited, edited_root, stored_spec_of(base_id)
        )
        payload = SubmitResponse(job_id=job.id, job=JobModel(**job.snapshot()))
        return JSONResponse(
            status_code=200 if already_done else 202, content=payload.model_dump()
        )

    def stored_spec_of(base_id: str):
        from ..access import parse_animation_id

        return parse_animation_id(base_id, dataset=config.default_dataset)

    @app.get("/v1/animations/{job_id}/gad")
    def get_gad_bundle(job_id: str):
        root = jobs.gad_root_of(job_id)
        if not root.is_dir():
            return _error(404, "unknown_job", f"no bundle for {job_id}")
        buffer = io.BytesIO()
        with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
            for path in sorted(root.rglob("*")):
                rel = path.relative_to(root).as_posix()
                if rel.startswith(("frames_", "edits/")) or not path.is_file():
                    continue
                archive.write(path, rel)
        return Response(
            content=buffer.getvalue(),
            media_type="application/zip",
            headers={"Content-Disposition": f'attachment; filename="{job_id}.zip"'},
        )

    # ---- chat ---------------------------------------------------------------

    def _session(session_id: str) -> ServiceChatSession:
        if session_id not in sessions:
            raise NotFound(f"unknown chat session {session_id!r}")
        return sessions[session_id]

    @app.post("/v1/chat/sessions", status_code=201)
    def create_session():
        descriptor = client.descriptor(config.default_dataset)
        chat = new_session(descriptor)
        sessions[chat.id] = ServiceChatSession(chat=chat)
        return SessionCreated(session_id=chat.id).model_dump()

    def _submit_current(state: ServiceChatSession) -> str:
        job, _ = jobs.submit(state.proposal.spec)
        state.job_id = job.id
        state.chat.produced_animations.append(job.id)
        return job.id

    @app.post("/v1/chat/sessions/{session_id}/messages")
    def post_message(session_id: str, body: ChatMessageIn):
        state = _session(session_id)
        descriptor = state.chat.context.descriptor
        llm = make_llm(descriptor)
        text = body.text.strip()

        with state.lock:
            if text.lower() == "accept":
                if state.proposal is None:
                    raise ValueError("nothing to accept yet; describe an animation first")
                if state.critique is not None and state.critique.suggested_deltas:
                    from ..access import apply_deltas

                    merged = apply_deltas(state.proposal.spec, state.critique.suggested_deltas)
                    raw = spec_to_json(merged)
                    (x1, y1, z1), (x2, y2, z2) = merged.box
                    args = {
                        "x1": x1, "y1": y1, "z1": z1, "x2": x2, "y2": y2, "z2": z2,
                        "t1": merged.time[0], "t2": merged.time[1], "step": merged.time[2],
                        "quality": merged.quality,
                        "field": raw["field"],
                        "streamlines": raw["streamlines"],
                    }
                    spec, notes = clamp_to_dataset(args, descriptor, merged.dataset)
                    state.proposal = SpecProposal(
                        spec=spec,
                        rationale="critique applied",
                        confidence=state.proposal.confidence,
                        clamped=bool(notes),
                        adjustments=tuple(notes),
                    )
                    state.critique = None
                job_id = _submit_current(state)
                return ChatReply(
                    reply=f"Rendering {job_id}.",
                    proposal=_proposal_model(state.proposal),
                    job_id=job_id,
                ).model_dump()

            if text.lower() == "evaluate":
                if state.job_id is None:
                    raise ValueError("no animation to evaluate yet")
                job = jobs.get(state.job_id)
                if job.state != DONE:
                    raise ValueError(f"job {job.id} is {job.state}, not done")
                frames = jobs.frames_of(job.id)
                critique = evaluate_animation(state.chat, frames, state.proposal.spec, llm)
                state.critique = critique
                return ChatReply(
                    reply=critique.commentary, critique=_critique_model(critique)
                ).model_dump()

            proposal = plan_action(state.chat, text, llm)
            state.proposal = proposal
            state.critique = None
            return ChatReply(
                reply=proposal.rationale or "Proposed animation parameters.",
                proposal=_proposal_model(proposal),
            ).model_dump()

    @app.get("/v1/chat/sessions/{session_id}")
    def get_session(session_id: str):
        state = _session(session_id)
        history = [
            ChatHistoryEntry(
                role=m.role,
                content=m.content,
                attachment_count=len(m.attachments or ()),
            )
            for m in state.chat.history
        ]
        return SessionState(
            session_id=session_id,
            dataset=state.chat.context.descriptor.name,
            history=history,
            produced_animations=list(state.chat.produced_animations),
            proposal=_proposal_model(state.proposal) if state.proposal else None,
            critique=_critique_model(state.critique) if state.critique else None,
            job_id=state.job_id,
        ).model_dump()

    # ---- static UI ----------------------------------------------------------

    if config.frontend_dir and Path(config.frontend_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=config.frontend_dir, html=True), name="ui")

    return app


def serve(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8800):  # pragma: no cover
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port)
