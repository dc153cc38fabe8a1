"""Animation jobs: a bounded FIFO worker pool over materialize + render.

Job ids are animation ids, so resubmitting a spec joins the existing job and
finished work is found again across the job table or the on-disk cache.
Progress is a single non-decreasing number: the fetch phase covers [0, 0.5],
rendering covers [0.5, 1.0].
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from ..access import AnimationSpec, CacheIndex, DatasetClient, animation_id, materialize
from ..chat import frames_dirname
from ..chat.loop import FRAME_FORMAT
from ..gad import GadDocument, expand_keyframes, parse_gad
from ..render import ReferenceBackend, RenderSettings, render_animation


class UnknownJob(KeyError):
    """No job with that id."""


QUEUED = "queued"
FETCHING = "fetching"
RENDERING = "rendering"
DONE = "done"
FAILED = "failed"


@dataclass
class Job:
    id: str
    spec: AnimationSpec
    state: str = QUEUED
    progress: float = 0.0
    frame_count: int = 0
    error: Optional[str] = None
    fetched_timesteps: int = 0
    total_timesteps: int = 0
    frames_written: int = 0
    frames_dir: Optional[Path] = None
    gad_root: Optional[Path] = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def snapshot(self) -> dict:
        with self._lock:
            return {
                "id": self.id,
                "state": self.state,
                "progress": round(self.progress, 6),
                "frame_count": self.frame_count,
                "error": self.error,
                "fetched_timesteps": self.fetched_timesteps,
                "total_timesteps": self.total_timesteps,
                "frames_written": self.frames_written,
            }

    def _advance(self, **changes) -> None:
        with self._lock:
            for key, value in changes.items():
                setattr(self, key, value)


class JobManager:
    def __init__(
        self,
        client: DatasetClient,
        cache: CacheIndex,
        settings: RenderSettings,
        workers: int = 2,
    ):
        self._client = client
        self._cache = cache
        self._settings = settings
        self._jobs: Dict[str, Job] = {}
        self._table_lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="animjob")

    def get(self, job_id: str) -> Job:
        with self._table_lock:
            if job_id not in self._jobs:
                raise UnknownJob(job_id)
            return self._jobs[job_id]

    def frames_of(self, job_id: str) -> List[Path]:
        job = self.get(job_id)
        if job.frames_dir is None:
            return []
        return sorted(job.frames_dir.glob(f"frame_*.{FRAME_FORMAT}"))

    def gad_root_of(self, job_id: str) -> Path:
        job = self.get(job_id)
        return job.gad_root if job.gad_root is not None else self._cache.root / job_id

    def submit(self, spec: AnimationSpec) -> tuple:
        """Returns (job, already_done).  Joins an existing job for the same id;
        a cached, fully rendered animation completes immediately."""
        spec.validate()
        aid = str(animation_id(spec))
        with self._table_lock:
            existing = self._jobs.get(aid)
            if existing is not None:
                return existing, existing.state == DONE
            job = Job(id=aid, spec=spec)
            self._jobs[aid] = job

        done_now = self._adopt_finished_bundle(job)
        if done_now:
            return job, True
        self._pool.submit(self._run, job)
        return job, False

    def _frames_dir(self, aid: str) -> Path:
        return self._cache.root / aid / frames_dirname(self._settings)

    def _adopt_finished_bundle(self, job: Job) -> bool:
        entry = self._cache.lookup(job.id)
        if entry is None:
            return False
        frames_dir = self._frames_dir(job.id)
        if not frames_dir.is_dir():
            return False
        doc = parse_gad(entry.gad_root)
        expected = len(expand_keyframes(doc))
        frames = sorted(frames_dir.glob(f"frame_*.{FRAME_FORMAT}"))
        if len(frames) != expected:
            return False
        total = job.spec.timestep_count()
        job._advance(
            state=DONE,
            progress=1.0,
            frame_count=expected,
            frames_written=expected,
            fetched_timesteps=total,
            total_timesteps=total,
            frames_dir=frames_dir,
            gad_root=entry.gad_root,
        )
        return True

    def submit_edited(self, edit_id: str, doc: GadDocument, gad_root: Path, spec: AnimationSpec):
        """Render an already-materialized, user-edited bundle as its own job.

        No fetching happens: the edit reuses the base animation's blocks."""
        with self._table_lock:
            existing = self._jobs.get(edit_id)
            if existing is not None:
                return existing, existing.state == DONE
            job = Job(id=edit_id, spec=spec, gad_root=gad_root)
            self._jobs[edit_id] = job
        frames_dir = gad_root / frames_dirname(self._settings)
        expected = len(expand_keyframes(doc))
        frames = sorted(frames_dir.glob(f"frame_*.{FRAME_FORMAT}")) if frames_dir.is_dir() else []
        if len(frames) == expected:
            job._advance(
                state=DONE, progress=1.0, frame_count=expected,
                frames_written=expected, frames_dir=frames_dir,
            )
            return job, True
        self._pool.submit(self._run_edited, job, doc, gad_root, frames_dir)
        return job, False

    def _run_edited(self, job: Job, doc: GadDocument, gad_root: Path, frames_dir: Path) -> None:
        try:
            job._advance(state=RENDERING, progress=0.5)
            expected = len(expand_keyframes(doc))

            def on_frame(done: int, total_frames: int) -> None:
                job._advance(
                    frames_written=done,
                    progress=0.5 + 0.5 * done / max(1, total_frames),
                )

            render_animation(
                doc, gad_root, self._settings, ReferenceBackend(), frames_dir,
                image_format=FRAME_FORMAT, progress=on_frame,
            )
            job._advance(
                state=DONE, progress=1.0, frame_count=expected,
                frames_written=expected, frames_dir=frames_dir,
            )
        except Exception as exc:
            job._advance(state=FAILED, error=f"{type(exc).__name__}: {exc}")

    def _run(self, job: Job) -> None:
        try:
            total = job.spec.timestep_count()
            job._advance(state=FETCHING, total_timesteps=total)

            def on_fetch(done: int, total_steps: int) -> None:
                job._advance(
                    fetched_timesteps=done,
                    progress=0.5 * done / max(1, total_steps),
                )

            doc, gad_root, hit = materialize(
                job.spec, self._client, self._cache, progress=on_fetch
            )
            job._advance(
                fetched_timesteps=total, progress=0.5, state=RENDERING, gad_root=gad_root
            )

            frames_dir = self._frames_dir(job.id)
            expected = len(expand_keyframes(doc))
            existing = sorted(frames_dir.glob(f"frame_*.{FRAME_FORMAT}")) if frames_dir.is_dir() else []
            if len(existing) != expected:

                def on_frame(done: int, total_frames: int) -> None:
                    job._advance(
                        frames_written=done,
                        progress=0.5 + 0.5 * done / max(1, total_frames),
                    )

                render_animation(
                    doc,
                    gad_root,
                    self._settings,
                    ReferenceBackend(),
                    frames_dir,
                    image_format=FRAME_FORMAT,
                    progress=on_frame,
                )
                count = expected
            else:
                count = len(existing)
            job._advance(
                state=DONE,
                progress=1.0,
                frame_count=count,
                frames_written=count,
                frames_dir=frames_dir,
            )
        except Exception as exc:  # surfaced through the job record
            job._advance(state=FAILED, error=f"{type(exc).__name__}: {exc}")

    def shutdown(self) -> None:
        self._pool.shutdown(wait=True)
