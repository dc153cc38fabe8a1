"""Backend interface, the reference backend, and the keyframe-at-a-time driver.

``render_animation`` walks the expanded frames strictly in order, keeping only
the blocks the current frame binds resident (plus one reusable frame buffer),
so peak memory tracks the largest single frame instead of the animation
length.
"""

from __future__ import annotations

import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..gad import DataEntry, GadDocument, RenderState, expand_keyframes
from ..volume import VolumeBlock, read_block
from .camera import RenderSettings
from .errors import BackendFailure, MissingBlock, RenderError
from .image import Image, from_float_rgba, write_image
from .lines import rasterize_lines
from .raymarch import raymarch_float
from .streamlines import color_by_speed, trace_streamlines


class MemoryTracker:
    """Counts bytes of resident render data (blocks, frame buffer)."""

    def __init__(self):
        self._lock = threading.Lock()
        self.current = 0
        self.peak = 0
        self.allocations = 0

    def alloc(self, nbytes: int) -> None:
        with self._lock:
            self.current += nbytes
            self.allocations += 1
            if self.current > self.peak:
                self.peak = self.current

    def free(self, nbytes: int) -> None:
        with self._lock:
            self.current -= nbytes


class BlockResolver:
    """Loads block files on demand and releases ones no longer bound."""

    def __init__(self, doc: GadDocument, gad_root, tracker: Optional[MemoryTracker] = None):
        self._entries = doc.data_list
        self._root = Path(gad_root)
        self._tracker = tracker
        self._resident: Dict[int, VolumeBlock] = {}

    def entry(self, index: int) -> DataEntry:
        return self._entries[index]

    def retain(self, needed) -> None:
        """Drop blocks outside ``needed`` first, then load what is missing."""
        needed = set(needed)
        for index in sorted(set(self._resident) - needed):
            block = self._resident.pop(index)
            if self._tracker:
                self._tracker.free(block.samples.nbytes)
        for index in sorted(needed - set(self._resident)):
            entry = self._entries[index]
            path = self._root / entry.path
            if not path.is_file():
                raise MissingBlock(f"block file {path} is missing")
            block = read_block(
                path, entry.dims, entry.channels, field_name=entry.field_name
            )
            self._resident[index] = block
            if self._tracker:
                self._tracker.alloc(block.samples.nbytes)

    def get(self, index: int) -> Tuple[DataEntry, VolumeBlock]:
        return self._entries[index], self._resident[index]

    def release_all(self) -> None:
        self.retain(set())


class RendererBackend(ABC):
    """Deterministic frame renderer; given equal inputs, equal pixels."""

    supports_streamlines: bool = False

    @abstractmethod
    def render_frame(
        self, state: RenderState, resolver: BlockResolver, settings: RenderSettings
    ) -> Image:
        ...


def _over(front: np.ndarray, back: np.ndarray) -> np.ndarray:
    a = front[..., 3:4]
    rgb = front[..., :3] + (1.0 - a) * back[..., :3]
    alpha = front[..., 3:4] + (1.0 - a) * back[..., 3:4]
    return np.concatenate([rgb, alpha], axis=-1)


class ReferenceBackend(RendererBackend):
    """CPU raymarcher plus streamline overlay; reuses one float frame buffer."""

    supports_streamlines = True

    def __init__(self):
        self._buffer: Optional[np.ndarray] = None
        self._buffer_registered = False

    def _frame_buffer(self, settings: RenderSettings, tracker=None) -> np.ndarray:
        shape = (settings.height, settings.width, 4)
        if self._buffer is None or self._buffer.shape != shape:
            self._buffer = np.zeros(shape, dtype=np.float64)
            if tracker is not None and not self._buffer_registered:
                tracker.alloc(self._buffer.nbytes)
                self._buffer_registered = True
        return self._buffer

    def render_frame(
        self,
        state: RenderState,
        resolver: BlockResolver,
        settings: RenderSettings,
        tracker: Optional[MemoryTracker] = None,
    ) -> Image:
        buf = self._frame_buffer(settings, tracker)
        buf[..., :3] = np.asarray(settings.background)[None, None, :]
        buf[..., 3] = 0.0
        drew_volume = False
        overlays = []

        for binding in state.bindings:
            entry, block = resolver.get(binding.data_index)
            if entry.data_type == "structured":
                layer = raymarch_float(state, block, settings, binding)
                if not drew_volume:
                    buf[:] = layer
                    drew_volume = True
                else:
                    buf[:] = _over(layer, buf)
            elif entry.data_type == "streamline" and self.supports_streamlines:
                region = None
                if binding.clip_box is not None:
                    bmin = np.asarray(state.bounding_box[0], dtype=np.float64)
                    bmax = np.asarray(state.bounding_box[1], dtype=np.float64)
                    extent = bmax - bmin
                    region = (
                        bmin + np.asarray(binding.clip_box[0]) * extent,
                        bmin + np.asarray(binding.clip_box[1]) * extent,
                    )
                lines = trace_streamlines(block, binding.streamline_params, region=region)
                overlays.append(color_by_speed(lines, entry.value_range))

        image = from_float_rgba(buf)
        for colored in overlays:
            image = rasterize_lines(image, colored, state, settings)
        return image


@dataclass
class RenderStats:
    frames: int = 0
    peak_block_bytes: int = 0
    max_frame_working_set: int = 0
    frame_paths: List[Path] = field(default_factory=list)


ProgressFn = Callable[[int, int], None]


def render_animation(
    doc: GadDocument,
    gad_root,
    settings: RenderSettings,
    backend: RendererBackend,
    out_dir,
    image_format: str = "ppm",
    tracker: Optional[MemoryTracker] = None,
    progress: Optional[ProgressFn] = None,
) -> List[Path]:
    """Render every expanded frame to ``out_dir`` as frame_%05d files."""
    stats = render_animation_with_stats(
        doc, gad_root, settings, backend, out_dir, image_format, tracker, progress
    )
    return stats.frame_paths


def render_animation_with_stats(
    doc: GadDocument,
    gad_root,
    settings: RenderSettings,
    backend: RendererBackend,
    out_dir,
    image_format: str = "ppm",
    tracker: Optional[MemoryTracker] = None,
    progress: Optional[ProgressFn] = None,
) -> RenderStats:
    states = expand_keyframes(doc)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tracker = tracker if tracker is not None else MemoryTracker()
    resolver = BlockResolver(doc, gad_root, tracker)
    stats = RenderStats()

    for i, state in enumerate(states):
        needed = {b.data_index for b in state.bindings}
        resolver.retain(needed)
        working = sum(resolver.get(j)[1].samples.nbytes for j in needed)
        stats.max_frame_working_set = max(stats.max_frame_working_set, working)
        try:
            if isinstance(backend, ReferenceBackend):
                image = backend.render_frame(state, resolver, settings, tracker=tracker)
            else:
                image = backend.render_frame(state, resolver, settings)
        except RenderError:
            raise
        except Exception as exc:
            raise BackendFailure(f"frame {state.frame_number}: {exc}") from exc
        path = out / f"frame_{i:05d}.{image_format}"
        write_image(image, path)
        stats.frame_paths.append(path)
        stats.frames += 1
        if progress is not None:
            progress(i + 1, len(states))

    resolver.release_all()
    stats.peak_block_bytes = tracker.peak
    return stats
