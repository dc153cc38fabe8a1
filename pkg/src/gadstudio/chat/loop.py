"""Driving the full pipeline: plan, materialize, render, evaluate, repeat."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Tuple

from ..access import (
    AnimationId,
    AnimationSpec,
    CacheIndex,
    DatasetClient,
    animation_id,
    apply_deltas,
    materialize,
)
from ..gad import GadDocument, expand_keyframes
from ..render import ReferenceBackend, RenderSettings, render_animation
from .errors import InvalidChoice, MalformedToolCall
from .llm import LlmClient
from .planner import clamp_to_dataset, evaluate_animation, plan_action
from .session import ChatSession, Critique, spec_to_json

AcceptFn = Callable[[Critique, AnimationSpec], bool]

# frames from the scripting/service layer are PNG so browsers can show them;
# the core renderer still defaults to PPM for bit-exact comparisons
FRAME_FORMAT = "png"


@dataclass(frozen=True)
class MenuSelection:
    kind: str  # "custom" | "preset"
    name: str
    text: Optional[str] = None
    spec: Optional[AnimationSpec] = None


# option number -> (name, spec factory on the default mini-ocean grid)
PRESETS = {
    1: (
        "agulhas eddy ring",
        AnimationSpec(
            box=((24, 24, 0), (104, 104, 32)),
            time=(0, 89, 1),
            quality=0,
            field="temperature",
            streamlines=False,
            dataset="mini-ocean",
        ),
    ),
    2: (
        "mediterranean salinity",
        AnimationSpec(
            box=((16, 48, 0), (96, 112, 16)),
            time=(0, 59, 1),
            quality=-8,
            field="salinity",
            streamlines=False,
            dataset="mini-ocean",
        ),
    ),
    3: (
        "red sea salinity currents",
        AnimationSpec(
            box=((64, 16, 0), (120, 80, 24)),
            time=(0, 9, 1),
            quality=-6,
            field="salinity",
            streamlines=True,
            dataset="mini-ocean",
        ),
    ),
    4: (
        "basin vortex streamlines",
        AnimationSpec(
            box=((8, 8, 0), (120, 120, 32)),
            time=(0, 5, 1),
            quality=-6,
            field="temperature",
            streamlines=True,
            dataset="mini-ocean",
        ),
    ),
}


def menu(choice: int, custom_text: Optional[str] = None) -> MenuSelection:
    """Options 1-4 pick a bundled phenomenon; option 0 takes a description."""
    if choice == 0:
        if not custom_text:
            raise InvalidChoice("option 0 needs a description of the animation")
        return MenuSelection(kind="custom", name="custom", text=custom_text)
    if choice in PRESETS:
        name, spec = PRESETS[choice]
        return MenuSelection(kind="preset", name=name, spec=spec)
    raise InvalidChoice(f"menu choice must be 0-4, got {choice}")


def frames_dirname(settings: RenderSettings) -> str:
    return f"frames_{settings.width}x{settings.height}"


def render_bundle(
    doc: GadDocument,
    gad_root: Path,
    settings: RenderSettings,
    frames_root: Optional[Path] = None,
) -> List[Path]:
    """Render (or reuse) the frame directory for a materialized bundle."""
    out_dir = Path(frames_root) if frames_root else gad_root / frames_dirname(settings)
    expected = len(expand_keyframes(doc))
    existing = sorted(out_dir.glob(f"frame_*.{FRAME_FORMAT}")) if out_dir.is_dir() else []
    if len(existing) == expected:
        return existing
    return render_animation(
        doc, gad_root, settings, ReferenceBackend(), out_dir, image_format=FRAME_FORMAT
    )


def basic_generate(
    spec: AnimationSpec,
    client: DatasetClient,
    cache: CacheIndex,
    settings: RenderSettings,
    frames_root: Optional[Path] = None,
) -> Tuple[AnimationId, Path]:
    """Materialize and render with no model in the loop; fully deterministic."""
    spec.validate()
    doc, gad_root, _ = materialize(spec, client, cache)
    frames = render_bundle(doc, gad_root, settings, frames_root)
    return animation_id(spec), frames[0].parent


def run_loop(
    session: ChatSession,
    user_text: str,
    llm: LlmClient,
    client: DatasetClient,
    cache: CacheIndex,
    settings: RenderSettings,
    accept: AcceptFn,
    max_iterations: int = 8,
) -> List[Tuple[AnimationId, Path]]:
    """The conversational production loop.

    Each iteration materializes the current spec (hitting the cache when the
    parameters were seen before), renders it, asks the model for a critique,
    and hands the critique to ``accept``: returning True applies the suggested
    deltas and continues, False stops.  The loop also stops when a critique
    suggests no changes.
    """
    proposal = plan_action(session, user_text, llm)
    spec = proposal.spec
    produced: List[Tuple[AnimationId, Path]] = []

    for _ in range(max_iterations):
        doc, gad_root, _ = materialize(spec, client, cache)
        frames = render_bundle(doc, gad_root, settings)
        aid = animation_id(spec)
        session.produced_animations.append(str(aid))
        produced.append((aid, frames[0].parent))

        critique = evaluate_animation(session, frames, spec, llm)
        if not accept(critique, spec):
            break
        if not critique.suggested_deltas:
            break
        merged = apply_deltas(spec, critique.suggested_deltas)
        raw = spec_to_json(merged)
        (x1, y1, z1), (x2, y2, z2) = merged.box
        t1, t2, step = merged.time
        args = {
            "x1": x1, "y1": y1, "z1": z1, "x2": x2, "y2": y2, "z2": z2,
            "t1": t1, "t2": t2, "step": step,
            "quality": merged.quality,
            "field": raw["field"],
            "streamlines": raw["streamlines"],
        }
        try:
            spec, _ = clamp_to_dataset(args, session.context.descriptor, spec.dataset)
        except MalformedToolCall:
            break

    return produced
