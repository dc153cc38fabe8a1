"""Animation requests and their deterministic cache identifiers.

An animation id is a flat string that fully encodes the request:

    animation_{x1-y1-z1}_{x2-y2-z2}_{t1-t2-step}_{q}_{field}_{streamlines}

Equal specs always produce equal ids, distinct specs distinct ids, and every
numeric field parses back out of the string.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterator, Tuple

ID_PATTERN = re.compile(
    r"^animation_"
    r"(\d+)-(\d+)-(\d+)_"
    r"(\d+)-(\d+)-(\d+)_"
    r"(\d+)-(\d+)-(\d+)_"
    r"(-?\d+)_"
    r"(.+)_"
    r"(true|false)$"
)


@dataclass(frozen=True)
class AnimationSpec:
    """Region of interest + time range + quality + field + streamline flag."""

    box: Tuple[Tuple[int, int, int], Tuple[int, int, int]]
    time: Tuple[int, int, int]  # (t1, t2, step)
    quality: int
    field: str
    streamlines: bool = False
    dataset: str = ""

    def __post_init__(self):
        lo, hi = self.box
        object.__setattr__(
            self, "box", (tuple(int(v) for v in lo), tuple(int(v) for v in hi))
        )
        t1, t2, step = self.time
        object.__setattr__(self, "time", (int(t1), int(t2), int(step)))

    def validate(self) -> None:
        (x1, y1, z1), (x2, y2, z2) = self.box
        if not (x1 < x2 and y1 < y2 and z1 < z2):
            raise ValueError(f"box min {self.box[0]} must be < max {self.box[1]} per axis")
        if min(x1, y1, z1) < 0:
            raise ValueError("box coordinates must be non-negative")
        t1, t2, step = self.time
        if t1 < 0 or t1 > t2:
            raise ValueError(f"need 0 <= t1 <= t2, got ({t1}, {t2})")
        if step < 1:
            raise ValueError(f"step must be >= 1, got {step}")
        if self.quality > 0:
            raise ValueError(f"quality must be <= 0, got {self.quality}")
        if not self.field:
            raise ValueError("field name is empty")

    def timesteps(self) -> Iterator[int]:
        t1, t2, step = self.time
        return iter(range(t1, t2 + 1, step))

    def timestep_count(self) -> int:
        t1, t2, step = self.time
        return (t2 - t1) // step + 1


@dataclass(frozen=True)
class AnimationId:
    value: str

    def __str__(self) -> str:
        return self.value


def animation_id(spec: AnimationSpec) -> AnimationId:
    spec.validate()
    (x1, y1, z1), (x2, y2, z2) = spec.box
    t1, t2, step = spec.time
    flag = "true" if spec.streamlines else "false"
    return AnimationId(
        f"animation_{x1}-{y1}-{z1}_{x2}-{y2}-{z2}_{t1}-{t2}-{step}_"
        f"{spec.quality}_{spec.field}_{flag}"
    )


def parse_animation_id(value: str, dataset: str = "") -> AnimationSpec:
    m = ID_PATTERN.match(value)
    if m is None:
        raise ValueError(f"not a valid animation id: {value!r}")
    nums = [int(g) for g in m.groups()[:10]]
    return AnimationSpec(
        box=((nums[0], nums[1], nums[2]), (nums[3], nums[4], nums[5])),
        time=(nums[6], nums[7], nums[8]),
        quality=nums[9],
        field=m.group(11),
        streamlines=m.group(12) == "true",
        dataset=dataset,
    )


def apply_deltas(spec: AnimationSpec, deltas: dict) -> AnimationSpec:
    """Overlay partial-field adjustments on a spec."""
    allowed = {"box", "time", "quality", "field", "streamlines", "dataset"}
    unknown = set(deltas) - allowed
    if unknown:
        raise ValueError(f"unknown spec fields in deltas: {sorted(unknown)}")
    return replace(spec, **deltas)
