"""Dataset descriptors and the synthetic datasets the bundled server hosts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..volume import (
    BASIN_SALINITY,
    ROTATING_EDDY,
    VORTEX_VELOCITY,
    GridMeta,
    SyntheticVolume,
    VolumeBlock,
    extract_roi,
)
from .errors import NotFound


@dataclass(frozen=True)
class DatasetDescriptor:
    name: str
    fields_available: Tuple[Tuple[str, int, Tuple[float, float]], ...]
    base_dims: Tuple[int, int, int]
    timestep_count: int
    timestep_stride_hours: float

    def field_range(self, field: str) -> Tuple[float, float]:
        for name, _, rng in self.fields_available:
            if name == field:
                return rng
        raise NotFound(f"field {field!r} not in dataset {self.name!r}")

    def field_names(self) -> Tuple[str, ...]:
        return tuple(name for name, _, _ in self.fields_available)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "fields": [
                {"name": n, "channels": c, "range": list(r)}
                for n, c, r in self.fields_available
            ],
            "dims": list(self.base_dims),
            "timesteps": self.timestep_count,
            "stride_hours": self.timestep_stride_hours,
        }

    @classmethod
    def from_json(cls, tree: dict) -> "DatasetDescriptor":
        return cls(
            name=tree["name"],
            fields_available=tuple(
                (f["name"], int(f["channels"]), (float(f["range"][0]), float(f["range"][1])))
                for f in tree["fields"]
            ),
            base_dims=tuple(int(d) for d in tree["dims"]),
            timestep_count=int(tree["timesteps"]),
            timestep_stride_hours=float(tree["stride_hours"]),
        )


@dataclass(frozen=True)
class FieldDef:
    """How a named dataset field maps onto a synthetic generator."""

    kind: str
    component: Optional[int]  # channel of a vector generator, None for scalar kinds
    value_range: Tuple[float, float]


@dataclass(frozen=True)
class SyntheticDataset:
    name: str
    meta: GridMeta
    fields: Dict[str, FieldDef]

    def descriptor(self) -> DatasetDescriptor:
        return DatasetDescriptor(
            name=self.name,
            fields_available=tuple(
                (name, 1, fd.value_range) for name, fd in self.fields.items()
            ),
            base_dims=self.meta.dims,
            timestep_count=self.meta.timestep_count,
            timestep_stride_hours=self.meta.timestep_stride_hours,
        )

    def block(self, field: str, t: int, q: int, box) -> VolumeBlock:
        """Scalar block for one field; vector components are sliced out after
        downsampling, which commutes with per-channel averaging."""
        if field not in self.fields:
            raise NotFound(f"field {field!r} not in dataset {self.name!r}")
        fd = self.fields[field]
        source = SyntheticVolume(kind=fd.kind, meta=self.meta)
        blk = extract_roi(source, box, q, t)
        if fd.component is None:
            return blk
        samples = np.ascontiguousarray(blk.samples[..., fd.component : fd.component + 1])
        meta = GridMeta(
            dims=blk.meta.dims,
            channels=1,
            spacing=blk.meta.spacing,
            origin=blk.meta.origin,
            field_name=field,
            timestep_count=blk.meta.timestep_count,
            timestep_stride_hours=blk.meta.timestep_stride_hours,
        )
        return VolumeBlock(meta=meta, box=blk.box, quality=blk.quality, samples=samples)


def mini_ocean(
    dims: Tuple[int, int, int] = (128, 128, 32),
    timesteps: int = 96,
    stride_hours: float = 24.0,
) -> SyntheticDataset:
    """The default desk-scale dataset: five scalar fields on one grid."""
    meta = GridMeta(
        dims=dims,
        channels=1,
        spacing=(1.0, 1.0, 1.0),
        origin=(0.0, 0.0, 0.0),
        field_name="",
        timestep_count=timesteps,
        timestep_stride_hours=stride_hours,
    )
    # solid-body rotation bounds follow from the farthest voxel center
    half_y = (dims[1] - 1) / 2.0
    half_x = (dims[0] - 1) / 2.0
    fields = {
        "temperature": FieldDef(ROTATING_EDDY, None, (0.0, 1.0)),
        "salinity": FieldDef(BASIN_SALINITY, None, (33.0, 38.0)),
        "u": FieldDef(VORTEX_VELOCITY, 0, (-half_y, half_y)),
        "v": FieldDef(VORTEX_VELOCITY, 1, (-half_x, half_x)),
        "w": FieldDef(VORTEX_VELOCITY, 2, (0.0, 0.0)),
    }
    return SyntheticDataset(name="mini-ocean", meta=meta, fields=fields)

VELOCITY_COMPONENTS = ("u", "v", "w")
