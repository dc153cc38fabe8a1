"""Structured time-varying grids, quality downsampling, synthetic fields."""

from .blockio import block_bytes, block_filename, read_block, samples_from_bytes, write_block
from .grid import (
    GridMeta,
    InvalidQuality,
    OutOfBounds,
    QualityLevel,
    VolumeBlock,
    downsample,
    halving_order,
    quality_level,
    resolution_fraction,
)
from .synthetic import (
    BASIN_SALINITY,
    KINDS,
    ROTATING_EDDY,
    VORTEX_VELOCITY,
    SyntheticVolume,
    extract_roi,
    generate_synthetic,
)

__all__ = [
    "GridMeta",
    "VolumeBlock",
    "QualityLevel",
    "InvalidQuality",
    "OutOfBounds",
    "resolution_fraction",
    "quality_level",
    "halving_order",
    "downsample",
    "SyntheticVolume",
    "generate_synthetic",
    "extract_roi",
    "ROTATING_EDDY",
    "BASIN_SALINITY",
    "VORTEX_VELOCITY",
    "KINDS",
    "read_block",
    "write_block",
    "block_bytes",
    "block_filename",
    "samples_from_bytes",
]
