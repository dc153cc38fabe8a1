"""gad-studio: keyframe animation production for time-varying volumetric data."""

__version__ = "0.1.0"
