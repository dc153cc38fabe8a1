"""Renderer errors."""


class RenderError(Exception):
    """Base class for rendering failures."""


class MissingBlock(RenderError):
    """A data entry points at a block file that does not exist."""


class BackendFailure(RenderError):
    """A rendering backend raised while drawing a frame."""


class InvalidState(RenderError):
    """RenderState cannot be drawn (degenerate camera)."""


class IoFailure(RenderError):
    """Image write failed."""
