"""Exception types raised by GAD parsing, serialization and interpolation."""


class GadError(Exception):
    """Base class for all GAD document errors."""


class MissingFile(GadError):
    """A header-referenced document or data file does not exist."""


class SchemaViolation(GadError):
    """A document field has the wrong type, shape, or an invalid value.

    Carries the path of the offending field, e.g. ``keyframes[2].camera.up``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class IntegrityViolation(GadError):
    """Cross-reference failure: dangling data index, overlapping frame ranges."""


class InvalidDocument(GadError):
    """Document fails invariant validation before serialization or expansion."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(f"{d.path}: {d.message}" for d in self.diagnostics)
        super().__init__(f"invalid document: {lines}")


class IoFailure(GadError):
    """Filesystem write failed."""


class DegenerateBlend(GadError):
    """Camera blend produced a near-zero or degenerate orientation vector."""


class DomainMismatch(GadError):
    """Transfer functions being blended do not share a domain."""
