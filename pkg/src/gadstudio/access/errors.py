"""Errors raised by remote block access and the animation cache."""


class AccessError(Exception):
    """Base class for data-access failures."""


class NotFound(AccessError):
    """Unknown dataset or field."""


class RangeError(AccessError):
    """Requested box, timestep, or quality outside the dataset bounds."""


class Transport(AccessError):
    """Network failure that survived the retry budget."""


class CacheCorrupt(AccessError):
    """Cache index referenced files that no longer exist."""
