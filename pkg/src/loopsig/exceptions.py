"""Exception types shared across the package."""


class LoopsigError(Exception):
    """Base class for all errors raised by loopsig."""


class ShapeError(LoopsigError, ValueError):
    """Operands disagree on alphabet size, truncation depth or dimension."""


class DomainError(LoopsigError, ValueError):
    """An argument lies outside the domain of the operation."""


class DepthError(LoopsigError, ValueError):
    """A word is longer than the truncation depth of the series."""


class CompositionError(LoopsigError, ValueError):
    """Two paths cannot be concatenated because their endpoints differ."""


class ResourceCapError(LoopsigError, MemoryError):
    """A dense series would exceed the configured coefficient cap."""
