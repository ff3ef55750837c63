"""Exception types shared across the package."""


class ArgumentError(ValueError):
    """Caller supplied an invalid argument or a malformed table."""


class CapExceeded(ArgumentError):
    """A requested run would exceed a configured resource cap."""


class InternalError(RuntimeError):
    """An internal consistency check failed (indicates a bug, not bad input)."""


class DominanceViolation(InternalError):
    """Time-shared EAF fell below joint decoding or plain EAF on some instance."""
