"""Exception hierarchy shared by every module."""


class RevBlocksError(Exception):
    """Base class for library errors."""


class WidthMismatch(RevBlocksError, ValueError):
    """Two permutations of different bit widths were combined."""


class NotConcurrent(RevBlocksError, ValueError):
    """An operation needing a concurrent (or controlled) input got something else."""


class PreconditionError(RevBlocksError, ValueError):
    """Input violates a documented precondition (width, parity, dimensions)."""


class ParseError(RevBlocksError, ValueError):
    """Malformed permutation text."""
