"""Exception hierarchy shared by every module."""


class TnnFlagError(Exception):
    """Base class for all library errors."""


class MismatchError(TnnFlagError, ValueError):
    """Operands belong to different semifields or root data."""


class InputError(TnnFlagError, ValueError):
    """Malformed input: non-reduced word, bad index, bad JSON payload."""


class OrderViolation(TnnFlagError, ValueError):
    """A pair (v, w) with v not below w in the Bruhat order."""


class NoBraidError(TnnFlagError, ValueError):
    """Braid move requested for a pair of nodes with m_ij = infinity."""


class UnsupportedFolding(TnnFlagError, ValueError):
    pass


class UnsupportedRealization(TnnFlagError, ValueError):
    """No exact matrix model exists for the requested datum or semifield."""


class NotInImage(TnnFlagError, ValueError):
    """Unfolding an element that is not sigma-fixed."""


class FactorizationError(TnnFlagError, ValueError):
    pass


class NotNonnegative(TnnFlagError, ValueError):
    """A flag outside the semifield points of its cell."""
