"""Exception hierarchy shared by every module."""


class LatcoverError(Exception):
    """Base class for all library errors."""


class RangeError(LatcoverError, ValueError):
    """A coordinate, axis index or axis value lies outside the ambient box."""


class ShapeMismatchError(LatcoverError, ValueError):
    """Two objects that must live in the same box (or order) do not."""


class CapacityError(LatcoverError):
    """An input exceeds a configured solver or enumeration budget."""


class PreconditionError(LatcoverError, ValueError):
    """An operation was called outside its domain (e.g. non-antichain support)."""


class HypothesisNotMet(LatcoverError):
    """The lower-bound hypothesis of a restriction theorem fails.

    ``computed`` carries the value that was measured against ``required``.
    """

    def __init__(self, message: str, computed: int, required: int):
        super().__init__(message)
        self.computed = computed
        self.required = required
