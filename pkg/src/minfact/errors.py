"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class FactorizationError(ValueError):
    """Malformed or invalid transposition sequence."""


class CrossingChordsError(FactorizationError):
    """The circular drawing of a factorization tree has crossing chords."""


class CapacityError(ValueError):
    """More labels requested than the tree can hold."""


class LabellingError(RuntimeError):
    """A labelling walk tried to relabel an already labelled vertex."""


class UnresolvedLabelError(LookupError):
    """A label needed by the caller has not been assigned yet."""


class ResourceError(RuntimeError):
    """A size cap or step budget was exceeded."""


class BudgetExceeded(ResourceError):
    """Step budget exhausted; ``partial`` carries whatever was built so far."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
