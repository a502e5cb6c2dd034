"""Exception hierarchy shared by all vandal modules."""


class VandalError(Exception):
    """Base class for every error raised by this package."""


class NoPairsError(VandalError, ValueError):
    """A pairwise quantity was requested for a node set with fewer than two nodes."""


class ResourceCapError(VandalError):
    """A configured size cap (node count, explicit-matrix entries) would be exceeded."""


class FeasibilityError(VandalError):
    """A randomized generator could not satisfy its contract within its attempt budget."""


class PreconditionError(VandalError, ValueError):
    """An input violates a mathematical hypothesis required by the operation."""


class ConvergenceError(VandalError):
    """The Hermitian eigensolver failed to converge."""
