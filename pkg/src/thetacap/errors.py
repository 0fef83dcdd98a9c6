"""Shared exception types used across the package."""


class ResourceLimitError(RuntimeError):
    """An input exceeds a configured size or budget cap."""


class SolverFailureError(RuntimeError):
    """The conic solver could not certify a result.

    ``status`` records the solver status string, ``dump`` holds the problem
    instance in the text dump format so the failure can be reproduced offline.
    """

    def __init__(self, message, status=None, dump=None):
        super().__init__(message)
        self.status = status
        self.dump = dump


class GraphExprError(ValueError):
    """Syntax error in a graph expression; ``offset`` is 0-based in the input."""

    def __init__(self, message, offset):
        super().__init__(message)
        self.offset = offset


class NoCounterexampleError(ValueError):
    """The seed matrix is positive semidefinite, so the doubling pipeline
    has no negative witness to amplify."""
