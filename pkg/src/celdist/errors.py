"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested function."""


class BracketError(ValueError):
    """A root bracket does not contain a sign change."""


class ConvergenceError(RuntimeError):
    """An iterative routine failed to meet its tolerance.

    The partial result (if any) is available as ``result`` and the iterate
    history as ``trace``.
    """

    def __init__(self, message, result=None, trace=None):
        super().__init__(message)
        self.result = result
        self.trace = list(trace) if trace is not None else []


class ParseError(ValueError):
    """A dataset file could not be read as one number per line."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class EmptyDatasetError(ParseError):
    """A dataset file holds no observations."""
