"""Exception types shared across the package."""


class DiagramError(ValueError):
    """Malformed or inconsistent diagram input."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class HypothesesError(ValueError):
    """An operation's preconditions (connectedness, reducedness, ...) fail."""


class BudgetExceededError(RuntimeError):
    """A bounded search ran out of its node budget; result is unknown, not empty."""


class IntegrityError(AssertionError):
    """Two certified computations disagree; indicates an implementation bug."""
