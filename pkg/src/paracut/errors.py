"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """Raised when an input file cannot be parsed (carries a line number)."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ValidationError(ValueError):
    """Raised when parsed input violates a structural requirement."""


class DegenerateInputError(ValueError):
    """Raised when a problem instance admits no meaningful ratio (e.g. no edges)."""


class ContractViolationError(RuntimeError):
    """Raised when a warm-start update breaks the declared monotone direction."""


class CapacityOverflowError(OverflowError):
    """Raised when scaled capacities would exceed the solver's integer budget.

    Reduce edge/node weight magnitudes (or pre-scale the input) to proceed.
    """
