"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside an operation's mathematical domain."""


class DegenerateInputError(DomainError):
    """Input is structurally valid but degenerate for the requested operation."""


class ConvergenceError(RuntimeError):
    """An iterative solve failed to reach its target tolerance."""
