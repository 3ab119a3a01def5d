"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where an operation is defined."""


class ConvergenceError(RuntimeError):
    """An iterative solver failed to reach its tolerance."""


class TruncationNotice(RuntimeError):
    """A forward ladder chain dropped below the admissible floor."""

    def __init__(self, message, chain=None):
        super().__init__(message)
        self.chain = chain


class QuadratureWarning(UserWarning):
    """Doubling the quadrature order moved a result more than allowed."""
