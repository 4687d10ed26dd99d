"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the range an operation is defined on."""


class ConvergenceError(RuntimeError):
    """An iterative solve did not reach its tolerance.

    ``best`` holds the best iterate seen, ``residual`` its residual norm.
    """

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual
