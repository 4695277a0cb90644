"""Exception types shared across the package."""


class InputDomainError(ValueError):
    """A parameter, vector, or matrix is outside the documented input domain."""


class BasisConstructionError(RuntimeError):
    """No admissible zonal point set was found within the resampling budget."""

    def __init__(self, message, best_condition=None):
        super().__init__(message)
        self.best_condition = best_condition


class NotSingularError(RuntimeError):
    """A kernel witness was requested for an operator that is not certifiably singular."""


class NoFixedPointError(RuntimeError):
    """The rotation has no eigenvalue-1 eigenvector within tolerance (possible only in even dimension)."""


class InternalInconsistencyError(RuntimeError):
    """A case that the underlying theory rules out was reached numerically."""
