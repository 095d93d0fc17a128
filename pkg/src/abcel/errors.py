"""Exception types raised across the package."""


class AbcElError(Exception):
    """Base class for package errors."""


class DimensionError(AbcElError, ValueError):
    """Array shapes or lengths are inconsistent."""


class NonConvergenceError(AbcElError, RuntimeError):
    """The dual Newton iteration stopped without converging on an instance
    that does not look infeasible."""


class NuWeightsError(AbcElError, ValueError):
    """No neighbour weight vector satisfies the bias-cancelling constraints
    for the requested (k, r)."""


class DuplicatePointsError(AbcElError, ValueError):
    """Two or more points coincide, so a nearest-neighbour distance is zero."""


class SingularCovarianceError(AbcElError, ValueError):
    """Sample covariance matrix is singular or not positive definite."""


class SimulationError(AbcElError, RuntimeError):
    """A simulator produced invalid output for the requested parameters."""


class InitializationError(AbcElError, RuntimeError):
    """No feasible starting point for an MCMC chain was found."""
