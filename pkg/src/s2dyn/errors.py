"""Exception types shared across the package."""


class S2DynError(Exception):
    """Base class for all s2dyn errors."""


class GaugeViolation(S2DynError):
    """A local rotation coordinate is not orthogonal to its base point."""


class NotSymmetric(S2DynError):
    """Inertia matrix is not symmetric."""


class NotPositiveDefinite(S2DynError):
    """Inertia matrix is not positive definite."""


class PotentialSingular(S2DynError):
    """Configuration too close to a singularity of the potential."""


class SingularMass(S2DynError):
    """The assembled 3n x 3n mass-type matrix could not be factored."""


class NoConvergence(S2DynError):
    """Fixed-point solver exhausted its iteration budget.

    Attributes:
        iterations: number of sweeps performed.
        residual: max-norm defect of the implicit system at the last iterate.
    """

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"fixed-point iteration did not converge after {iterations} sweeps "
            f"(residual {residual:.3e})"
        )


class StepTooLarge(S2DynError):
    """Explicit update would rotate past the valid chart; reduce the step size."""


class UnknownPreset(S2DynError):
    """Requested preset name is not in the catalog."""


class ConfigError(S2DynError):
    """Invalid run configuration."""
