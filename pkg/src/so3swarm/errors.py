"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain of an operation."""


class CutLocusError(DomainError):
    """Two rotations are at (or numerically too close to) the cut locus.

    Attributes:
        pair: Indices (i, j) of the offending rotations when raised from a
            particle-system operation, else None.
        distance: The offending geodesic distance.
    """

    def __init__(self, message: str, pair=None, distance=None):
        super().__init__(message)
        self.pair = pair
        self.distance = distance


class DegenerateInput(ValueError):
    """A matrix is too far from any rotation to be projected meaningfully."""


class ChartSingularity(RuntimeError):
    """An angle-axis coordinate left the valid chart range during integration."""


class NoConvergence(RuntimeError):
    """An iterative solver exhausted its iteration budget.

    Attributes:
        residual: Norm of the residual at the last iterate.
    """

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class InvalidForSingleParticle(ValueError):
    """Pairwise statistic requested for a single-particle state."""


class SimulationError(RuntimeError):
    """A step of a simulation failed; wraps the cause with the step index.

    Attributes:
        step_index: Index of the failing step.
    """

    def __init__(self, message: str, step_index: int):
        super().__init__(message)
        self.step_index = step_index
