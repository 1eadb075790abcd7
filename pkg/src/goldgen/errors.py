"""Exception hierarchy shared across the package."""


class GoldgenError(Exception):
    """Base class for all numerical / structural failures."""


class DegenerateZeros(GoldgenError):
    """Two zeros (or positions) closer than the separation tolerance."""


class RootSolveFailed(GoldgenError):
    """Simultaneous root iteration did not converge within the sweep budget."""


class CollisionError(GoldgenError):
    """Particles approached closer than sep_tol during dynamics.

    `level` (when set) identifies the recursion level of a generation model
    at which the near-collision occurred (0 = outermost coordinates).
    """

    def __init__(self, msg, level=None):
        super().__init__(msg)
        self.level = level


class StepSizeUnderflow(GoldgenError):
    """Adaptive integrator step size fell below the representable minimum."""


class TreeBudgetExceeded(GoldgenError):
    """Requested generation tree exceeds the configured node budget."""


class TrackingAmbiguity(GoldgenError):
    """Continuity tracking of zero paths is not well-posed on this grid."""


class NoPeriodFound(GoldgenError):
    """No period multiple p <= p_max matched within tolerance."""


class DegenerateModes(GoldgenError):
    """Confluent characteristic roots in a closed-form two-mode solution."""
