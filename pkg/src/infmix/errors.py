"""Exception and warning types shared across the package."""


class InfmixError(Exception):
    """Base class for all package errors."""


class DomainError(InfmixError):
    """Argument outside its mathematical domain."""


class BranchBoundary(InfmixError):
    """Point too close to a branch endpoint for a branch-local operation."""


class MaxIterExceeded(InfmixError):
    """Orbit exceeded the iteration cap (heavy-tail excursion).

    Carries ``iterations`` so callers can record censored samples.
    """

    def __init__(self, iterations, msg=None):
        self.iterations = iterations
        super().__init__(msg or f"iteration cap {iterations} exceeded")


class CoverageFailure(InfmixError):
    """Accepted cylinder mass fell below the declared budget."""


class DepthExceeded(InfmixError):
    """Refinement depth exhausted before the scheme was complete."""


class InsufficientTail(InfmixError):
    """Too few samples beyond the fit threshold."""


class InsufficientSignal(InfmixError):
    """Correlation series is noise-dominated in the fit window."""


class InsufficientHits(InfmixError):
    """Too few Monte Carlo points landed in the target set."""


class EmptyBin(InfmixError):
    """A partition bin received no measure mass."""


class NoConvergence(InfmixError):
    """Iterative solver failed to converge within its budget."""

    def __init__(self, iterations, residual=None, msg=None):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            msg or f"no convergence after {iterations} iterations"
            + (f" (residual {residual:.3e})" if residual is not None else "")
        )


class NearSingular(InfmixError):
    """Resolvent requested too close to the renewal pole at s = 0."""


class RootNotBracketed(InfmixError):
    """Root finder could not bracket a sign change."""


class DegenerateRatio(InfmixError):
    """Period ratio undefined because two periods coincide."""


class NonDifferentiableRoof(InfmixError):
    """Operation requires a differentiable roof function."""


class ConfigError(InfmixError):
    """Invalid or missing configuration key."""

    def __init__(self, key, msg):
        self.key = key
        super().__init__(f"{key}: {msg}")


class QuadratureWarning(UserWarning):
    """Tail-truncation estimate of a quadrature exceeded its budget."""


class TruncationNotice(UserWarning):
    """Series terms dropped because their exponents left the valid range."""
