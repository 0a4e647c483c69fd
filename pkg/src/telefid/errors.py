"""Exception types shared across the package."""


class TelefidError(Exception):
    """Base class for all package errors."""


class CutoffTooSmall(TelefidError):
    """Fock cutoff below the minimum needed to represent the operation."""


class TailTooLarge(TelefidError):
    """Truncation tail of a Fock-space state exceeds the allowed tolerance."""


class ModeIndexOutOfRange(TelefidError):
    """A mode index does not exist in the given multimode state."""


class BranchCountUnsupported(TelefidError):
    """Branch count outside the range the brute-force network can simulate."""


class GridResolutionInsufficient(TelefidError):
    """Phase-space grid refinement left an error estimate above tolerance."""


class QuadratureNotConverged(TelefidError):
    """Adaptive quadrature exhausted its refinements above tolerance."""


class ConstraintUnreachable(TelefidError):
    """No squeezing value satisfies the requested resource constraint."""


class SingularCovariance(TelefidError):
    """The quadratic form of a Gaussian integral degenerated."""


class DivisionByZeroSuccess(TelefidError):
    """Resource accounting requested with zero mean success probability."""
