"""Exception types shared across the package."""


class PulsekitError(Exception):
    """Base class for all pulsekit errors."""


class InvalidInputError(PulsekitError, ValueError):
    """Non-finite, non-square, or otherwise malformed input."""


class PreconditionError(PulsekitError, ValueError):
    """An operation was called outside its documented contract."""


class NumericalFailureError(PulsekitError, ArithmeticError):
    """An iterative kernel failed to converge.

    ``partial`` carries whatever state was reached (for the general
    eigensolver: the partly reduced Hessenberg matrix and the eigenvalues
    already deflated).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotPositiveDefiniteError(PulsekitError, ArithmeticError):
    """Cholesky hit a non-positive pivot."""

    def __init__(self, message, pivot_index=None):
        super().__init__(message)
        self.pivot_index = pivot_index


class NotSymmetrizableError(PulsekitError, ValueError):
    """The symmetrized fast path was requested for a system whose matrix
    has no diagonal symmetrization; use the general path instead."""


class NotApplicableError(PulsekitError, ValueError):
    """A hypothesis of the underlying result fails for this system
    (tied control maxima, singular rate matrix, zero leading eigenvalue)."""


class NoCrossingError(PulsekitError, ArithmeticError):
    """Bracket expansion never found a spectral radius above one."""


class NoMinimizerError(PulsekitError, ValueError):
    """The radius map is strictly decreasing; no finite minimizer exists."""


class TrajectoryOverflowError(PulsekitError, ArithmeticError):
    """State blew up past floating-point range during simulation.

    ``last_sample`` is the final finite (t, state) pair reached.
    """

    def __init__(self, message, last_sample=None):
        super().__init__(message)
        self.last_sample = last_sample
