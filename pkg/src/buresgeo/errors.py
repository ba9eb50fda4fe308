"""Exception types raised by the toolkit."""


class BuresError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(BuresError):
    """Input violates a declared contract (shape, trace flag, field value)."""


class NotHermitian(ValidationError):
    """Matrix is too far from Hermitian to symmetrize safely."""


class NotPositive(BuresError):
    """Smallest eigenvalue at or below the positivity floor."""


class NoConvergence(BuresError):
    """Iterative eigensolver exhausted its sweep budget."""


class SingularMatrix(BuresError):
    """A matrix inverse required by a curvature route is too ill-conditioned."""


class DegeneratePlane(BuresError):
    """Sectional curvature requested for a nearly linearly dependent pair."""


class StepUnderflow(BuresError):
    """Finite-difference step cannot be shrunk enough to stay in the cone."""


class DenominatorNearZero(BuresError):
    """Closed-form denominator vanishes; the state is nearly rank deficient."""


class WrongDimension(ValidationError):
    """Operation not defined for this matrix size."""


class DegenerateSpectrumWarning(UserWarning):
    """Eigenvalue gap small enough to degrade companion-matrix conditioning."""
