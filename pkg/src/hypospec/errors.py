"""Exception types shared across the package.

Every precondition violation raises a dedicated subclass of
:class:`HypospecError` so callers can distinguish bad input from a genuine
bound failure (which is never an exception: check operations *report*,
they do not assert).
"""


class HypospecError(Exception):
    """Base class for all package errors."""


class ValidationError(HypospecError, ValueError):
    """A precondition on user input was violated."""


# -- eigenvalue-sequence and inequality engine -------------------------------

class InsufficientLength(ValidationError):
    """Sequence too short for the requested index k."""


class ZeroGapWithNonpositiveExponent(ValidationError):
    """(lambda_{k+1} - lambda_k) = 0 cannot be raised to a nonpositive power."""


class AdmissibilityViolation(ValidationError):
    """Exponent pair fails alpha**2 <= 2*beta."""


class NegativeDiscriminant(HypospecError):
    """Quadratic bound extraction has no real root."""


class NegativeEntry(ValidationError):
    """Input list must be nonnegative."""


class GammaBelowOne(ValidationError):
    """Power-mean exponent must satisfy gamma >= 1."""


class HypothesisViolation(ValidationError):
    """Anti-monotone pairing hypothesis fails for some index pair."""


class MonotonicityViolation(ValidationError):
    """Input list is not monotone in the required direction."""


class ZeroBaseNegativeExponent(ValidationError):
    """0**e is undefined for e < 0."""


# -- function couples ---------------------------------------------------------

class DomainViolation(ValidationError):
    """Evaluation point lies outside the open interval (0, lambda)."""


class CoincidentPoints(ValidationError):
    """The two-point condition requires x != y."""


# -- geometry and grids -------------------------------------------------------

class MissingDerivatives(ValidationError):
    """Generic level set has neither a gradient callback nor an FD step."""


class EmptyBoundary(HypospecError):
    """No boundary points of {phi = 0} found inside the sampling box."""


class EmptyInterior(HypospecError):
    """No lattice node satisfies phi < 0."""


class InsufficientMargin(ValidationError):
    """Interior nodes sit closer than two spacings to a box face."""


# -- eigensolver --------------------------------------------------------------

class DegenerateGap(ValidationError):
    """lambda_{k+1} = lambda_k: the spectral-gap weights are undefined."""


class MembershipNotVerified(ValidationError):
    """The function couple failed its grid membership check."""


class ZeroVector(ValidationError):
    """Rayleigh quotient of the zero vector is undefined."""
