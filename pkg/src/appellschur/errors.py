"""Exception types shared across the package."""


class AppellSchurError(Exception):
    """Base class for all library-specific errors."""


class SymmetryViolation(AppellSchurError):
    """Complex matrix is not in the range of the quaternion embedding."""


class NotHermitian(AppellSchurError):
    """Matrix expected to be Hermitian is not, within tolerance."""


class ConvergenceError(AppellSchurError):
    """An iterative numeric kernel failed to converge."""


class TooManyFactors(AppellSchurError):
    """Symmetric product requested with more factors than supported."""


class DivergentPoint(AppellSchurError):
    """Series evaluation requested outside the certified domain."""


class NotIntrinsic(AppellSchurError):
    """Series expected to have real scalar coefficients does not."""


class SingularConstantTerm(AppellSchurError):
    """Power-series inversion with (near) zero constant term."""


class ShapeMismatch(AppellSchurError):
    """Incompatible matrix or series shapes."""


class DivisionByT(AppellSchurError):
    """Division by the real variable t left a nonzero constant term."""


class NonContractiveIterate(AppellSchurError):
    """A Schur-algorithm iterate failed the contraction test."""


class SingularResolvent(AppellSchurError):
    """I - tT (or I - wA) is numerically singular at the requested point."""


class SingularH(AppellSchurError):
    """Constant term of a rational realization is not invertible."""


class NonDecayingState(AppellSchurError):
    """State transition tail bound too weak to certify an isometry check."""


class GramSingular(AppellSchurError):
    """Sample points too close; Gram data numerically degenerate."""


class NotUnitary(AppellSchurError):
    """Matrix expected to be unitary is not, within tolerance."""


class SingularCayley(AppellSchurError):
    """I + S is numerically singular; Cayley transform undefined."""


class NotPositive(AppellSchurError):
    """Matrix expected to be positive (semi)definite is not."""
