"""Schur multipliers, their kernels, and the Schur algorithm on real restrictions.

A series S = sum_n B_n S_n is a Schur multiplier exactly when its lower
triangular block Toeplitz operator is a contraction; the finite-section test
is the computational form of that criterion.  The Schur algorithm runs on the
restriction to the real axis, a power series in t = 3 x0 with quaternion
(matrix) coefficients; t is real and central, so series arithmetic is plain
convolution with the quaternion order preserved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .appell import monomial_values
from .axseries import AxialSeries
from .errors import (
    DivergentPoint,
    DivisionByT,
    NonContractiveIterate,
    ShapeMismatch,
)
from .quatlin import (
    Quaternion,
    QuatMatrix,
    as_quaternion,
    hermitian_sqrt,
    inverse,
    operator_norm,
)
from .toeplitz import CONTRACTION_TOL, N_MAX_DEFAULT, is_contraction

STOP_TOL = 1e-12

STOP_STEPS = "steps"
STOP_UNIMODULAR = "unimodular"
STOP_EXHAUSTED = "exhausted"


# ---------------------------------------------------------------------------
# Multiplier verification and kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchurMultiplier:
    series: AxialSeries
    verified_to: int
    slack: float


@dataclass(frozen=True)
class SchurVerdict:
    accepted: bool
    section_norm: float
    n_checked: int
    multiplier: SchurMultiplier | None = None
    violated_at: int | None = None

    def __bool__(self):
        return self.accepted


def verify_schur(f, n_blocks=N_MAX_DEFAULT, tol=CONTRACTION_TOL):
    """Toeplitz-section contraction test wrapping f as a SchurMultiplier."""
    verdict = is_contraction(list(f.coeffs), n_max=n_blocks, tol=tol)
    if verdict.is_contraction:
        mult = SchurMultiplier(f, n_blocks, 1.0 - verdict.norm)
        return SchurVerdict(True, verdict.norm, n_blocks, multiplier=mult)
    return SchurVerdict(False, verdict.norm, n_blocks, violated_at=verdict.violated_at)


def hardy_kernel(x, y, n_terms=N_MAX_DEFAULT):
    """(k(x, y), tail bound) for the Hardy kernel sum_n B_n(x) conj(B_n(y)).

    Real restriction: 1 / (1 - 9 x0 y0).
    """
    x = as_quaternion(x)
    y = as_quaternion(y)
    u, v = 3.0 * x.norm(), 3.0 * y.norm()
    if u >= 1.0 or v >= 1.0 or u * v >= 1.0:
        raise DivergentPoint("kernel not certified at |3x| = %.3f, |3y| = %.3f" % (u, v))
    bx = monomial_values(n_terms, x)
    by = monomial_values(n_terms, y)
    acc = Quaternion()
    for n in range(n_terms + 1):
        acc = acc + bx[n] * by[n].conjugate()
    tail = (u * v) ** (n_terms + 1) / (1.0 - u * v)
    return QuatMatrix.from_entries([[acc]]), tail


def _shift_values(series, basis, n_max):
    """A_n(x) = sum_m B_{n+m}(x) S_m for n = 0..n_max, from basis values."""
    coeffs = series.coeffs
    out = []
    for n in range(n_max + 1):
        acc = QuatMatrix.zeros(series.rows, series.cols)
        for m, c in enumerate(coeffs):
            acc = acc + c.scale_left(basis[n + m])
        out.append(acc)
    return out


def kernel_K_S(S, x, y, n_terms=N_MAX_DEFAULT):
    """(K_S(x, y), bound): the contractive-multiplier kernel.

    K_S = sum_n [ B_n(x) conj(B_n(y)) I - A_n(x) A_n(y)^* ] with
    A_n = shift of S by n; the bound covers the dropped n > n_terms terms
    and any modeled coefficient tail of S.
    """
    series = S.series if isinstance(S, SchurMultiplier) else S
    x = as_quaternion(x)
    y = as_quaternion(y)
    u, v = 3.0 * x.norm(), 3.0 * y.norm()
    if u >= 1.0 or v >= 1.0:
        raise DivergentPoint("kernel not certified at |3x| = %.3f, |3y| = %.3f" % (u, v))
    deg = len(series.coeffs) - 1
    bx = monomial_values(n_terms + deg, x)
    by = monomial_values(n_terms + deg, y)
    ax = _shift_values(series, bx, n_terms)
    ay = _shift_values(series, by, n_terms)
    r = series.rows
    acc = QuatMatrix.zeros(r, r)
    eye = QuatMatrix.identity(r)
    for n in range(n_terms + 1):
        acc = acc + eye.scale_left(bx[n] * by[n].conjugate()) - ax[n] @ ay[n].H
    # weighted coefficient sums W(u) >= sum ||S_m|| u^m (tail model included)
    wx = series.weighted_norm_sum(u)
    wy = series.weighted_norm_sum(v)
    uv = u * v
    tail = (1.0 + wx * wy) * uv ** (n_terms + 1) / (1.0 - uv) if uv < 1.0 else math.inf
    # unstored coefficients of S enter every A_n; finite tails contribute 0
    if not series.tail.is_finite:
        tx = series.weighted_norm_sum(u, start=len(series.coeffs))
        ty = series.weighted_norm_sum(v, start=len(series.coeffs))
        geom = sum((uv) ** n for n in range(n_terms + 1))
        tail += geom * (tx * wy + ty * wx + tx * ty)
    return acc, tail


def gram_matrix(kernel, points, directions=None):
    """Hermitian block Gram matrix ((K(x_i, x_j))) and summed entry bounds.

    kernel(x, y) must return (QuatMatrix, bound).  With directions u_i, the
    entries are compressed to u_i^* K(x_i, x_j) u_j.
    """
    from .quatlin import block

    n = len(points)
    grid = [[None] * n for _ in range(n)]
    total_bound = 0.0
    for i in range(n):
        for j in range(i, n):
            K, b = kernel(points[i], points[j])
            if directions is not None:
                K = directions[i].H @ K @ directions[j]
            total_bound += b if i == j else 2.0 * b
            grid[i][j] = K
            if i != j:
                grid[j][i] = K.H
            else:
                grid[i][i] = (K + K.H) * 0.5
    return block(grid), total_bound


# ---------------------------------------------------------------------------
# Real-axis power series
# ---------------------------------------------------------------------------

class RealPowerSeries:
    """Truncated power series in the real variable t = 3 x0.

    Coefficients are quaternion matrices; arithmetic is coefficient
    convolution preserving the quaternion order.
    """

    __slots__ = ("coeffs", "rows", "cols")

    def __init__(self, coeffs):
        coeffs = [AxialSeries._lift(c) for c in coeffs]
        if not coeffs:
            coeffs = [QuatMatrix.zeros(1, 1)]
        shape = coeffs[0].shape
        for c in coeffs:
            if c.shape != shape:
                raise ShapeMismatch("all coefficients must share one shape")
        self.coeffs = list(coeffs)
        self.rows, self.cols = shape

    @staticmethod
    def from_axial(f):
        return RealPowerSeries(list(f.coeffs))

    def to_axial(self):
        return AxialSeries(list(self.coeffs))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def value(self, t):
        acc = QuatMatrix.zeros(self.rows, self.cols)
        for c in reversed(self.coeffs):
            acc = acc * float(t) + c
        return acc

    def __len__(self):
        return len(self.coeffs)


def _series_mul(a, b, length):
    """Convolution of quaternion-matrix coefficient lists, a then b."""
    if not a or not b:
        return []
    rows, cols = a[0].rows, b[0].cols
    out = []
    for n in range(length):
        acc = QuatMatrix.zeros(rows, cols)
        for k in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1):
            acc = acc + a[k] @ b[n - k]
        out.append(acc)
    return out


def _series_inv(g, length):
    """Inverse of a coefficient list with invertible constant term."""
    g0inv = inverse(g[0])
    out = [g0inv]
    for n in range(1, length):
        acc = QuatMatrix.zeros(g[0].rows, g[0].cols)
        for k in range(1, min(n, len(g) - 1) + 1):
            acc = acc + g[k] @ out[n - k]
        out.append(-(g0inv @ acc))
    return out


def _drop_constant_and_divide(coeffs, scale_norm):
    """(S - S(0)) / t on coefficient lists, guarding the constant term."""
    resid = operator_norm(coeffs[0]) if coeffs else 0.0
    if resid > 1e-12 * max(1.0, scale_norm):
        raise DivisionByT("constant term %.3e after subtraction" % resid)
    return list(coeffs[1:])


@dataclass
class SchurParameters:
    """Output of the Schur algorithm: the parameters and why it stopped."""

    parameters: list
    stop: str = STOP_STEPS
    norms: list = field(default_factory=list)


def _check_iterate(coeffs, tol):
    if not coeffs:
        return
    verdict = is_contraction(coeffs, n_max=len(coeffs), tol=tol)
    if not verdict.is_contraction:
        raise NonContractiveIterate(
            "iterate section norm %.6f at %d blocks" % (verdict.norm, verdict.n_checked))


def schur_algorithm_scalar(S, steps, tol=CONTRACTION_TOL, stop_tol=STOP_TOL,
                           check_iterates=True):
    """Schur algorithm for a scalar quaternion power series in t = 3 x0.

    Each step computes rho = S(0) and the next iterate
    (S - rho)(1 - conj(rho) S)^{-1} / t over the quaternions; t is real and
    central, so no complex embedding is needed.  Stops at the step count, at
    a unimodular parameter (|rho| >= 1 - stop_tol), or when the stored
    coefficients are exhausted (iterate identically zero).
    """
    if isinstance(S, RealPowerSeries):
        if S.shape != (1, 1):
            raise ShapeMismatch("scalar algorithm needs a 1x1 series")
        cur = [c.entry(0, 0) for c in S.coeffs]
    elif isinstance(S, AxialSeries):
        cur = S.scalar_coeffs()
    else:
        cur = [as_quaternion(c) for c in S]
    scale = max([c.norm() for c in cur], default=0.0)
    params = []
    for _ in range(int(steps)):
        rho = cur[0] if cur else Quaternion()
        params.append(rho)
        if rho.norm() > 1.0 + tol:
            raise NonContractiveIterate("parameter modulus %.6f" % rho.norm())
        if rho.norm() >= 1.0 - stop_tol:
            return SchurParameters(params, stop=STOP_UNIMODULAR)
        if not cur or all(c.norm() == 0.0 for c in cur):
            cur = []
            continue
        num = [cur[0] - rho] + cur[1:]
        num = _q_drop_divide(num, scale)
        den = [Quaternion(1.0) - rho.conjugate() * cur[0]] + \
              [Quaternion() - rho.conjugate() * c for c in cur[1:]]
        length = len(num)
        if length == 0:
            cur = []
            continue
        deninv = _q_series_inv(den, length)
        cur = _q_series_mul(num, deninv, length)
        if check_iterates and cur:
            _check_iterate([QuatMatrix.from_entries([[c]]) for c in cur], tol)
    if not cur or all(c.norm() == 0.0 for c in cur):
        return SchurParameters(params, stop=STOP_EXHAUSTED)
    return SchurParameters(params, stop=STOP_STEPS)


def _q_drop_divide(coeffs, scale):
    resid = coeffs[0].norm()
    if resid > 1e-12 * max(1.0, scale):
        raise DivisionByT("constant term %.3e after subtraction" % resid)
    return list(coeffs[1:])


def _q_series_mul(a, b, length):
    out = []
    for n in range(length):
        acc = Quaternion()
        for k in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1):
            acc = acc + a[k] * b[n - k]
        out.append(acc)
    return out


def _q_series_inv(g, length):
    g0inv = g[0].inverse()
    out = [g0inv]
    for n in range(1, length):
        acc = Quaternion()
        for k in range(1, min(n, len(g) - 1) + 1):
            acc = acc + g[k] * out[n - k]
        out.append(-(g0inv * acc))
    return out


def schur_algorithm_matrix(S, steps, tol=CONTRACTION_TOL, stop_tol=STOP_TOL,
                           check_iterates=True):
    """Matricial Schur algorithm with Hermitian square-root normalizations.

    Iterate: (I - S0 S0*)^{-1/2} (S - S0) (I - S0* S)^{-1} (I - S0* S0)^{1/2}
    divided by t.  Square roots are taken through the complex embedding
    (functions of Hermitian matrices stay in its range; the pull-back asserts
    the symmetry).  A constant block with ||S0|| >= 1 - stop_tol terminates
    normally with the "unimodular" stop marker.  The 1x1 case delegates to
    the scalar algorithm.
    """
    if isinstance(S, AxialSeries):
        S = RealPowerSeries(list(S.coeffs))
    if not isinstance(S, RealPowerSeries):
        S = RealPowerSeries(list(S))
    if S.shape == (1, 1):
        scal = schur_algorithm_scalar(S, steps, tol=tol, stop_tol=stop_tol,
                                      check_iterates=check_iterates)
        return SchurParameters(
            [QuatMatrix.from_entries([[p]]) for p in scal.parameters],
            stop=scal.stop)
    r, t_cols = S.shape
    cur = list(S.coeffs)
    scale = max([operator_norm(c) for c in cur], default=0.0)
    eye_r = QuatMatrix.identity(r)
    eye_t = QuatMatrix.identity(t_cols)
    params = []
    for _ in range(int(steps)):
        S0 = cur[0] if cur else QuatMatrix.zeros(r, t_cols)
        params.append(S0)
        n0 = operator_norm(S0)
        if n0 > 1.0 + tol:
            raise NonContractiveIterate("constant block norm %.6f" % n0)
        if n0 >= 1.0 - stop_tol:
            return SchurParameters(params, stop=STOP_UNIMODULAR)
        if not cur or all(operator_norm(c) == 0.0 for c in cur):
            cur = []
            continue
        left = hermitian_sqrt(eye_r - S0 @ S0.H, inverse=True)
        right = hermitian_sqrt(eye_t - S0.H @ S0)
        num = [cur[0] - S0] + cur[1:]
        num = _drop_constant_and_divide(num, scale)
        length = len(num)
        if length == 0:
            cur = []
            continue
        den = [eye_t - S0.H @ cur[0]] + [-(S0.H @ c) for c in cur[1:]]
        deninv = _series_inv(den, length)
        mid = _series_mul(num, deninv, length)
        cur = [left @ c @ right for c in mid]
        if check_iterates and cur:
            _check_iterate(cur, tol)
    if not cur or all(operator_norm(c) == 0.0 for c in cur):
        return SchurParameters(params, stop=STOP_EXHAUSTED)
    return SchurParameters(params, stop=STOP_STEPS)
