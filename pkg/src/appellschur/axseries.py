"""Truncated series sum_n B_n(x) F_n with quaternion-matrix coefficients.

B_n is the axial extension of (3 x0)^n (see appell.monomial_values), so the
real-axis restriction of a series is sum_n (3 x0)^n F_n.  Evaluation carries a
rigorous tail bound built from |B_n(x)| <= (3|x|)^n together with a declared
model for the unstored coefficients; the certified evaluation domain is
3 |x| < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .appell import monomial_values
from .errors import DivergentPoint, NotIntrinsic, ShapeMismatch, SingularConstantTerm
from .quatlin import Quaternion, QuatMatrix, as_quaternion, operator_norm

INTRINSIC_TOL = 1e-12


@dataclass(frozen=True)
class Tail:
    """Bound on the unstored coefficients: ||F_k|| <= B ratio^k C(k+power, power).

    B = 0 means the stored list is the whole function ("finite" model);
    power = 0, ratio < 1 is a geometric tail; power > 0 covers the binomial
    growth of half-space coefficient sequences.
    """

    B: float = 0.0
    ratio: float = 1.0
    power: int = 0

    @staticmethod
    def finite():
        return Tail(0.0)

    @staticmethod
    def bounded(B):
        return Tail(float(B))

    @staticmethod
    def geometric(B, ratio):
        return Tail(float(B), float(ratio))

    @staticmethod
    def binomial(B, power, ratio=1.0):
        return Tail(float(B), float(ratio), int(power))

    @property
    def is_finite(self):
        return self.B == 0.0

    def coeff_bound(self, k):
        """Bound on ||F_k|| for an unstored index k."""
        if self.B == 0.0:
            return 0.0
        return self.B * self.ratio ** k * math.comb(k + self.power, self.power)


def _tail_sum(B, w, power, start, extra_factor_power=0):
    """Rigorous upper bound for sum_{k >= start} B w^k C(k+power, power) k^extra.

    extra_factor_power is unused here (kept 0); returns math.inf when the
    ratio never drops below 1.
    """
    if B == 0.0 or start < 0:
        return 0.0
    if w >= 1.0:
        return math.inf
    if power == 0:
        return B * w ** start / (1.0 - w)
    k = start
    binom = float(math.comb(k + power, power))
    term = B * (w ** k) * binom
    total = 0.0
    for _ in range(100000):
        ratio = w * (k + 1 + power) / (k + 1)
        if ratio < 1.0:
            rem = term * ratio / (1.0 - ratio)
            if rem <= 1e-16 * (total + term) + 1e-300:
                return total + term + rem
            if ratio < 0.5:
                return total + term + rem
        total += term
        k += 1
        term *= w * (k + power) / k
    return math.inf


class AxialSeries:
    """Coefficient sequence (F_0 .. F_N) of a function of axial type."""

    __slots__ = ("coeffs", "rows", "cols", "tail", "_stored_bound")

    def __init__(self, coeffs, tail=None):
        coeffs = [self._lift(c) for c in coeffs]
        if not coeffs:
            coeffs = [QuatMatrix.zeros(1, 1)]
        shape = coeffs[0].shape
        for c in coeffs:
            if c.shape != shape:
                raise ShapeMismatch("all coefficients must share one shape")
        self.coeffs = tuple(coeffs)
        self.rows, self.cols = shape
        self.tail = tail if tail is not None else Tail.finite()
        self._stored_bound = None

    @staticmethod
    def _lift(c):
        if isinstance(c, QuatMatrix):
            return c
        return QuatMatrix.from_entries([[as_quaternion(c)]])

    @staticmethod
    def zero(rows=1, cols=1, length=1):
        return AxialSeries([QuatMatrix.zeros(rows, cols) for _ in range(length)])

    @staticmethod
    def basis(n, rows=1, length=None):
        """The unit-impulse sequence delta_n (an identity block at index n)."""
        length = (n + 1) if length is None else length
        coeffs = [QuatMatrix.zeros(rows, rows) for _ in range(max(length, n + 1))]
        coeffs[n] = QuatMatrix.identity(rows)
        return AxialSeries(coeffs)

    @staticmethod
    def from_scalars(values, tail=None):
        return AxialSeries([QuatMatrix.from_entries([[as_quaternion(v)]]) for v in values],
                           tail=tail)

    def __len__(self):
        return len(self.coeffs)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def shape(self):
        return (self.rows, self.cols)

    def coeff_norms(self):
        return [operator_norm(c) for c in self.coeffs]

    @property
    def coeff_bound(self):
        if self._stored_bound is None:
            stored = max(self.coeff_norms(), default=0.0)
            self._stored_bound = max(stored, 0.0 if self.tail.is_finite else self.tail.B)
        return self._stored_bound

    def scalar_coeffs(self):
        """Coefficients as quaternions (1x1 series only)."""
        if self.shape != (1, 1):
            raise ShapeMismatch("scalar coefficient access on a %s series" % (self.shape,))
        return [c.entry(0, 0) for c in self.coeffs]

    def real_restriction_value(self, x0):
        """sum_n (3 x0)^n F_n over the stored coefficients."""
        t = 3.0 * float(x0)
        acc = QuatMatrix.zeros(self.rows, self.cols)
        tp = 1.0
        for c in self.coeffs:
            acc = acc + c * tp
            tp *= t
        return acc

    def weighted_norm_sum(self, u, start=0):
        """Upper bound for sum_{k >= start} ||F_k|| u^k, tail model included."""
        total = 0.0
        up = u ** start if start else 1.0
        for k in range(start, len(self.coeffs)):
            total += operator_norm(self.coeffs[k]) * up
            up *= u
        total += _tail_sum(self.tail.B, u * self.tail.ratio, self.tail.power,
                           max(start, len(self.coeffs)))
        return total

    def __repr__(self):
        return "AxialSeries(%dx%d, %d coeffs, tail=%r)" % (
            self.rows, self.cols, len(self.coeffs), self.tail)


class Ellipsoid:
    """Membership predicate for {9 x0^2 + x1^2 + x2^2 + x3^2 < 1}."""

    def contains(self, x):
        x = as_quaternion(x)
        return 9.0 * x.x0 ** 2 + x.x1 ** 2 + x.x2 ** 2 + x.x3 ** 2 < 1.0


ELLIPSOID = Ellipsoid()


def certified(x):
    """True when series evaluation at x carries a convergent tail bound."""
    return 3.0 * as_quaternion(x).norm() < 1.0


def evaluate(f, x, n_terms=None):
    """Evaluate the series at x; returns (value, tail_bound).

    n_terms limits the partial sum to coefficients F_0..F_{n_terms}; the
    bound covers both the dropped stored coefficients and the tail model.
    Raises DivergentPoint when 3|x| >= 1, where the bound cannot certify
    convergence.
    """
    x = as_quaternion(x)
    u = 3.0 * x.norm()
    if u >= 1.0:
        raise DivergentPoint("3|x| = %.6f >= 1; evaluation not certified" % u)
    n_stored = len(f.coeffs) - 1
    cut = n_stored if n_terms is None else min(int(n_terms), n_stored)
    basis = monomial_values(cut, x)
    acc = QuatMatrix.zeros(f.rows, f.cols)
    for n in range(cut + 1):
        acc = acc + f.coeffs[n].scale_left(basis[n])
    bound = 0.0
    up = u ** (cut + 1)
    for k in range(cut + 1, n_stored + 1):
        bound += operator_norm(f.coeffs[k]) * up
        up *= u
    bound += _tail_sum(f.tail.B, u * f.tail.ratio, f.tail.power,
                       max(cut + 1, n_stored + 1))
    return acc, bound


def shift_product(n, f):
    """Coefficient sequence of the degree-n shift: n leading zero blocks."""
    if n < 0:
        raise ValueError("shift must be nonnegative")
    if n == 0:
        return f
    zeros = [QuatMatrix.zeros(f.rows, f.cols) for _ in range(n)]
    tail = f.tail
    if not tail.is_finite and tail.ratio < 1.0:
        tail = Tail(tail.B / tail.ratio ** n, tail.ratio, tail.power)
    return AxialSeries(zeros + list(f.coeffs), tail=tail)


def _intrinsic_scalars(f, tol=INTRINSIC_TOL):
    """Real scalars alpha_k with F_k = alpha_k I, or raise NotIntrinsic."""
    if f.rows != f.cols:
        raise NotIntrinsic("intrinsic series must be square or scalar")
    out = []
    scale = max(1.0, f.coeff_bound)
    for k, c in enumerate(f.coeffs):
        alpha = sum(c.entry(i, i).x0 for i in range(f.rows)) / f.rows
        resid = operator_norm(c - QuatMatrix.identity(f.rows) * alpha)
        if resid > tol * scale:
            raise NotIntrinsic(
                "coefficient %d deviates from a real multiple of I by %.3e" % (k, resid))
        out.append(alpha)
    return out


def is_intrinsic(f, tol=INTRINSIC_TOL):
    """True when every coefficient is a real multiple of the identity."""
    try:
        _intrinsic_scalars(f, tol=tol)
    except NotIntrinsic:
        return False
    return True


def intrinsic_product(f, g):
    """Convolution product (intrinsic f) * g on coefficient sequences.

    Only intrinsic series multiply inside the span of the basis; a general
    left factor would leave it, so it is rejected.  Both inputs must carry
    finite tails (the product of modeled tails is not tracked).
    """
    alphas = _intrinsic_scalars(f)
    if f.rows not in (1, g.rows):
        raise ShapeMismatch("intrinsic factor must be scalar or match g")
    if not (f.tail.is_finite and g.tail.is_finite):
        raise ValueError("intrinsic_product requires finite-tail inputs")
    n_out = len(alphas) + len(g.coeffs) - 1
    out = []
    for n in range(n_out):
        acc = QuatMatrix.zeros(g.rows, g.cols)
        for k, a in enumerate(alphas):
            if 0 <= n - k < len(g.coeffs) and a != 0.0:
                acc = acc + g.coeffs[n - k] * a
        out.append(acc)
    return AxialSeries(out)


def intrinsic_inverse(f, n_terms):
    """Truncated convolution inverse of an intrinsic series."""
    alphas = _intrinsic_scalars(f)
    if abs(alphas[0]) < 1e-10:
        raise SingularConstantTerm("constant term %.3e too small" % abs(alphas[0]))
    inv = [1.0 / alphas[0]]
    for n in range(1, n_terms + 1):
        s = 0.0
        for k in range(1, min(n, len(alphas) - 1) + 1):
            s += alphas[k] * inv[n - k]
        inv.append(-s / alphas[0])
    ident = QuatMatrix.identity(f.rows)
    return AxialSeries([ident * a for a in inv])


def multiplier_action(S, u):
    """Coefficient action of the multiplier S: h_k = sum_j S_{k-j} u_j.

    The product order is S then u, the order forced by expanding
    sum_n sum_m B_{n+m} S_m u_n.
    """
    if isinstance(u, AxialSeries):
        u = list(u.coeffs)
    u = [AxialSeries._lift(c) for c in u]
    if not u:
        return []
    if S.cols != u[0].rows:
        raise ShapeMismatch("multiplier is %s but input blocks are %s"
                            % (S.shape, u[0].shape))
    n_out = len(S.coeffs) + len(u) - 1
    out = []
    for k in range(n_out):
        acc = QuatMatrix.zeros(S.rows, u[0].cols)
        for j in range(len(u)):
            if 0 <= k - j < len(S.coeffs):
                acc = acc + S.coeffs[k - j] @ u[j]
        out.append(acc)
    return out


def backward_shift(f):
    """Drop the leading coefficient: (F_0, F_1, ...) -> (F_1, F_2, ...)."""
    if len(f.coeffs) <= 1:
        return AxialSeries([QuatMatrix.zeros(f.rows, f.cols)], tail=f.tail)
    tail = f.tail
    if not tail.is_finite and tail.ratio < 1.0:
        tail = Tail(tail.B * tail.ratio, tail.ratio, tail.power)
    return AxialSeries(list(f.coeffs[1:]), tail=tail)


def check_representation_formula(f, u, v, I_x, J):
    """Residual of the two-point slice representation of an axial function.

    Compares f(u + I_x v) against the combination
    (f(u+Jv) + f(u-Jv))/2 + (I_x J / 2)(f(u-Jv) - f(u+Jv));
    returns (residual, summed tail bound of the three evaluations).
    """
    I_x = as_quaternion(I_x)
    J = as_quaternion(J)
    for unit in (I_x, J):
        if not unit.is_unit_imaginary(tol=1e-9):
            raise ValueError("I_x and J must be unit imaginary quaternions")
    left, b0 = evaluate(f, Quaternion(u) + I_x * v)
    plus, b1 = evaluate(f, Quaternion(u) + J * v)
    minus, b2 = evaluate(f, Quaternion(u) - J * v)
    combo = (plus + minus) * 0.5 + (minus - plus).scale_left(I_x * J * 0.5)
    return operator_norm(left - combo), b0 + b1 + b2
