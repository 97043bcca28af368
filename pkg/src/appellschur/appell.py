"""Appell polynomials Q_m, their normalizations P_m, and the series basis.

Coefficients are exact rationals: T(m, j) = 2(m - j + 1)/((m + 1)(m + 2)) and
c_m is the alternating sum of the T(m, j); floats appear only at evaluation.

Two polynomial families live here.

* ``eval_Q`` / ``eval_P``: the Appell polynomials Q_m(x) = sum_j T(m,j)
  x^(m-j) xbar^j and P_m = Q_m / c_m.  On the slice x0 = 0 these satisfy
  P_m = (x1 e1 + x2 e2 + x3 e3)^m, which is what makes the convolution
  calculus of series work.

* ``axial_monomial``: the unique axially hyperholomorphic extension of the
  real monomial (3 x0)^m, namely 3^m Q_m(x) = Q_m(3x).  This is the basis in
  which truncated series are evaluated: a coefficient sequence (F_n) denotes
  sum_n axial_monomial(n, x) F_n, whose real-axis restriction is
  sum_n (3 x0)^n F_n.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import ShapeMismatch
from .fueter import MultiIndex, zeta_power
from .quatlin import ONE, UNITS, Quaternion, QuatMatrix, as_quaternion


@lru_cache(maxsize=None)
def T_coeffs(m):
    """Exact rational coefficients T(m, 0) .. T(m, m)."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    den = (m + 1) * (m + 2)
    return tuple(Fraction(2 * (m - j + 1), den) for j in range(m + 1))


@lru_cache(maxsize=None)
def c_coeff(m):
    """c_m = sum_j (-1)^j T(m, j), exactly."""
    return sum((-1) ** j * t for j, t in enumerate(T_coeffs(m)))


@lru_cache(maxsize=None)
def _t_float(m):
    return tuple(float(t) for t in T_coeffs(m))


@lru_cache(maxsize=None)
def _c_float(m):
    return float(c_coeff(m))


def _q_values(n_max, y):
    """[Q_0(y), ..., Q_{n_max}(y)] using y^(m-j) ybar^j = y^(m-2j) |y|^(2 min)."""
    y = as_quaternion(y)
    yp = [ONE]
    for _ in range(n_max):
        yp.append(yp[-1] * y)
    r2 = y.norm_sq()
    r2p = [1.0]
    for _ in range(n_max // 2 + 1):
        r2p.append(r2p[-1] * r2)
    out = []
    for m in range(n_max + 1):
        tf = _t_float(m)
        acc = Quaternion()
        for j in range(m + 1):
            e = m - 2 * j
            base = yp[e] if e >= 0 else yp[-e].conjugate()
            acc = acc + base * (tf[j] * r2p[min(j, m - j)])
        out.append(acc)
    return out


def eval_Q(m, x):
    """The m-th Appell polynomial at x."""
    return _q_values(m, x)[m]


def eval_P(m, x):
    """P_m(x) = Q_m(x) / c_m."""
    return eval_Q(m, x) * (1.0 / _c_float(m))


def monomial_values(n_max, x):
    """[B_0(x), ..., B_{n_max}(x)] with B_m the axial extension of (3 x0)^m.

    B_m(x) = 3^m Q_m(x) = Q_m(3x); the bound |B_m(x)| <= (3 |x|)^m underlies
    every series tail estimate.
    """
    x = as_quaternion(x)
    return _q_values(n_max, x * 3.0)


def axial_monomial(m, x):
    return monomial_values(m, x)[m]


def check_product_identity(n, m, x, via_restriction=True):
    """Residual of P_n P_m = P_{n+m} at a point of the slice x0 = 0.

    The product identity for the convolution calculus lives on coefficient
    sequences; pointwise it is exact on x0 = 0 where P_k(x) is a power of
    the vector part.
    """
    x = as_quaternion(x)
    if via_restriction:
        x = Quaternion(0.0, x.x1, x.x2, x.x3)
    lhs = eval_P(n, x) * eval_P(m, x)
    rhs = eval_P(n + m, x)
    return (lhs - rhs).norm()


def check_symmetric_expansion(m, x):
    """Residual of P_m against the symmetric-product expansion.

    Compares P_m(x) with sum over |nu| = m of zeta^nu(x) e^nu m!/nu!, where
    e^nu is the symmetric product of nu1 copies of e1, nu2 of e2, nu3 of e3.
    No ordered power of the units satisfies the identity (cross terms such as
    e1 e2 + e2 e1 must cancel); the symmetrized product does, to machine
    precision, which pins the reading of the expansion.
    """
    import math

    from .fueter import symmetric_product

    x = as_quaternion(x)
    total = Quaternion()
    for n1 in range(m + 1):
        for n2 in range(m - n1 + 1):
            n3 = m - n1 - n2
            nu = MultiIndex(n1, n2, n3)
            zp = zeta_power(nu, x)
            e_pow = symmetric_product([UNITS[0]] * n1 + [UNITS[1]] * n2 + [UNITS[2]] * n3)
            total = total + zp * e_pow * (math.factorial(m) / nu.factorial())
    return (eval_P(m, x) - total).norm()


def extend_axial(real_coeffs):
    """Axial extension of sum_n x0^n a_n as a coefficient sequence (a_n / 3^n).

    Input entries may be Quaternion, scalars, or QuatMatrix; the result is the
    series whose real-axis restriction is the given power series in x0.
    """
    from .axseries import AxialSeries

    coeffs = []
    shape = None
    scale = 1.0
    for a in real_coeffs:
        if not isinstance(a, QuatMatrix):
            a = QuatMatrix.from_entries([[as_quaternion(a)]])
        if shape is None:
            shape = a.shape
        elif a.shape != shape:
            raise ShapeMismatch("coefficients must share a common shape")
        coeffs.append(a * scale)
        scale /= 3.0
    if shape is None:
        shape = (1, 1)
        coeffs = [QuatMatrix.zeros(1, 1)]
    return AxialSeries(coeffs)
