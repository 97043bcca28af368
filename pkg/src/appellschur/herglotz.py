"""Herglotz multipliers: generation from an isometry pair and positivity tests.

A finite-dimensional isometry V (hence unitary) and an output map C generate
the coefficients Phi_0 = a + C C* (a skew), Phi_n = 2 C V*^n C*.  Positivity
of the kernel is equivalent to positivity of the Hermitian Toeplitz sections
built with the half convention: (Phi_0 + Phi_0*)/2 on the diagonal and
Phi_k / 2 off it.  (Re-expanding the kernel produces exactly these entries;
dropping the half would misclassify the classical V = C = 1 example.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .appell import monomial_values
from .axseries import AxialSeries, Tail
from .errors import DivergentPoint, NotUnitary, ShapeMismatch
from .quatlin import QuatMatrix, as_quaternion, operator_norm
from .toeplitz import CONTRACTION_TOL, ToeplitzSection, hermitian_psd

UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class HerglotzGenerator:
    """Isometry pair (V, C) with an optional skew constant part a."""

    V: QuatMatrix
    C: QuatMatrix
    a: QuatMatrix | None = None

    def __post_init__(self):
        if self.V.rows != self.V.cols:
            raise ShapeMismatch("V must be square")
        if self.C.cols != self.V.rows:
            raise ShapeMismatch("C must map the space of V")
        if self.a is not None:
            r = self.C.rows
            if self.a.shape != (r, r):
                raise ShapeMismatch("skew part must be out_dim x out_dim")

    @property
    def out_dim(self):
        return self.C.rows

    def skew(self):
        if self.a is None:
            return QuatMatrix.zeros(self.out_dim, self.out_dim)
        return self.a


def herglotz_coefficients(G, n_terms):
    """Series coefficients (a + CC*, 2 C V* C*, 2 C V*^2 C*, ...).

    The coefficients do not decay; the tail model is the uniform bound
    2 ||C||^2.
    """
    resid = operator_norm(G.V.H @ G.V - QuatMatrix.identity(G.V.rows))
    if resid > UNITARY_TOL:
        raise NotUnitary("V*V - I residual %.3e" % resid)
    a = G.skew()
    skew_resid = operator_norm(a + a.H)
    if skew_resid > UNITARY_TOL * max(1.0, operator_norm(a)):
        raise ShapeMismatch("a must be skew (a* = -a); residual %.3e" % skew_resid)
    CH = G.C.H
    coeffs = [a + G.C @ CH]
    power = CH
    for _ in range(int(n_terms)):
        power = G.V.H @ power
        coeffs.append((G.C @ power) * 2.0)
    bound = 2.0 * operator_norm(G.C) ** 2
    return AxialSeries(coeffs, tail=Tail.bounded(max(bound, 1e-300)))


def hermitian_section(coeffs, n_blocks):
    """Hermitian Toeplitz section with the half convention on the symbols."""
    if isinstance(coeffs, AxialSeries):
        coeffs = list(coeffs.coeffs)
    return ToeplitzSection.hermitian(coeffs, n_blocks)


def verify_herglotz(coeffs, n_blocks=32, tol=CONTRACTION_TOL):
    """PSD verdict for the Hermitian Toeplitz section of the coefficients."""
    return hermitian_psd(hermitian_section(coeffs, n_blocks), tol=tol)


def kernel_L_Phi(coeffs, x, y, n_terms=64):
    """(L(x, y), bound) for the Herglotz kernel.

    L = (1/2) sum_n [ A_n(x) conj(B_n(y)) + B_n(x) A_n(y)^* ] with
    A_n the degree-n shift of the coefficient series and B_n the basis;
    Hermitian in (x, y) by construction.
    """
    from .schur import _shift_values

    series = coeffs if isinstance(coeffs, AxialSeries) else AxialSeries(coeffs)
    if series.rows != series.cols:
        raise ShapeMismatch("Herglotz coefficients must be square")
    x = as_quaternion(x)
    y = as_quaternion(y)
    u, v = 3.0 * x.norm(), 3.0 * y.norm()
    if u >= 1.0 or v >= 1.0 or u * v >= 1.0:
        raise DivergentPoint("kernel not certified at |3x| = %.3f, |3y| = %.3f" % (u, v))
    deg = len(series.coeffs) - 1
    bx = monomial_values(n_terms + deg, x)
    by = monomial_values(n_terms + deg, y)
    ax = _shift_values(series, bx, n_terms)
    ay = _shift_values(series, by, n_terms)
    r = series.rows
    acc = QuatMatrix.zeros(r, r)
    for n in range(n_terms + 1):
        acc = acc + (ax[n].scale_right(by[n].conjugate())
                     + ay[n].H.scale_left(bx[n])) * 0.5
    wx = series.weighted_norm_sum(u)
    wy = series.weighted_norm_sum(v)
    uv = u * v
    if uv >= 1.0:
        return acc, math.inf
    tail = 0.5 * (wx + wy) * uv ** (n_terms + 1) / (1.0 - uv)
    if not series.tail.is_finite:
        tx = series.weighted_norm_sum(u, start=len(series.coeffs))
        ty = series.weighted_norm_sum(v, start=len(series.coeffs))
        geom = sum(uv ** n for n in range(n_terms + 1))
        tail += 0.5 * geom * (tx + ty)
    return acc, tail
