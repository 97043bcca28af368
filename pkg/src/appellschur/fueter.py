"""Fueter variables, symmetric products, and finite-difference Cauchy-Fueter operators.

The finite-difference operators are the ground truth used throughout the test
suite: anything the library claims is hyperholomorphic gets stenciled here.
"""

from __future__ import annotations

import math
from itertools import permutations

from .errors import TooManyFactors
from .quatlin import ONE, UNITS, Quaternion, QuatMatrix, as_quaternion

FD_STEP = 1e-5
MAX_FACTORS = 8


class MultiIndex:
    """A triple of nonnegative exponents for the Fueter variables."""

    __slots__ = ("nu1", "nu2", "nu3")

    def __init__(self, nu1, nu2, nu3):
        if min(nu1, nu2, nu3) < 0:
            raise ValueError("multi-index entries must be nonnegative")
        self.nu1 = int(nu1)
        self.nu2 = int(nu2)
        self.nu3 = int(nu3)

    def degree(self):
        return self.nu1 + self.nu2 + self.nu3

    def factorial(self):
        return math.factorial(self.nu1) * math.factorial(self.nu2) * math.factorial(self.nu3)

    def as_tuple(self):
        return (self.nu1, self.nu2, self.nu3)

    def __repr__(self):
        return "MultiIndex(%d, %d, %d)" % self.as_tuple()


def fueter_variable(j, x):
    """The j-th Fueter variable x_j - e_j * x0, j in 1..3."""
    x = as_quaternion(x)
    if j not in (1, 2, 3):
        raise ValueError("Fueter variable index must be 1, 2 or 3")
    comp = (x.x1, x.x2, x.x3)[j - 1]
    return Quaternion(comp) - UNITS[j - 1] * x.x0


def symmetric_product(factors):
    """Average of all ordered products of the factors (at most 8 of them)."""
    factors = [as_quaternion(f) for f in factors]
    n = len(factors)
    if n == 0:
        return ONE
    if n > MAX_FACTORS:
        raise TooManyFactors("symmetric product limited to %d factors" % MAX_FACTORS)
    total = Quaternion()
    for perm in permutations(range(n)):
        prod = factors[perm[0]]
        for k in perm[1:]:
            prod = prod * factors[k]
        total = total + prod
    return total / math.factorial(n)


def zeta_power(nu, x):
    """Symmetric product zeta_1^(nu1 x) x zeta_2^(nu2 x) x zeta_3^(nu3 x)."""
    if not isinstance(nu, MultiIndex):
        nu = MultiIndex(*nu)
    if nu.degree() > MAX_FACTORS:
        raise TooManyFactors("|nu| limited to %d" % MAX_FACTORS)
    factors = ([fueter_variable(1, x)] * nu.nu1
               + [fueter_variable(2, x)] * nu.nu2
               + [fueter_variable(3, x)] * nu.nu3)
    return symmetric_product(factors)


def _as_matrix(value):
    if isinstance(value, QuatMatrix):
        return value, True
    return QuatMatrix.from_entries([[as_quaternion(value)]]), False


def _partials(f, x, h):
    """Central-difference partials (d0, d1, d2, d3) of f at x, as matrices."""
    outs = []
    was_matrix = False
    for axis in range(4):
        delta = [0.0, 0.0, 0.0, 0.0]
        delta[axis] = h
        dq = Quaternion(*delta)
        plus, was_matrix = _as_matrix(f(x + dq))
        minus, _ = _as_matrix(f(x - dq))
        outs.append((plus - minus) * (0.5 / h))
    return outs, was_matrix


def _maybe_scalar(mat, was_matrix):
    if was_matrix:
        return mat
    return mat.entry(0, 0)


def apply_D_fd(f, x, h=FD_STEP):
    """Cauchy-Fueter operator d0 + e1 d1 + e2 d2 + e3 d3, units on the left."""
    (d0, d1, d2, d3), was_matrix = _partials(f, as_quaternion(x), h)
    out = d0 + d1.scale_left(UNITS[0]) + d2.scale_left(UNITS[1]) + d3.scale_left(UNITS[2])
    return _maybe_scalar(out, was_matrix)


def apply_Dbar_fd(f, x, h=FD_STEP):
    """Conjugate operator d0 - e1 d1 - e2 d2 - e3 d3, units on the left."""
    (d0, d1, d2, d3), was_matrix = _partials(f, as_quaternion(x), h)
    out = d0 - d1.scale_left(UNITS[0]) - d2.scale_left(UNITS[1]) - d3.scale_left(UNITS[2])
    return _maybe_scalar(out, was_matrix)


def apply_Dbar_right_fd(f, x, h=FD_STEP):
    """Right conjugate operator d0 f - d1 f e1 - d2 f e2 - d3 f e3.

    Annihilates conjugates of (left) hyperholomorphic functions.
    """
    (d0, d1, d2, d3), was_matrix = _partials(f, as_quaternion(x), h)
    out = d0 - d1.scale_right(UNITS[0]) - d2.scale_right(UNITS[1]) - d3.scale_right(UNITS[2])
    return _maybe_scalar(out, was_matrix)
