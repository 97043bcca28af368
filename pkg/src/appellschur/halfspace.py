"""Half-space theory: the Cayley basis W_n, its Hardy space, and multipliers.

W_1 is the axial extension of (1 - 3x0)/(1 + 3x0), with coefficient sequence
(1, -2, 2, -2, ...); W_n is its n-th convolution power.  The half-space
Hardy basis elements are e_n = (1 + P_1)^{-conv} * W_n, restricting to
(1 - t)^n / (1 + t)^(n+1) with t = 3 x0.  On the positive real axis the
kernel sum telescopes to K(3x0, 3y0) = 1 / (6 (x0 + y0)) and satisfies the
Lyapunov identity 6 (x0 + y0) K = 1.

Away from the real axis only the individual series carry certified bounds;
the cross-basis kernel sum is certified on the positive real axis alone and
other points are refused rather than extrapolated.
"""

from __future__ import annotations

from functools import lru_cache

from .axseries import AxialSeries, Tail, evaluate
from .errors import DivergentPoint, SingularCayley, SingularResolvent
from .quatlin import Quaternion, QuatMatrix, as_quaternion, inverse, solve

REAL_AXIS_TOL = 1e-14


@lru_cache(maxsize=None)
def w_coefficients(n, n_coeffs):
    """First n_coeffs coefficients of W_n = W_1^(conv n), exact integers."""
    if n < 0:
        raise ValueError("power must be nonnegative")
    n_coeffs = int(n_coeffs)
    if n == 0:
        return tuple(float(k == 0) for k in range(n_coeffs))
    w1 = [1] + [2 * (-1) ** k for k in range(1, n_coeffs)]
    cur = [1] + [0] * (n_coeffs - 1)
    for _ in range(n):
        nxt = [0] * n_coeffs
        for i, a in enumerate(cur):
            if a == 0:
                continue
            for j in range(n_coeffs - i):
                nxt[i + j] += a * w1[j]
        cur = nxt
    return tuple(float(v) for v in cur)


@lru_cache(maxsize=None)
def inv_one_plus_coeffs(n_coeffs):
    """Coefficients of (1 + P_1)^{-conv}: (1, -1, 1, -1, ...)."""
    return tuple(float((-1) ** k) for k in range(int(n_coeffs)))


def w_series(n, n_coeffs):
    """W_n as an AxialSeries with the proven binomial coefficient tail.

    |coeff_k(W_n)| <= 2^n C(k+n-1, n-1): expand (1-t)^n (1+t)^(-n) and bound
    each binomial convolution term.
    """
    coeffs = w_coefficients(n, n_coeffs)
    if n == 0:
        return AxialSeries.from_scalars(coeffs)
    tail = Tail.binomial(2.0 ** n, n - 1)
    return AxialSeries.from_scalars(coeffs, tail=tail)


def hardy_basis_element(n, n_coeffs):
    """e_n = (1 + P_1)^{-conv} * W_n, restriction (1-t)^n / (1+t)^(n+1).

    Coefficient tail: |coeff_k| <= 2^n C(k+n, n) from the same binomial
    expansion with one more (1+t)^{-1} factor.
    """
    inv1p = inv_one_plus_coeffs(n_coeffs)
    wn = w_coefficients(n, n_coeffs)
    out = [0.0] * n_coeffs
    for i, a in enumerate(inv1p):
        if a == 0.0:
            continue
        for j in range(n_coeffs - i):
            out[i + j] += a * wn[j]
    return AxialSeries.from_scalars(out, tail=Tail.binomial(2.0 ** n, n))


def _is_real_point(x):
    x = as_quaternion(x)
    return x.imag_norm() <= REAL_AXIS_TOL * max(1.0, abs(x.x0))


def eval_W(n, x, n_coeffs=80):
    """(W_n(x), bound).  Real points use the exact rational form.

    The coefficient series certifies only 3|x| < 1; on the real axis the
    closed form ((1 - 3x0)/(1 + 3x0))^n is exact (the series itself diverges
    at x0 = 1/3 even though the function vanishes there).
    """
    x = as_quaternion(x)
    if _is_real_point(x):
        t = 3.0 * x.x0
        if abs(1.0 + t) < 1e-14:
            raise SingularCayley("W_n has a pole at 3 x0 = -1")
        return Quaternion(((1.0 - t) / (1.0 + t)) ** n), 0.0
    val, bound = evaluate(w_series(n, n_coeffs), x)
    return val.entry(0, 0), bound


def basis_value_real(n, x0):
    """e_n(3 x0) = (1 - t)^n / (1 + t)^(n+1), t = 3 x0."""
    t = 3.0 * float(x0)
    if abs(1.0 + t) < 1e-14:
        raise SingularCayley("basis element has a pole at 3 x0 = -1")
    return (1.0 - t) ** n / (1.0 + t) ** (n + 1)


def kernel_K_P(x, y, n_terms=80):
    """(K(x, y), bound) for the half-space Hardy kernel sum of basis dyads.

    Certified on the positive real axis, where the dyad ratio
    (1-a)(1-b)/((1+a)(1+b)) is strictly inside the unit interval and yields
    a rigorous geometric remainder.  Other points raise DivergentPoint: the
    available coefficient bounds cannot certify the cross-dyad tail there.
    """
    x = as_quaternion(x)
    y = as_quaternion(y)
    if not (_is_real_point(x) and _is_real_point(y)):
        raise DivergentPoint("half-space kernel certified on the real axis only")
    if x.x0 <= 0.0 or y.x0 <= 0.0:
        raise DivergentPoint("half-space kernel needs positive real parts")
    a, b = 3.0 * x.x0, 3.0 * y.x0
    rho = (1.0 - a) * (1.0 - b) / ((1.0 + a) * (1.0 + b))
    acc = 0.0
    term = 1.0 / ((1.0 + a) * (1.0 + b))
    for _ in range(int(n_terms) + 1):
        acc += term
        term *= rho
    bound = abs(term) / (1.0 - abs(rho))
    return Quaternion(acc), bound


def lyapunov_residual(x0, y0, n_terms=80):
    """|6 (x0 + y0) K(3x0, 3y0) - 1| with the truncated kernel sum."""
    K, _ = kernel_K_P(Quaternion(float(x0)), Quaternion(float(y0)), n_terms=n_terms)
    return abs(6.0 * (float(x0) + float(y0)) * K.x0 - 1.0)


def cayley_variable(x0):
    """w = (1 - 3 x0)/(1 + 3 x0), the half-space realization variable."""
    t = 3.0 * float(x0)
    if abs(1.0 + t) < 1e-14:
        raise SingularCayley("variable undefined at 3 x0 = -1")
    return (1.0 - t) / (1.0 + t)


def halfspace_schur_value(V, x0):
    """S(3 x0) = D + w C (I - w A)^{-1} B with w = (1 - 3x0)/(1 + 3x0)."""
    w = cayley_variable(x0)
    N = V.state_dim
    if N == 0:
        return V.D
    resolvent = QuatMatrix.identity(N) - V.A * w
    X = solve(resolvent, V.B)
    return V.D + (V.C @ X) * w


def halfspace_schur_coefficients(V, n_terms):
    """Blocks (D, CB, CAB, ...) with S(3x0) = D + sum_{n>=1} w^n C A^(n-1) B.

    Expanding the resolvent in halfspace_schur_value: the n-th block pairs
    with W_n(x) (restriction w^n), so the n = 0 term is D alone.
    """
    out = [V.D]
    power = V.B
    for _ in range(int(n_terms)):
        out.append(V.C @ power)
        power = V.A @ power
    return out


def caratheodory_from_schur(V, x0):
    """Cayley transform (I - S)(I + S)^{-1} of the half-space multiplier value."""
    S = halfspace_schur_value(V, x0)
    eye = QuatMatrix.identity(S.rows)
    try:
        return (eye - S) @ inverse(eye + S)
    except SingularResolvent as exc:
        raise SingularCayley("I + S singular at x0 = %r" % x0) from exc


def caratheodory_kernel_gram(V, points):
    """Gram of K(3x_i, 3x_j) = (Phi(3x_i) + Phi(3x_j)^*) / (6 (x_i + x_j)).

    Returns (values list, Gram QuatMatrix); points are positive reals.
    """
    from .quatlin import block

    pts = [float(p) for p in points]
    values = [caratheodory_from_schur(V, p) for p in pts]
    n = len(pts)
    grid = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            denom = 6.0 * (pts[i] + pts[j])
            grid[i][j] = (values[i] + values[j].H) * (1.0 / denom)
    G = block(grid)
    return values, (G + G.H) * 0.5
