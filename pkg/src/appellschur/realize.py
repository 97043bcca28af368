"""State-space machinery: colligations, Blaschke checks, rational calculus.

A colligation packs four quaternion matrices (A, B, C, D); the generated
coefficient sequence (D, CB, CAB, CA^2 B, ...) restricts on the real axis to
D + t C (I - t A)^{-1} B with t = 3 x0.  When the block matrix
[[A, B], [C, D]] has orthonormal columns, the induced multiplication
operator is an isometry of the Hardy space (Blaschke case) and the
coefficient Toeplitz operator is isometric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .axseries import AxialSeries, Tail
from .errors import (
    GramSingular,
    NonDecayingState,
    ShapeMismatch,
    SingularH,
    SingularResolvent,
)
from .quatlin import (
    QuatMatrix,
    as_quaternion,
    block,
    hstack,
    inverse,
    operator_norm,
    solve,
    submatrix,
    vstack,
)

COLLIGATION_TOL = 1e-10
RANK_TOL = 1e-10


@dataclass(frozen=True)
class Colligation:
    """Block operator matrix (A, B, C, D) over the quaternions."""

    A: QuatMatrix
    B: QuatMatrix
    C: QuatMatrix
    D: QuatMatrix
    flag: str = "none"  # "unitary" | "coisometric" | "none"

    def __post_init__(self):
        N = self.A.rows
        if self.A.cols != N:
            raise ShapeMismatch("A must be square")
        if self.B.rows != N or self.C.cols != N:
            raise ShapeMismatch("B, C must match the state dimension")
        if self.D.shape != (self.C.rows, self.B.cols):
            raise ShapeMismatch("D must be (out_dim x in_dim)")

    @property
    def state_dim(self):
        return self.A.rows

    @property
    def in_dim(self):
        return self.B.cols

    @property
    def out_dim(self):
        return self.C.rows

    @staticmethod
    def from_unitary(U, state_dim):
        """Partition a unitary (N + r) x (N + r) matrix into a colligation."""
        N = int(state_dim)
        total = U.rows
        return Colligation(
            A=submatrix(U, 0, N, 0, N),
            B=submatrix(U, 0, N, N, total),
            C=submatrix(U, N, total, 0, N),
            D=submatrix(U, N, total, N, total),
            flag="unitary",
        )


@dataclass(frozen=True)
class ColligationVerdict:
    ok: bool
    mode: str
    residuals: dict
    colligation: Colligation | None = None

    def __bool__(self):
        return self.ok


def verify_colligation(V, mode="unitary", tol=COLLIGATION_TOL):
    """Residuals of the defining isometry equations; flags V on success.

    Column form (holds for both modes):
        A*A + C*C = I_N,  B*B + D*D = I_s,  D*C + B*A = 0.
    Unitary mode additionally checks the row form
        A A* + B B* = I_N,  C C* + D D* = I_r,  A C* + B D* = 0.
    """
    A, B, C, D = V.A, V.B, V.C, V.D
    eyeN = QuatMatrix.identity(V.state_dim)
    eyeS = QuatMatrix.identity(V.in_dim)
    residuals = {
        "state_isometry": operator_norm(A.H @ A + C.H @ C - eyeN),
        "input_isometry": operator_norm(B.H @ B + D.H @ D - eyeS),
        "cross": operator_norm(D.H @ C + B.H @ A),
    }
    if mode == "unitary":
        eyeR = QuatMatrix.identity(V.out_dim)
        residuals["state_coisometry"] = operator_norm(A @ A.H + B @ B.H - eyeN)
        residuals["output_coisometry"] = operator_norm(C @ C.H + D @ D.H - eyeR)
        residuals["cross_co"] = operator_norm(A @ C.H + B @ D.H)
    ok = max(residuals.values()) <= tol
    flagged = replace(V, flag=mode) if ok else None
    return ColligationVerdict(ok, mode, residuals, colligation=flagged)


def coefficients_from_colligation(V, n_terms):
    """Series coefficients (D, CB, CAB, ...) up to index n_terms.

    When ||A|| < 1 the geometric decay ||C|| ||B|| ||A||^(n-1) is recorded as
    the tail model; for ||A|| slightly above 1 no sound tail exists and the
    model is marked unbounded (evaluation then reports an infinite bound).
    """
    coeffs = [V.D]
    power = V.B
    for _ in range(int(n_terms)):
        coeffs.append(V.C @ power)
        power = V.A @ power
    na = operator_norm(V.A)
    cb = operator_norm(V.C) * operator_norm(V.B)
    if cb == 0.0:
        tail = Tail.finite()
    elif na < 1e-300:
        tail = Tail.finite()
    elif na <= 1.0:
        tail = Tail.geometric(cb / na, na)
    else:
        tail = Tail.bounded(math.inf)
    return AxialSeries(coeffs, tail=tail)


@dataclass(frozen=True)
class BlaschkeReport:
    iso_residual: float
    max_lag_residual: float
    tail_bound: float
    n_terms: int
    lag_residuals: tuple = field(default=())


def blaschke_isometry_check(V, n_terms=200, tail_cap=0.1):
    """Numerical isometry certificate for the coefficient Toeplitz operator.

    Checks || sum_{n <= N} b_n* b_n - I || and every lag sum
    || sum_n b_n* b_{n+d} ||, d = 1..N, against the computed state tail
    ||A^(N+1) B||^2.  Raises NonDecayingState when that tail exceeds
    tail_cap (certificate too weak; raise n_terms).
    """
    series = coefficients_from_colligation(V, n_terms)
    b = list(series.coeffs)
    power = V.B
    for _ in range(int(n_terms) + 1):
        power = V.A @ power
    tail = operator_norm(power) ** 2
    if tail > tail_cap:
        raise NonDecayingState(
            "||A^%d B||^2 = %.3f exceeds %.3f" % (n_terms + 1, tail, tail_cap))
    eye = QuatMatrix.identity(V.in_dim)
    acc = QuatMatrix.zeros(V.in_dim, V.in_dim)
    for bn in b:
        acc = acc + bn.H @ bn
    iso_resid = operator_norm(acc - eye)
    lags = []
    for d in range(1, n_terms + 1):
        s = QuatMatrix.zeros(V.in_dim, V.in_dim)
        for n in range(0, n_terms + 1 - d):
            s = s + b[n].H @ b[n + d]
        lags.append(operator_norm(s))
    return BlaschkeReport(iso_resid, max(lags, default=0.0), tail, n_terms,
                          tuple(lags))


def backward_shift(f):
    """Drop the leading series coefficient (the backward-shift action)."""
    from .axseries import backward_shift as _bs

    return _bs(f)


def canonical_coefficients(V, xi, n_terms):
    """The sequence (C A^n xi), n = 0..n_terms, for a state vector xi."""
    out = []
    cur = xi
    for _ in range(int(n_terms) + 1):
        out.append(V.C @ cur)
        cur = V.A @ cur
    return out


def observability_rank(V, depth=None):
    """Numerical rank of the stacked observability matrix (C; CA; ...)."""
    depth = V.state_dim if depth is None else int(depth)
    rows = []
    cur = V.C
    for _ in range(depth):
        rows.append(cur)
        cur = cur @ V.A
    import numpy as np

    O = vstack(rows)
    sv = np.linalg.svd(O.chi(), compute_uv=False)
    return int(sum(1 for s in sv[::2] if s > RANK_TOL * max(1.0, sv[0])))


def is_observable(V, depth=None):
    return observability_rank(V, depth) == V.state_dim


# ---------------------------------------------------------------------------
# Rational calculus on the real axis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalRealForm:
    """Realization M(t) = H + t G (I - t T)^{-1} F of a rational function."""

    H: QuatMatrix
    G: QuatMatrix
    T: QuatMatrix
    F: QuatMatrix

    def __post_init__(self):
        N = self.T.rows
        if self.T.cols != N:
            raise ShapeMismatch("T must be square")
        if self.G.cols != N or self.F.rows != N:
            raise ShapeMismatch("G, F must match the state dimension")
        if self.H.shape != (self.G.rows, self.F.cols):
            raise ShapeMismatch("H must be (out_dim x in_dim)")

    @property
    def state_dim(self):
        return self.T.rows

    @staticmethod
    def constant(H):
        r, s = H.shape
        return RationalRealForm(H, QuatMatrix.zeros(r, 0), QuatMatrix.zeros(0, 0),
                                QuatMatrix.zeros(0, s))

    @staticmethod
    def from_colligation(V):
        """The restriction D + t C (I - t A)^{-1} B of the generated series."""
        return RationalRealForm(V.D, V.C, V.A, V.B)


def rational_value(Rf, t):
    """Evaluate by linear solve; raises SingularResolvent at poles."""
    t = float(t)
    if Rf.state_dim == 0:
        return Rf.H
    resolvent = QuatMatrix.identity(Rf.state_dim) - Rf.T * t
    X = solve(resolvent, Rf.F)
    return Rf.H + (Rf.G @ X) * t


def rational_inverse(Rf):
    """Realization of the pointwise inverse, via T^x = T - G H^{-1} F."""
    if Rf.H.rows != Rf.H.cols:
        raise SingularH("inverse needs a square constant term")
    try:
        Hinv = inverse(Rf.H)
    except SingularResolvent as exc:
        raise SingularH("constant term not invertible") from exc
    Tx = Rf.T - Rf.F @ Hinv @ Rf.G
    return RationalRealForm(Hinv, -(Hinv @ Rf.G), Tx, Rf.F @ Hinv)


def rational_product(M1, M2):
    """Cascade realization of the pointwise product M1(t) M2(t).

    State coupling block is F1 G2 (output map of the second factor feeding
    the first factor's state input).
    """
    if M1.H.cols != M2.H.rows:
        raise ShapeMismatch("product needs %s x %s compatible" % (M1.H.shape, M2.H.shape))
    n1, n2 = M1.state_dim, M2.state_dim
    T = block([
        [M1.T, M1.F @ M2.G],
        [QuatMatrix.zeros(n2, n1), M2.T],
    ])
    G = hstack([M1.G, M1.H @ M2.G])
    F = vstack([M1.F @ M2.H, M2.F])
    return RationalRealForm(M1.H @ M2.H, G, T, F)


def rational_sum(M1, M2):
    """M1 + M2 through the block trick [M1 I] [I; M2] (a product)."""
    if M1.H.shape != M2.H.shape:
        raise ShapeMismatch("sum needs equal shapes")
    r, s = M1.H.shape
    left = RationalRealForm(
        hstack([M1.H, QuatMatrix.identity(r)]),
        M1.G,
        M1.T,
        hstack([M1.F, QuatMatrix.zeros(M1.state_dim, r)]),
    )
    right = RationalRealForm(
        vstack([QuatMatrix.identity(s), M2.H]),
        vstack([QuatMatrix.zeros(s, M2.state_dim), M2.G]),
        M2.T,
        M2.F,
    )
    return rational_product(left, right)


# ---------------------------------------------------------------------------
# de Branges-Rovnyak inequality in the finite-dimensional (Blaschke) case
# ---------------------------------------------------------------------------

def kernel_state(V, y0, u):
    """State vector xi with K_S(., 3 y0) u = sum_n B_n C A^n xi.

    xi = (I - 3 y0 A)^{-*} C^* u; real sample points only.
    """
    N = V.state_dim
    resolvent = QuatMatrix.identity(N) - V.A * (3.0 * float(y0))
    return solve(resolvent.H, V.C.H @ u)


def kernel_value_real(V, x0, y0):
    """K_S(3 x0, 3 y0) = C (I - 3 x0 A)^{-1} (I - 3 y0 A)^{-*} C^*."""
    N = V.state_dim
    r1 = QuatMatrix.identity(N) - V.A * (3.0 * float(x0))
    r2 = QuatMatrix.identity(N) - V.A * (3.0 * float(y0))
    X = solve(r1, solve(r2.H, V.C.H))
    return V.C @ X


def dbr_inequality_check(V, points, directions, min_separation=1e-12):
    """Slack of ||R_0 f||^2 <= ||f||^2 - ||f(0)||^2 on kernel combinations.

    f = sum_j K_S(., 3 y_j) u_j corresponds to the state xi = sum_j xi_j;
    then ||f||^2 = |xi|^2, f(0) = C xi and R_0 f has state A xi.  Returns
    the slack |xi|^2 - |C xi|^2 - |A xi|^2 (nonnegative up to rounding for
    isometric column equations).
    """
    pts = [float(p) for p in points]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) < min_separation:
                raise GramSingular("sample points %d and %d coincide" % (i, j))
    xi = QuatMatrix.zeros(V.state_dim, 1)
    for y0, u in zip(pts, directions):
        xi = xi + kernel_state(V, y0, u)
    norm_f_sq = (xi.H @ xi).entry(0, 0).x0
    f0 = V.C @ xi
    norm_f0_sq = (f0.H @ f0).entry(0, 0).x0
    axi = V.A @ xi
    norm_r0_sq = (axi.H @ axi).entry(0, 0).x0
    return norm_f_sq - norm_f0_sq - norm_r0_sq


def blaschke_factor_colligation(a):
    """The classical one-dimensional factor: restriction (t - a)/(1 - a t)."""
    a = float(a)
    if not -1.0 < a < 1.0:
        raise ValueError("parameter must lie in (-1, 1)")
    s = math.sqrt(1.0 - a * a)
    q = lambda v: QuatMatrix.from_entries([[as_quaternion(v)]])
    return Colligation(A=q(a), B=q(s), C=q(s), D=q(-a), flag="unitary")
