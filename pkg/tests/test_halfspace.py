from fractions import Fraction

import numpy as np
import pytest

from appellschur import halfspace, realize, schur
from appellschur.axseries import AxialSeries
from appellschur.errors import DivergentPoint, SingularCayley
from appellschur.quatlin import (
    Quaternion,
    QuatMatrix,
    as_quaternion,
    min_eigenvalue,
    operator_norm,
    random_unitary,
)

q1 = lambda v: QuatMatrix.from_entries([[as_quaternion(v)]])

SHIFT = realize.Colligation(A=q1(0), B=q1(1), C=q1(1), D=q1(0))


def rational_power_coeffs(n, n_coeffs):
    """Exact expansion of ((1 - t)/(1 + t))^n, the test oracle."""
    def mul(a, b):
        out = [Fraction(0)] * n_coeffs
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j in range(n_coeffs - i):
                out[i + j] += x * b[j]
        return out

    inv = [Fraction((-1) ** k) for k in range(n_coeffs)]
    one_minus = [Fraction(1), Fraction(-1)] + [Fraction(0)] * (n_coeffs - 2)
    base = mul(one_minus, inv)
    cur = [Fraction(1)] + [Fraction(0)] * (n_coeffs - 1)
    for _ in range(n):
        cur = mul(cur, base)
    return [float(c) for c in cur]


def test_w_coefficients_low_orders():
    assert list(halfspace.w_coefficients(0, 5)) == [1, 0, 0, 0, 0]
    assert list(halfspace.w_coefficients(1, 6)) == [1, -2, 2, -2, 2, -2]
    w2 = list(halfspace.w_coefficients(2, 8))
    assert w2 == [1, -4, 8, -12, 16, -20, 24, -28]
    # the (-1)^k 4k law for k >= 1
    for k in range(1, 8):
        assert w2[k] == (-1) ** k * 4 * k


def test_w_coefficients_match_rational_oracle():
    for n in range(6):
        assert list(halfspace.w_coefficients(n, 14)) == rational_power_coeffs(n, 14)


def test_w_convolution_powers_compose():
    # W_m * W_n = W_{m+n} coefficientwise
    from appellschur import axseries

    for m, n in ((1, 1), (2, 3), (1, 4)):
        a = halfspace.w_series(m, 20)
        b = halfspace.w_series(n, 20)
        prod = axseries.intrinsic_product(
            AxialSeries.from_scalars([c.entry(0, 0) for c in a.coeffs]),
            AxialSeries.from_scalars([c.entry(0, 0) for c in b.coeffs]))
        want = halfspace.w_coefficients(m + n, 20)
        for k in range(20):
            assert abs(prod.coeffs[k].entry(0, 0).x0 - want[k]) < 1e-12


def test_eval_W_real_points():
    v, bound = halfspace.eval_W(1, Quaternion(1.0 / 3.0))
    assert v.norm() < 1e-12 and bound == 0.0
    v, _ = halfspace.eval_W(2, Quaternion(0))
    assert (v - Quaternion(1)).norm() == 0.0
    v, _ = halfspace.eval_W(1, Quaternion(0.1))
    assert abs(v.x0 - 0.7 / 1.3) < 1e-15
    for n in (2, 5):
        v, _ = halfspace.eval_W(n, Quaternion(0.2))
        assert abs(v.x0 - ((1 - 0.6) / (1 + 0.6)) ** n) < 1e-14


def test_eval_W_series_matches_real_path():
    # quaternion path at a real point reproduces the rational value
    x = Quaternion(0.05)
    direct, _ = halfspace.eval_W(1, x)
    from appellschur import axseries
    series_val, bound = axseries.evaluate(halfspace.w_series(1, 200), x)
    assert (series_val.entry(0, 0) - direct).norm() <= bound + 1e-12


def test_eval_W_intrinsic_symmetry():
    x = Quaternion(0.04, 0.07, -0.02, 0.03)
    v1, b1 = halfspace.eval_W(1, x, n_coeffs=150)
    v2, b2 = halfspace.eval_W(1, x.conjugate(), n_coeffs=150)
    assert (v2 - v1.conjugate()).norm() <= b1 + b2 + 1e-12


def test_eval_W_rejects_uncertified_quaternion_points():
    with pytest.raises(DivergentPoint):
        halfspace.eval_W(1, Quaternion(0.3, 0.3, 0, 0))


def test_hardy_basis_coefficients():
    e0 = halfspace.hardy_basis_element(0, 6)
    assert [c.entry(0, 0).x0 for c in e0.coeffs] == [1, -1, 1, -1, 1, -1]
    e1 = halfspace.hardy_basis_element(1, 6)
    assert [c.entry(0, 0).x0 for c in e1.coeffs] == [1, -3, 5, -7, 9, -11]


def test_hardy_basis_real_restriction_oracle():
    for n in range(5):
        series = halfspace.hardy_basis_element(n, 400)
        for x0 in (0.05, 0.01, -0.02):
            got = series.real_restriction_value(x0).entry(0, 0).x0
            want = halfspace.basis_value_real(n, x0)
            assert abs(got - want) < 1e-11


def test_kernel_K_P_closed_form():
    K, bound = halfspace.kernel_K_P(Quaternion(1.0 / 3.0), Quaternion(1.0 / 3.0))
    assert abs(K.x0 - 0.25) < 1e-10
    assert bound < 1e-15
    for x0, y0 in ((0.1, 0.4), (0.05, 0.02), (1.2, 0.7)):
        K, bound = halfspace.kernel_K_P(Quaternion(x0), Quaternion(y0), n_terms=200)
        assert abs(K.x0 - 1.0 / (6 * (x0 + y0))) <= bound + 1e-12


def test_kernel_K_P_positive_on_diagonal():
    for x0 in (0.05, 0.3, 1.0):
        K, _ = halfspace.kernel_K_P(Quaternion(x0), Quaternion(x0))
        assert K.x0 > 0


def test_kernel_K_P_gram_psd():
    pts = [Quaternion(v) for v in (0.08, 0.2, 0.45, 0.9)]
    G, bound = schur.gram_matrix(
        lambda u, v: (lambda K, b: (q1(K), b))(*halfspace.kernel_K_P(u, v, 120)), pts)
    assert min_eigenvalue(G) >= -1e-10 - bound


def test_kernel_K_P_refuses_off_axis_and_nonpositive():
    with pytest.raises(DivergentPoint):
        halfspace.kernel_K_P(Quaternion(0.1, 0.2, 0, 0), Quaternion(0.1))
    with pytest.raises(DivergentPoint):
        halfspace.kernel_K_P(Quaternion(-0.1), Quaternion(0.3))


def test_lyapunov_residual(rng):
    assert halfspace.lyapunov_residual(1.0 / 3.0, 1.0 / 3.0) < 1e-14
    for _ in range(10):
        x0, y0 = rng.uniform(0.025, 0.8, size=2)
        assert halfspace.lyapunov_residual(x0, y0, n_terms=80) < 1e-8
    # the kernel grows like 1/(6(x0+y0)) near 0 but the residual stays small
    assert halfspace.lyapunov_residual(0.03, 0.02, n_terms=80) < 1e-8


def test_halfspace_schur_value_examples():
    # x0 = 1/3 maps to w = 0: the value is D
    U = random_unitary(3, seed=6)
    V = realize.Colligation.from_unitary(U, 2)
    S = halfspace.halfspace_schur_value(V, 1.0 / 3.0)
    assert operator_norm(S - V.D) < 1e-13
    # A = 0: D + w C B
    S = halfspace.halfspace_schur_value(SHIFT, 0.1)
    w = (1 - 0.3) / (1 + 0.3)
    assert abs(S.entry(0, 0).x0 - w) < 1e-14


def test_halfspace_schur_matches_W1():
    for x0 in (0.02, 0.2, 1.0 / 3.0, 0.8):
        S = halfspace.halfspace_schur_value(SHIFT, x0)
        wv, _ = halfspace.eval_W(1, Quaternion(x0))
        assert (S.entry(0, 0) - wv).norm() < 1e-13


def test_halfspace_schur_contractive_on_positive_axis(rng):
    U = random_unitary(4, seed=31)
    V = realize.Colligation.from_unitary(U, 3)
    for _ in range(8):
        x0 = rng.uniform(0.01, 2.0)
        S = halfspace.halfspace_schur_value(V, x0)
        assert operator_norm(S) <= 1 + 1e-10


def test_halfspace_schur_chi_consistency(rng):
    # chi of the value equals the classical realization value of the
    # complexified matrices at the same Cayley variable
    U = random_unitary(3, seed=13)
    V = realize.Colligation.from_unitary(U, 2)
    from appellschur.quatlin import chi
    for x0 in (0.1, 0.5):
        w = halfspace.cayley_variable(x0)
        S = halfspace.halfspace_schur_value(V, x0)
        A, B, C, D = chi(V.A), chi(V.B), chi(V.C), chi(V.D)
        classical = D + w * C @ np.linalg.solve(np.eye(A.shape[0]) - w * A, B)
        assert np.abs(chi(S) - classical).max() < 1e-12


def test_coefficient_route_matches_resolvent_route():
    U = random_unitary(3, seed=19)
    V = realize.Colligation.from_unitary(U, 2)
    blocks = halfspace.halfspace_schur_coefficients(V, 200)
    for x0 in (0.2, 0.5, 1.0):
        wv = halfspace.cayley_variable(x0)
        acc = QuatMatrix.zeros(1, 1)
        wp = 1.0
        for blk in blocks:
            acc = acc + blk * wp
            wp *= wv
        direct = halfspace.halfspace_schur_value(V, x0)
        assert operator_norm(acc - direct) < 1e-10


def test_caratheodory_zero_multiplier():
    zeroV = realize.Colligation(A=QuatMatrix.zeros(1, 1), B=q1(0), C=q1(0), D=q1(0))
    for x0 in (0.1, 0.4):
        Phi = halfspace.caratheodory_from_schur(zeroV, x0)
        assert operator_norm(Phi - QuatMatrix.identity(1)) < 1e-14
    pts = [0.1, 0.25, 0.4]
    values, G = halfspace.caratheodory_kernel_gram(zeroV, pts)
    for i, xi in enumerate(pts):
        for j, xj in enumerate(pts):
            K, _ = halfspace.kernel_K_P(Quaternion(xi), Quaternion(xj), n_terms=200)
            assert abs(G.entry(i, j).x0 - 2 * K.x0) < 1e-10
    assert min_eigenvalue(G) >= -1e-12


def test_caratheodory_of_W1_is_linear():
    # S = W_1 gives Phi(3 x0) = 3 x0 and the constant kernel 1/2
    for x0 in (0.05, 0.3, 0.7):
        Phi = halfspace.caratheodory_from_schur(SHIFT, x0)
        assert abs(Phi.entry(0, 0).x0 - 3 * x0) < 1e-13
    values, G = halfspace.caratheodory_kernel_gram(SHIFT, [0.1, 0.2, 0.3])
    for i in range(3):
        for j in range(3):
            assert abs(G.entry(i, j).x0 - 0.5) < 1e-13
    assert min_eigenvalue(G) >= -1e-12


def test_caratheodory_positive_combination_kernel_psd(rng):
    # Phi = a0 P_1 + sum b_n (a_n + P_1)^{-1} with positive data: sample the
    # kernel (Phi(a) + Phi(b)*)/(6(x0+y0)) directly and test positivity
    a0, a1, a2 = 0.5, 1.3, 0.8
    b1, b2 = 0.7, 0.4
    def phi(x0):
        t = 3 * x0
        return a0 * t + b1 / (a1 + t) + b2 / (a2 + t)
    pts = [0.05, 0.15, 0.3, 0.6]
    n = len(pts)
    grid = [[q1((phi(pts[i]) + phi(pts[j])) / (6 * (pts[i] + pts[j])))
             for j in range(n)] for i in range(n)]
    from appellschur.quatlin import block
    G = block(grid)
    assert min_eigenvalue(G) >= -1e-12


def test_cayley_singularity():
    # S identically -1 makes I + S singular
    minus_one = realize.Colligation(A=QuatMatrix.zeros(1, 1), B=q1(0), C=q1(0),
                                    D=q1(-1))
    with pytest.raises(SingularCayley):
        halfspace.caratheodory_from_schur(minus_one, 0.2)
