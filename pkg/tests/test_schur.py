from fractions import Fraction

import pytest

from appellschur import axseries, realize, schur
from appellschur.axseries import AxialSeries
from appellschur.errors import NonContractiveIterate
from appellschur.quatlin import (
    E1,
    Quaternion,
    QuatMatrix,
    min_eigenvalue,
    operator_norm,
    random_unitary,
)

from conftest import random_point, random_quaternion


def mobius_coeffs(a, n):
    """Series of (t + a)/(1 + a t): a, then (1 - a^2)(-a)^(k-1)."""
    return [a] + [(1 - a * a) * (-a) ** (k - 1) for k in range(1, n)]


def test_verify_schur_accepts_shift():
    verdict = schur.verify_schur(AxialSeries.basis(1), n_blocks=16)
    assert verdict.accepted
    assert verdict.section_norm == pytest.approx(1.0, abs=1e-11)


def test_verify_schur_constants():
    q = Quaternion(0.4, 0.3, 0.2, 0.1)
    assert schur.verify_schur(AxialSeries.from_scalars([q]), n_blocks=4).accepted
    big = Quaternion(1.0, 0.5, 0, 0)
    verdict = schur.verify_schur(AxialSeries.from_scalars([big]), n_blocks=4)
    assert not verdict.accepted
    assert verdict.section_norm == pytest.approx(big.norm(), abs=1e-10)


def test_verify_schur_half_sum():
    assert schur.verify_schur(AxialSeries.from_scalars([0.5, 0.5]), n_blocks=32).accepted


def test_hardy_kernel_real_restriction(rng):
    for _ in range(5):
        x0, y0 = rng.uniform(-0.15, 0.15, size=2)
        K, bound = schur.hardy_kernel(Quaternion(x0), Quaternion(y0))
        want = 1.0 / (1.0 - 9 * x0 * y0)
        assert abs(K.entry(0, 0).x0 - want) <= bound + 1e-10
        assert K.entry(0, 0).imag_norm() < 1e-13


def test_kernel_K_S_telescopes_for_shift(rng):
    p1 = AxialSeries.basis(1)
    for _ in range(5):
        x = random_point(rng, 0.2)
        y = random_point(rng, 0.2)
        K, bound = schur.kernel_K_S(p1, x, y, n_terms=48)
        assert operator_norm(K - QuatMatrix.identity(1)) <= bound + 1e-12


def test_kernel_K_S_zero_multiplier_is_hardy():
    x = Quaternion(0.05, 0.02, 0, 0.01)
    y = Quaternion(-0.04, 0, 0.03, 0)
    K, _ = schur.kernel_K_S(AxialSeries.from_scalars([0]), x, y, n_terms=64)
    H, _ = schur.hardy_kernel(x, y, n_terms=64)
    assert operator_norm(K - H) < 1e-12


def test_kernel_K_S_at_origin():
    S0 = QuatMatrix.from_entries([[Quaternion(0.2, 0.1, 0, 0.3)]])
    f = AxialSeries([S0, QuatMatrix.from_entries([[Quaternion(0.1)]])])
    K, _ = schur.kernel_K_S(f, Quaternion(0), Quaternion(0), n_terms=8)
    assert operator_norm(K - (QuatMatrix.identity(1) - S0 @ S0.H)) < 1e-13


def test_gram_single_point_and_real_pair():
    G, _ = schur.gram_matrix(lambda a, b: schur.hardy_kernel(a, b, 32), [Quaternion(0)])
    assert abs(G.entry(0, 0).x0 - 1.0) < 1e-14
    pts = [Quaternion(0.1), Quaternion(-0.05)]
    G, bound = schur.gram_matrix(lambda a, b: schur.hardy_kernel(a, b, 64), pts)
    for i, xi in enumerate((0.1, -0.05)):
        for j, xj in enumerate((0.1, -0.05)):
            want = 1.0 / (1.0 - 9 * xi * xj)
            assert abs(G.entry(i, j).x0 - want) <= bound + 1e-10


def test_gram_psd_for_verified_multiplier(rng):
    U = random_unitary(4, seed=23)
    V = realize.Colligation.from_unitary(U, 3)
    series = realize.coefficients_from_colligation(V, 48)
    verdict = schur.verify_schur(series, n_blocks=32)
    assert verdict.accepted
    pts = [random_point(rng, 0.15) for _ in range(6)]
    G, bound = schur.gram_matrix(
        lambda a, b: schur.kernel_K_S(verdict.multiplier, a, b, n_terms=48), pts)
    assert min_eigenvalue(G) >= -1e-8 - bound


def test_lurking_identity_on_real_pairs(rng):
    # (1 - 9 x0 y0) K_S(3x0, 3y0) = I - S(3x0) S(3y0)*
    U = random_unitary(3, seed=5)
    V = realize.Colligation.from_unitary(U, 2)
    series = realize.coefficients_from_colligation(V, 80)
    for _ in range(5):
        x0, y0 = rng.uniform(-0.15, 0.15, size=2)
        K, bound = schur.kernel_K_S(series, Quaternion(x0), Quaternion(y0), n_terms=80)
        sx = series.real_restriction_value(x0)
        sy = series.real_restriction_value(y0)
        lhs = K * (1.0 - 9 * x0 * y0)
        rhs = QuatMatrix.identity(1) - sx @ sy.H
        assert operator_norm(lhs - rhs) <= bound + 1e-8


def test_intrinsic_multiplier_action_is_convolution(rng):
    intr = AxialSeries.from_scalars(list(rng.standard_normal(4) * 0.3))
    g = AxialSeries.from_scalars([random_quaternion(rng) for _ in range(4)])
    via_action = axseries.multiplier_action(intr, list(g.coeffs))
    via_conv = axseries.intrinsic_product(intr, g)
    for a, b in zip(via_action, via_conv.coeffs):
        assert operator_norm(a - b) < 1e-13


def test_intrinsic_multiplier_composition(rng):
    # M_{S1} M_{S2} = M_{S1 * S2} for intrinsic S1
    s1 = AxialSeries.from_scalars(list(rng.standard_normal(3) * 0.4))
    s2 = AxialSeries.from_scalars([random_quaternion(rng, 0.4) for _ in range(3)])
    u = [QuatMatrix.from_entries([[random_quaternion(rng)]]) for _ in range(3)]
    lhs = axseries.multiplier_action(s1, axseries.multiplier_action(s2, u))
    rhs = axseries.multiplier_action(axseries.intrinsic_product(s1, s2), u)
    for a, b in zip(lhs, rhs):
        assert operator_norm(a - b) < 1e-12


# ---------------------------------------------------------------------------
# Schur algorithm
# ---------------------------------------------------------------------------

def test_scalar_algorithm_constant():
    q = Quaternion(0.3, 0.2, -0.1, 0.05)
    res = schur.schur_algorithm_scalar([q], steps=5)
    assert (res.parameters[0] - q).norm() == 0.0
    assert all(p.norm() == 0.0 for p in res.parameters[1:])
    assert res.stop == schur.STOP_EXHAUSTED


def test_scalar_algorithm_shift():
    res = schur.schur_algorithm_scalar([0, 1], steps=6)
    assert res.parameters[0].norm() == 0.0
    assert abs(res.parameters[1].norm() - 1.0) < 1e-14
    assert len(res.parameters) == 2
    assert res.stop == schur.STOP_UNIMODULAR


def test_scalar_algorithm_mobius():
    a = 0.37
    res = schur.schur_algorithm_scalar(mobius_coeffs(a, 40), steps=6)
    assert abs(res.parameters[0].x0 - a) < 1e-15
    assert (res.parameters[1] - Quaternion(1)).norm() < 1e-11
    assert res.stop == schur.STOP_UNIMODULAR


def test_scalar_algorithm_mobius_rational_oracle():
    # exact-rational single step: S1 = (S - a)(1 - a S)^{-1} / t == 1
    a = Fraction(37, 100)
    n = 24
    coeffs = [a] + [(1 - a * a) * (-a) ** (k - 1) for k in range(1, n)]
    num = [coeffs[0] - a] + coeffs[1:]
    num = num[1:]  # divide by t
    den = [1 - a * coeffs[0]] + [-a * c for c in coeffs[1:]]
    inv = [1 / den[0]]
    for k in range(1, len(num)):
        inv.append(-sum(den[j] * inv[k - j] for j in range(1, min(k, len(den) - 1) + 1)) / den[0])
    prod0 = sum(num[j] * inv[0 - j] for j in range(0, 1))
    assert prod0 == 1
    for k in range(1, 8):
        pk = sum(num[j] * inv[k - j] for j in range(0, k + 1) if k - j < len(inv))
        assert pk == 0


def test_scalar_algorithm_quaternionic_constant_rotation():
    # a quaternion-valued Schur function: q * mobius(t)
    q = Quaternion(0.6, 0.48, 0.36, 0.48) * (1.0 / Quaternion(0.6, 0.48, 0.36, 0.48).norm())
    a = 0.25
    coeffs = [q * c for c in mobius_coeffs(a, 30)]
    res = schur.schur_algorithm_scalar(coeffs, steps=4)
    assert (res.parameters[0] - q * a).norm() < 1e-14
    assert abs(res.parameters[1].norm() - 1.0) < 1e-11
    assert res.stop == schur.STOP_UNIMODULAR


def test_scalar_algorithm_iterates_stay_contractive(rng):
    # random strictly contractive polynomial: coefficients summing below 1
    raw = [random_quaternion(rng) for _ in range(6)]
    total = sum(c.norm() for c in raw)
    coeffs = [c * (0.9 / total) for c in raw]
    res = schur.schur_algorithm_scalar(coeffs, steps=5, check_iterates=True)
    assert len(res.parameters) == 5
    for p in res.parameters:
        assert p.norm() <= 1 + 1e-9


def test_scalar_algorithm_rejects_expansive():
    with pytest.raises(NonContractiveIterate):
        schur.schur_algorithm_scalar([Quaternion(2)], steps=2)


def test_matrix_algorithm_block_diagonal():
    a, b = 0.37, 0.52
    ca = mobius_coeffs(a, 40)
    cb = mobius_coeffs(b, 40)
    diag = [QuatMatrix.from_entries([[Quaternion(x), Quaternion(0)],
                                     [Quaternion(0), Quaternion(y)]])
            for x, y in zip(ca, cb)]
    res = schur.schur_algorithm_matrix(schur.RealPowerSeries(diag), steps=5)
    assert res.stop == schur.STOP_UNIMODULAR
    assert len(res.parameters) == 2
    p0, p1 = res.parameters
    assert abs(p0.entry(0, 0).x0 - a) < 1e-14
    assert abs(p0.entry(1, 1).x0 - b) < 1e-14
    assert p0.entry(0, 1).norm() < 1e-14
    assert abs(p1.entry(0, 0).x0 - 1.0) < 1e-11
    assert abs(p1.entry(1, 1).x0 - 1.0) < 1e-11
    assert p1.entry(0, 1).norm() < 1e-11


def test_matrix_algorithm_constant():
    S0 = QuatMatrix.from_entries([[Quaternion(0.3), E1 * 0.2],
                                  [Quaternion(0, 0, 0.1), Quaternion(0.4)]])
    res = schur.schur_algorithm_matrix(schur.RealPowerSeries([S0]), steps=4)
    assert operator_norm(res.parameters[0] - S0) == 0.0
    assert all(operator_norm(p) == 0.0 for p in res.parameters[1:])
    assert res.stop == schur.STOP_EXHAUSTED


def test_matrix_algorithm_scalar_delegation_bit_identical():
    coeffs = mobius_coeffs(0.37, 30)
    scal = schur.schur_algorithm_scalar(coeffs, steps=6)
    mat = schur.schur_algorithm_matrix(
        schur.RealPowerSeries([QuatMatrix.from_entries([[Quaternion(c)]]) for c in coeffs]),
        steps=6)
    assert mat.stop == scal.stop
    for pm, ps in zip(mat.parameters, scal.parameters):
        assert pm.entry(0, 0).components() == ps.components()


def test_kernel_K_S_truncation_bound_sound():
    U = random_unitary(4, seed=33)
    V = realize.Colligation.from_unitary(U, 3)
    series = realize.coefficients_from_colligation(V, 80)
    x = Quaternion(0.1, 0.15, -0.1, 0.05)
    y = Quaternion(-0.05, 0.12, 0.14, 0.06)
    K_short, bound = schur.kernel_K_S(series, x, y, n_terms=12)
    K_long, _ = schur.kernel_K_S(series, x, y, n_terms=80)
    assert operator_norm(K_short - K_long) <= bound


def test_matrix_algorithm_generic_quaternionic_multiplier():
    U = random_unitary(5, seed=77)  # state 3, two-dimensional input/output
    V = realize.Colligation.from_unitary(U, 3)
    series = realize.coefficients_from_colligation(V, 40)
    res = schur.schur_algorithm_matrix(schur.RealPowerSeries(list(series.coeffs)),
                                       steps=3)
    assert res.parameters
    for p in res.parameters:
        assert operator_norm(p) <= 1 + 1e-9


def test_real_power_series_value():
    s = schur.RealPowerSeries([QuatMatrix.from_entries([[Quaternion(1)]]),
                               QuatMatrix.from_entries([[Quaternion(2)]])])
    assert s.value(0.25).entry(0, 0).x0 == pytest.approx(1.5)
    f = AxialSeries.from_scalars([1, 2, 3])
    r = schur.RealPowerSeries.from_axial(f)
    t = 0.3
    want = 1 + 2 * t + 3 * t * t
    assert r.value(t).entry(0, 0).x0 == pytest.approx(want)
    assert abs(f.real_restriction_value(t / 3).entry(0, 0).x0 - want) < 1e-14
