import pytest

from appellschur import herglotz, schur
from appellschur.axseries import AxialSeries
from appellschur.errors import NotUnitary, ShapeMismatch
from appellschur.herglotz import HerglotzGenerator
from appellschur.quatlin import (
    E1,
    Quaternion,
    QuatMatrix,
    as_quaternion,
    min_eigenvalue,
    operator_norm,
    random_unitary,
)

from conftest import random_point

q1 = lambda v: QuatMatrix.from_entries([[as_quaternion(v)]])


def classical_generator():
    return HerglotzGenerator(V=q1(1), C=q1(1))


def test_coefficients_classical():
    series = herglotz.herglotz_coefficients(classical_generator(), 12)
    vals = [c.entry(0, 0).x0 for c in series.coeffs]
    assert vals == [1.0] + [2.0] * 12
    # restriction is (1 + t)/(1 - t)
    for x0 in (0.05, -0.1, 0.15):
        t = 3 * x0
        got = series.real_restriction_value(x0).entry(0, 0).x0
        trunc_err = 2 * abs(t) ** 13 / (1 - abs(t))
        assert abs(got - (1 + t) / (1 - t)) <= trunc_err + 1e-13


def test_coefficients_zero_output_map():
    series = herglotz.herglotz_coefficients(HerglotzGenerator(V=q1(1), C=q1(0)), 5)
    assert all(operator_norm(c) == 0.0 for c in series.coeffs)


def test_coefficients_unit_imaginary_period_four():
    series = herglotz.herglotz_coefficients(HerglotzGenerator(V=q1(E1), C=q1(1)), 8)
    expect = [Quaternion(1), E1 * -2, Quaternion(-2), E1 * 2, Quaternion(2)]
    for got, want in zip(series.coeffs[:5], expect):
        assert (got.entry(0, 0) - want).norm() < 1e-14
    # period four
    for n in range(1, 5):
        a = series.coeffs[n].entry(0, 0)
        b = series.coeffs[n + 4].entry(0, 0)
        assert (a - b).norm() < 1e-14


def test_rejects_non_unitary_V():
    with pytest.raises(NotUnitary):
        herglotz.herglotz_coefficients(HerglotzGenerator(V=q1(0.5), C=q1(1)), 3)


def test_rejects_non_skew_a():
    with pytest.raises(ShapeMismatch):
        herglotz.herglotz_coefficients(
            HerglotzGenerator(V=q1(1), C=q1(1), a=q1(1)), 3)


def test_skew_part_enters_constant_term():
    series = herglotz.herglotz_coefficients(
        HerglotzGenerator(V=q1(1), C=q1(1), a=q1(E1 * 0.5)), 8)
    assert (series.coeffs[0].entry(0, 0) - Quaternion(1, 0.5, 0, 0)).norm() < 1e-15
    # skew part cancels in the Hermitian sections
    verdict = herglotz.verify_herglotz(series, n_blocks=8)
    assert verdict.is_psd


def test_verify_classical_sections_psd():
    series = herglotz.herglotz_coefficients(classical_generator(), 32)
    for n in (2, 8, 32):
        verdict = herglotz.verify_herglotz(series, n_blocks=n)
        assert verdict.is_psd
        assert verdict.min_eigenvalue >= -1e-12


def test_verify_rejects_oversized_off_diagonal():
    verdict = herglotz.verify_herglotz(AxialSeries.from_scalars([1, 3]), n_blocks=2)
    assert not verdict.is_psd
    assert verdict.min_eigenvalue == pytest.approx(-0.5, abs=1e-12)


def test_verify_zero():
    assert herglotz.verify_herglotz(AxialSeries.from_scalars([0]), n_blocks=4).is_psd


def test_verify_generator_produced_matrix_case():
    U = random_unitary(3, seed=2)
    C = QuatMatrix.from_entries([[Quaternion(0.4), Quaternion(0, 0.2), Quaternion(0.1)],
                                 [Quaternion(0.1), Quaternion(-0.3), Quaternion(0, 0, 0.2)]])
    G = HerglotzGenerator(V=U, C=C)
    series = herglotz.herglotz_coefficients(G, 32)
    assert herglotz.verify_herglotz(series, n_blocks=16).is_psd


def test_sum_closure():
    s1 = herglotz.herglotz_coefficients(classical_generator(), 16)
    s2 = herglotz.herglotz_coefficients(HerglotzGenerator(V=q1(E1), C=q1(0.7)), 16)
    total = AxialSeries([a + b for a, b in zip(s1.coeffs, s2.coeffs)])
    assert herglotz.verify_herglotz(total, n_blocks=16).is_psd


def test_kernel_real_restriction():
    series = herglotz.herglotz_coefficients(classical_generator(), 48)
    phi = lambda t: (1 + t) / (1 - t)
    for x0, y0 in ((0.05, 0.08), (-0.1, 0.06), (0.0, 0.0)):
        K, bound = herglotz.kernel_L_Phi(series, Quaternion(x0), Quaternion(y0),
                                         n_terms=64)
        a, b = 3 * x0, 3 * y0
        want = (phi(a) + phi(b)) / (2 * (1 - a * b))
        assert abs(K.entry(0, 0).x0 - want) <= bound + 1e-10


def test_kernel_constant_one_is_hardy():
    one = AxialSeries.from_scalars([1])
    x = Quaternion(0.05, 0.02, 0, 0.01)
    y = Quaternion(-0.03, 0, 0.04, 0)
    K, _ = herglotz.kernel_L_Phi(one, x, y, n_terms=64)
    H, _ = schur.hardy_kernel(x, y, n_terms=64)
    assert operator_norm(K - H) < 1e-12


def test_kernel_at_origin_is_real_part_of_constant():
    series = herglotz.herglotz_coefficients(
        HerglotzGenerator(V=q1(1), C=q1(1), a=q1(E1 * 0.3)), 8)
    K, _ = herglotz.kernel_L_Phi(series, Quaternion(0), Quaternion(0), n_terms=8)
    # (Phi_0 + Phi_0*)/2 = C C*
    assert operator_norm(K - QuatMatrix.identity(1)) < 1e-14


def test_kernel_hermitian_in_arguments(rng):
    series = herglotz.herglotz_coefficients(classical_generator(), 24)
    x = random_point(rng, 0.1)
    y = random_point(rng, 0.1)
    Kxy, _ = herglotz.kernel_L_Phi(series, x, y, n_terms=48)
    Kyx, _ = herglotz.kernel_L_Phi(series, y, x, n_terms=48)
    assert operator_norm(Kxy - Kyx.H) < 1e-12


def test_kernel_gram_psd(rng):
    series = herglotz.herglotz_coefficients(classical_generator(), 32)
    pts = [random_point(rng, 0.1) for _ in range(6)]
    G, bound = schur.gram_matrix(
        lambda u, v: herglotz.kernel_L_Phi(series, u, v, n_terms=64), pts)
    assert min_eigenvalue(G) >= -1e-8 - bound
