import math

import numpy as np
import pytest

from fraclms.fractional import gamma
from fraclms.objectives import (
    QuadraticObjective,
    frac_gradient_corrected,
    frac_gradient_oracle,
    frac_gradient_paper,
    instantaneous_correlations,
    objective_correct,
    objective_flawed,
)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_instantaneous_correlations_real():
    obj = instantaneous_correlations([1.0, 2.0], 3.0)
    np.testing.assert_array_equal(obj.p, [3, 6])
    np.testing.assert_array_equal(obj.R, [[1, 2], [2, 4]])
    assert obj.sigma2 == 9

    obj = instantaneous_correlations([1.0], 0.0)
    np.testing.assert_array_equal(obj.p, [0])
    np.testing.assert_array_equal(obj.R, [[1]])
    assert obj.sigma2 == 0


def test_instantaneous_correlations_complex_conjugation():
    obj = instantaneous_correlations([1j], 1)
    np.testing.assert_array_equal(obj.R, [[1]])
    np.testing.assert_array_equal(obj.p, [1j])


def test_instantaneous_correct_objective_is_squared_error(rng):
    for _ in range(200):
        n = rng.integers(1, 9)
        y, d, w = crandn(rng, n), complex(*rng.standard_normal(2)), crandn(rng, n)
        obj = instantaneous_correlations(y, d)
        np.testing.assert_allclose(obj.R, obj.R.conj().T)
        assert np.linalg.eigvalsh(obj.R).min() > -1e-12
        assert objective_correct(w, obj) == pytest.approx(abs(d - np.vdot(w, y)) ** 2, rel=1e-10, abs=1e-10)


def test_objective_examples():
    obj = QuadraticObjective(1.0, np.array([1.0]), np.array([[1.0]]))
    assert objective_flawed([1j], obj) == pytest.approx(2 + 2j)
    assert objective_correct([1j], obj) == pytest.approx(2.0)
    z = QuadraticObjective(2.5, np.array([1 + 1j, 2]), np.eye(2))
    assert objective_flawed([0, 0], z) == 2.5
    assert objective_correct(np.zeros(2), z) == 2.5


def test_objective_dimension_mismatch():
    obj = QuadraticObjective(1.0, np.ones(2), np.eye(2))
    with pytest.raises(ValueError):
        objective_correct([1.0], obj)
    with pytest.raises(ValueError):
        objective_flawed([1.0, 2.0, 3.0], obj)
    with pytest.raises(ValueError):
        QuadraticObjective(1.0, np.ones(2), np.eye(3))


def test_flaw_identity_and_realness(rng):
    for _ in range(1000):
        n = rng.integers(1, 9)
        obj = instantaneous_correlations(crandn(rng, n), complex(*rng.standard_normal(2)))
        w = crandn(rng, n)
        flawed = objective_flawed(w, obj)
        correct = objective_correct(w, obj)
        assert isinstance(correct, float)
        assert abs(flawed - correct - (-2j * np.vdot(w, obj.p).imag)) <= 1e-12
        assert correct >= -1e-12


def test_objectives_coincide_on_real_data(rng):
    for _ in range(200):
        n = rng.integers(1, 9)
        y, d, w = rng.standard_normal(n), rng.standard_normal(), rng.standard_normal(n)
        obj = instantaneous_correlations(y, d)
        assert objective_flawed(w, obj) == objective_correct(w, obj)
        assert objective_correct(w, obj) == pytest.approx((d - w @ y) ** 2, rel=1e-9, abs=1e-12)


def test_frac_gradient_paper_examples():
    np.testing.assert_allclose(frac_gradient_paper([1, 1], [1, 1], 1, 0.5),
                               [-1.1283791671, -1.1283791671], atol=1e-10)
    np.testing.assert_array_equal(frac_gradient_paper([0, 0], [3, -1], 2 - 1j, 0.5), [0, 0])
    got = frac_gradient_paper([-4], [1], 1, 0.5)
    assert got[0] == pytest.approx(-2.2567583342j, abs=1e-10)
    assert got[0].imag != 0


def test_frac_gradient_paper_classical_endpoint(rng):
    for _ in range(100):
        n = rng.integers(1, 9)
        w, y, e = crandn(rng, n), crandn(rng, n), complex(*rng.standard_normal(2))
        np.testing.assert_allclose(frac_gradient_paper(w, y, e, 1.0), -y * np.conj(e), rtol=1e-15)


def test_frac_gradient_paper_shape_mismatch():
    with pytest.raises(ValueError):
        frac_gradient_paper([1, 2], [1], 1, 0.5)


def test_frac_gradient_corrected_single_tap():
    obj = QuadraticObjective(1.0, np.array([1.0]), np.array([[1.0]]))
    # 1/Gamma(0.5) - 2/Gamma(1.5) + 2/Gamma(2.5)
    assert frac_gradient_corrected([1.0], obj, 0.5, 1) == pytest.approx(-0.1880631945, abs=1e-10)
    assert frac_gradient_oracle([1.0], obj, 0.5, 1) == pytest.approx(
        frac_gradient_corrected([1.0], obj, 0.5, 1), rel=1e-8)


def test_frac_gradient_corrected_two_taps():
    obj = QuadraticObjective(4.0, np.array([1.0, 1.0]), np.eye(2))
    # constant part 4, linear coefficient -1, R_11 = 1: 4/sqrt(pi) - 4/sqrt(pi) + 8/(3 sqrt(pi))
    expected = 8 / (3 * math.sqrt(math.pi))
    assert frac_gradient_corrected([1.0, 2.0], obj, 0.5, 1) == pytest.approx(expected, rel=1e-12)
    assert frac_gradient_oracle([1.0, 2.0], obj, 0.5, 1) == pytest.approx(expected, rel=1e-10)


def test_frac_gradient_pure_constant():
    obj = QuadraticObjective(3.0, np.zeros(3), np.zeros((3, 3)))
    w = np.array([0.5, 2.0, 1.5])
    expected = 3.0 * 2.0 ** -0.3 / gamma(0.7)
    assert frac_gradient_corrected(w, obj, 0.3, 2) == pytest.approx(expected, rel=1e-12)
    assert frac_gradient_oracle(w, obj, 0.3, 2) == pytest.approx(expected, rel=1e-12)


def test_frac_gradient_without_quadratic_term(rng):
    R = np.array([[0.0, 0.7, 0.2], [0.7, 1.0, -0.3], [0.2, -0.3, 2.0]])
    obj = QuadraticObjective(2.0, np.array([0.5, -1.0, 0.1]), R)
    w = np.array([1.3, 0.4, 2.2])
    assert frac_gradient_corrected(w, obj, 0.6, 1) == pytest.approx(
        frac_gradient_oracle(w, obj, 0.6, 1), rel=1e-10)


def test_frac_gradient_singularities():
    obj = QuadraticObjective(1.0, np.ones(2), np.eye(2))
    for w in ([0.0, 1.0], [-1.0, 1.0]):
        with pytest.raises(ValueError):
            frac_gradient_corrected(w, obj, 0.5, 1)
        with pytest.raises(ValueError):
            frac_gradient_oracle(w, obj, 0.5, 1)
    with pytest.raises(ValueError):
        frac_gradient_corrected([1j, 1.0], obj, 0.5, 2)
    with pytest.raises(IndexError):
        frac_gradient_corrected([1.0, 1.0], obj, 0.5, 3)
    with pytest.raises(ValueError):
        frac_gradient_corrected([1.0, 1.0], QuadraticObjective(1.0, np.ones(2), [[1, 2], [0, 1]]), 0.5, 1)


def random_objective(rng, n):
    if rng.random() < 0.5:
        return instantaneous_correlations(rng.standard_normal(n), rng.standard_normal())
    a = rng.standard_normal((n, n))
    return QuadraticObjective(rng.uniform(0, 5), rng.standard_normal(n), a @ a.T)


def test_frac_gradient_oracle_equivalence(rng):
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        obj = random_objective(rng, n)
        w = rng.uniform(0.1, 5, n)
        nu = float(rng.choice([0.3, 0.5, 0.7, 0.9]))
        ell = int(rng.integers(1, n + 1))
        a = frac_gradient_corrected(w, obj, nu, ell)
        b = frac_gradient_oracle(w, obj, nu, ell)
        worst = max(worst, abs(a - b) / max(abs(a), abs(b)))
    assert worst <= 1e-8


def test_frac_gradient_classical_limit(rng):
    nu = 1 - 1e-8
    for _ in range(200):
        n = int(rng.integers(1, 9))
        obj = random_objective(rng, n)
        w = rng.uniform(0.1, 5, n)
        ell = int(rng.integers(1, n + 1))
        classical = 2 * (w @ obj.R[:, ell - 1] - obj.p[ell - 1])
        assert frac_gradient_corrected(w, obj, 1.0, ell) == pytest.approx(classical, rel=1e-12, abs=1e-12)
        assert frac_gradient_corrected(w, obj, nu, ell) == pytest.approx(classical, rel=1e-5)
