import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraclms.fractional import (
    gamma,
    gl_fractional_derivative_oracle,
    principal_power,
    rl_power_derivative,
)

mpmath.mp.dps = 30


@pytest.mark.parametrize("x, expected", [
    (1, 1.0),
    (2, 1.0),
    (1.5, math.sqrt(math.pi) / 2),
    (2.5, 3 * math.sqrt(math.pi) / 4),
])
def test_gamma_known_values(x, expected):
    assert gamma(x) == pytest.approx(expected, rel=1e-14)
    assert gamma(1.5) == pytest.approx(0.8862269255, abs=1e-10)


@pytest.mark.parametrize("x", [0, -0.5, -2])
def test_gamma_domain(x):
    with pytest.raises(ValueError):
        gamma(x)


def test_gamma_accuracy_against_mpmath():
    for x in np.linspace(0.5, 3.0, 251):
        ref = float(mpmath.gamma(mpmath.mpf(float(x))))
        assert abs(gamma(x) - ref) / ref <= 1e-12


def test_gamma_recurrence(rng):
    for x in rng.uniform(0.5, 2.0, 1000):
        assert abs(gamma(x + 1) - x * gamma(x)) / gamma(x + 1) <= 1e-12


@pytest.mark.parametrize("z, nu, t, expected", [
    (1, 0.5, 4, 2.2567583342),
    (0, 0.5, 1, 0.5641895835),
    # Gamma(3)/Gamma(2.7), evaluated in mpmath and by the Grunwald-Letnikov oracle
    (2, 0.3, 1, 1.2947616536),
])
def test_rl_power_derivative_examples(z, nu, t, expected):
    assert rl_power_derivative(z, nu, t) == pytest.approx(expected, abs=1e-9)


def test_rl_power_derivative_domain():
    with pytest.raises(ValueError):
        rl_power_derivative(1, 0.5, 0)
    with pytest.raises(ValueError):
        rl_power_derivative(1, 0.5, -1)
    with pytest.raises(ValueError):
        rl_power_derivative(1, 0.0, 1)
    with pytest.raises(ValueError):
        rl_power_derivative(1, 1.2, 1)


@given(z=st.just(0.0) | st.floats(1e-6, 4.0), t=st.floats(0.01, 10.0))
def test_rl_power_derivative_classical_endpoint(z, t):
    expected = z * t ** (z - 1) if z > 0 else 0.0
    got = rl_power_derivative(z, 1.0, t)
    assert got == pytest.approx(expected, rel=1e-12, abs=1e-300)


def test_principal_power_examples():
    assert principal_power(-4, 0.5) == pytest.approx(2j, abs=1e-15)
    assert principal_power(0, 0) == 1
    assert principal_power(0, 0.3) == 0
    z = principal_power(-1, 0.6)
    assert z.real == pytest.approx(-0.3090169944, abs=1e-10)
    assert z.imag == pytest.approx(0.9510565163, abs=1e-10)


def test_principal_power_negative_zero_imag_uses_upper_branch():
    assert principal_power(complex(-4, -0.0), 0.5).imag > 0
    arr = principal_power(np.array([complex(-4, -0.0), -4, 0, 4]), 0.5)
    np.testing.assert_allclose(arr, [2j, 2j, 0, 2], atol=1e-15)
    assert arr[3].imag == 0


def test_principal_power_zero_negative_exponent():
    with pytest.raises(ValueError):
        principal_power(0, -0.5)
    with pytest.raises(ValueError):
        principal_power(np.array([1.0, 0.0]), -0.5)


nonzero_complex = st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3, allow_nan=False,
                                     allow_infinity=False)


@given(b=nonzero_complex)
def test_principal_power_identities(b):
    assert principal_power(b, 1) == pytest.approx(b, rel=1e-12)
    assert principal_power(b, 0) == 1


@given(b=nonzero_complex, a=st.floats(-2, 2))
def test_principal_power_matches_cmath_branch(b, a):
    b = complex(b.real, b.imag + 0.0)
    expected = cmath.exp(a * (math.log(abs(b)) + 1j * cmath.phase(b)))
    assert principal_power(b, a) == pytest.approx(expected, rel=1e-12)
    assert principal_power(np.array([b]), a)[0] == pytest.approx(expected, rel=1e-12)


@given(b=st.floats(1e-6, 1e6), a=st.floats(-3, 3))
def test_principal_power_positive_reals_stay_real(b, a):
    assert principal_power(b, a).imag == 0
    assert principal_power(np.array([b, 2 * b]), a).imag.tolist() == [0.0, 0.0]


@pytest.mark.parametrize("f, nu, t, z", [
    (lambda s: s, 0.5, 4, 1),
    (lambda s: 1, 0.5, 1, 0),
    (lambda s: s ** 2, 0.3, 1, 2),
])
def test_gl_oracle_examples(f, nu, t, z):
    got = gl_fractional_derivative_oracle(f, nu, t, steps=100_000)
    assert got == pytest.approx(rl_power_derivative(z, nu, t), abs=1e-3)


def test_gl_oracle_scalar_only_callable():
    got = gl_fractional_derivative_oracle(lambda s: math.sqrt(s) if s >= 0 else 0, 0.5, 1.0, 2000)
    # D^0.5 s^0.5 = Gamma(1.5)
    assert got == pytest.approx(gamma(1.5), rel=2e-2)


@pytest.mark.parametrize("z", [0, 1, 2])
@pytest.mark.parametrize("nu", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("t", [0.5, 1.0, 4.0])
def test_gl_oracle_grid(z, nu, t):
    gl = gl_fractional_derivative_oracle(lambda s: s ** z, nu, t, 100_000)
    exact = rl_power_derivative(z, nu, t)
    assert abs(gl - exact) / abs(exact) <= 1e-3


def test_gl_oracle_preconditions():
    with pytest.raises(ValueError):
        gl_fractional_derivative_oracle(lambda s: s, 0.5, 1.0, steps=99)
    with pytest.raises(ValueError):
        gl_fractional_derivative_oracle(lambda s: s, 0.5, 0.0)
