"""Instantaneous correlations, the two MSE objectives and the fractional
gradients built from them."""

from dataclasses import dataclass

import numpy as np

from fraclms.fractional import check_order, gamma, principal_power


@dataclass(frozen=True)
class QuadraticObjective:
    """Quadratic MSE surface ``sigma2 - 2 w^H p + w^H R w`` (or its real form)."""

    sigma2: float
    p: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.p))
        R = np.atleast_2d(np.asarray(self.R))
        if R.shape != (p.size, p.size):
            raise ValueError(f"R has shape {R.shape}, expected {(p.size, p.size)}")
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be >= 0")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "sigma2", float(self.sigma2))

    @property
    def taps(self):
        return self.p.size

    def is_real(self):
        return not (np.iscomplexobj(self.p) and np.any(self.p.imag)) and not (
            np.iscomplexobj(self.R) and np.any(self.R.imag)
        )


def instantaneous_correlations(y, d):
    """Rank-one correlation estimates from one regressor/desired pair.

    ``p = y * conj(d)``, ``R = y y^H`` and ``sigma2 = |d|^2``. On real data
    this is ``p_n = y_n d`` and ``R_nm = y_n y_m``; the conjugates make
    :func:`objective_correct` equal ``|d - w^H y|^2`` on complex data.
    """
    y = np.atleast_1d(np.asarray(y))
    if y.ndim != 1 or y.size < 1:
        raise ValueError("y must be a non-empty vector")
    if np.iscomplexobj(y) or np.iscomplexobj(d):
        return QuadraticObjective(abs(d) ** 2, y * np.conj(d), np.outer(y, np.conj(y)))
    return QuadraticObjective(float(d) ** 2, y * d, np.outer(y, y))


def _weights_for(w, obj):
    w = np.atleast_1d(np.asarray(w))
    if w.shape != (obj.taps,):
        raise ValueError(f"w has shape {w.shape}, objective has {obj.taps} taps")
    return w


def objective_flawed(w, obj):
    """``sigma2 - 2 w^H p + w^H R w`` kept complex, as in the flawed derivation."""
    w = _weights_for(w, obj)
    return complex(obj.sigma2 - 2 * np.vdot(w, obj.p) + np.vdot(w, obj.R @ w))


def objective_correct(w, obj):
    """Real MSE ``sigma2 - 2 Re{w^H p} + w^H R w`` (R Hermitian)."""
    w = _weights_for(w, obj)
    return float(obj.sigma2 - 2 * np.vdot(w, obj.p).real + np.vdot(w, obj.R @ w).real)


def frac_gradient_paper(w, y, e, nu):
    """The disputed fractional gradient term used by FCLMS.

    Componentwise ``-Gamma(2) * y * conj(e) * w**(1-nu) / Gamma(2-nu)`` with
    principal-branch powers, so negative weights give non-real output.
    """
    nu = check_order(nu)
    w = np.atleast_1d(np.asarray(w))
    y = np.atleast_1d(np.asarray(y))
    if w.shape != y.shape:
        raise ValueError(f"w {w.shape} and y {y.shape} differ in shape")
    return -gamma(2.0) * y * np.conj(e) * principal_power(w, 1.0 - nu) / gamma(2.0 - nu)


def _check_real_positive(w, obj, ell):
    w = _weights_for(w, obj)
    if np.iscomplexobj(w) and np.any(w.imag):
        raise ValueError("fractional gradient is defined for real weights only")
    if not obj.is_real():
        raise ValueError("fractional gradient is defined for real correlations only")
    if not 1 <= ell <= obj.taps:
        raise IndexError(f"ell must be in 1..{obj.taps}, got {ell}")
    w = np.real(w).astype(float)
    if not w[ell - 1] > 0:
        raise ValueError(
            f"w[{ell}] = {w[ell - 1]} <= 0: Riemann-Liouville term w**(-nu) is singular"
        )
    return w


def frac_gradient_corrected(w, obj, nu, ell):
    """Riemann-Liouville derivative of order nu of J w.r.t. weight ``ell`` (1-based).

    J is split into a part constant in the chosen weight, a linear part and a
    quadratic part, and the power rule is applied to each (R symmetric).
    At ``nu = 1`` the constant term drops out and the classical partial
    derivative is recovered.
    """
    nu = check_order(nu)
    w = _check_real_positive(w, obj, ell)
    p = np.real(obj.p)
    R = np.real(obj.R)
    if not np.allclose(R, R.T, rtol=0, atol=1e-12 * max(1.0, np.abs(R).max())):
        raise ValueError("R must be symmetric")
    i = ell - 1
    wl = w[i]
    others = np.ones(w.size, dtype=bool)
    others[i] = False
    wo = w[others]

    constant = obj.sigma2 - 2 * wo @ p[others] + wo @ R[np.ix_(others, others)] @ wo
    linear = wo @ R[others, i] - p[i]

    out = 2 * linear * wl ** (1 - nu) / gamma(2 - nu) + 2 * R[i, i] * wl ** (2 - nu) / gamma(3 - nu)
    if nu < 1:
        out += constant * wl ** (-nu) / gamma(1 - nu)
    return float(out)


def frac_gradient_oracle(w, obj, nu, ell):
    """Brute-force check of :func:`frac_gradient_corrected`.

    Evaluates J at the chosen weight set to 0, 1 and 2, interpolates the
    quadratic ``c0 + c1 x + c2 x^2`` and applies the power rule term by term.
    """
    nu = check_order(nu)
    w = _check_real_positive(w, obj, ell)
    i = ell - 1

    def J(x):
        v = w.copy()
        v[i] = x
        return objective_correct(v, obj)

    j0, j1, j2 = J(0.0), J(1.0), J(2.0)
    c0 = j0
    c2 = (j2 - 2 * j1 + j0) / 2
    c1 = j1 - j0 - c2
    x = w[i]
    out = c1 * gamma(2) / gamma(2 - nu) * x ** (1 - nu) + c2 * gamma(3) / gamma(3 - nu) * x ** (2 - nu)
    if nu < 1:
        out += c0 * x ** (-nu) / gamma(1 - nu)
    return float(out)
