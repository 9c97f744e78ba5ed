"""LMS-family adaptive filters behind one init/step interface.

All updates accept an optional leading batch axis: ``w`` and ``y`` of shape
``(..., N)`` and ``d`` of shape ``(...)`` advance independent filters in
lockstep, which is how the Monte Carlo harness drives them.
"""

from dataclasses import dataclass, replace

import numpy as np

from fraclms.fractional import check_order, gamma, principal_power

ALGORITHMS = ("LMS", "NLMS", "CLMS", "FCLMS", "FNLMS")
FRACTIONAL = ("FCLMS", "FNLMS")
NORMALIZED = ("NLMS", "FNLMS")


@dataclass(frozen=True)
class FilterConfig:
    """Algorithm choice and step sizes.

    ``mu1`` is the integral step (mu/eta for LMS, CLMS and FCLMS, mu_l/beta for
    NLMS and FNLMS); ``mu_frac`` scales the fractional term (eta_f or gamma).
    """

    algorithm: str
    taps: int
    mu1: float
    mu_frac: float = 0.0
    nu: float = 1.0
    epsilon: float = 1e-6

    def __post_init__(self):
        alg = str(self.algorithm).upper()
        if alg not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        object.__setattr__(self, "algorithm", alg)
        if int(self.taps) != self.taps or self.taps < 1:
            raise ValueError(f"taps must be a positive integer, got {self.taps}")
        object.__setattr__(self, "taps", int(self.taps))
        if not self.mu1 > 0:
            raise ValueError(f"mu1 must be > 0, got {self.mu1}")
        if alg in FRACTIONAL:
            if not self.mu_frac > 0:
                raise ValueError(f"{alg} requires mu_frac > 0, got {self.mu_frac}")
        elif self.mu_frac != 0:
            raise ValueError(f"{alg} has no fractional term; mu_frac must be 0")
        object.__setattr__(self, "nu", check_order(self.nu))
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")

    @property
    def is_fractional(self):
        return self.algorithm in FRACTIONAL

    @property
    def label(self):
        return f"{self.algorithm}_nu={self.nu:.1f}"


@dataclass(frozen=True)
class FilterState:
    w: np.ndarray
    k: int = 0


def init(config, batch=()):
    """Zero weights, iteration 0."""
    if not isinstance(config, FilterConfig):
        raise TypeError("init expects a FilterConfig")
    return FilterState(np.zeros(tuple(batch) + (config.taps,), dtype=complex), 0)


def error(w, y, d):
    """A-priori error ``d - w^H y`` along the last axis."""
    return d - np.sum(np.conj(w) * y, axis=-1)


def update(w, config, y, d):
    """One weight update without validation; returns ``(w_next, e)``."""
    e = error(w, y, d)
    alg = config.algorithm
    if alg in NORMALIZED:
        g = (e / (np.sum(np.abs(y) ** 2, axis=-1) + config.epsilon))[..., None]
        w_next = w + config.mu1 * g * y
        if alg == "FNLMS":
            frac = principal_power(w, 1.0 - config.nu) / gamma(2.0 - config.nu)
            w_next = w_next + config.mu_frac * gamma(2.0) * g * (y * frac)
    else:
        g = np.conj(e)[..., None]
        w_next = w + config.mu1 * g * y
        if alg == "FCLMS":
            frac = principal_power(w, 1.0 - config.nu) / gamma(2.0 - config.nu)
            w_next = w_next + config.mu_frac * gamma(2.0) * g * (y * frac)
    return w_next, e


def step(state, config, y, d):
    """Advance ``state`` by one sample; returns ``(new_state, e)``.

    Non-real weights produced by the fractional power are kept, not
    projected back, so their effect on later iterations is visible.
    """
    y = np.asarray(y)
    d = np.asarray(d)
    if y.shape[-1:] != (config.taps,) or y.shape != state.w.shape:
        raise ValueError(f"regressor shape {y.shape} does not match weights {state.w.shape}")
    if d.shape != y.shape[:-1]:
        raise ValueError(f"desired shape {d.shape} does not match batch {y.shape[:-1]}")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(d))):
        raise ValueError("non-finite regressor or desired sample")
    with np.errstate(over="ignore", invalid="ignore"):
        w_next, e = update(state.w, config, y, d)
    return replace(state, w=w_next, k=state.k + 1), e
