"""Learning-curve post-processing: steady-state level, divergence labels and
Table-1-style reports.

A diverged steady state is represented as ``math.inf``.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

ALGORITHM_ORDER = ("LMS", "NLMS", "CLMS", "FCLMS", "FNLMS")

# Published FCLMS steady-state errors in dB; inf marks the diverged orders.
TABLE1_FCLMS = {0.4: math.inf, 0.5: math.inf, 0.6: -10.15, 0.7: -11.25,
                0.8: -11.91, 0.9: -12.38, 1.0: -12.77}

# Slack on window-mean comparisons so rounding in a flat tail is not divergence.
GROWTH_RTOL = 1e-9

CONVERGING = "converging"
DIVERGING = "diverging"
FAILED_NONREAL = "failed-nonreal"


@dataclass
class LearningCurve:
    """Mean deviation per iteration, averaged over ``runs`` Monte Carlo runs."""

    values: np.ndarray
    algorithm: str
    nu: float
    runs: int = 1
    diverged_runs: int = 0
    nonreal_runs: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    @property
    def label(self):
        return f"{self.algorithm}_nu={self.nu:.1f}"

    @property
    def key(self):
        alg = ALGORITHM_ORDER.index(self.algorithm) if self.algorithm in ALGORITHM_ORDER else len(ALGORITHM_ORDER)
        return (alg, self.algorithm, self.nu)


def _values(curve):
    return curve.values if isinstance(curve, LearningCurve) else np.asarray(curve, dtype=float)


def _window_means(v, window, checkpoint, halfwidth):
    final = v[-window:]
    lo, hi = max(0, checkpoint - halfwidth), checkpoint + halfwidth + 1
    early = v[lo:hi] if hi <= v.size else None
    final_mean = float(np.mean(final)) if np.all(np.isfinite(final)) else math.inf
    early_mean = None
    if early is not None:
        early_mean = float(np.mean(early)) if np.all(np.isfinite(early)) else math.inf
    return final_mean, early_mean


def _grows(final_mean, early_mean):
    if math.isinf(final_mean) or math.isinf(early_mean):
        return final_mean > early_mean
    return final_mean > early_mean * (1 + GROWTH_RTOL)


def steady_state_db(curve, window=100, checkpoint=100, halfwidth=10):
    """``10 log10`` of the mean over the final ``window`` values.

    Returns ``inf`` (diverged) when the final window holds a non-finite value
    or its mean exceeds the mean over ``checkpoint +/- halfwidth``.
    """
    v = _values(curve)
    if v.size == 0:
        raise ValueError("empty learning curve")
    if not 1 <= window <= v.size:
        raise ValueError(f"window {window} must be in 1..{v.size}")
    final_mean, early_mean = _window_means(v, window, checkpoint, halfwidth)
    if math.isinf(final_mean):
        return math.inf
    if early_mean is not None and _grows(final_mean, early_mean):
        return math.inf
    if final_mean <= 0:
        return -math.inf
    return 10 * math.log10(final_mean)


def classify_divergence(curve, checkpoint=100, window=100, halfwidth=10):
    """Label a mean learning curve.

    ``diverging`` when the final-window mean exceeds the checkpoint-window
    mean; otherwise ``failed-nonreal`` when any real-data run leaked into
    complex weights; otherwise ``diverging`` if the tail is non-finite, else
    ``converging``.
    """
    v = _values(curve)
    if not 0 <= checkpoint < v.size:
        raise ValueError(f"checkpoint {checkpoint} must be < curve length {v.size}")
    final_mean, early_mean = _window_means(v, min(window, v.size), checkpoint, halfwidth)
    if early_mean is None:
        early_mean = float(v[checkpoint]) if np.isfinite(v[checkpoint]) else math.inf
    if _grows(final_mean, early_mean):
        return DIVERGING
    if isinstance(curve, LearningCurve) and curve.nonreal_runs > 0:
        return FAILED_NONREAL
    if math.isinf(final_mean):
        return DIVERGING
    return CONVERGING


@dataclass
class SteadyStateReport:
    """Steady-state dB per (algorithm, nu); ``inf`` marks divergence."""

    entries: dict = field(default_factory=dict)

    def algorithms(self):
        seen = []
        for alg, _ in self.entries:
            if alg not in seen:
                seen.append(alg)
        return seen

    def nus(self):
        return sorted({nu for _, nu in self.entries})

    def get(self, algorithm, nu):
        return self.entries[(algorithm, float(nu))]

    def to_csv(self):
        nus = self.nus()
        lines = ["algorithm," + ",".join(f"nu={nu:.1f}" for nu in nus)]
        for alg in self.algorithms():
            cells = [_fmt(self.entries.get((alg, nu))) for nu in nus]
            lines.append(",".join([alg] + cells))
        return "\n".join(lines) + "\n"

    def to_json(self):
        table = {}
        for (alg, nu), value in self.entries.items():
            table.setdefault(alg, {})[f"{nu:.1f}"] = "diverged" if math.isinf(value) else round(value, 6)
        return json.dumps(table, indent=2) + "\n"


def _fmt(value):
    if value is None:
        return ""
    if math.isinf(value) and value > 0:
        return "diverged"
    return f"{value:.4f}"


def build_table(curves, window=100):
    """Steady-state report ordered by algorithm, then ascending nu."""
    curves = list(curves)
    if not curves:
        raise ValueError("no curves to tabulate")
    entries = {}
    for c in sorted(curves, key=lambda c: c.key):
        k = (c.algorithm, float(c.nu))
        if k in entries:
            raise ValueError(f"duplicate curve for {c.label}")
        entries[k] = steady_state_db(c, window=min(window, c.values.size))
    return SteadyStateReport(entries)
