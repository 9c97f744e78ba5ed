"""System-identification scenarios and the Monte Carlo runner.

Seeding: every run owns the seed sequence ``SeedSequence(master_seed,
spawn_key=(run_index,))``; its input signal is drawn from child key
``(run_index, 0)`` and its measurement noise from ``(run_index, 1)``, each
through a counter-based Philox generator. All algorithms of a protocol see the
same signals for a given run index, and results do not depend on how runs are
split across worker processes.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from fraclms.filters import FilterConfig, init, update
from fraclms.metrics import LearningCurve

SIGNAL_KINDS = ("real-gaussian", "circular-complex-gaussian")
DIVERGENCE_THRESHOLD = 1e6
NONREAL_TOL = 1e-12

PAPER_NUS = (0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
NEGATIVE_WEIGHTS = tuple(range(-10, 11))
POSITIVE_WEIGHTS = (1, 2, 2, 2, 1, 1, 2, 2, 3, 1, 1, 2, 2, 2, 1,
                    2, 1, 2, 2, 2, 1, 1, 2, 2, 2, 1, 1, 3, 2, 2)
PRESETS = ("fnlms-negative", "fnlms-positive", "fclms-negative")


@dataclass(frozen=True)
class SystemSpec:
    """Unknown FIR system, excitation and measurement noise.

    ``snr_reference`` selects the power the SNR is measured against:
    ``"output"`` uses the noiseless output power ``||w_true||^2`` (unit-power
    white input), ``"input"`` uses the unit input power, i.e. the noise
    variance is ``10**(-snr_db/10)`` regardless of the system gain.
    """

    w_true: np.ndarray
    signal_kind: str = "real-gaussian"
    snr_db: float | None = None
    samples: int = 1000
    snr_reference: str = "output"

    def __post_init__(self):
        w = np.atleast_1d(np.asarray(self.w_true))
        if w.ndim != 1 or w.size < 1:
            raise ValueError("w_true must be a non-empty vector")
        if not np.iscomplexobj(w):
            w = w.astype(float)
        object.__setattr__(self, "w_true", w)
        if self.signal_kind not in SIGNAL_KINDS:
            raise ValueError(f"signal_kind must be one of {SIGNAL_KINDS}")
        if int(self.samples) != self.samples or self.samples < w.size:
            raise ValueError(f"samples ({self.samples}) must be an integer >= taps ({w.size})")
        object.__setattr__(self, "samples", int(self.samples))
        if self.snr_reference not in ("output", "input"):
            raise ValueError("snr_reference must be 'output' or 'input'")

    @property
    def taps(self):
        return self.w_true.size

    @property
    def is_complex(self):
        return self.signal_kind == "circular-complex-gaussian" or np.iscomplexobj(self.w_true)

    @property
    def noise_variance(self):
        if self.snr_db is None:
            return 0.0
        power = 1.0 if self.snr_reference == "input" else float(np.sum(np.abs(self.w_true) ** 2))
        return power / 10 ** (self.snr_db / 10)


@dataclass(frozen=True)
class ProtocolSpec:
    name: str
    system: SystemSpec
    configs: tuple
    runs: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "configs", tuple(self.configs))
        if not self.configs:
            raise ValueError("protocol needs at least one filter configuration")
        if int(self.runs) != self.runs or self.runs < 1:
            raise ValueError(f"runs must be a positive integer, got {self.runs}")
        for c in self.configs:
            if c.taps != self.system.taps:
                raise ValueError(f"{c.label} has {c.taps} taps, system has {self.system.taps}")
        labels = [c.label for c in self.configs]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate (algorithm, nu) pair in protocol")

    @property
    def nu_list(self):
        return sorted({c.nu for c in self.configs if c.is_fractional})


@dataclass
class RunResult:
    md_curve: np.ndarray
    diverged: bool
    first_nonreal_iteration: int | None = None
    final_weights: np.ndarray = field(default=None, repr=False)


def _seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def run_seed(master_seed, run_index):
    """Seed sequence owned by Monte Carlo run ``run_index``."""
    return np.random.SeedSequence(master_seed, spawn_key=(run_index,))


def _child(seed, stream):
    ss = _seed_sequence(seed)
    return np.random.SeedSequence(ss.entropy, spawn_key=tuple(ss.spawn_key) + (stream,))


def _generator(seed):
    return np.random.Generator(np.random.Philox(_seed_sequence(seed)))


def generate_input(kind, length, seed):
    """Unit-power white Gaussian excitation of the given kind (complex dtype)."""
    if kind not in SIGNAL_KINDS:
        raise ValueError(f"signal kind must be one of {SIGNAL_KINDS}")
    if int(length) != length or length < 1:
        raise ValueError(f"length must be a positive integer, got {length}")
    rng = _generator(seed)
    if kind == "real-gaussian":
        return rng.standard_normal(int(length)) + 0j
    z = rng.standard_normal((int(length), 2)) / np.sqrt(2)
    return z[:, 0] + 1j * z[:, 1]


def regressors(x, taps):
    """Tapped-delay-line regressors ``[x(k), ..., x(k-N+1)]``, zero-prefilled.

    Returns an array of shape ``(len(x), taps)``.
    """
    x = np.asarray(x)
    padded = np.concatenate([np.zeros(taps - 1, dtype=x.dtype), x])
    return sliding_window_view(padded, taps)[:, ::-1]


def _noise(n, variance, is_complex, seed):
    rng = _generator(seed)
    if is_complex:
        z = rng.standard_normal((n, 2)) * np.sqrt(variance / 2)
        return z[:, 0] + 1j * z[:, 1]
    return rng.standard_normal(n) * np.sqrt(variance) + 0j


def synthesize_desired(x, spec, seed):
    """Desired signal ``d(k) = w_true^H y(k) + v(k)`` for the input ``x``."""
    x = np.asarray(x)
    if x.shape != (spec.samples,):
        raise ValueError(f"input has shape {x.shape}, expected ({spec.samples},)")
    d = regressors(x, spec.taps) @ np.conj(spec.w_true)
    d = d.astype(complex)
    if spec.snr_db is not None:
        d = d + _noise(spec.samples, spec.noise_variance, spec.is_complex, seed)
    return d


def _signals(spec, seeds):
    x = np.empty((len(seeds), spec.samples), dtype=complex)
    d = np.empty_like(x)
    for r, s in enumerate(seeds):
        x[r] = generate_input(spec.signal_kind, spec.samples, _child(s, 0))
        d[r] = synthesize_desired(x[r], spec, _child(s, 1))
    return x, d


def _run_batch(spec, config, x, d):
    """Drive a batch of filters over pre-generated signals.

    Returns (md, first_nonreal, final_w); ``md[:, k]`` is the mean deviation
    of ``w(k)``, the weights before the k-th update, and non-finite values are
    stored as +inf. ``first_nonreal`` is -1 where no leakage was seen.
    """
    runs, samples = x.shape
    taps = spec.taps
    padded = np.concatenate([np.zeros((runs, taps - 1), dtype=complex), x], axis=1)
    w_true = spec.w_true
    track_nonreal = not spec.is_complex

    w = init(config, batch=(runs,)).w
    md = np.empty((runs, samples))
    first_nonreal = np.full(runs, -1)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for k in range(samples):
            md[:, k] = np.sum(np.abs(w_true - w), axis=1) / taps
            y = np.ascontiguousarray(padded[:, k:k + taps][:, ::-1])
            w, _ = update(w, config, y, d[:, k])
            if track_nonreal:
                leak = (np.max(np.abs(w.imag), axis=1) > NONREAL_TOL) & (first_nonreal < 0)
                first_nonreal[leak] = k + 1
    md[~np.isfinite(md)] = np.inf
    return md, first_nonreal, w


def run_single(spec, config, seed):
    """One independent system-identification run of one filter."""
    if config.taps != spec.taps:
        raise ValueError(f"filter has {config.taps} taps, system has {spec.taps}")
    x, d = _signals(spec, [_seed_sequence(seed)])
    md, fnr, w = _run_batch(spec, config, x, d)
    curve = md[0]
    return RunResult(
        md_curve=curve,
        diverged=bool(np.any(curve > DIVERGENCE_THRESHOLD)),
        first_nonreal_iteration=None if fnr[0] < 0 else int(fnr[0]),
        final_weights=w[0],
    )


def _simulate_chunk(protocol, start, stop):
    seeds = [run_seed(protocol.master_seed, i) for i in range(start, stop)]
    x, d = _signals(protocol.system, seeds)
    out = []
    for config in protocol.configs:
        md, fnr, _ = _run_batch(protocol.system, config, x, d)
        out.append((md, fnr))
    return out


def _chunks(runs, n):
    bounds = np.linspace(0, runs, n + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def run_monte_carlo(protocol, workers=1, chunks=None):
    """Mean learning curve per (algorithm, nu), keyed by label.

    Runs are split into contiguous chunks (``chunks`` defaults to
    ``workers``) that may execute in separate processes; the per-run curves
    are reassembled in run order before averaging, so the output is
    bit-identical for any ``workers``/``chunks`` choice.
    """
    workers = max(1, int(workers))
    parts = _chunks(protocol.runs, chunks or workers)
    if workers == 1 or len(parts) == 1:
        results = [_simulate_chunk(protocol, a, b) for a, b in parts]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_simulate_chunk, protocol, a, b) for a, b in parts]
            results = [f.result() for f in futures]

    curves = {}
    for i, config in enumerate(protocol.configs):
        md = np.concatenate([r[i][0] for r in results], axis=0)
        fnr = np.concatenate([r[i][1] for r in results])
        curves[config.label] = LearningCurve(
            values=md.mean(axis=0),
            algorithm=config.algorithm,
            nu=config.nu,
            runs=protocol.runs,
            diverged_runs=int(np.sum(np.any(md > DIVERGENCE_THRESHOLD, axis=1))),
            nonreal_runs=int(np.sum(fnr >= 0)),
        )
    return curves


def preset(name, runs=1000, samples=1000, seed=0, nu_list=PAPER_NUS):
    """Replication protocol presets.

    fnlms-negative: real input, w_true = -10..10, 10 dB SNR; NLMS mu=1 vs
    FNLMS beta=gamma=0.5. fnlms-positive: the 30-tap positive system,
    noiseless, same step sizes. fclms-negative: circular complex input,
    w_true = -10..10, 10 dB SNR; CLMS eta=0.04 vs FCLMS eta=eta_f=0.02.
    The SNR is referenced to the unit input power (see SystemSpec).
    """
    nus = sorted({float(v) for v in nu_list})
    if name == "fnlms-negative":
        w, kind, snr = NEGATIVE_WEIGHTS, "real-gaussian", 10.0
        base = FilterConfig("NLMS", len(w), mu1=1.0)
        frac = [FilterConfig("FNLMS", len(w), mu1=0.5, mu_frac=0.5, nu=v) for v in nus]
    elif name == "fnlms-positive":
        w, kind, snr = POSITIVE_WEIGHTS, "real-gaussian", None
        base = FilterConfig("NLMS", len(w), mu1=1.0)
        frac = [FilterConfig("FNLMS", len(w), mu1=0.5, mu_frac=0.5, nu=v) for v in nus]
    elif name == "fclms-negative":
        w, kind, snr = NEGATIVE_WEIGHTS, "circular-complex-gaussian", 10.0
        base = FilterConfig("CLMS", len(w), mu1=0.04)
        frac = [FilterConfig("FCLMS", len(w), mu1=0.02, mu_frac=0.02, nu=v) for v in nus]
    else:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")
    system = SystemSpec(np.array(w, dtype=float), kind, snr, samples, snr_reference="input")
    return ProtocolSpec(name, system, [base] + frac, runs=runs, master_seed=seed)
