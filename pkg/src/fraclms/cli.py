"""Command-line entry point.

    fraclms replicate <preset|all> [--runs N] [--samples N] [--seed S]
                      [--nu 0.4,0.5,...] [--out DIR] [--format csv|json|both]
    fraclms run <config> [same overrides]
    fraclms gradcheck [--trials N] [--nu V] [--seed S]

Exit codes: 0 success, 1 usage or configuration error, 2 tolerance failure.

Config files for ``run`` are flat ``key = value`` lines; ``#`` starts a
comment. System keys: ``name``, ``w_true`` (comma-separated, complex allowed),
``taps``, ``signal`` (real-gaussian | circular-complex-gaussian), ``snr_db``,
``snr_reference`` (output | input), ``samples``, ``runs``, ``seed``. Each
``algorithm`` line opens a new filter; the ``mu1``, ``mu_frac``, ``nu`` and
``epsilon`` lines that follow apply to it. ``nu`` may list several orders,
giving one filter per order.
"""

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from fraclms.filters import FilterConfig
from fraclms.fractional import gl_fractional_derivative_oracle, rl_power_derivative
from fraclms.harness import PRESETS, ProtocolSpec, SystemSpec, preset, run_monte_carlo
from fraclms.metrics import (
    CONVERGING,
    TABLE1_FCLMS,
    build_table,
    classify_divergence,
)
from fraclms.objectives import (
    QuadraticObjective,
    frac_gradient_corrected,
    frac_gradient_oracle,
    instantaneous_correlations,
)

TABLE1_TOL_DB = 2.0
ORACLE_TOL = 1e-8
GL_TOL = 1e-3
ENDPOINT_TOL = 1e-5


class UsageError(Exception):
    pass


class ConfigError(UsageError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _nu_list(text):
    try:
        nus = [float(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid nu list {text!r}")
    if not nus or any(not 0 < v <= 1 for v in nus):
        raise argparse.ArgumentTypeError("nu values must lie in (0, 1]")
    return nus


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _add_overrides(p):
    p.add_argument("--runs", type=_positive_int)
    p.add_argument("--samples", type=_positive_int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", default="results")
    p.add_argument("--format", choices=("csv", "json", "both"), default="both")
    p.add_argument("--workers", type=_positive_int, default=1,
                   help="worker processes for the Monte Carlo runs (output is identical)")


def build_parser():
    parser = _Parser(prog="fraclms", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rep = sub.add_parser("replicate", help="run a replication preset")
    rep.add_argument("preset", choices=PRESETS + ("all",))
    rep.add_argument("--nu", type=_nu_list)
    _add_overrides(rep)

    run = sub.add_parser("run", help="run a custom scenario from a config file")
    run.add_argument("config")
    _add_overrides(run)

    grad = sub.add_parser("gradcheck", help="check fractional gradients against oracles")
    grad.add_argument("--trials", type=int, default=1000)
    grad.add_argument("--nu", type=float)
    grad.add_argument("--seed", type=int, default=0)
    return parser


# -- config files ---------------------------------------------------------

def _parse_vector(text):
    return np.array([complex(v.strip().replace(" ", "")) for v in text.split(",") if v.strip()])


def parse_config(text, source="<config>"):
    """Parse a key-value scenario file into a ProtocolSpec."""
    system = {}
    filters = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        try:
            if key == "algorithm":
                filters.append({"algorithm": value, "line": lineno})
            elif key in ("mu1", "mu_frac", "epsilon"):
                if not filters:
                    raise ConfigError(f"{where}: {key} given before any algorithm line")
                filters[-1][key] = float(value)
            elif key == "nu":
                if not filters:
                    raise ConfigError(f"{where}: nu given before any algorithm line")
                filters[-1]["nu"] = [float(v) for v in value.split(",") if v.strip()]
            elif key == "w_true":
                w = _parse_vector(value)
                system[key] = w if np.any(w.imag) else w.real
            elif key in ("taps", "samples", "runs", "seed"):
                system[key] = int(value)
            elif key == "snr_db":
                system[key] = None if value.lower() in ("none", "inf", "") else float(value)
            elif key in ("signal", "snr_reference", "name"):
                system[key] = value
            else:
                raise ConfigError(f"{where}: unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value for {key}: {exc}") from None

    if "w_true" not in system:
        raise ConfigError(f"{source}: w_true is required")
    if not filters:
        raise ConfigError(f"{source}: at least one algorithm line is required")
    taps = system.get("taps", len(system["w_true"]))
    if taps != len(system["w_true"]):
        raise ConfigError(f"{source}: taps = {taps} but w_true has {len(system['w_true'])} entries")
    try:
        spec = SystemSpec(
            system["w_true"],
            signal_kind=system.get("signal", "real-gaussian"),
            snr_db=system.get("snr_db"),
            samples=system.get("samples", 1000),
            snr_reference=system.get("snr_reference", "output"),
        )
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    configs = []
    for f in filters:
        for nu in f.get("nu", [1.0]):
            try:
                configs.append(FilterConfig(
                    f["algorithm"], taps, mu1=f.get("mu1", float("nan")),
                    mu_frac=f.get("mu_frac", 0.0), nu=nu, epsilon=f.get("epsilon", 1e-6)))
            except ValueError as exc:
                raise ConfigError(f"{source}:{f['line']}: {exc}") from None
    try:
        return ProtocolSpec(system.get("name", Path(source).stem), spec, configs,
                            runs=system.get("runs", 1000), master_seed=system.get("seed", 0))
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


# -- output -----------------------------------------------------------------

def curves_csv(curves):
    ordered = sorted(curves, key=lambda c: c.key)
    lines = ["iteration," + ",".join(c.label for c in ordered)]
    columns = [c.values for c in ordered]
    for k in range(len(columns[0])):
        lines.append(",".join([str(k)] + [repr(float(col[k])) for col in columns]))
    return "\n".join(lines) + "\n"


def _write_outputs(name, curves, out, fmt):
    out = Path(out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        table = build_table(curves, window=_window(curves))
        written = [out / f"{name}_curves.csv"]
        written[0].write_text(curves_csv(curves))
        if fmt in ("csv", "both"):
            written.append(out / f"{name}_table.csv")
            written[-1].write_text(table.to_csv())
        if fmt in ("json", "both"):
            written.append(out / f"{name}_table.json")
            written[-1].write_text(table.to_json())
    except OSError as exc:
        raise UsageError(f"cannot write to {out}: {exc}") from None
    return table, written


def _window(curves):
    """Steady-state window and checkpoint: 100 samples, or 10% of shorter runs."""
    return min(100, max(1, len(curves[0].values) // 10))


def _show(value):
    return "diverged" if math.isinf(value) else f"{value:.2f} dB"


def replication_checks(name, curves):
    """(description, passed) pairs comparing a preset's curves with the published findings."""
    checks = []
    window = checkpoint = _window(curves)
    by_label = {c.label: c for c in curves}
    table = build_table(curves, window=window)
    for c in sorted(curves, key=lambda c: c.key):
        if name == "fclms-negative" and c.algorithm == "FCLMS" and c.nu in TABLE1_FCLMS:
            target, got = TABLE1_FCLMS[c.nu], table.get("FCLMS", c.nu)
            ok = got == target if math.isinf(target) else abs(got - target) <= TABLE1_TOL_DB
            checks.append((f"{c.label}: {_show(got)} vs Table 1 {_show(target)}", ok))
        elif name.startswith("fnlms") and c.algorithm == "FNLMS" and c.nu < 1:
            label = classify_divergence(c, checkpoint=checkpoint, window=window)
            checks.append((f"{c.label}: {label} (expected not converging)", label != CONVERGING))
    if name == "fclms-negative" and "CLMS_nu=1.0" in by_label:
        got = table.get("CLMS", 1.0)
        checks.append((f"CLMS_nu=1.0: {_show(got)} vs Table 1 {_show(TABLE1_FCLMS[1.0])}",
                       abs(got - TABLE1_FCLMS[1.0]) <= TABLE1_TOL_DB))
    if name.startswith("fnlms") and "NLMS_nu=1.0" in by_label:
        label = classify_divergence(by_label["NLMS_nu=1.0"], checkpoint=checkpoint, window=window)
        checks.append((f"NLMS_nu=1.0: {label} (expected converging)", label == CONVERGING))
    return checks


def _execute(protocol, args, checks=True):
    curves = list(run_monte_carlo(protocol, workers=args.workers).values())
    table, written = _write_outputs(protocol.name, curves, args.out, args.format)
    print(f"== {protocol.name}: {protocol.runs} runs x {protocol.system.samples} samples, "
          f"seed {protocol.master_seed}")
    for path in written:
        print(f"   wrote {path}")
    failed = False
    if checks:
        for text, ok in replication_checks(protocol.name, curves):
            print(f"   [{'PASS' if ok else 'FAIL'}] {text}")
            failed |= not ok
    else:
        for (alg, nu), value in table.entries.items():
            print(f"   {alg}_nu={nu:.1f}: {_show(value)}")
    return failed


def cmd_replicate(args):
    names = PRESETS if args.preset == "all" else (args.preset,)
    failed = False
    for name in names:
        kwargs = {k: v for k, v in (("runs", args.runs), ("samples", args.samples),
                                    ("seed", args.seed), ("nu_list", args.nu)) if v is not None}
        try:
            protocol = preset(name, **kwargs)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        failed |= _execute(protocol, args)
    return 2 if failed else 0


def cmd_run(args):
    path = Path(args.config)
    try:
        text = path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    protocol = parse_config(text, str(path))
    system = protocol.system
    if args.samples is not None:
        try:
            system = SystemSpec(system.w_true, system.signal_kind, system.snr_db,
                                args.samples, system.snr_reference)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    protocol = ProtocolSpec(protocol.name, system, protocol.configs,
                            runs=args.runs or protocol.runs,
                            master_seed=protocol.master_seed if args.seed is None else args.seed)
    _execute(protocol, args, checks=False)
    return 0


# -- gradcheck --------------------------------------------------------------

def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def random_real_objective(rng, n):
    """Random real objective; alternates rank-one instantaneous and full symmetric R."""
    if rng.random() < 0.5:
        return instantaneous_correlations(rng.standard_normal(n), rng.standard_normal())
    a = rng.standard_normal((n, n))
    return QuadraticObjective(rng.uniform(0, 5), rng.standard_normal(n), a @ a.T)


def oracle_suite(trials, nus, seed=0):
    """Max relative error of the corrected gradient against the quadratic-fit oracle."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        obj = random_real_objective(rng, n)
        w = rng.uniform(0.1, 5, n)
        nu = float(rng.choice(nus))
        ell = int(rng.integers(1, n + 1))
        worst = max(worst, _rel(frac_gradient_corrected(w, obj, nu, ell),
                                frac_gradient_oracle(w, obj, nu, ell)))
    return worst


def gl_suite(nus=(0.3, 0.5, 0.7), zs=(0, 1, 2), ts=(0.5, 1.0, 4.0), steps=100_000):
    """Max relative error of the Grunwald-Letnikov oracle against the power rule."""
    worst = 0.0
    for z in zs:
        for nu in nus:
            for t in ts:
                gl = gl_fractional_derivative_oracle(lambda s, z=z: s ** z, nu, t, steps)
                worst = max(worst, _rel(gl, rl_power_derivative(z, nu, t)))
    return worst


def endpoint_suite(nu, trials=200, seed=0):
    """Max relative error of the corrected gradient near nu = 1 vs the classical one."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        obj = random_real_objective(rng, n)
        w = rng.uniform(0.1, 5, n)
        ell = int(rng.integers(1, n + 1))
        R, p = np.real(obj.R), np.real(obj.p)
        classical = 2 * (w @ R[:, ell - 1] - p[ell - 1])
        worst = max(worst, _rel(frac_gradient_corrected(w, obj, nu, ell), classical))
    return worst


def cmd_gradcheck(args):
    if args.trials < 1:
        raise UsageError(f"--trials must be >= 1, got {args.trials}")
    if args.nu is not None and not 0 < args.nu <= 1:
        raise UsageError(f"--nu must lie in (0, 1], got {args.nu}")
    nus = (args.nu,) if args.nu is not None else (0.3, 0.5, 0.7, 0.9)
    end_nu = args.nu if args.nu is not None and args.nu >= 0.9999 else 1 - 1e-8

    results = [
        ("corrected gradient vs quadratic-fit oracle", oracle_suite(args.trials, nus, args.seed), ORACLE_TOL),
        ("Grunwald-Letnikov vs power rule", gl_suite(), GL_TOL),
        (f"corrected gradient at nu={end_nu:g} vs classical", endpoint_suite(end_nu, seed=args.seed),
         ENDPOINT_TOL),
    ]
    failed = False
    for name, err, tol in results:
        ok = err <= tol
        failed |= not ok
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: max rel err {err:.3e} (tol {tol:g})")
    return 2 if failed else 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"replicate": cmd_replicate, "run": cmd_run, "gradcheck": cmd_gradcheck}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"fraclms: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
