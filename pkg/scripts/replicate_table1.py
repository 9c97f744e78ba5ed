"""Run the FCLMS experiment and print the steady-state row next to Table 1."""

import argparse
import math
import time

from fraclms.harness import preset, run_monte_carlo
from fraclms.metrics import TABLE1_FCLMS, build_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    t0 = time.perf_counter()
    curves = run_monte_carlo(preset("fclms-negative", runs=args.runs, seed=args.seed),
                             workers=args.workers)
    table = build_table(curves.values())
    print(f"{args.runs} runs in {time.perf_counter() - t0:.1f} s")
    print(f"{'nu':>5} {'measured':>10} {'published':>10}")
    for nu, target in TABLE1_FCLMS.items():
        got = table.get("FCLMS", nu)
        show = lambda v: "inf" if math.isinf(v) else f"{v:.2f}"
        print(f"{nu:>5} {show(got):>10} {show(target):>10}")
    print(f"CLMS (eta=0.04): {table.get('CLMS', 1.0):.2f} dB")


if __name__ == "__main__":
    main()
