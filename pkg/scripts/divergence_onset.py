"""When do the fractional filters blow up? Per-run overflow statistics.

For each FNLMS/FCLMS order, prints the earliest iteration at which any run's
mean deviation becomes non-finite, how many runs are non-finite by a
checkpoint, and how many by the end.
"""

import argparse

import numpy as np

from fraclms.harness import PRESETS, _simulate_chunk, preset


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("preset", choices=PRESETS)
    parser.add_argument("--runs", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--checkpoint", type=int, default=110)
    args = parser.parse_args()

    protocol = preset(args.preset, runs=args.runs, seed=args.seed)
    results = _simulate_chunk(protocol, 0, args.runs)
    print(f"{'label':>14} {'earliest':>9} {'by ' + str(args.checkpoint):>8} {'at end':>7} {'leaked':>7}")
    for cfg, (md, first_nonreal) in zip(protocol.configs, results):
        bad = ~np.isfinite(md)
        onset = np.where(bad.any(axis=1), bad.argmax(axis=1), -1)
        earliest = onset[onset >= 0].min() if np.any(onset >= 0) else "-"
        early = int(np.sum((onset >= 0) & (onset <= args.checkpoint)))
        print(f"{cfg.label:>14} {earliest!s:>9} {early:>8} {int(bad[:, -1].sum()):>7} "
              f"{int(np.sum(first_nonreal >= 0)):>7}")


if __name__ == "__main__":
    main()
