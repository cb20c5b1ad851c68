"""Sweep seeds of the sum-free circulant pipeline for R(3,9) and report the witness sizes.

Writes the largest certificate found to ``--out`` if given.
"""

import argparse
import time

from ramsey_lb.harness import get_preset, run_preset, write_certificate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--seconds", type=float, default=300.0)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    best = None
    for seed in range(args.seeds):
        t0 = time.perf_counter()
        res = run_preset(get_preset("r39-circulant", seed=seed, max_seconds=args.seconds))
        n = res.certificate.graph.n if res.ok else 0
        print(f"seed={seed} n={n} secs={time.perf_counter() - t0:.1f}", flush=True)
        if res.ok and (best is None or n > best.graph.n):
            best = res.certificate
    if best is not None:
        print(f"best n={best.graph.n}")
        if args.out:
            write_certificate(best, args.out)


if __name__ == "__main__":
    main()
