"""Count how many of ten seeds reach a 17-vertex (3,6)-witness inside the 60 s budget."""

import argparse
import time

from ramsey_lb.harness import get_preset, run_preset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--seconds", type=float, default=60.0)
    args = ap.parse_args()

    hits = 0
    for seed in range(args.seeds):
        t0 = time.perf_counter()
        res = run_preset(get_preset("r36", seed=seed, max_seconds=args.seconds))
        n = res.certificate.graph.n if res.ok else 0
        hits += n == 17
        print(f"seed={seed} n={n} status={res.status} secs={time.perf_counter() - t0:.1f}", flush=True)
    print(f"hits={hits}/{args.seeds}")


if __name__ == "__main__":
    main()
