"""Run every shipped preset over a few seeds and tabulate witness sizes and wall time.

    python scripts/run_presets.py --seeds 3 --only r33 r36
"""

import argparse
import time

from ramsey_lb.harness import PRESETS, get_preset, run_preset, verify_certificate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--only", nargs="*", default=None, help="preset names (default: all)")
    args = ap.parse_args()

    names = args.only or sorted(PRESETS)
    print(f"{'preset':<24}{'seed':>5}{'n':>6}{'valid':>7}{'total':>10}{'secs':>8}")
    for name in names:
        for seed in range(args.seeds):
            t0 = time.perf_counter()
            res = run_preset(get_preset(name, seed=seed))
            secs = time.perf_counter() - t0
            if res.ok:
                valid = verify_certificate(res.certificate).valid
                n, total = res.certificate.graph.n, res.score_report.total
            else:
                valid, n, total = False, 0, float("nan")
            print(f"{name:<24}{seed:>5}{n:>6}{str(valid):>7}{total:>10.3f}{secs:>8.1f}", flush=True)


if __name__ == "__main__":
    main()
