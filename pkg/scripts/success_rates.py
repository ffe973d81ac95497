"""Success-rate sweep over beta and mu for one Picnic parameter set, written as CSV."""
import argparse
import sys
import time

from coldboot.harness import ExperimentSpec, default_beta_grid, run_experiment, to_csv
from coldboot.lowmc import get_paramset


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--paramset", default="picnic-L1-FS")
    ap.add_argument("--alpha", type=float, default=0.001)
    ap.add_argument("--beta", type=float, nargs="+", help="defaults to the level's grid")
    ap.add_argument("--mu", type=int, nargs="+", default=[256])
    ap.add_argument("--e", type=int, nargs="+", default=[30, 40, 50])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()

    ps = get_paramset(args.paramset)
    spec = ExperimentSpec(ps, alpha=args.alpha, beta_grid=args.beta or default_beta_grid(ps.level),
                          mu_grid=args.mu, e_grid=args.e, trials=args.trials, base_seed=args.seed)
    t0 = time.perf_counter()

    def progress(row):
        print(f"[{time.perf_counter() - t0:7.1f}s] mu={row['mu']} beta={row['beta']:.3f} "
              f"full={row['rate_full']:.2f}", file=sys.stderr)

    text = to_csv(run_experiment(spec, progress))
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
