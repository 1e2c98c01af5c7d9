"""Compare memetic-eda, eda, rd2 and rd1 on a generated corpus.

Random-search budgets match the plain EDA's evaluation count
(generations x selected). Prints mean best cost per algorithm, one-sided
Wilcoxon signed-rank p-values on the paired (instance, seed) runs and the
feasible-run counts on the shortage instances.

    python3 scripts/baseline_separation.py --seeds 20 --csv /tmp/sep.csv
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from nurse_eda.cli import RunConfig, rows_to_csv, run_all
from nurse_eda.config import AntParams, EdaParams
from nurse_eda.generator import GenSpec, generate

ALGS = ("memetic-eda", "eda", "rd2", "rd1")


def corpus(size=10, nurses=12, tightness=0.95, shortage=(3, 7), base_seed=100):
    out = []
    for i in range(size):
        spec = GenSpec(num_nurses=nurses, tightness=tightness, shortage=i in shortage, seed=base_seed + i)
        out.append((f"gen-{i:02d}{'-short' if spec.shortage else ''}", generate(spec)))
    return out


def run(instances, seeds, generations=30, selected=28, elites=12, ant_generations=5, workers=1):
    eda = EdaParams(generations=generations, selected=selected, elites=elites, ant=AntParams(generations=ant_generations))
    rows = {}
    for alg in ALGS:
        cfg = RunConfig(algorithm=alg, seeds=list(seeds), eda=eda, rd_iterations=generations * selected)
        rows[alg] = run_all(instances, cfg, workers)
    return rows


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--generations", type=int, default=30)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv")
    args = p.parse_args(argv)

    from scipy.stats import wilcoxon

    start = time.perf_counter()
    rows = run(corpus(args.instances), range(args.seeds), args.generations, workers=args.workers)
    cost = {a: np.array([r.best_cost for r in rows[a]], dtype=float) for a in ALGS}
    for a in ALGS:
        print(f"{a:<12} mean {cost[a].mean():9.1f}  feasible {sum(r.feasible for r in rows[a]):4d}/{len(rows[a])}")
    for lo, hi in zip(ALGS, ALGS[1:]):
        diff = cost[lo] - cost[hi]
        p_val = wilcoxon(diff, alternative="less").pvalue if diff.any() else 1.0
        print(f"{lo} < {hi}: one-sided p = {p_val:.3g}")
    short = [r for r in rows["rd1"] if r.instance.endswith("-short")]
    print(f"rd1 feasible runs on shortage instances: {sum(r.feasible for r in short)}/{len(short)}")
    print(f"wall time {time.perf_counter() - start:.0f}s", file=sys.stderr)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write("".join(rows_to_csv(rows[a]) if i == 0 else rows_to_csv(rows[a]).split("\n", 1)[1]
                             for i, a in enumerate(ALGS)))


if __name__ == "__main__":
    main()
