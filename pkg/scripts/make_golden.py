"""Regenerate tests/golden/<preset>.json with the exhaustive oracle.

    python scripts/make_golden.py [--seed 42] [--out tests/golden]
"""

import argparse
from pathlib import Path

from nurse_eda.baselines import dump_golden, golden_record
from nurse_eda.config import FitnessWeights
from nurse_eda.generator import TINY_PRESETS, generate_tiny


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--w5", type=int, default=200)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "tests" / "golden")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name in sorted(TINY_PRESETS):
        rec = golden_record(generate_tiny(name, args.seed), FitnessWeights(args.w5))
        (args.out / f"{name}.json").write_text(dump_golden(rec), encoding="utf-8")
        print(name, rec["optimum"], rec["argmin_assignment"])


if __name__ == "__main__":
    main()
