"""How far below the 12/7 ceiling do real instances land?

Sweeps random gardens per bamboo-count n and reports the worst and mean
achieved-height/lower-bound ratio, everything in exact rationals. With
--opt, instances whose exact-optimum search is tractable are also scored
against the true optimum (the honest approximation ratio, not the bound).

Usage: python scripts/ratio_study.py --per-n 200 --opt --rate-max 9
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

try:
    import bamboo  # noqa: F401
except ImportError:  # running from a checkout without an install
    sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bamboo.cli import _opt_tractable
from bamboo.model import BgtInstance
from bamboo.oracle import DEFAULT_STATE_CAP, bgt_opt
from bamboo.scheduler import solve


def sweep(n: int, trials: int, rng: random.Random, rate_hi: int, use_opt: bool, cap: int):
    worst_lb = Fraction(0)
    total_lb = Fraction(0)
    worst_opt = Fraction(0)
    total_opt = Fraction(0)
    checked = 0
    skipped = 0
    for _ in range(trials):
        rates = sorted((rng.randint(1, rate_hi) for _ in range(n)), reverse=True)
        inst = BgtInstance.from_values(rates)
        sol = solve(inst)
        ratio = sol.height_bound / sol.lower_bound
        worst_lb = max(worst_lb, ratio)
        total_lb += ratio
        if use_opt:
            if _opt_tractable(inst, cap):
                vs = sol.height_bound / bgt_opt(inst, cap)
                worst_opt = max(worst_opt, vs)
                total_opt += vs
                checked += 1
            else:
                skipped += 1
    row = {
        "n": n,
        "worst_vs_lb": worst_lb,
        "mean_vs_lb": total_lb / trials,
        "opt_checked": checked,
        "opt_skipped": skipped,
    }
    if checked:
        row["worst_vs_opt"] = worst_opt
        row["mean_vs_opt"] = total_opt / checked
    return row


def fmt(x: Fraction) -> str:
    return f"{x} ({float(x):.4f})"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--per-n", type=int, default=200, help="instances per bamboo count")
    ap.add_argument("--n-min", type=int, default=2)
    ap.add_argument("--n-max", type=int, default=10)
    ap.add_argument("--rate-max", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--opt", action="store_true", help="also score against the exact optimum")
    ap.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    args = ap.parse_args()

    print(f"ceiling is 12/7 = {float(Fraction(12, 7)):.4f}; {args.per_n} instances per n")
    for n in range(args.n_min, args.n_max + 1):
        rng = random.Random(f"{args.seed}:{n}")
        row = sweep(n, args.per_n, rng, args.rate_max, args.opt, args.state_cap)
        line = f"n={n:2d}  worst vs L {fmt(row['worst_vs_lb'])}  mean {fmt(row['mean_vs_lb'])}"
        if args.opt:
            line += f"  | opt: {row['opt_checked']} checked, {row['opt_skipped']} skipped"
            if row.get("worst_vs_opt") is not None:
                line += f", worst {fmt(row['worst_vs_opt'])}, mean {fmt(row['mean_vs_opt'])}"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
