"""Command-line front end. Exit codes: 0 success, 1 verification failure,
2 input or usage error."""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
from fractions import Fraction

from . import model, oracle, reduction, scheduler, verifier
from .model import InvalidInstance, parse_rational
from .oracle import StateSpaceTooLarge
from .reduction import PeriodBelowTwo, ReductionConfig
from .rounding import CertificateViolation, UnroundablePeriod
from .scheduler import NotAChain, Overdense
from .verifier import HorizonOverflow


def _read_json(path: str) -> object:
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(obj: object) -> None:
    print(json.dumps(obj, indent=2))


def _state_cap() -> int:
    raw = os.environ.get("BAMBOO_STATE_CAP")
    if raw is None:
        return oracle.DEFAULT_STATE_CAP
    try:
        return int(raw)
    except ValueError as exc:
        raise InvalidInstance(f"BAMBOO_STATE_CAP must be an integer, got {raw!r}") from exc


def _config(args: argparse.Namespace) -> ReductionConfig:
    return ReductionConfig(factor=parse_rational(args.factor), lb_mode=args.lower_bound)


def solution_to_obj(sol: scheduler.Solution, include_trace: bool = False) -> dict:
    obj = {
        "lower_bound": str(sol.lower_bound),
        "bound": str(sol.guarantee),
        "max_height": str(sol.height_bound),
        "factor": str(sol.config.factor),
        "lb_mode": sol.config.lb_mode,
        "entries": model.entries_to_obj(sol.schedule),
    }
    if include_trace:
        obj["trace"] = sol.trace
    return obj


def _derive_pseudo(instance: model.BgtInstance, config: ReductionConfig) -> model.PseudoInstance:
    # For a single bamboo the reduction is skipped by the solver; its window
    # is the bare factor, whose floor of 1 demands the promised daily cut.
    if instance.n == 1:
        return model.PseudoInstance(
            (config.factor,),
            factor=config.factor,
            lower_bound=model.lower_bound(instance, config.lb_mode),
        )
    return reduction.bgt_to_pseudo(instance, config)


def _cmd_solve(args: argparse.Namespace) -> int:
    instance = model.instance_from_obj(_read_json(args.input))
    sol = scheduler.solve(instance, _config(args))
    _emit(solution_to_obj(sol, include_trace=args.explain))
    return 0


def _cmd_explain(args: argparse.Namespace) -> int:
    instance = model.instance_from_obj(_read_json(args.input))
    sol = scheduler.solve(instance, _config(args))
    _emit(sol.trace)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    instance = model.instance_from_obj(_read_json(args.input))
    schedule = model.schedule_from_obj(_read_json(args.schedule))
    config = _config(args)
    pseudo = _derive_pseudo(instance, config)
    report = verifier.evaluate(
        instance,
        schedule,
        pseudo=pseudo,
        lower_bound_value=model.lower_bound(instance, config.lb_mode),
        horizon=args.horizon,
    )
    _emit(report.to_obj())
    return 0 if report.ok else 1


def _cmd_density(args: argparse.Namespace) -> int:
    pseudo = model.pseudo_from_obj(_read_json(args.input))
    _emit({"density": str(pseudo.density)})
    return 0


def _cmd_oracle_pinwheel(args: argparse.Namespace) -> int:
    result = oracle.pinwheel_feasible(list(args.periods), cap=_state_cap())
    obj: dict = {"periods": list(args.periods), "feasible": result.feasible}
    if result.witness is not None:
        obj["witness"] = list(result.witness)
    _emit(obj)
    return 0


def _cmd_oracle_opt(args: argparse.Namespace) -> int:
    instance = model.instance_from_obj(_read_json(args.input))
    opt = oracle.bgt_opt(instance, cap=_state_cap())
    _emit({"rates": [str(r) for r in instance.rates], "opt": str(opt)})
    return 0


def _cmd_oracle_tightness(args: argparse.Namespace) -> int:
    _emit(
        oracle.tightness_examples(
            epsilon=parse_rational(args.epsilon),
            big_m=parse_rational(args.big_m),
            eta=parse_rational(args.eta),
            gamma=parse_rational(args.gamma),
            cap=_state_cap(),
        )
    )
    return 0


def _opt_tractable(instance: model.BgtInstance, cap: int) -> bool:
    ceiling = Fraction(12, 7) * model.lower_bound(instance, "max-rule")
    space = 1
    for h in instance.rates:
        space *= math.floor(ceiling / h) + 1
        if space > cap:
            return False
    return True


def _cmd_bench(args: argparse.Namespace) -> int:
    config = _config(args)
    cap = _state_cap()
    rows = []
    worst_lb = Fraction(0)
    total_lb = Fraction(0)
    worst_opt = Fraction(0)
    total_opt = Fraction(0)
    opt_checked = 0
    opt_skipped = 0
    for i in range(args.seeds):
        rng = random.Random(f"{args.seed}:{i}")
        rates = sorted((rng.randint(args.rate_min, args.rate_max) for _ in range(args.n)), reverse=True)
        instance = model.BgtInstance.from_values(rates)
        sol = scheduler.solve(instance, config)
        ratio = sol.height_bound / sol.lower_bound
        worst_lb = max(worst_lb, ratio)
        total_lb += ratio
        row = {
            "index": i,
            "rates": [str(r) for r in instance.rates],
            "lower_bound": str(sol.lower_bound),
            "max_height": str(sol.height_bound),
            "ratio": str(ratio),
        }
        if args.opt:
            if _opt_tractable(instance, cap):
                opt = oracle.bgt_opt(instance, cap=cap)
                vs_opt = sol.height_bound / opt
                worst_opt = max(worst_opt, vs_opt)
                total_opt += vs_opt
                opt_checked += 1
                row["opt"] = str(opt)
                row["ratio_vs_opt"] = str(vs_opt)
            else:
                opt_skipped += 1
        rows.append(row)
    summary: dict = {
        "instances": args.seeds,
        "worst_ratio_vs_lower_bound": str(worst_lb) if args.seeds else None,
        "mean_ratio_vs_lower_bound": str(total_lb / args.seeds) if args.seeds else None,
    }
    if args.opt:
        summary["opt_checked"] = opt_checked
        summary["opt_skipped"] = opt_skipped
        if opt_checked:
            summary["worst_ratio_vs_opt"] = str(worst_opt)
            summary["mean_ratio_vs_opt"] = str(total_opt / opt_checked)
    _emit(
        {
            "params": {
                "seeds": args.seeds,
                "n": args.n,
                "rate_min": args.rate_min,
                "rate_max": args.rate_max,
                "seed": args.seed,
                "factor": str(config.factor),
                "lb_mode": config.lb_mode,
            },
            "rows": rows,
            "summary": summary,
        }
    )
    return 0


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--factor", choices=["12/7", "2"], default="12/7", help="magnification factor")
    p.add_argument(
        "--lower-bound",
        choices=["sum", "max-rule"],
        default="max-rule",
        dest="lower_bound",
        help="height lower bound: plain growth sum, or max(2*h_max, sum)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bamboo",
        description="Periodic cutting schedules for bamboo gardens, with verifiers and exact oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="build a schedule for an instance")
    p_solve.add_argument("--input", "-i", default="-", help="instance JSON path, or - for stdin")
    _add_config_flags(p_solve)
    p_solve.add_argument("--explain", action="store_true", help="include the pipeline trace")
    p_solve.set_defaults(func=_cmd_solve)

    p_explain = sub.add_parser("explain", help="print only the pipeline trace for an instance")
    p_explain.add_argument("--input", "-i", default="-")
    _add_config_flags(p_explain)
    p_explain.set_defaults(func=_cmd_explain)

    p_verify = sub.add_parser("verify", help="check a schedule against an instance")
    p_verify.add_argument("--input", "-i", default="-", help="instance JSON path, or - for stdin")
    p_verify.add_argument("--schedule", required=True, help="schedule JSON path, or - for stdin")
    p_verify.add_argument("--horizon", type=int, default=None, help="simulation horizon in days")
    _add_config_flags(p_verify)
    p_verify.set_defaults(func=_cmd_verify)

    p_density = sub.add_parser("density", help="exact density of a pseudo-instance")
    p_density.add_argument("--input", "-i", default="-", help='JSON with a "periods" list')
    p_density.set_defaults(func=_cmd_density)

    p_oracle = sub.add_parser("oracle", help="exhaustive ground truth for small inputs")
    osub = p_oracle.add_subparsers(dest="oracle_command", required=True)
    p_pin = osub.add_parser("pinwheel", help="decide integral pinwheel feasibility")
    p_pin.add_argument("periods", nargs="+", type=int)
    p_pin.set_defaults(func=_cmd_oracle_pinwheel)
    p_opt = osub.add_parser("bgt-opt", help="exact optimal max height of an instance")
    p_opt.add_argument("input", nargs="?", default="-", help="instance JSON path, or - for stdin")
    p_opt.set_defaults(func=_cmd_oracle_opt)
    p_tight = osub.add_parser("tightness", help="density-budget tightness witnesses")
    p_tight.add_argument("--epsilon", default="1/100")
    p_tight.add_argument("--big-m", default="100", dest="big_m")
    p_tight.add_argument("--eta", default="1/100")
    p_tight.add_argument("--gamma", default="1/100")
    p_tight.set_defaults(func=_cmd_oracle_tightness)

    p_bench = sub.add_parser("bench", help="solve seeded random instances and report ratios")
    p_bench.add_argument("--seeds", type=int, default=50, help="number of instances")
    p_bench.add_argument("--n", type=int, default=8, help="bamboos per instance")
    p_bench.add_argument("--rate-min", type=int, default=1, dest="rate_min")
    p_bench.add_argument("--rate-max", type=int, default=100, dest="rate_max")
    p_bench.add_argument("--seed", type=int, default=0, help="base RNG seed")
    p_bench.add_argument("--opt", action="store_true", help="also compare against the exact optimum where tractable")
    _add_config_flags(p_bench)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PeriodBelowTwo as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: use --lower-bound max-rule", file=sys.stderr)
        return 2
    except (
        InvalidInstance,
        UnroundablePeriod,
        NotAChain,
        Overdense,
        HorizonOverflow,
        StateSpaceTooLarge,
        json.JSONDecodeError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CertificateViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
