"""Experiment runner: ``solve``, ``generate``, ``oracle`` and ``trace``.

Every flag can also come from a JSON file passed with ``--config``; keys
are the flag names without the leading dashes (``"eda-generations": 50``).
Explicit flags override the file.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import (
    DEFAULT_BUDGET,
    dump_golden,
    exact_optimum,
    golden_record,
    load_golden,
    run_rd1,
    run_rd2,
)
from .config import AntParams, EdaParams, FitnessWeights, RuleWeights
from .eda import evolve
from .generator import TINY_PRESETS, GenSpec, generate, generate_tiny
from .instance import Instance, InstanceError, read_instance_file, save_instance
from .roster import is_feasible

ALGORITHMS = ("eda", "memetic-eda", "rd1", "rd2", "oracle")
CSV_COLUMNS = ("instance", "algorithm", "seed", "best_cost", "feasible", "hit_optimum", "within_margin", "wall_ms")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    algorithm: str = "memetic-eda"
    seeds: list[int] = field(default_factory=lambda: list(range(20)))
    eda: EdaParams = field(default_factory=EdaParams)
    rule_weights: RuleWeights = field(default_factory=RuleWeights)
    fitness_weights: FitnessWeights = field(default_factory=FitnessWeights)
    rd_iterations: int = 20000
    margin: float = 3
    budget: int = DEFAULT_BUDGET
    timing: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if not self.seeds:
            raise ConfigError("need at least one seed")
        if self.rd_iterations < 1:
            raise ConfigError("rd iterations must be >= 1")
        if self.margin < 0:
            raise ConfigError("margin must be >= 0")


@dataclass
class RunRow:
    instance: str
    algorithm: str
    seed: int | None
    best_cost: int | float
    feasible: bool
    wall_ms: float
    trace: list = field(default_factory=list, repr=False)
    optimum: int | float | None = None
    margin: float = 3

    @property
    def hit_optimum(self) -> bool | None:
        return None if self.optimum is None else self.best_cost == self.optimum

    @property
    def within_margin(self) -> bool | None:
        return None if self.optimum is None else self.best_cost - self.optimum <= self.margin


@dataclass
class InstanceSummary:
    instance: str
    runs: int
    best_cost: int | float
    mean_cost: float
    infeasible: int
    optimal: int | None
    within_margin: int | None


def summarise(rows: list[RunRow]) -> list[InstanceSummary]:
    out = []
    for name in dict.fromkeys(r.instance for r in rows):
        rs = [r for r in rows if r.instance == name]
        known = rs[0].optimum is not None
        out.append(InstanceSummary(
            instance=name,
            runs=len(rs),
            best_cost=min(r.best_cost for r in rs),
            mean_cost=float(np.mean([r.best_cost for r in rs])),
            infeasible=sum(not r.feasible for r in rs),
            optimal=sum(r.hit_optimum for r in rs) if known else None,
            within_margin=sum(r.within_margin for r in rs) if known else None,
        ))
    return out


def run_single(instance: Instance, name: str, config: RunConfig, seed: int | None) -> RunRow:
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    trace = []
    alg = config.algorithm
    if alg in ("eda", "memetic-eda"):
        params = EdaParams(**{**config.eda.__dict__, "use_ant_miner": alg == "memetic-eda"})
        res = evolve(instance, params, config.rule_weights, config.fitness_weights, rng)
        cost, solution, trace = res.best.fitness, res.best.solution, res.trace
    elif alg in ("rd1", "rd2"):
        run = run_rd1 if alg == "rd1" else run_rd2
        res = run(instance, config.rd_iterations, config.rule_weights, config.fitness_weights, rng)
        cost, solution = res.best_cost, res.best_solution
    else:
        cost, solution = exact_optimum(instance, config.fitness_weights, config.budget)
    wall = (time.perf_counter() - start) * 1000
    return RunRow(name, alg, seed, cost, is_feasible(instance, solution), wall, trace, margin=config.margin)


def _job(args):
    return run_single(*args)


def run_all(instances: list[tuple[str, Instance]], config: RunConfig, workers: int = 1,
            golden: dict | None = None) -> list[RunRow]:
    seeds = [None] if config.algorithm == "oracle" else config.seeds
    jobs = [(inst, name, config, seed) for name, inst in instances for seed in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_job, jobs))
    else:
        rows = [_job(j) for j in jobs]
    golden = golden or {}
    for row, (inst, *_rest) in zip(rows, jobs):
        rec = golden.get((inst.digest(), config.fitness_weights.w5))
        if rec is not None:
            row.optimum = rec["optimum"]
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


def rows_to_csv(rows: list[RunRow], timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([
            r.instance, r.algorithm, _fmt(r.seed), _fmt(r.best_cost), _fmt(r.feasible),
            _fmt(r.hit_optimum), _fmt(r.within_margin), f"{r.wall_ms:.1f}" if timing else "",
        ])
    return buf.getvalue()


def format_summary(summaries: list[InstanceSummary], margin: float) -> str:
    header = f"{'instance':<24}{'runs':>6}{'Cost':>10}{'mean':>10}{'Inf':>6}{'#':>6}{'<' + _fmt(margin):>6}"
    lines = [header]
    for s in summaries:
        lines.append(
            f"{s.instance:<24}{s.runs:>6}{_fmt(s.best_cost):>10}{s.mean_cost:>10.1f}{s.infeasible:>6}"
            f"{'?' if s.optimal is None else s.optimal:>6}{'?' if s.within_margin is None else s.within_margin:>6}"
        )
    return "\n".join(lines)


def trace_csv(trace: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("generation", "best_fitness"))
    for g, f in enumerate(trace):
        w.writerow((g, _fmt(f)))
    return buf.getvalue()


# -- argument handling --------------------------------------------------------

def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", action="append", default=[], help="instance JSON file (repeatable)")
    p.add_argument("--preset", action="append", default=[], choices=sorted(TINY_PRESETS),
                   help="built-in tiny preset (repeatable)")
    p.add_argument("--preset-seed", type=int, default=42)


def _add_weight_args(p: argparse.ArgumentParser) -> None:
    d = RuleWeights()
    p.add_argument("--penalty-weight", type=float, default=FitnessWeights().w5, help="w5")
    p.add_argument("--grade-weights", type=str, default=",".join(map(str, d.grade_weights)),
                   help="comma-separated cover weights per grade (w1,w2,w3)")
    p.add_argument("--preference-weight", type=float, default=d.w4, help="w4")
    p.add_argument("--k-cheapest", type=int, default=d.k)


def _add_search_args(p: argparse.ArgumentParser) -> None:
    e, a = EdaParams(), AntParams()
    p.add_argument("--eda-generations", type=int, default=e.generations)
    p.add_argument("--selected", type=int, default=e.selected, help="roulette draws and sampled paths per generation")
    p.add_argument("--elites", type=int, default=e.elites)
    p.add_argument("--roulette-delta", type=float, default=e.roulette_delta)
    p.add_argument("--laplace", type=float, default=e.laplace)
    p.add_argument("--ant-generations", type=int, default=a.generations)
    p.add_argument("--rho", type=float, default=a.rho)
    p.add_argument("--q", type=float, default=a.q)
    p.add_argument("--d", type=float, default=a.d)
    p.add_argument("--b1", type=float, default=a.b1)
    p.add_argument("--b2", type=float, default=a.b2)
    p.add_argument("--rd-iterations", type=int, default=20000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nurse-eda", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run an algorithm over seeds and instances")
    solve.add_argument("--config", type=Path)
    solve.add_argument("--algorithm", choices=ALGORITHMS, default="memetic-eda")
    _add_instance_args(solve)
    solve.add_argument("--seeds", type=int, default=20, help="number of runs")
    solve.add_argument("--base-seed", type=int, default=0)
    _add_search_args(solve)
    _add_weight_args(solve)
    solve.add_argument("--margin", type=float, default=3)
    solve.add_argument("--golden", action="append", default=[], help="golden file or directory (repeatable)")
    solve.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    solve.add_argument("--workers", type=int, default=1)
    solve.add_argument("--timing", action="store_true", help="fill the wall_ms column")
    solve.add_argument("--csv", type=Path, help="write per-run rows here (default: stdout)")

    gen = sub.add_parser("generate", help="write a synthetic instance")
    gen.add_argument("--config", type=Path)
    gen.add_argument("--preset", choices=sorted(TINY_PRESETS))
    gen.add_argument("--seed", type=int, default=42)
    gen.add_argument("--nurses", type=int)
    gen.add_argument("--grades", type=int, default=3)
    gen.add_argument("--full-time-fraction", type=float, default=0.6)
    gen.add_argument("--cost-mean", type=float, default=25)
    gen.add_argument("--tightness", type=float, default=0.9)
    gen.add_argument("--shortage", action="store_true")
    gen.add_argument("--max-patterns", type=int)
    gen.add_argument("--out", type=Path)

    ora = sub.add_parser("oracle", help="exact optimum by enumeration; writes golden records")
    ora.add_argument("--config", type=Path)
    _add_instance_args(ora)
    ora.add_argument("--penalty-weight", type=float, default=FitnessWeights().w5)
    ora.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    ora.add_argument("--out", type=Path)

    tr = sub.add_parser("trace", help="best-so-far fitness per generation for one run")
    tr.add_argument("--config", type=Path)
    tr.add_argument("--algorithm", choices=("eda", "memetic-eda"), default="memetic-eda")
    _add_instance_args(tr)
    tr.add_argument("--seed", type=int, default=0)
    _add_search_args(tr)
    _add_weight_args(tr)
    tr.add_argument("--out", type=Path)
    parser.subcommands = sub.choices
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if getattr(args, "config", None) is None:
        return args
    try:
        data = json.loads(args.config.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    sub = parser.subcommands[args.command]
    known = {a.dest for a in sub._actions}
    defaults = {}
    for key, value in data.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in known or dest in ("config", "help"):
            raise ConfigError(f"unknown config key {key!r} for {args.command}")
        defaults[dest] = value
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _float_or_int(v: float):
    return int(v) if float(v).is_integer() else v


def _weights(args) -> tuple[RuleWeights, FitnessWeights]:
    gw = args.grade_weights
    if isinstance(gw, str):
        gw = [float(x) for x in gw.split(",") if x.strip()]
    rule = RuleWeights(tuple(_float_or_int(w) for w in gw), _float_or_int(args.preference_weight), args.k_cheapest)
    return rule, FitnessWeights(_float_or_int(args.penalty_weight))


def _eda_params(args) -> EdaParams:
    ant = AntParams(args.rho, args.q, args.d, args.b1, args.b2, args.ant_generations)
    return EdaParams(args.eda_generations, args.selected, args.elites, args.roulette_delta, args.laplace, True, ant)


def _instances(args) -> list[tuple[str, Instance]]:
    out = []
    for path in args.instance:
        out.append((Path(path).stem, read_instance_file(path)))
    for name in args.preset:
        out.append((name, generate_tiny(name, args.preset_seed)))
    if not out:
        raise ConfigError("no instances given (use --instance or --preset)")
    return out


def _golden(paths) -> dict:
    table = {}
    for p in paths:
        p = Path(p)
        files = sorted(p.glob("*.json")) if p.is_dir() else [p]
        for f in files:
            for rec in load_golden(f):
                table[(rec["instance_hash"], rec["w5"])] = rec
    return table


def _emit(text: str, path: Path | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def cmd_solve(args) -> int:
    rule_w, fit_w = _weights(args)
    config = RunConfig(
        algorithm=args.algorithm,
        seeds=list(range(args.base_seed, args.base_seed + args.seeds)),
        eda=_eda_params(args),
        rule_weights=rule_w,
        fitness_weights=fit_w,
        rd_iterations=args.rd_iterations,
        margin=args.margin,
        budget=args.budget,
        timing=args.timing,
    )
    start = time.perf_counter()
    rows = run_all(_instances(args), config, args.workers, _golden(args.golden))
    _emit(rows_to_csv(rows, config.timing), args.csv)
    report = sys.stderr if args.csv is None else sys.stdout
    print(format_summary(summarise(rows), config.margin), file=report)
    print(f"total wall time {time.perf_counter() - start:.1f}s", file=report)
    return 0


def cmd_generate(args) -> int:
    if args.preset:
        inst = generate_tiny(args.preset, args.seed)
    else:
        inst = generate(GenSpec(
            num_nurses=args.nurses, num_grades=args.grades, full_time_fraction=args.full_time_fraction,
            cost_mean=args.cost_mean, tightness=args.tightness, shortage=args.shortage,
            max_patterns=args.max_patterns, seed=args.seed,
        ))
    data = save_instance(inst)
    if args.out is None:
        sys.stdout.buffer.write(data)
    else:
        args.out.write_bytes(data)
    return 0


def cmd_oracle(args) -> int:
    weights = FitnessWeights(_float_or_int(args.penalty_weight))
    lines = []
    for name, inst in _instances(args):
        rec = golden_record(inst, weights, args.budget)
        lines.append(dump_golden(rec))
        print(f"{name}: optimum {rec['optimum']}", file=sys.stderr)
    _emit("".join(lines), args.out)
    return 0


def cmd_trace(args) -> int:
    rule_w, fit_w = _weights(args)
    params = EdaParams(**{**_eda_params(args).__dict__, "use_ant_miner": args.algorithm == "memetic-eda"})
    instances = _instances(args)
    if len(instances) != 1:
        raise ConfigError("trace takes exactly one instance")
    res = evolve(instances[0][1], params, rule_w, fit_w, np.random.default_rng(args.seed))
    _emit(trace_csv(res.trace), args.out)
    return 0


COMMANDS = {"solve": cmd_solve, "generate": cmd_generate, "oracle": cmd_oracle, "trace": cmd_trace}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = _apply_config_file(parser, argv)
        return COMMANDS[args.command](args)
    except (ConfigError, InstanceError, ValueError, OSError) as exc:
        print(f"nurse-eda: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
