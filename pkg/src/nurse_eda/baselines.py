"""Random-search baselines and exhaustive oracles for small instances."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import FitnessWeights, RuleWeights
from .instance import Instance
from .roster import RosterSolution, fitness, is_feasible
from .rules import ALL_RULES, PartialSchedule, Rule, apply_rule, build_and_score

DEFAULT_BUDGET = 10**7


class SearchSpaceTooLarge(ValueError):
    pass


@dataclass
class BaselineResult:
    best_cost: int | float
    best_solution: RosterSolution
    feasible_found: bool
    iterations_used: int
    trace: list = field(default_factory=list, repr=False)


def uniform_rule_path(n: int, rng: np.random.Generator, rules: Sequence[int] = ALL_RULES) -> list[int]:
    """One rule per nurse, each drawn uniformly from ``rules``."""
    if len(rules) == 1:
        return [int(rules[0])] * n
    return np.asarray(rules)[rng.integers(len(rules), size=n)].tolist()


def run_rd2(
    instance: Instance,
    iterations: int,
    weights: RuleWeights = RuleWeights(),
    fitness_weights: FitnessWeights = FitnessWeights(),
    rng: np.random.Generator | int | None = None,
    rules: Sequence[int] = ALL_RULES,
) -> BaselineResult:
    """Best of ``iterations`` schedules, each nurse's rule drawn uniformly
    from ``rules``."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    rng = np.random.default_rng(rng)
    best_cost, best_solution = None, None
    feasible = False
    trace = []
    for _ in range(iterations):
        path = uniform_rule_path(instance.n, rng, rules)
        solution, cost = build_and_score(path, instance, weights, fitness_weights, rng)
        if best_cost is None or cost < best_cost:
            best_cost, best_solution = cost, solution
        if not feasible and is_feasible(instance, solution):
            feasible = True
        trace.append(best_cost)
    return BaselineResult(best_cost, best_solution, feasible, iterations, trace)


def run_rd1(
    instance: Instance,
    iterations: int,
    weights: RuleWeights = RuleWeights(),
    fitness_weights: FitnessWeights = FitnessWeights(),
    rng: np.random.Generator | int | None = None,
) -> BaselineResult:
    """Random search: only the Random rule is used."""
    return run_rd2(instance, iterations, weights, fitness_weights, rng, rules=(Rule.RANDOM,))


# The oracle recounts coverage from the pattern vectors in plain Python so it
# shares no code with the decoder or the fitness module.

def _oracle_cost(instance: Instance, assignment: Sequence[int], w5) -> int | float:
    g = instance.num_grades
    total = 0
    for k in range(14):
        for s in range(1, g + 1):
            covered = 0
            for nurse, j in zip(instance.nurses, assignment):
                if nurse.grade <= s and nurse.patterns[j].cover[k] == 1:
                    covered += 1
            short = instance.demand[k][s - 1] - covered
            if short > 0:
                total += short
    pref = sum(nurse.costs[j] for nurse, j in zip(instance.nurses, assignment))
    return pref + w5 * total


def oracle_fitness(instance: Instance, solution: RosterSolution, weights: FitnessWeights = FitnessWeights()):
    return _oracle_cost(instance, solution.assignment, weights.w5)


def exact_optimum(
    instance: Instance, weights: FitnessWeights = FitnessWeights(), budget: int = DEFAULT_BUDGET
) -> tuple[int | float, RosterSolution]:
    """Minimum fitness over the full assignment space and the
    lexicographically first assignment attaining it."""
    size = instance.search_space_size()
    if size > budget:
        raise SearchSpaceTooLarge(f"{size} assignments exceed the budget of {budget}")
    g = instance.num_grades
    n = instance.n
    w5 = weights.w5
    demand = [instance.demand[k][s] for k in range(14) for s in range(g)]
    # flat cell lists each pattern increments, by grade threshold
    cells = []
    for nu in instance.nurses:
        cells.append([
            [k * g + s for k in range(14) if p.cover[k] for s in range(nu.grade - 1, g)]
            for p in nu.patterns
        ])
    costs = [nu.costs for nu in instance.nurses]
    cover = [0] * (14 * g)
    chosen = [0] * n
    best = [None, None]

    def visit(i, pref):
        if i == n:
            short = 0
            for d, c in zip(demand, cover):
                if d > c:
                    short += d - c
            cost = pref + w5 * short
            if best[0] is None or cost < best[0]:
                best[0], best[1] = cost, tuple(chosen)
            return
        for j, touched in enumerate(cells[i]):
            for c in touched:
                cover[c] += 1
            chosen[i] = j
            visit(i + 1, pref + costs[i][j])
            for c in touched:
                cover[c] -= 1

    visit(0, 0)
    return best[0], RosterSolution(best[1])


def fixed_stream_decode(path, instance: Instance, weights: RuleWeights, seed: int = 0) -> RosterSolution:
    """Decode with the stochastic rules driven by one stream per nurse
    position, so each path maps to a single solution."""
    partial = PartialSchedule(instance)
    for i, rule in enumerate(path):
        rng = np.random.default_rng([seed, i])
        partial.assign(apply_rule(rule, i, partial, instance, weights, rng))
    return partial.solution()


def exact_rule_path_optimum(
    instance: Instance,
    weights: RuleWeights = RuleWeights(),
    fitness_weights: FitnessWeights = FitnessWeights(),
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
    rules: Sequence[int] = ALL_RULES,
) -> tuple[int | float, tuple[int, ...]]:
    """Best fitness over every rule path under the fixed per-nurse seed policy."""
    size = len(rules) ** instance.n
    if size > budget:
        raise SearchSpaceTooLarge(f"{size} rule paths exceed the budget of {budget}")
    best_cost, best_path = None, None
    for path in itertools.product(rules, repeat=instance.n):
        sol = fixed_stream_decode(path, instance, weights, seed)
        cost = fitness(instance, sol, fitness_weights)
        if best_cost is None or cost < best_cost:
            best_cost, best_path = cost, tuple(int(r) for r in path)
    return best_cost, best_path


# -- golden records --------------------------------------------------------

def golden_record(instance: Instance, weights: FitnessWeights = FitnessWeights(), budget: int = DEFAULT_BUDGET) -> dict:
    opt, sol = exact_optimum(instance, weights, budget)
    return {
        "instance_hash": instance.digest(),
        "w5": weights.w5,
        "optimum": opt,
        "argmin_assignment": list(sol.assignment),
    }


def dump_golden(record: dict) -> str:
    return json.dumps(record, sort_keys=False) + "\n"


def load_golden(path) -> list[dict]:
    """Read a golden file: a single JSON record or one JSON record per line."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    records = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            records.append(json.loads(line))
    for rec in records:
        for key in ("instance_hash", "w5", "optimum", "argmin_assignment"):
            if key not in rec:
                raise ValueError(f"{path}: golden record missing {key!r}")
    return records
