"""Single-ant pheromone local search over nurse-rule nodes.

Trail intensities live in an ``(n, r)`` array; column ``j`` is rule ``j + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import AntParams, FitnessWeights, RuleWeights
from .instance import Instance
from .roster import RosterSolution
from .rules import NUM_RULES, build_and_score


def init_trails(initial_path: Sequence[int], params: AntParams, num_rules: int = NUM_RULES) -> np.ndarray:
    tau = np.full((len(initial_path), num_rules), float(params.b2))
    tau[np.arange(len(initial_path)), np.asarray(initial_path) - 1] = params.b1
    return tau


def rule_probabilities(tau: np.ndarray) -> np.ndarray:
    return tau / tau.sum(axis=1, keepdims=True)


def select_rules(tau: np.ndarray, rng: np.random.Generator) -> tuple[int, ...]:
    """Draw one rule per nurse with probability proportional to its trail."""
    cum = np.cumsum(tau, axis=1)
    u = rng.random(len(tau)) * cum[:, -1]
    idx = (cum <= u[:, None]).sum(axis=1)
    return tuple((idx + 1).tolist())


def update_trails(
    tau: np.ndarray, path: Sequence[int], cost: float, is_new_best: bool, params: AntParams
) -> np.ndarray:
    """Evaporate every trail, then deposit ``Q * D / cost`` on the path's nodes.

    A zero cost deposits as if the cost were 1.
    """
    denom = cost if cost > 0 else 1
    deposit = params.q * (params.d if is_new_best else 1) / denom
    out = params.rho * tau
    out[np.arange(len(path)), np.asarray(path) - 1] += deposit
    return out


@dataclass(frozen=True)
class RefineResult:
    path: tuple[int, ...]
    solution: RosterSolution
    cost: int | float
    c_min: int | float  # smallest cost seen, initial included
    tau: np.ndarray


def refine(
    path: Sequence[int],
    solution: RosterSolution,
    cost: int | float,
    instance: Instance,
    weights: RuleWeights,
    fitness_weights: FitnessWeights,
    params: AntParams,
    rng: np.random.Generator,
) -> RefineResult:
    """Improve a decoded path with ``params.generations`` ant cycles.

    The best cost starts at the initial cost and is local to this call. A
    constructed solution that ties the best counts as the new best.
    """
    best = (tuple(path), solution, cost)
    c_best = c_min = cost
    tau = init_trails(path, params)
    for _ in range(params.generations):
        ant_path = select_rules(tau, rng)
        ant_solution, c_t = build_and_score(ant_path, instance, weights, fitness_weights, rng)
        new_best = c_t <= c_best
        if new_best:
            c_best = c_t
            best = (ant_path, ant_solution, c_t)
        c_min = min(c_min, c_t)
        tau = update_trails(tau, ant_path, c_t, new_best, params)
    return RefineResult(*best, c_min=c_min, tau=tau)
