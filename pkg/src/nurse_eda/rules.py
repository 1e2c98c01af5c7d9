"""The six constructive rules and the rule-sequence decoder.

Nurses are scheduled one at a time in fixed order. Each rule picks one of
the current nurse's feasible patterns given the residual demand left by the
nurses already placed. All argmax rules break ties towards the lowest
pattern index, i.e. the lexicographically smallest cover string.
"""

from __future__ import annotations

from enum import IntEnum
from typing import Sequence

import numpy as np

from .config import FitnessWeights, RuleWeights
from .instance import MAX_COST, Instance
from .roster import CoverageTable, RosterSolution


class Rule(IntEnum):
    RANDOM = 1
    K_CHEAPEST = 2
    HIGHEST_UNDERCOVER = 3
    OVERALL_COVER = 4
    CONTRIBUTION_A = 5
    CONTRIBUTION_B = 6


ALL_RULES = tuple(Rule)
NUM_RULES = len(ALL_RULES)


class PartialSchedule:
    """Assignments for nurses ``0..len(assigned)-1`` plus residual demand.

    ``need[k, s]`` is demand minus cumulative cover and goes negative on
    overcover; ``max(need, 0)`` is the undercover table.
    """

    __slots__ = ("instance", "assigned", "need", "cost")

    def __init__(self, instance: Instance):
        self.instance = instance
        self.assigned: list[int] = []
        self.need = instance.demand_array.copy()
        self.cost = 0

    def assign(self, pattern: int) -> None:
        arr = self.instance.arrays[len(self.assigned)]
        self.need[:, arr.grade_index:] -= arr.covers[pattern][:, None]
        self.cost += self.instance.nurses[len(self.assigned)].costs[pattern]
        self.assigned.append(int(pattern))

    @property
    def next_nurse(self) -> int:
        return len(self.assigned)

    @property
    def complete(self) -> bool:
        return len(self.assigned) == self.instance.n

    def undercover(self) -> np.ndarray:
        return np.maximum(self.need, 0)

    def coverage(self) -> CoverageTable:
        return CoverageTable(self.instance.demand_array - self.need, self.undercover())

    def solution(self) -> RosterSolution:
        return RosterSolution(tuple(self.assigned))

    def fitness(self, weights: FitnessWeights) -> int | float:
        penalty = int(np.maximum(self.need, 0).sum())
        return self.cost + weights.w5 * penalty


def _cascade_column(arr, under: np.ndarray) -> np.ndarray | None:
    # first grade, from the nurse's own band downward, with an uncovered
    # shift the nurse could work at all
    for s in range(arr.grade_index, under.shape[1]):
        col = under[:, s] * arr.relevant
        if col.any():
            return col
    return None


def highest_undercover_values(arr, under: np.ndarray) -> np.ndarray:
    col = _cascade_column(arr, under)
    if col is None:
        return np.zeros(len(arr.covers), dtype=np.int64)
    return (arr.covers * col).max(axis=1)


def overall_cover_values(arr, under: np.ndarray) -> np.ndarray:
    col = _cascade_column(arr, under)
    if col is None:
        return np.zeros(len(arr.covers), dtype=np.int64)
    return arr.covers @ col


def contribution_scores(arr, need: np.ndarray, weights: RuleWeights, variant: str) -> np.ndarray:
    """Score every feasible pattern of one nurse.

    ``variant`` "A" uses d=1 for each shift/grade still short of demand,
    "B" uses the outstanding count itself.
    """
    if variant == "A":
        d = (need > 0).astype(np.int64)
    elif variant == "B":
        d = np.maximum(need, 0)
    else:
        raise ValueError(f"unknown contribution variant {variant!r}")
    g = need.shape[1]
    w = np.array(weights.for_grades(g))
    w[: arr.grade_index] = 0  # q_is = 0 for grades above the nurse's band
    per_shift = d @ w
    return arr.covers @ per_shift + weights.w4 * (MAX_COST - arr.costs)


def score_pattern(nurse: int, pattern: int, partial: PartialSchedule, weights: RuleWeights, variant: str):
    arr = partial.instance.arrays[nurse]
    score = contribution_scores(arr, partial.need, weights, variant)[pattern]
    return score.item()


def apply_rule(
    rule: int,
    nurse: int,
    partial: PartialSchedule,
    instance: Instance,
    weights: RuleWeights,
    rng: np.random.Generator,
) -> int:
    """Pattern index chosen for ``nurse`` by ``rule``."""
    if nurse != partial.next_nurse:
        raise ValueError(f"nurse {nurse} is not next in order (expected {partial.next_nurse})")
    arr = instance.arrays[nurse]
    rule = Rule(rule)
    if rule is Rule.RANDOM:
        return int(rng.integers(len(arr.covers)))
    if rule is Rule.K_CHEAPEST:
        k = min(weights.k, len(arr.covers))
        return int(arr.cheapest[rng.integers(k)])
    if rule is Rule.HIGHEST_UNDERCOVER:
        return int(np.argmax(highest_undercover_values(arr, partial.undercover())))
    if rule is Rule.OVERALL_COVER:
        return int(np.argmax(overall_cover_values(arr, partial.undercover())))
    variant = "A" if rule is Rule.CONTRIBUTION_A else "B"
    return int(np.argmax(contribution_scores(arr, partial.need, weights, variant)))


def _run(path: Sequence[int], instance: Instance, weights: RuleWeights, rng) -> PartialSchedule:
    if len(path) != instance.n:
        raise ValueError(f"rule path has length {len(path)}, instance has {instance.n} nurses")
    partial = PartialSchedule(instance)
    for i, rule in enumerate(path):
        partial.assign(apply_rule(rule, i, partial, instance, weights, rng))
    return partial


def build_schedule(
    path: Sequence[int], instance: Instance, weights: RuleWeights, rng: np.random.Generator
) -> RosterSolution:
    return _run(path, instance, weights, rng).solution()


def build_and_score(
    path: Sequence[int],
    instance: Instance,
    weights: RuleWeights,
    fitness_weights: FitnessWeights,
    rng: np.random.Generator,
) -> tuple[RosterSolution, int | float]:
    """Decode ``path`` and return the solution with its fitness."""
    partial = _run(path, instance, weights, rng)
    return partial.solution(), partial.fitness(fitness_weights)
