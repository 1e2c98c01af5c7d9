"""Solutions, coverage accounting and the penalised fitness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import FitnessWeights
from .instance import NUM_SHIFTS, Instance


class InvalidSolution(ValueError):
    pass


@dataclass(frozen=True)
class RosterSolution:
    """``assignment[i]`` indexes nurse i's feasible pattern list."""

    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(j) for j in self.assignment))

    def __len__(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class CoverageTable:
    cover: np.ndarray       # (14, g)
    undercover: np.ndarray  # (14, g)

    @property
    def total_undercover(self) -> int:
        return int(self.undercover.sum())


def check_solution(instance: Instance, solution: RosterSolution) -> None:
    if len(solution.assignment) != instance.n:
        raise InvalidSolution(f"solution assigns {len(solution.assignment)} nurses, instance has {instance.n}")
    for i, (j, nurse) in enumerate(zip(solution.assignment, instance.nurses)):
        if not 0 <= j < len(nurse):
            raise InvalidSolution(f"nurse {i}: pattern index {j} outside 0..{len(nurse) - 1}")


def compute_coverage(instance: Instance, solution: RosterSolution) -> CoverageTable:
    check_solution(instance, solution)
    cover = np.zeros((NUM_SHIFTS, instance.num_grades), dtype=np.int64)
    for j, arr in zip(solution.assignment, instance.arrays):
        cover[:, arr.grade_index:] += arr.covers[j][:, None]
    undercover = np.maximum(instance.demand_array - cover, 0)
    return CoverageTable(cover, undercover)


def preference_cost(instance: Instance, solution: RosterSolution) -> int | float:
    check_solution(instance, solution)
    return sum(nu.costs[j] for j, nu in zip(solution.assignment, instance.nurses))


def fitness(instance: Instance, solution: RosterSolution, weights: FitnessWeights = FitnessWeights()) -> int | float:
    """Preference cost plus ``w5`` per uncovered shift-unit; lower is fitter.

    Exact integer whenever costs and ``w5`` are integers.
    """
    cov = compute_coverage(instance, solution)
    return preference_cost(instance, solution) + weights.w5 * cov.total_undercover


def is_feasible(instance: Instance, solution: RosterSolution) -> bool:
    return compute_coverage(instance, solution).total_undercover == 0
