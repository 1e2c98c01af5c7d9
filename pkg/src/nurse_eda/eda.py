"""Memetic estimation-of-distribution search over rule paths.

The model is a chain-structured Bayesian network: the rule used for
nurse 1 has a marginal distribution, and the rule for nurse i+1 depends
only on the rule for nurse i. Parameters are plain counts, so every
probability is available as an exact ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .ant_miner import refine
from .config import EdaParams, FitnessWeights, RuleWeights
from .instance import Instance
from .roster import RosterSolution
from .rules import NUM_RULES, build_and_score


@dataclass(frozen=True)
class RulePath:
    rules: tuple[int, ...]
    solution: RosterSolution
    fitness: int | float

    def __len__(self) -> int:
        return len(self.rules)


def _as_rules(p) -> tuple[int, ...]:
    return tuple(p.rules) if isinstance(p, RulePath) else tuple(p)


@dataclass(frozen=True, eq=False)
class RuleModel:
    """Root marginal and layer-to-layer conditional tables.

    ``root_counts[j]`` counts paths starting with rule ``j + 1``;
    ``transition_counts[i, j, j2]`` counts rule ``j + 1`` at nurse ``i``
    followed by rule ``j2 + 1`` at nurse ``i + 1``. Rows with no
    observations are uniform.
    """

    root_counts: np.ndarray
    transition_counts: np.ndarray
    laplace: float = 0

    @property
    def num_rules(self) -> int:
        return len(self.root_counts)

    @property
    def num_nurses(self) -> int:
        return len(self.transition_counts) + 1

    def _row(self, counts: Sequence) -> list[Fraction]:
        eps = Fraction(self.laplace)
        vals = [Fraction(c) + eps for c in counts]
        total = sum(vals)
        if total == 0:
            return [Fraction(1, len(vals))] * len(vals)
        return [v / total for v in vals]

    def root_probability(self, rule: int) -> Fraction:
        return self._row(self.root_counts.tolist())[rule - 1]

    def conditional(self, nurse: int, rule: int, next_rule: int) -> Fraction:
        """P(rule ``next_rule`` at ``nurse + 1`` | rule ``rule`` at ``nurse``)."""
        return self._row(self.transition_counts[nurse, rule - 1].tolist())[next_rule - 1]

    def root_fractions(self) -> list[Fraction]:
        return self._row(self.root_counts.tolist())

    def cond_fractions(self) -> list[list[list[Fraction]]]:
        return [[self._row(row.tolist()) for row in layer] for layer in self.transition_counts]

    @cached_property
    def root(self) -> np.ndarray:
        return self._normalise(self.root_counts[None, :])[0]

    @cached_property
    def cond(self) -> np.ndarray:
        return self._normalise(self.transition_counts)

    def _normalise(self, counts: np.ndarray) -> np.ndarray:
        c = counts.astype(float) + self.laplace
        totals = c.sum(axis=-1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            p = np.where(totals > 0, c / totals, 1.0 / self.num_rules)
        return p

    @cached_property
    def _cumulative(self) -> tuple[np.ndarray, np.ndarray]:
        def cum(p):
            c = np.cumsum(p, axis=-1)
            c[..., -1] = 1.0
            return c

        return cum(self.root), cum(self.cond)


def model_from_counts(root_counts, transition_counts, laplace: float = 0) -> RuleModel:
    root_counts = np.asarray(root_counts)
    transition_counts = np.asarray(transition_counts)
    r = len(root_counts)
    if transition_counts.size == 0:
        transition_counts = transition_counts.reshape(0, r, r)
    if transition_counts.ndim != 3 or transition_counts.shape[1:] != (r, r):
        raise ValueError(f"transition counts must have shape (n-1, {r}, {r}), got {transition_counts.shape}")
    if (root_counts < 0).any() or (transition_counts < 0).any():
        raise ValueError("counts must be non-negative")
    return RuleModel(root_counts, transition_counts, laplace)


def count_transitions(paths: Iterable, num_rules: int = NUM_RULES) -> tuple[np.ndarray, np.ndarray]:
    arr = np.array([_as_rules(p) for p in paths], dtype=np.int64) - 1
    if arr.ndim != 2 or len(arr) == 0:
        raise ValueError("need a nonempty list of equal-length paths")
    if arr.min() < 0 or arr.max() >= num_rules:
        raise ValueError(f"rule ids must lie in 1..{num_rules}")
    n = arr.shape[1]
    root = np.bincount(arr[:, 0], minlength=num_rules)
    trans = np.zeros((n - 1, num_rules, num_rules), dtype=np.int64)
    for i in range(n - 1):
        np.add.at(trans[i], (arr[:, i], arr[:, i + 1]), 1)
    return root, trans


def build_model(selected: Sequence, num_rules: int = NUM_RULES, laplace: float = 0) -> RuleModel:
    if not selected:
        raise ValueError("cannot build a model from an empty selection")
    root, trans = count_transitions(selected, num_rules)
    return model_from_counts(root, trans, laplace)


def sample_paths(model: RuleModel, count: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    """Ancestral sampling: root layer first, then each layer conditioned on
    the rule drawn for the previous nurse."""
    root_cum, cond_cum = model._cumulative
    out = np.empty((count, model.num_nurses), dtype=np.int64)
    out[:, 0] = np.searchsorted(root_cum, rng.random(count), side="right")
    for i in range(model.num_nurses - 1):
        rows = cond_cum[i][out[:, i]]
        u = rng.random(count)
        out[:, i + 1] = (rows <= u[:, None]).sum(axis=1)
    return [tuple(row) for row in (out + 1).tolist()]


def sample_path(model: RuleModel, rng: np.random.Generator) -> tuple[int, ...]:
    return sample_paths(model, 1, rng)[0]


def roulette_weights(fitnesses: Sequence, delta: float = 1) -> np.ndarray:
    f = np.asarray(fitnesses)
    return f.max() - f + delta


def select_parents(pop: Sequence[RulePath], count: int, rng: np.random.Generator, delta: float = 1) -> list[RulePath]:
    """Roulette-wheel draws with replacement; weight ``f_worst - f + delta``."""
    if not pop:
        raise ValueError("empty population")
    cum = np.cumsum(roulette_weights([p.fitness for p in pop], delta))
    idx = np.searchsorted(cum, rng.random(count) * cum[-1], side="right")
    return [pop[i] for i in idx]


@dataclass
class EvolveResult:
    best: RulePath
    trace: list = field(default_factory=list)  # best-so-far fitness, generation 0 first
    population: list[RulePath] = field(default_factory=list)

    @property
    def best_fitness(self):
        return self.best.fitness


def evolve(
    instance: Instance,
    params: EdaParams = EdaParams(),
    rule_weights: RuleWeights = RuleWeights(),
    fitness_weights: FitnessWeights = FitnessWeights(),
    rng: np.random.Generator | int | None = None,
) -> EvolveResult:
    rng = np.random.default_rng(rng)
    n = instance.n

    def make(rules) -> RulePath:
        solution, cost = build_and_score(rules, instance, rule_weights, fitness_weights, rng)
        if params.use_ant_miner and params.ant.generations > 0:
            res = refine(rules, solution, cost, instance, rule_weights, fitness_weights, params.ant, rng)
            return RulePath(res.path, res.solution, res.cost)
        return RulePath(tuple(rules), solution, cost)

    init = rng.integers(1, NUM_RULES + 1, size=(params.population_size, n)).tolist()
    population = []
    for rules in init:
        solution, cost = build_and_score(rules, instance, rule_weights, fitness_weights, rng)
        population.append(RulePath(tuple(rules), solution, cost))

    best = min(population, key=lambda p: p.fitness)
    trace = [best.fitness]
    for _ in range(params.generations):
        parents = select_parents(population, params.selected, rng, params.roulette_delta)
        model = build_model(parents, laplace=params.laplace)
        children = [make(rules) for rules in sample_paths(model, params.selected, rng)]
        elites = sorted(population, key=lambda p: p.fitness)[: params.elites]
        population = children + elites
        gen_best = min(children, key=lambda p: p.fitness)
        if gen_best.fitness < best.fitness:
            best = gen_best
        trace.append(best.fitness)
    return EvolveResult(best, trace, population)
