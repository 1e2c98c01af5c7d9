"""Seeded synthetic instances shaped like a hospital ward week.

The full-time 5d/4n contract and the part-time options 4d/3n, 3d/3n and
3d/2n are the usual ward contracts. The other six part-time options in
``PART_TIME_OPTIONS`` are made up to reach nine.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .baselines import exact_optimum
from .config import FitnessWeights
from .instance import MAX_COST, NUM_SHIFTS, Instance, NurseSpec, enumerate_patterns
from .roster import is_feasible

FULL_TIME = (5, 4)
PART_TIME_OPTIONS = (
    (4, 3), (3, 3), (3, 2),
    (4, 4), (4, 2), (2, 2), (2, 1), (5, 3), (1, 1),
)


@dataclass(frozen=True)
class GenSpec:
    num_nurses: int | None = None  # None: drawn from 20..30
    num_grades: int = 3
    full_time_fraction: float = 0.6
    part_time_options: tuple[tuple[int, int], ...] = PART_TIME_OPTIONS
    cost_mean: float = 25
    tightness: float = 0.9
    shortage: bool = False
    max_patterns: int | None = None  # subsample each nurse's pattern list
    seed: int = 0

    def __post_init__(self):
        if self.num_nurses is not None and self.num_nurses < 1:
            raise ValueError("num_nurses must be >= 1")
        if self.num_grades < 1:
            raise ValueError("num_grades must be >= 1")
        if not 0 <= self.full_time_fraction <= 1:
            raise ValueError("full_time_fraction must lie in [0, 1]")
        if self.full_time_fraction < 1 and not self.part_time_options:
            raise ValueError("part-time share requested but no part-time options given")
        if not 0 < self.cost_mean < MAX_COST / 2:
            raise ValueError("cost_mean must lie in (0, 50) to keep costs biased low")
        if not 0 < self.tightness <= 1.5:
            raise ValueError(f"tightness must lie in (0, 1.5], got {self.tightness}")
        if self.tightness > 1 and not self.shortage:
            raise ValueError("tightness > 1 implies a shortage; set shortage=True")
        if self.max_patterns is not None and self.max_patterns < 1:
            raise ValueError("max_patterns must be >= 1")


@lru_cache(maxsize=None)
def _cost_distribution(mean: float) -> np.ndarray:
    """Truncated geometric pmf on 0..100 whose mean is ``mean``."""
    values = np.arange(MAX_COST + 1)

    def pmf(ratio):
        w = ratio ** values
        return w / w.sum()

    lo, hi = 1e-9, 1 - 1e-12
    for _ in range(200):
        mid = (lo + hi) / 2
        if pmf(mid) @ values < mean:
            lo = mid
        else:
            hi = mid
    return pmf((lo + hi) / 2)


def sample_costs(rng: np.random.Generator, size: int, mean: float = 25) -> np.ndarray:
    return rng.choice(MAX_COST + 1, size=size, p=_cost_distribution(mean))


def _contract(spec: GenSpec, rng: np.random.Generator) -> tuple[int, int]:
    if rng.random() < spec.full_time_fraction:
        return FULL_TIME
    return spec.part_time_options[rng.integers(len(spec.part_time_options))]


def _grades(spec: GenSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    # more nurses in the lower bands
    w = np.arange(1, spec.num_grades + 1, dtype=float)
    g = rng.choice(spec.num_grades, size=n, p=w / w.sum()) + 1
    g[0] = 1  # at least one top-grade nurse
    return g


def _nurses(spec: GenSpec, rng: np.random.Generator) -> list[NurseSpec]:
    n = spec.num_nurses if spec.num_nurses is not None else int(rng.integers(20, 31))
    grades = _grades(spec, n, rng)
    nurses = []
    for i in range(n):
        pats = enumerate_patterns(*_contract(spec, rng))
        if spec.max_patterns is not None and len(pats) > spec.max_patterns:
            keep = np.sort(rng.choice(len(pats), size=spec.max_patterns, replace=False))
            pats = [pats[j] for j in keep]
        costs = sample_costs(rng, len(pats), spec.cost_mean)
        nurses.append(NurseSpec(i + 1, int(grades[i]), tuple(pats), tuple(int(c) for c in costs)))
    return nurses


def _hidden_cover(nurses: list[NurseSpec], g: int, rng: np.random.Generator) -> np.ndarray:
    """Qualified cover of one roster drawn uniformly at random."""
    cover = np.zeros((NUM_SHIFTS, g), dtype=np.int64)
    for nu in nurses:
        pat = nu.patterns[rng.integers(len(nu))]
        cover[:, nu.grade - 1:] += np.array(pat.cover)[:, None]
    return cover


def _demand(nurses: list[NurseSpec], g: int, tightness: float, rng: np.random.Generator) -> np.ndarray:
    """Binomial thinning (or padding, above 1) of a hidden roster's cover.

    The mean is ``tightness`` times the expected cover under uniform
    pattern choice; up to tightness 1 the hidden roster stays penalty-free.
    """
    cover = _hidden_cover(nurses, g, rng)
    if tightness <= 1:
        demand = rng.binomial(cover, tightness)
    else:
        demand = cover + rng.binomial(cover, tightness - 1)
    # cumulative demand never falls from a higher band to a lower one
    return np.maximum.accumulate(demand, axis=1)


def _add_shortage(demand: np.ndarray, nurses: list[NurseSpec], rng: np.random.Generator) -> None:
    k = int(rng.integers(NUM_SHIFTS))
    able = sum(1 for nu in nurses if any(p.cover[k] for p in nu.patterns))
    demand[k, -1] = max(demand[k, -1], able + 1)


def generate(spec: GenSpec) -> Instance:
    rng = np.random.default_rng(spec.seed)
    nurses = _nurses(spec, rng)
    g = spec.num_grades
    demand = _demand(nurses, g, spec.tightness, rng)
    if spec.shortage:
        _add_shortage(demand, nurses, rng)
    return Instance(tuple(nurses), g, tuple(map(tuple, demand.tolist())))


# -- desk-scale presets -------------------------------------------------------

TINY_PRESETS = {
    # name: (nurses, grades, max patterns per nurse, shortage)
    "tiny-4x3": (4, 2, 6, False),
    "tiny-6x3": (6, 3, 6, False),
    "tiny-shortage": (4, 2, 6, True),
}


def _tiny_candidate(n: int, g: int, max_patterns: int, shortage: bool, rng: np.random.Generator) -> Instance:
    spec = GenSpec(num_nurses=n, num_grades=g, max_patterns=max_patterns, seed=0)
    nurses = _nurses(spec, rng)
    demand = _demand(nurses, g, 0.7, rng)
    if shortage:
        _add_shortage(demand, nurses, rng)
    return Instance(tuple(nurses), g, tuple(map(tuple, demand.tolist())))


def generate_tiny(name: str, seed: int = 42, weights: FitnessWeights = FitnessWeights()) -> Instance:
    """Small preset instance, checked with the exact oracle: the optimum is
    penalty-free, except for tiny-shortage where no roster is."""
    try:
        n, g, max_patterns, shortage = TINY_PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(TINY_PRESETS)}") from None
    rng = np.random.default_rng(seed)
    while True:
        inst = _tiny_candidate(n, g, max_patterns, shortage, rng)
        _, best = exact_optimum(inst, weights)
        if is_feasible(inst, best) != shortage:
            return inst
