"""Parameter sets shared by the decoder, the EDA, the ant-miner and the CLI.

Defaults are the fixed parameter set used for the hospital experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class FitnessWeights:
    w5: int | float = 200

    def __post_init__(self):
        if not self.w5 > 0:
            raise ValueError(f"w5 must be positive, got {self.w5}")


@dataclass(frozen=True)
class RuleWeights:
    """Weights for the Contribution score and the k-Cheapest list length.

    ``grade_weights[s]`` weights covering an uncovered shift of grade
    ``s + 1``. Instances with more grades than weights get weight 1 for
    the extra grades.
    """

    grade_weights: tuple[float, ...] = (1, 1, 8)
    w4: float = 2
    k: int = 5

    def __post_init__(self):
        object.__setattr__(self, "grade_weights", tuple(self.grade_weights))
        if not self.grade_weights or any(w <= 0 for w in self.grade_weights):
            raise ValueError("grade weights must be positive")
        if self.w4 <= 0:
            raise ValueError("w4 must be positive")
        if self.k < 1:
            raise ValueError("k must be at least 1")

    def for_grades(self, g: int) -> tuple[float, ...]:
        ws = self.grade_weights[:g]
        return ws + (1,) * (g - len(ws))

    def scaled(self, factor: float) -> "RuleWeights":
        return RuleWeights(tuple(w * factor for w in self.grade_weights), self.w4 * factor, self.k)


@dataclass(frozen=True)
class AntParams:
    rho: float = 0.97
    q: float = 100
    d: float = 2
    b1: float = 10
    b2: float = 1
    generations: int = 5

    def __post_init__(self):
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho}")
        if self.q <= 0:
            raise ValueError("Q must be positive")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if not self.b1 > self.b2 > 0:
            raise ValueError(f"need B1 > B2 > 0, got B1={self.b1}, B2={self.b2}")
        if self.generations < 0:
            raise ValueError("ant generations must be >= 0")


@dataclass(frozen=True)
class EdaParams:
    """Population accounting: ``selected`` roulette draws build the model,
    the same number of paths is sampled, and ``elites`` best members of
    the old population are carried over."""

    generations: int = 200
    selected: int = 100
    elites: int = 40
    roulette_delta: float = 1
    laplace: float = 0
    use_ant_miner: bool = True
    ant: AntParams = field(default_factory=AntParams)

    def __post_init__(self):
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if self.selected < 1:
            raise ValueError("selected must be >= 1")
        if self.elites < 0:
            raise ValueError("elites must be >= 0")
        if self.roulette_delta <= 0:
            raise ValueError("roulette delta must be positive")
        if self.laplace < 0:
            raise ValueError("laplace smoothing must be >= 0")

    @property
    def population_size(self) -> int:
        return self.selected + self.elites
