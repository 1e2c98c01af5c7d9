"""Problem data: shift patterns, nurses, grade qualifications, demand.

A shift pattern is a 14-slot weekly vector, slots 0-6 are the days Mon-Sun
and slots 7-13 the nights Mon-Sun. Grade 1 is the highest band; a nurse of
grade ``q`` counts towards the demand of every grade ``s >= q``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import IO, Any

import numpy as np

NUM_SHIFTS = 14
DAYS = range(0, 7)
NIGHTS = range(7, 14)
MAX_COST = 100


class InstanceError(ValueError):
    """Invalid instance data; ``field`` names the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True, order=True)
class ShiftPattern:
    cover: tuple[int, ...]

    def __post_init__(self):
        cover = tuple(self.cover)
        if len(cover) != NUM_SHIFTS:
            raise InstanceError("cover", f"pattern must have {NUM_SHIFTS} elements, got {len(cover)}")
        if any(c not in (0, 1) for c in cover):
            raise InstanceError("cover", f"pattern elements must be 0 or 1: {cover}")
        object.__setattr__(self, "cover", tuple(int(c) for c in cover))

    @classmethod
    def from_string(cls, text: str) -> "ShiftPattern":
        if not isinstance(text, str) or len(text) != NUM_SHIFTS or set(text) - {"0", "1"}:
            raise InstanceError("cover", f"expected a {NUM_SHIFTS}-character 0/1 string, got {text!r}")
        return cls(tuple(int(c) for c in text))

    def __str__(self) -> str:
        return "".join(map(str, self.cover))

    @property
    def days(self) -> int:
        return sum(self.cover[:7])

    @property
    def nights(self) -> int:
        return sum(self.cover[7:])


def enumerate_patterns(days: int, nights: int) -> list[ShiftPattern]:
    """All pure-day patterns with ``days`` ones and all pure-night patterns
    with ``nights`` ones, in lexicographic order of the 14-bit vector.

    A zero count contributes no patterns for that side.
    """
    for name, v in (("days", days), ("nights", nights)):
        if not isinstance(v, (int, np.integer)) or not 0 <= v <= 7:
            raise InstanceError(name, f"must be an integer in 0..7, got {v!r}")
    if days == 0 and nights == 0:
        raise InstanceError("contract", "days and nights cannot both be zero")

    out = []
    for count, offset in ((days, 0), (nights, 7)):
        if count == 0:
            continue
        for slots in combinations(range(7), count):
            cover = [0] * NUM_SHIFTS
            for s in slots:
                cover[offset + s] = 1
            out.append(ShiftPattern(tuple(cover)))
    return sorted(out)


def _check_cost(cost: Any) -> int | float:
    if isinstance(cost, bool) or not isinstance(cost, (int, float, np.integer, np.floating)):
        raise InstanceError("cost", f"must be a number, got {cost!r}")
    if not 0 <= cost <= MAX_COST:
        raise InstanceError("cost", f"must lie in [0, {MAX_COST}], got {cost}")
    if float(cost).is_integer():
        return int(cost)
    return float(cost)


@dataclass(frozen=True)
class NurseSpec:
    """One nurse: grade band and feasible patterns with penalty costs.

    Patterns are stored sorted by cover string; ``costs[j]`` belongs to
    ``patterns[j]``.
    """

    id: int
    grade: int
    patterns: tuple[ShiftPattern, ...]
    costs: tuple[int | float, ...]

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, (int, np.integer)):
            raise InstanceError("id", f"nurse id must be an integer, got {self.id!r}")
        if isinstance(self.grade, bool) or not isinstance(self.grade, (int, np.integer)):
            raise InstanceError("grade", f"nurse {self.id}: grade must be an integer, got {self.grade!r}")
        if len(self.patterns) != len(self.costs):
            raise InstanceError("patterns", f"nurse {self.id}: {len(self.patterns)} patterns but {len(self.costs)} costs")
        if not self.patterns:
            raise InstanceError("patterns", f"nurse {self.id} has no feasible patterns")
        costs = [_check_cost(c) for c in self.costs]
        pairs = sorted(zip(self.patterns, costs), key=lambda pc: pc[0])
        for (a, _), (b, _) in zip(pairs, pairs[1:]):
            if a == b:
                raise InstanceError("patterns", f"nurse {self.id}: duplicate pattern {a}")
        object.__setattr__(self, "id", int(self.id))
        object.__setattr__(self, "grade", int(self.grade))
        object.__setattr__(self, "patterns", tuple(p for p, _ in pairs))
        object.__setattr__(self, "costs", tuple(c for _, c in pairs))

    def __len__(self) -> int:
        return len(self.patterns)


class _NurseArrays:
    """Dense views of one nurse used by the decoder."""

    __slots__ = ("covers", "costs", "cheapest", "relevant", "grade_index")

    def __init__(self, nurse: NurseSpec):
        self.covers = np.array([p.cover for p in nurse.patterns], dtype=np.int64)
        self.costs = np.array(nurse.costs)
        # stable: equal costs keep canonical pattern order
        self.cheapest = np.argsort(self.costs, kind="stable")
        self.relevant = self.covers.any(axis=0).astype(np.int64)
        self.grade_index = nurse.grade - 1


@dataclass(frozen=True)
class Instance:
    nurses: tuple[NurseSpec, ...]
    num_grades: int
    demand: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = self.num_grades
        if isinstance(g, bool) or not isinstance(g, (int, np.integer)) or g < 1:
            raise InstanceError("num_grades", f"must be an integer >= 1, got {g!r}")
        nurses = tuple(sorted(self.nurses, key=lambda nu: nu.id))
        if not nurses:
            raise InstanceError("nurses", "instance needs at least one nurse")
        ids = [nu.id for nu in nurses]
        if len(set(ids)) != len(ids):
            raise InstanceError("id", "duplicate nurse ids")
        for nu in nurses:
            if not 1 <= nu.grade <= g:
                raise InstanceError("grade", f"nurse {nu.id}: grade {nu.grade} outside 1..{g}")
        demand = tuple(tuple(row) for row in self.demand)
        if len(demand) != NUM_SHIFTS or any(len(row) != g for row in demand):
            raise InstanceError("demand", f"demand must be a {NUM_SHIFTS}x{g} matrix")
        for row in demand:
            for v in row:
                if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                    raise InstanceError("demand", f"entries must be non-negative integers, got {v!r}")
        object.__setattr__(self, "num_grades", int(g))
        object.__setattr__(self, "nurses", nurses)
        object.__setattr__(self, "demand", tuple(tuple(int(v) for v in row) for row in demand))

    @property
    def n(self) -> int:
        return len(self.nurses)

    def qualified(self, nurse: int, grade: int) -> bool:
        """q_is: nurse (0-based) counts towards demand of ``grade`` (1-based)."""
        return self.nurses[nurse].grade <= grade

    def qualification_matrix(self) -> np.ndarray:
        grades = np.array([nu.grade for nu in self.nurses])
        return (grades[:, None] <= np.arange(1, self.num_grades + 1)[None, :]).astype(np.int64)

    def search_space_size(self) -> int:
        size = 1
        for nu in self.nurses:
            size *= len(nu)
        return size

    @cached_property
    def demand_array(self) -> np.ndarray:
        arr = np.array(self.demand, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    @cached_property
    def arrays(self) -> tuple[_NurseArrays, ...]:
        return tuple(_NurseArrays(nu) for nu in self.nurses)

    def to_dict(self) -> dict:
        return {
            "num_grades": self.num_grades,
            "demand": [list(row) for row in self.demand],
            "nurses": [
                {
                    "id": nu.id,
                    "grade": nu.grade,
                    "patterns": [{"cover": str(p), "cost": c} for p, c in zip(nu.patterns, nu.costs)],
                }
                for nu in self.nurses
            ],
        }

    def digest(self) -> str:
        return hashlib.sha256(save_instance(self)).hexdigest()


def instance_from_dict(data: Any) -> Instance:
    if not isinstance(data, dict):
        raise InstanceError("instance", "top level must be a JSON object")
    for key in ("num_grades", "demand", "nurses"):
        if key not in data:
            raise InstanceError(key, "missing field")
    if not isinstance(data["demand"], list) or any(not isinstance(r, list) for r in data["demand"]):
        raise InstanceError("demand", "must be a list of lists")
    if not isinstance(data["nurses"], list):
        raise InstanceError("nurses", "must be a list")
    nurses = []
    for raw in data["nurses"]:
        if not isinstance(raw, dict):
            raise InstanceError("nurses", "each nurse must be an object")
        for key in ("id", "grade", "patterns"):
            if key not in raw:
                raise InstanceError(key, "missing field in nurse record")
        if not isinstance(raw["patterns"], list):
            raise InstanceError("patterns", "must be a list")
        pats, costs = [], []
        for p in raw["patterns"]:
            if not isinstance(p, dict) or "cover" not in p or "cost" not in p:
                raise InstanceError("patterns", "each pattern needs 'cover' and 'cost'")
            pats.append(ShiftPattern.from_string(p["cover"]))
            costs.append(p["cost"])
        nurses.append(NurseSpec(raw["id"], raw["grade"], tuple(pats), tuple(costs)))
    return Instance(tuple(nurses), data["num_grades"], data["demand"])


def load_instance(source: bytes | str | IO) -> Instance:
    """Parse an instance from JSON bytes, text, or a binary/text stream."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InstanceError("encoding", str(exc)) from None
    try:
        data = json.loads(source)
    except json.JSONDecodeError as exc:
        raise InstanceError("syntax", str(exc)) from None
    return instance_from_dict(data)


def save_instance(instance: Instance) -> bytes:
    """Canonical serialization: fixed field order, nurses by id, patterns by cover."""
    return (json.dumps(instance.to_dict(), separators=(",", ":")) + "\n").encode("utf-8")


def read_instance_file(path) -> Instance:
    with open(path, "rb") as fh:
        return load_instance(fh)


def write_instance_file(instance: Instance, path) -> None:
    with open(path, "wb") as fh:
        fh.write(save_instance(instance))
