import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import make_instance, zero_demand
from nurse_eda.config import FitnessWeights, RuleWeights
from nurse_eda.generator import GenSpec, generate
from nurse_eda.roster import RosterSolution, compute_coverage, fitness
from nurse_eda.rules import (
    ALL_RULES,
    PartialSchedule,
    Rule,
    apply_rule,
    build_and_score,
    build_schedule,
    highest_undercover_values,
    overall_cover_values,
    score_pattern,
)

W = RuleWeights()
MON_FRI_NIGHTS = "0000000" + "1111100"
TUE_SAT_NIGHTS = "0000000" + "0111110"


def night_example():
    """Residual night requirements (-3, 0, +1, -2, -1, -2, 0) before nurse 2."""
    demand = zero_demand()
    for night, need in zip(range(7, 14), (3, 0, 0, 2, 1, 2, 0)):
        demand[night] = [need]
    inst = make_instance(
        [
            (1, [("0000000" + "0010000", 0)]),  # Wednesday night, leaves +1 overcover
            (1, [(MON_FRI_NIGHTS, 0), (TUE_SAT_NIGHTS, 0)]),
        ],
        demand,
    )
    partial = PartialSchedule(inst)
    partial.assign(0)
    return inst, partial


def test_worked_requirements_vector():
    _, partial = night_example()
    assert (-partial.need[7:, 0]).tolist() == [-3, 0, 1, -2, -1, -2, 0]


def test_highest_undercover_worked_example(rng):
    inst, partial = night_example()
    arr = inst.arrays[1]
    to_idx = {str(p): j for j, p in enumerate(inst.nurses[1].patterns)}
    values = highest_undercover_values(arr, partial.undercover())
    assert values[to_idx[MON_FRI_NIGHTS]] == 3
    assert values[to_idx[TUE_SAT_NIGHTS]] == 2
    assert apply_rule(Rule.HIGHEST_UNDERCOVER, 1, partial, inst, W, rng) == to_idx[MON_FRI_NIGHTS]


def test_overall_cover_worked_example(rng):
    inst, partial = night_example()
    arr = inst.arrays[1]
    to_idx = {str(p): j for j, p in enumerate(inst.nurses[1].patterns)}
    values = overall_cover_values(arr, partial.undercover())
    assert values[to_idx[MON_FRI_NIGHTS]] == 6
    assert values[to_idx[TUE_SAT_NIGHTS]] == 5
    assert apply_rule(Rule.OVERALL_COVER, 1, partial, inst, W, rng) == to_idx[MON_FRI_NIGHTS]


def test_contribution_a_with_nothing_uncovered():
    inst = make_instance([(1, [("11111000000000", 0)])], zero_demand())
    assert score_pattern(0, 0, PartialSchedule(inst), RuleWeights((1, 1, 8), 2), "A") == 200


def test_contribution_zero_when_satisfied_and_worst_cost():
    inst = make_instance([(1, [("11111000000000", 100)])], zero_demand())
    assert score_pattern(0, 0, PartialSchedule(inst), W, "A") == 0
    assert score_pattern(0, 0, PartialSchedule(inst), W, "B") == 0


@pytest.mark.parametrize("residual, variant, expected", [(1, "A", 168), (3, "A", 168), (3, "B", 184)])
def test_contribution_hand_evaluation(residual, variant, expected):
    # grade-1 nurse, one uncovered grade-3 cell (Monday day)
    demand = zero_demand(3)
    demand[0] = [0, 0, residual]
    inst = make_instance([(1, [("10000000000000", 20)])], demand, num_grades=3)
    assert score_pattern(0, 0, PartialSchedule(inst), RuleWeights((1, 1, 8), 2), variant) == expected


def test_contribution_ignores_grades_above_nurse():
    # grade-2 nurse cannot serve grade-1 demand
    demand = zero_demand(2)
    demand[0] = [1, 1]
    inst = make_instance([(2, [("10000000000000", 0)])], demand, num_grades=2)
    assert score_pattern(0, 0, PartialSchedule(inst), RuleWeights((5, 7), 1), "A") == 7 + 100


def test_k_cheapest_support():
    costs = [0, 1, 2, 3, 4, 90, 91, 92, 93]
    pats = [("".join("1" if b == i else "0" for b in range(14)), c) for i, c in enumerate(costs)]
    inst = make_instance([(1, pats)], zero_demand())
    rng = np.random.default_rng(0)
    cheap = {j for j, c in enumerate(inst.nurses[0].costs) if c < 5}
    seen = {apply_rule(Rule.K_CHEAPEST, 0, PartialSchedule(inst), inst, W, rng) for _ in range(1000)}
    assert seen == cheap


def test_k_larger_than_list_is_clamped():
    inst = make_instance([(1, [("10000000000000", 5), ("01000000000000", 3)])], zero_demand())
    rng = np.random.default_rng(0)
    seen = {apply_rule(Rule.K_CHEAPEST, 0, PartialSchedule(inst), inst, RuleWeights(k=10), rng) for _ in range(200)}
    assert seen == {0, 1}


def test_k1_is_argmin():
    inst = make_instance([(1, [("10000000000000", 5), ("01000000000000", 3), ("00100000000000", 4)])], zero_demand())
    sol = build_schedule([Rule.K_CHEAPEST], inst, RuleWeights(k=1), np.random.default_rng(1))
    assert inst.nurses[0].costs[sol.assignment[0]] == 3


def test_cascade_prefers_own_grade():
    # grade-1 nurse: Monday is short of a grade-1 nurse, Tuesday is short by
    # three at grade 2 only. The cascade restricts scoring to grade 1.
    demand = zero_demand(2)
    demand[0] = [1, 1]
    demand[1] = [0, 3]
    inst = make_instance([(1, [("10000000000000", 0), ("01000000000000", 0)])], demand, num_grades=2)
    rng = np.random.default_rng(0)
    partial = PartialSchedule(inst)
    assert apply_rule(Rule.HIGHEST_UNDERCOVER, 0, partial, inst, W, rng) == 1  # "10..." sorts after "01..."
    assert str(inst.nurses[0].patterns[1]) == "10000000000000"
    assert apply_rule(Rule.OVERALL_COVER, 0, partial, inst, W, rng) == 1
    # once grade 1 is covered the next band is used
    demand[0] = [0, 0]
    inst2 = make_instance([(1, [("10000000000000", 0), ("01000000000000", 0)])], demand, num_grades=2)
    assert apply_rule(Rule.HIGHEST_UNDERCOVER, 0, PartialSchedule(inst2), inst2, W, rng) == 0


def test_argmax_ties_take_lowest_index():
    inst = make_instance([(1, [("10000000000000", 7), ("01000000000000", 7)])], zero_demand())
    rng = np.random.default_rng(0)
    for rule in (Rule.HIGHEST_UNDERCOVER, Rule.OVERALL_COVER, Rule.CONTRIBUTION_A, Rule.CONTRIBUTION_B):
        assert apply_rule(rule, 0, PartialSchedule(inst), inst, W, rng) == 0


def test_out_of_order_nurse_rejected(rng):
    inst, partial = night_example()
    with pytest.raises(ValueError):
        apply_rule(Rule.RANDOM, 0, partial, inst, W, rng)


def test_path_length_mismatch():
    inst, _ = night_example()
    with pytest.raises(ValueError):
        build_schedule([1], inst, W, np.random.default_rng(0))


def test_random_path_deterministic():
    inst = generate(GenSpec(num_nurses=10, seed=4))
    path = [Rule.RANDOM] * inst.n
    a = build_schedule(path, inst, W, np.random.default_rng(77))
    b = build_schedule(path, inst, W, np.random.default_rng(77))
    assert a == b


def test_contribution_b_beats_random_mean():
    inst = generate(GenSpec(num_nurses=20, tightness=0.9, seed=8))
    fw = FitnessWeights()
    rng = np.random.default_rng(0)
    guided = fitness(inst, build_schedule([Rule.CONTRIBUTION_B] * inst.n, inst, W, rng), fw)
    rand = [fitness(inst, build_schedule([Rule.RANDOM] * inst.n, inst, W, rng), fw) for _ in range(100)]
    assert guided <= np.mean(rand)


def test_partial_coverage_tracks_prefix():
    inst = generate(GenSpec(num_nurses=6, seed=3))
    rng = np.random.default_rng(2)
    partial = PartialSchedule(inst)
    for i, rule in enumerate([1, 2, 3, 4, 5, 6]):
        partial.assign(apply_rule(rule, i, partial, inst, W, rng))
        prefix = type(inst)(inst.nurses[: i + 1], inst.num_grades, inst.demand)
        np.testing.assert_array_equal(partial.coverage().cover, compute_coverage(prefix, RosterSolution(partial.assigned)).cover)


@given(st.lists(st.sampled_from(ALL_RULES), min_size=8, max_size=8), st.integers(0, 2**32 - 1))
def test_decoder_total_and_scored_consistently(path, seed):
    inst = generate(GenSpec(num_nurses=8, seed=1))
    sol, cost = build_and_score(path, inst, W, FitnessWeights(), np.random.default_rng(seed))
    assert len(sol) == inst.n
    assert all(0 <= j < len(nu) for j, nu in zip(sol.assignment, inst.nurses))
    assert cost == fitness(inst, sol)
    assert sol == build_schedule(path, inst, W, np.random.default_rng(seed))


@given(
    st.lists(st.sampled_from([Rule.CONTRIBUTION_A, Rule.CONTRIBUTION_B]), min_size=8, max_size=8),
    st.sampled_from([2, 3, 4, 0.5, 8]),
)
def test_contribution_argmax_scale_invariant(path, factor):
    inst = generate(GenSpec(num_nurses=8, seed=6))
    rng = np.random.default_rng(0)
    a = build_schedule(path, inst, W, rng)
    b = build_schedule(path, inst, W.scaled(factor), rng)
    assert a == b
