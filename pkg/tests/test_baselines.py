import itertools

import numpy as np
import pytest
from scipy import stats

from conftest import GOLDEN_DIR, golden, make_instance, zero_demand
from nurse_eda.baselines import (
    SearchSpaceTooLarge,
    exact_optimum,
    exact_rule_path_optimum,
    load_golden,
    oracle_fitness,
    run_rd1,
    run_rd2,
    uniform_rule_path,
)
from nurse_eda.config import EdaParams, FitnessWeights, RuleWeights
from nurse_eda.eda import evolve
from nurse_eda.generator import TINY_PRESETS, GenSpec, generate, generate_tiny
from nurse_eda.roster import RosterSolution, fitness, is_feasible
from nurse_eda.rules import Rule

W = RuleWeights()


def test_rd1_single_point():
    inst = make_instance([(1, [("11111000000000", 6)])], zero_demand())
    res = run_rd1(inst, 1, rng=0)
    assert res.best_cost == 6 and res.iterations_used == 1


def test_zero_demand_feasible_first_iteration():
    inst = generate(GenSpec(num_nurses=5, seed=1))
    inst = type(inst)(inst.nurses, inst.num_grades, zero_demand(3))
    assert run_rd1(inst, 1, rng=0).feasible_found
    assert run_rd2(inst, 1, rng=0).feasible_found


def test_rd2_with_only_random_rule_is_rd1():
    inst = generate(GenSpec(num_nurses=8, seed=4))
    a = run_rd1(inst, 50, rng=3)
    b = run_rd2(inst, 50, rng=3, rules=(Rule.RANDOM,))
    assert (a.best_cost, a.best_solution, a.trace) == (b.best_cost, b.best_solution, b.trace)


def test_rule_usage_uniform():
    rng = np.random.default_rng(10)
    draws = np.array([uniform_rule_path(6, rng) for _ in range(10_000)]).ravel()
    counts = np.bincount(draws - 1, minlength=6)
    assert np.abs(counts / draws.size - 1 / 6).max() < 0.01
    assert stats.chisquare(counts).pvalue > 0.01


def test_baseline_traces_non_increasing_and_consistent():
    inst = generate(GenSpec(num_nurses=10, seed=2))
    for run in (run_rd1, run_rd2):
        res = run(inst, 200, rng=1)
        assert all(a >= b for a, b in zip(res.trace, res.trace[1:]))
        assert res.best_cost == fitness(inst, res.best_solution) == res.trace[-1]


def test_oracle_argmin_of_costs():
    inst = make_instance([(1, [("11111000000000", 5), ("00000001111000", 3)])], zero_demand())
    opt, sol = exact_optimum(inst)
    assert opt == 3
    assert inst.nurses[0].costs[sol.assignment[0]] == 3


def test_oracle_unsatisfiable_demand():
    demand = zero_demand()
    demand[0] = [2]
    inst = make_instance([(1, [("10000000000000", 5), ("01000000000000", 1)])], demand)
    opt, sol = exact_optimum(inst)
    assert opt > 0 and not is_feasible(inst, sol)
    assert opt == 5 + 200


def test_oracle_matches_brute_force_product():
    inst = generate(GenSpec(num_nurses=4, num_grades=2, max_patterns=4, tightness=1.0, seed=21))
    costs = {a: oracle_fitness(inst, RosterSolution(a)) for a in itertools.product(range(4), repeat=4)}
    best = min(costs.values())
    first = min(a for a, c in costs.items() if c == best)
    assert exact_optimum(inst) == (best, RosterSolution(first))


def test_oracle_budget():
    inst = generate(GenSpec(num_nurses=10, seed=0))
    with pytest.raises(SearchSpaceTooLarge):
        exact_optimum(inst)
    with pytest.raises(SearchSpaceTooLarge):
        exact_rule_path_optimum(inst, budget=1000)


def test_rule_path_oracle_single_nurse():
    inst = make_instance([(1, [("10000000000000", 5), ("01000000000000", 1), ("00100000000000", 9)])], zero_demand())
    cost, path = exact_rule_path_optimum(inst)
    assert cost == 1
    assert len(path) == 1


@pytest.mark.parametrize("name", ["tiny-4x3", "tiny-shortage"])
def test_rule_path_oracle_bounded_by_exact(name):
    inst = generate_tiny(name)
    opt, _ = exact_optimum(inst)
    rule_opt, _ = exact_rule_path_optimum(inst)
    assert rule_opt >= opt


def test_rule_paths_express_tiny_optimum():
    inst = generate_tiny("tiny-4x3")
    assert exact_rule_path_optimum(inst)[0] == exact_optimum(inst)[0]


@pytest.mark.parametrize("name", sorted(TINY_PRESETS))
def test_golden_files_match_oracle(name):
    rec = golden(name)
    inst = generate_tiny(name)
    assert rec["instance_hash"] == inst.digest()
    opt, sol = exact_optimum(inst, FitnessWeights(rec["w5"]))
    assert rec["optimum"] == opt
    assert rec["argmin_assignment"] == list(sol.assignment)
    assert load_golden(GOLDEN_DIR / f"{name}.json") == [rec]


def test_solvers_never_beat_oracle():
    inst = generate_tiny("tiny-6x3")
    opt = golden("tiny-6x3")["optimum"]
    params = EdaParams(generations=5, selected=14, elites=6)
    for seed in range(3):
        assert evolve(inst, params, rng=seed).best_fitness >= opt
        assert run_rd1(inst, 100, rng=seed).best_cost >= opt
        assert run_rd2(inst, 100, rng=seed).best_cost >= opt
