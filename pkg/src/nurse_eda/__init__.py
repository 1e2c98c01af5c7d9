"""Rule-based nurse rostering with a memetic estimation-of-distribution search."""

from .ant_miner import init_trails, refine, select_rules, update_trails
from .baselines import exact_optimum, exact_rule_path_optimum, run_rd1, run_rd2
from .config import AntParams, EdaParams, FitnessWeights, RuleWeights
from .eda import RuleModel, RulePath, build_model, evolve, model_from_counts, sample_path, select_parents
from .generator import GenSpec, generate, generate_tiny
from .instance import Instance, NurseSpec, ShiftPattern, enumerate_patterns, load_instance, save_instance
from .roster import RosterSolution, compute_coverage, fitness, is_feasible
from .rules import Rule, apply_rule, build_schedule, score_pattern

__all__ = [
    "AntParams", "EdaParams", "FitnessWeights", "GenSpec", "Instance", "NurseSpec", "RosterSolution",
    "Rule", "RuleModel", "RulePath", "RuleWeights", "ShiftPattern", "apply_rule", "build_model",
    "build_schedule", "compute_coverage", "enumerate_patterns", "evolve", "exact_optimum",
    "exact_rule_path_optimum", "fitness", "generate", "generate_tiny", "init_trails", "is_feasible",
    "load_instance", "model_from_counts", "refine", "run_rd1", "run_rd2", "sample_path", "save_instance",
    "score_pattern", "select_parents", "select_rules", "update_trails",
]
