"""Reference semantics, random instances and differential fuzzing."""
from .fuzz import FuzzReport, monotonicity_suite, run_fuzz
from .generate import (GenParams, random_allocation, random_model, random_ral_formula,
                       random_rb_formula, translate_to_ral)
from .semantics import (LIMIT, OracleRefusal, count_strategy_trees, enumerate_strategy_trees,
                        holds_by_enumeration, holds_semantics, holds_semantics_ral,
                        holds_semantics_uniform, maximal_computations, oracle_states)

__all__ = [
    "FuzzReport", "GenParams", "LIMIT", "OracleRefusal", "count_strategy_trees",
    "enumerate_strategy_trees", "holds_by_enumeration", "holds_semantics",
    "holds_semantics_ral", "holds_semantics_uniform", "maximal_computations",
    "monotonicity_suite", "oracle_states", "random_allocation", "random_model",
    "random_ral_formula", "random_rb_formula", "run_fuzz", "translate_to_ral",
]
