"""Model checking for resource-bounded alternating-time logics.

Engines: :func:`check` (perfect information), :func:`check_i` (strongly
uniform strategies under imperfect information) and :func:`ral_check`
(resource-bounded opponents).  :mod:`dimres.oracle` holds the brute-force
reference semantics and the random-instance fuzzer.
"""
from .formula import (Allocation, FormulaSyntaxError, parse_allocation, parse_formula,
                      to_text, validate_formula)
from .imperfect import check_i, label_i
from .model import (GameModel, ModelError, ModelFormatError, load_model, validate_model)
from .perfect import QueryError, SearchStats, check, label
from .ral import ral_check

__version__ = "0.1.0"

__all__ = [
    "Allocation", "FormulaSyntaxError", "GameModel", "ModelError", "ModelFormatError",
    "QueryError", "SearchStats", "check", "check_i", "label", "label_i", "load_model",
    "parse_allocation", "parse_formula", "ral_check", "to_text", "validate_formula",
    "validate_model",
]
