from .syntax import (CMP_OPS, Comparison, Literal, LogicError, Naf,
                     PredicateDecl, Program, Rule, SortDecl, Term, const, num,
                     var)
from .parser import parse, validate
from .ground import DEFAULT_GROUND_CAP, GroundProgram, GroundRule, ground
from .solve import (AnswerSet, Solver, cr_solve, cr_solve_ground, is_stable,
                    oracle_stable_models, stable_models)

__all__ = [
    "AnswerSet", "CMP_OPS", "Comparison", "DEFAULT_GROUND_CAP",
    "GroundProgram", "GroundRule", "Literal", "LogicError", "Naf",
    "PredicateDecl", "Program", "Rule", "Solver", "SortDecl", "Term",
    "const", "cr_solve", "cr_solve_ground", "ground", "is_stable", "num",
    "oracle_stable_models", "parse", "stable_models", "validate", "var",
]
