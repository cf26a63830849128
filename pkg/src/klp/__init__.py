"""Exact rational toolkit for optimistic multilevel linear programs."""

from .exactnum import (
    LinearSolution,
    Rational,
    encoding_size,
    format_rational,
    frac,
    gauss_solve,
    vec,
)
from .genpoly import NEG_INF, POS_INF, ExtReal, GenPoly, genpoly, whole_space
from .mlp import (
    FINITE,
    INFEASIBLE,
    UNBOUNDED,
    FeasibleSetDesc,
    Level,
    LevelRow,
    MlpInstance,
    SolveReport,
    build_instance,
    check_feasible_point,
    check_optimal_point,
    decide_unbounded,
    decide_val,
    feasible_set,
    is_feasible,
    solve,
    value_functions,
)
from .oracle import (
    BasisCertificate,
    BilevelBasisResult,
    NaiveTrilevelDemo,
    StandardBilevel,
    bilevel_basis_solve,
    buchheim_instance,
    naive_trilevel_demo,
    random_instance,
)
from .pwl import Piece, PwlFunc, lp_value_function, min_combine
from .transforms import (
    ConditionReport,
    check_conditions,
    forward_constraints,
    nonforwardable_rows,
    scale_rhs,
    unboundedness_gadget,
)

__all__ = [
    "BasisCertificate",
    "BilevelBasisResult",
    "ConditionReport",
    "ExtReal",
    "FINITE",
    "FeasibleSetDesc",
    "GenPoly",
    "INFEASIBLE",
    "Level",
    "LevelRow",
    "LinearSolution",
    "MlpInstance",
    "NEG_INF",
    "NaiveTrilevelDemo",
    "POS_INF",
    "Piece",
    "PwlFunc",
    "Rational",
    "SolveReport",
    "StandardBilevel",
    "UNBOUNDED",
    "bilevel_basis_solve",
    "buchheim_instance",
    "build_instance",
    "check_conditions",
    "check_feasible_point",
    "check_optimal_point",
    "decide_unbounded",
    "decide_val",
    "encoding_size",
    "feasible_set",
    "format_rational",
    "forward_constraints",
    "frac",
    "gauss_solve",
    "genpoly",
    "is_feasible",
    "lp_value_function",
    "min_combine",
    "naive_trilevel_demo",
    "nonforwardable_rows",
    "random_instance",
    "scale_rhs",
    "solve",
    "unboundedness_gadget",
    "value_functions",
    "vec",
    "whole_space",
]
