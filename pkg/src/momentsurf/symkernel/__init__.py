"""Exact polynomial and rational-function kernel with a small expression DSL."""

from .dsl import (
    BinOp,
    Call,
    ExprAst,
    Neg,
    Num,
    Pow,
    Ref,
    Var,
    lower,
    parse_expr,
    parse_ratio,
    to_text,
)
from .errors import (
    DslSyntaxError,
    MissingRuleError,
    NotLinearError,
    SingularSystemError,
    SizeLimitError,
    SymkernelError,
    UnknownNameError,
    ZeroDenominatorError,
)
from .ops import (
    collect_coefficients,
    linear_coefficients,
    partial_derivative,
    ratio_arith,
    ratio_eq,
    solve_linear,
    solve_linear_2x2,
    substitute,
)
from .poly import VARS, Poly, max_terms
from .ratio import ONE, ZERO, Ratio

__all__ = [
    "VARS", "Poly", "Ratio", "ZERO", "ONE", "max_terms",
    "ExprAst", "Num", "Var", "Ref", "Neg", "BinOp", "Pow", "Call",
    "parse_expr", "parse_ratio", "to_text", "lower",
    "ratio_arith", "ratio_eq", "substitute", "partial_derivative",
    "collect_coefficients", "solve_linear_2x2", "solve_linear", "linear_coefficients",
    "SymkernelError", "DslSyntaxError", "UnknownNameError", "ZeroDenominatorError",
    "SingularSystemError", "NotLinearError", "SizeLimitError", "MissingRuleError",
]
