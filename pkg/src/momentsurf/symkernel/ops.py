"""Functional front end to the kernel: arithmetic, comparison, solving."""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import NotLinearError, SingularSystemError, ZeroDenominatorError
from .poly import Poly, var_index
from .ratio import Ratio


def ratio_arith(op: str, x, y) -> Ratio:
    x, y = Ratio.coerce(x), Ratio.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        if y.is_zero():
            raise ZeroDenominatorError("division by the zero rational function")
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def ratio_eq(x, y) -> bool:
    """True iff x.num*y.den - y.num*x.den is the zero polynomial."""
    return Ratio.coerce(x).equals(y)


def substitute(x, bindings: Mapping, powers: Mapping | None = None) -> Ratio:
    return Ratio.coerce(x).substitute(bindings, powers)


def partial_derivative(x, v) -> Ratio:
    return Ratio.coerce(x).partial(v)


def collect_coefficients(x: Poly, v) -> list[Poly]:
    """Coefficients c_0..c_d of x in the variable v (empty for zero)."""
    if isinstance(x, Ratio):
        x = x.as_poly()
    return x.coefficients(v)


def solve_linear_2x2(p1, q1, r1, p2, q2, r2) -> tuple[Ratio, Ratio]:
    """Solve p1*x + q1*y + r1 = 0, p2*x + q2*y + r2 = 0."""
    p1, q1, r1, p2, q2, r2 = (Ratio.coerce(t) for t in (p1, q1, r1, p2, q2, r2))
    det = p1 * q2 - p2 * q1
    if det.is_zero():
        raise SingularSystemError("determinant vanishes identically")
    x = (q1 * r2 - q2 * r1) / det
    y = (p2 * r1 - p1 * r2) / det
    return x, y


def solve_linear(expr, v, power: int = 1) -> Ratio:
    """Value of ``v**power`` making expr vanish, when expr is linear in it."""
    expr = Ratio.coerce(expr)
    num = expr.primitive_num
    try:
        coeffs = num.coefficients(var_index(v), power)
    except ValueError as exc:
        raise NotLinearError(str(exc)) from None
    if len(coeffs) != 2:
        raise NotLinearError(f"expression has degree {len(coeffs) - 1} in {v}^{power}")
    b, a = coeffs
    if any(f.degree(var_index(v)) > 0 for f in expr.den_factors):
        raise NotLinearError(f"{v} occurs in a denominator")
    return -Ratio(b) / Ratio(a)


def linear_coefficients(expr, monomials: Sequence[tuple[str, int]]):
    """Split a Ratio into coefficients of the given pure powers plus a remainder.

    ``monomials`` lists (variable, exponent) pairs; the result maps each pair
    and ``None`` (the part free of them) to Ratios with the original
    denominator.  Mixed terms raise NotLinearError.
    """
    expr = Ratio.coerce(expr)
    idx = [(var_index(v), e) for v, e in monomials]
    if any(f.degree(i) > 0 for f in expr.den_factors for i, _ in idx):
        raise NotLinearError("form variables occur in a denominator")
    buckets: dict = {key: {} for key in list(monomials) + [None]}
    from .poly import mono_degree, _SHIFT

    for m, c in expr.primitive_num.items():
        hit = None
        rest = m
        for (v, e), (i, _) in zip(monomials, idx):
            d = mono_degree(m, i)
            if d:
                if d != e or hit is not None:
                    raise NotLinearError(f"term with {v}^{d} does not fit the form")
                hit = (v, e)
                rest -= d << _SHIFT[i]
        buckets[hit][rest] = c
    scale_den = Ratio._parts(expr.scale, Poly.const(1), expr.den_factors)
    return {key: Ratio(Poly._raw(terms)) * scale_den for key, terms in buckets.items()}
