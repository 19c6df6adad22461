"""Randomized algebraic properties of the kernel (1000 cases per property)."""

from collections import Counter

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from momentsurf.derivation import ContextKind, derive, make_context
from momentsurf.symkernel import (
    Poly,
    Ratio,
    collect_coefficients,
    parse_expr,
    partial_derivative,
    ratio_eq,
    solve_linear_2x2,
    to_text,
)
from momentsurf.symkernel.poly import VAR_INDEX

from oracles import same, to_sympy
from strategies import PROPERTY_SETTINGS, SMALL_VARS, asts, nonzero_polys, nonzero_ratios, polys, ratios

CASES = Counter()


@PROPERTY_SETTINGS
@given(ratios(), ratios(), ratios(), nonzero_ratios())
def test_field_axioms(x, y, z, u):
    CASES["field"] += 1
    assert ratio_eq(x + y, y + x)
    assert ratio_eq(x * y, y * x)
    assert ratio_eq((x + y) + z, x + (y + z))
    assert ratio_eq((x * y) * z, x * (y * z))
    assert ratio_eq(x * (y + z), x * y + x * z)
    assert ratio_eq((x / u) * u, x)
    assert ratio_eq(u * u.inverse(), 1)
    assert ratio_eq(x - x, 0) and ratio_eq(x + 0, x) and ratio_eq(x * 1, x)


@PROPERTY_SETTINGS
@given(ratios(), nonzero_ratios(), st.sampled_from(SMALL_VARS))
def test_leibniz_and_quotient_rules(x, y, v):
    CASES["leibniz"] += 1
    dx, dy = partial_derivative(x, v), partial_derivative(y, v)
    assert ratio_eq(partial_derivative(x * y, v), dx * y + x * dy)
    assert ratio_eq(partial_derivative(x / y, v), (dx * y - x * dy) / (y * y))
    assert ratio_eq(partial_derivative(x + y, v), dx + dy)


@PROPERTY_SETTINGS
@given(polys(max_terms=6, max_deg=4), st.sampled_from(SMALL_VARS))
def test_collect_reconstructs(x, v):
    CASES["collect"] += 1
    coeffs = collect_coefficients(x, v)
    rebuilt = Poly()
    for i, c in enumerate(coeffs):
        rebuilt = rebuilt + c * Poly.var(v, i) if i else rebuilt + c
    assert rebuilt == x
    assert not coeffs or not coeffs[-1].is_zero()


@PROPERTY_SETTINGS
@given(*[ratios()] * 6)
def test_solve2x2_back_substitutes(p1, q1, r1, p2, q2, r2):
    assume(not (p1 * q2 - p2 * q1).is_zero())
    CASES["solve2x2"] += 1
    x, y = solve_linear_2x2(p1, q1, r1, p2, q2, r2)
    assert ratio_eq(p1 * x + q1 * y + r1, 0)
    assert ratio_eq(p2 * x + q2 * y + r2, 0)


# -- further invariants ------------------------------------------------------------------


@settings(PROPERTY_SETTINGS, max_examples=300)
@given(ratios(), nonzero_polys())
def test_cross_multiplication_invariance(x, c):
    assert ratio_eq(x, Ratio(x.num * c, x.den * c))


@settings(PROPERTY_SETTINGS, max_examples=200)
@given(ratios(), ratios(), nonzero_ratios())
def test_arithmetic_agrees_with_sympy(x, y, u):
    got = to_sympy((x * y - u) / u + x)
    want = (to_sympy(x) * to_sympy(y) - to_sympy(u)) / to_sympy(u) + to_sympy(x)
    assert same(got, want)


@settings(PROPERTY_SETTINGS, max_examples=500)
@given(asts())
def test_print_parse_fixed_point(node):
    text = to_text(node)
    assert parse_expr(text) == node


@settings(PROPERTY_SETTINGS, max_examples=200)
@given(ratios(), st.sampled_from(SMALL_VARS))
def test_partial_agrees_with_sympy(x, v):
    import sympy as sp

    from oracles import SYM

    assert same(to_sympy(partial_derivative(x, v)), sp.diff(to_sympy(x), SYM[v]))


CTX_KINDS = (ContextKind.K_NONZERO_OPEN, ContextKind.FLAT, ContextKind.CPC, ContextKind.CMC)


@st.composite
def context_values(draw):
    kind = draw(st.sampled_from(CTX_KINDS))
    i = draw(st.sampled_from((1, 2)))
    ctx = make_context(kind)
    # the tables only cover the symbols each direction can differentiate
    names = tuple(sorted(set(ctx.table(i)) & set(VAR_INDEX)))[:6]
    x = draw(st.builds(Ratio, polys(names, 3, 2), nonzero_polys(names, 2, 1)))
    y = draw(st.builds(Ratio, polys(names, 3, 2), nonzero_polys(names, 2, 1)))
    return kind, x, y, i


@settings(PROPERTY_SETTINGS, max_examples=150)
@given(context_values(), st.fractions(max_denominator=9))
def test_context_derivations_are_derivations(case, r):
    kind, x, y, i = case
    ctx = make_context(kind)
    assert ratio_eq(derive(ctx, i, x * y), derive(ctx, i, x) * y + x * derive(ctx, i, y))
    assert ratio_eq(derive(ctx, i, x + y), derive(ctx, i, x) + derive(ctx, i, y))
    assert derive(ctx, i, Ratio.const(r)).is_zero()


def test_variable_universe_round_trips():
    for name in VAR_INDEX:
        assert to_text(parse_expr(name)) == name
