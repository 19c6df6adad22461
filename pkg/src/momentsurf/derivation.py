"""Differential fields for the principal frame {e1, e2} of a stationary surface.

Each context fixes which symbols are live, what the frame derivations D1 = e1
and D2 = e2 do to them, and which symbols are shorthands for expressions
(for instance ``k2`` is ``K/k`` when the Gauss curvature is a non-zero
constant).  The tangential coordinates ``g`` and ``m`` of the position vector
are not tabulated by hand: they are solved from the normal part of the
structure equations, and in the K != 0 case the second derivatives k11, k12,
k22 are solved from the tangential part in an open context before the closed
context is built.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping

from .symkernel import (
    MissingRuleError,
    Ratio,
    SymkernelError,
    ZeroDenominatorError,
    solve_linear,
)
from .symkernel.poly import VAR_INDEX


class ContextKind(str, enum.Enum):
    K_NONZERO_OPEN = "K_NONZERO_OPEN"
    K_NONZERO_CLOSED = "K_NONZERO_CLOSED"
    FLAT = "FLAT"
    CPC = "CPC"
    CMC = "CMC"


class UmbilicError(SymkernelError):
    """kappa1 - kappa2 vanishes identically in the context."""


def _r(name: str) -> Ratio:
    return Ratio.var(name)


ZERO = Ratio.const(0)


@dataclass(frozen=True)
class Context:
    """A differential field: live variables, derivation tables, shorthands.

    ``defs`` maps shorthand symbols to expressions in the live variables;
    ``named`` holds quantities scripts may refer to by name (H, kappa2,
    omega1, omega2, and in the K != 0 case gamma and mu).
    """

    kind: ContextKind
    vars: frozenset
    d1: Mapping[str, Ratio]
    d2: Mapping[str, Ratio]
    defs: Mapping[str, Ratio] = field(default_factory=dict)
    named: Mapping[str, Ratio] = field(default_factory=dict)
    keep: frozenset = frozenset()

    def table(self, direction: int) -> Mapping[str, Ratio]:
        if direction == 1:
            return self.d1
        if direction == 2:
            return self.d2
        raise ValueError(f"direction must be 1 or 2, got {direction!r}")

    def expand(self, x: Ratio) -> Ratio:
        """Replace shorthand symbols by their definitions."""
        x = Ratio.coerce(x)
        for _ in range(4):
            hits = {v: e for v, e in self.defs.items() if x.depends_on(v)}
            if not hits:
                return x
            x = x.substitute(hits)
        raise SymkernelError("definitions do not terminate")


def derive(ctx: Context, direction: int, x) -> Ratio:
    """Apply D1 or D2 by the chain rule; shorthands are expanded first."""
    x = ctx.expand(x)
    for v in x.variables():
        if v not in ctx.vars:
            raise MissingRuleError(f"{v} is not a variable of the {ctx.kind.value} context")
    return x.derive(ctx.table(direction), strict=True)


def codazzi_omegas(ctx: Context) -> tuple[Ratio, Ratio]:
    """Connection coefficients omega(e1), omega(e2) from the Codazzi equations."""
    if ctx.kind is ContextKind.CMC:
        raise SymkernelError("the CMC context has no principal-curvature frame data")
    k1 = _r("k")
    k2 = ctx.expand(ctx.named["kappa2"])
    gap = k1 - k2
    if gap.is_zero():
        raise UmbilicError("kappa1 - kappa2 vanishes identically")
    return derive(ctx, 2, k1) / gap, derive(ctx, 1, k2) / gap


def gauss_residual(ctx: Context) -> Ratio:
    """K minus its line-of-curvature expression through D1, D2 and kappa1 - kappa2."""
    if ctx.kind is ContextKind.CMC:
        raise SymkernelError("the CMC context has no principal-curvature frame data")
    k1 = _r("k")
    k2 = ctx.expand(ctx.named["kappa2"])
    gap = k1 - k2
    if gap.is_zero():
        raise UmbilicError("kappa1 - kappa2 vanishes identically")
    e1k2 = derive(ctx, 1, k2)
    e2k1 = derive(ctx, 2, k1)
    rhs = (
        -derive(ctx, 1, e1k2 / gap)
        + derive(ctx, 2, e2k1 / gap)
        - (e1k2 ** 2 + e2k1 ** 2) / gap ** 2
    )
    return ctx.expand(k1 * k2) - rhs


def commutator(ctx: Context, x=None) -> Ratio:
    """D2(D1(x)) - D1(D2(x)), by default for x = kappa1."""
    x = _r("k") if x is None else x
    return derive(ctx, 2, derive(ctx, 1, x)) - derive(ctx, 1, derive(ctx, 2, x))


def _freeze(d: Mapping) -> Mapping:
    return MappingProxyType(dict(d))


def _build(kind, vars_, d1, d2, defs, named, keep) -> Context:
    for table in (d1, d2):
        for v, img in table.items():
            if v not in vars_:
                raise ValueError(f"table entry for non-variable {v}")
    return Context(
        kind=kind,
        vars=frozenset(vars_),
        d1=_freeze(d1),
        d2=_freeze(d2),
        defs=_freeze(defs),
        named=_freeze(named),
        keep=frozenset(keep),
    )


def _check_nonzero(x: Ratio, what: str) -> None:
    if x.is_zero():
        raise ZeroDenominatorError(f"{what} vanishes identically")


def _nonzero_k(keep: frozenset, stage: str):
    k, K, a, w, p, q = (_r(n) for n in ("k", "K", "a", "w", "p", "q"))
    kappa2 = K / k
    H = k + kappa2
    consts = {"K": ZERO, "a": ZERO}
    # stage 1: g, m symbolic, solve the normal structure equations for them
    d1 = dict(consts, k=p, w=2 * _r("g"), p=_r("k11"), q=_r("k12"))
    d2 = dict(consts, k=q, w=2 * _r("m"), p=_r("k12"), q=_r("k22"))
    base_vars = {"k", "K", "a", "w", "p", "q", "k11", "k12", "k22"}
    raw = _build(ContextKind.K_NONZERO_OPEN, base_vars | {"g", "m"}, d1, d2, {"k2": kappa2}, {}, ())
    hw = H * w / a
    row5 = derive(raw, 1, hw) + _r("g") * k
    row6 = derive(raw, 2, hw) + _r("m") * kappa2
    gamma = solve_linear(row5, "g")
    mu = solve_linear(row6, "m")
    for v, what in ((gamma, "gamma"), (mu, "mu")):
        _check_nonzero(v, what)

    def assemble(kind, d1x, d2x, extra_defs):
        vars_ = set(base_vars) - set(extra_defs)
        defs = {"k2": kappa2}
        defs.update(extra_defs)
        t1 = {v: e for v, e in d1x.items() if v in vars_}
        t2 = {v: e for v, e in d2x.items() if v in vars_}
        if "g" in keep:
            vars_.add("g")
        else:
            defs["g"] = gamma
            t1["w"] = 2 * gamma
        if "m" in keep:
            vars_.add("m")
        else:
            defs["m"] = mu
            t2["w"] = 2 * mu
        named = {"H": H, "kappa2": kappa2, "gamma": gamma, "mu": mu}
        ctx = _build(kind, vars_, t1, t2, defs, named, keep)
        om1, om2 = codazzi_omegas(ctx)
        named.update(omega1=om1, omega2=om2)
        return _build(kind, vars_, t1, t2, defs, named, keep)

    open_ctx = assemble(ContextKind.K_NONZERO_OPEN, d1, d2, {})
    if stage == "open":
        return open_ctx
    # stage 2: close k11, k12, k22 through the tangential structure equations
    solver = _make(ContextKind.K_NONZERO_OPEN, frozenset()) if keep else open_ctx
    om1, om2 = solver.named["omega1"], solver.named["omega2"]
    g, m = solver.named["gamma"], solver.named["mu"]
    row1 = derive(solver, 1, g) - (m * om1 + hw * k + 1)
    row3 = derive(solver, 1, m) + g * om1
    row4 = derive(solver, 2, m) - (-g * om2 + hw * kappa2 + 1)
    e11 = solve_linear(row1, "k11")
    e12 = solve_linear(row3, "k12")
    e22 = solve_linear(row4, "k22")
    d1c = dict(d1, p=e11, q=e12)
    d2c = dict(d2, p=e12, q=e22)
    closed = assemble(
        ContextKind.K_NONZERO_CLOSED, d1c, d2c, {"k11": e11, "k12": e12, "k22": e22}
    )
    return closed


def _flat(keep: frozenset) -> Context:
    k, a, w, q = (_r(n) for n in ("k", "a", "w", "q"))
    consts = {"a": ZERO}
    vars_ = {"k", "a", "w", "g", "p", "q", "k22"}
    d1 = dict(consts, k=_r("p"), w=2 * _r("g"))
    d2 = dict(consts, k=q, w=2 * _r("m"), q=_r("k22"))
    defs = {"K": ZERO, "k2": ZERO}
    raw = _build(ContextKind.FLAT, vars_ | {"m"}, d1, d2, defs, {}, ())
    H = k
    row6 = derive(raw, 2, H * w / a)
    mu = solve_linear(row6, "m")
    _check_nonzero(mu, "mu")
    named = {"H": H, "kappa2": ZERO, "mu": mu}
    if "m" in keep:
        vars_.add("m")
    else:
        defs["m"] = mu
        d2["w"] = 2 * mu
    ctx = _build(ContextKind.FLAT, vars_, d1, d2, defs, named, keep)
    om1, om2 = codazzi_omegas(ctx)
    named.update(omega1=om1, omega2=om2)
    return _build(ContextKind.FLAT, vars_, d1, d2, defs, named, keep)


def _cpc(keep: frozenset) -> Context:
    k, c, a, w, q = (_r(n) for n in ("k", "c", "a", "w", "q"))
    consts = {"a": ZERO, "c": ZERO}
    vars_ = {"k", "c", "a", "w", "g", "p", "q", "k22"}
    d1 = dict(consts, k=_r("p"), w=2 * _r("g"))
    d2 = dict(consts, k=q, w=2 * _r("m"), q=_r("k22"))
    defs = {"K": k * c, "k2": c}
    raw = _build(ContextKind.CPC, vars_ | {"m"}, d1, d2, defs, {}, ())
    H = k + c
    row6 = derive(raw, 2, H * w / a) + _r("m") * c
    mu = solve_linear(row6, "m")
    _check_nonzero(mu, "mu")
    named = {"H": H, "kappa2": c, "mu": mu}
    if "m" in keep:
        vars_.add("m")
    else:
        defs["m"] = mu
        d2["w"] = 2 * mu
    ctx = _build(ContextKind.CPC, vars_, d1, d2, defs, named, keep)
    om1, om2 = codazzi_omegas(ctx)
    named.update(omega1=om1, omega2=om2)
    return _build(ContextKind.CPC, vars_, d1, d2, defs, named, keep)


def _cmc() -> Context:
    k, k2, g, m = (_r(n) for n in ("k", "k2", "g", "m"))
    vars_ = {"c", "a", "k", "k2", "g", "m", "w", "nphi"}
    consts = {"c": ZERO, "a": ZERO}
    # Weingarten: e_i <N, Phi> = -<S e_i, Phi> = -kappa_i <e_i, Phi>
    d1 = dict(consts, w=2 * g, nphi=-k * g)
    d2 = dict(consts, w=2 * m, nphi=-k2 * m)
    named = {"H": _r("c"), "kappa2": k2}
    return _build(ContextKind.CMC, vars_, d1, d2, {}, named, ())


@lru_cache(maxsize=None)
def _make(kind: ContextKind, keep: frozenset) -> Context:
    if kind is ContextKind.K_NONZERO_OPEN:
        return _nonzero_k(keep, "open")
    if kind is ContextKind.K_NONZERO_CLOSED:
        return _nonzero_k(keep, "closed")
    if kind is ContextKind.FLAT:
        return _flat(keep)
    if kind is ContextKind.CPC:
        return _cpc(keep)
    return _cmc()


def make_context(kind, keep: Iterable[str] = ()) -> Context:
    """Build (and cache) the context of the given kind.

    ``keep`` lists shorthand symbols among ``g``, ``m`` that should stay
    symbolic; derivations then have no rule for them.
    """
    kind = ContextKind(kind)
    keep = frozenset(keep)
    bad = keep - {"g", "m"}
    if bad:
        raise ValueError(f"only g and m can be kept symbolic, not {sorted(bad)}")
    if kind is ContextKind.CMC:
        keep = frozenset()
    return _make(kind, keep)


def is_variable_name(name: str) -> bool:
    return name in VAR_INDEX
