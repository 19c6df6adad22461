"""Run check scripts against the symbolic kernel.

Each check evaluates its inputs in a derivation context, optionally applies
a derivation, a substitution and a linear solve, and compares the outputs
with the expected expressions under one of four modes:

exact
    cross-multiplication equality.
proportional
    one common non-zero multiplier for all outputs, free of the listed
    variables (all variables when none are listed).
equation
    the outputs are equations ``expr = 0``; computed and expected may differ
    by a constant times powers of the factors declared non-zero.
polynomial
    as ``equation``, plus the expected polynomial's coefficient list in
    ``var`` and the check that one coefficient is a non-zero polynomial in
    a, c, K alone.

Outputs are bound by name for later checks: after a passing comparison the
expected value (the transcribed normalization), otherwise the computed one.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..derivation import Context, derive, gauss_residual, make_context
from ..symkernel import (
    Poly,
    Ratio,
    SymkernelError,
    linear_coefficients,
    lower,
    parse_expr,
    solve_linear,
    solve_linear_2x2,
)
from ..symkernel.dsl import refs
from ..symkernel.poly import VAR_INDEX
from .schema import CheckSpec, ScriptError, TheoremScript, load_script, load_shipped

FUNCTIONS = ("D1", "D2", "coeff")
CONSTANT_SYMBOLS = ("a", "c", "K")
_MESSAGE_TERMS = 60


@dataclass
class CheckReport:
    id: str
    status: str
    residual: str
    elapsed_ms: float
    message: str
    outputs: dict = field(default_factory=dict, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "status": self.status,
            "residual": self.residual,
            "elapsed_ms": self.elapsed_ms,
            "message": self.message,
        }


class _Skip(Exception):
    pass


def _spec_power(text: str) -> tuple[str, int]:
    name, _, exp = text.replace(" ", "").partition("^")
    if name not in VAR_INDEX or (exp and not exp.isdigit()):
        raise ScriptError(f"bad unknown {text!r}; expected a variable or variable^n")
    return name, int(exp) if exp else 1


def _brief(x: Ratio) -> str:
    return x.to_dsl() if x.size() <= _MESSAGE_TERMS else f"<{x.size()} terms>"


class _Evaluator:
    def __init__(self, spec: CheckSpec, ctx: Context, bindings: Mapping, unavailable):
        self.spec = spec
        self.ctx = ctx
        self.bindings = bindings
        self.unavailable = frozenset(unavailable)
        self.local: dict[str, Ratio] = {}
        self._gauss = None

    def names(self):
        return (
            set(self.bindings) | set(self.local) | set(self.ctx.named) | {"gauss"}
            | self.unavailable | set(self.spec.inputs) | set(self.spec.outputs)
        )

    def parse(self, text: str):
        node = parse_expr(text, names=self.names(), functions=FUNCTIONS)
        blocked = refs(node) & self.unavailable
        if blocked:
            raise _Skip(f"depends on unavailable {', '.join(sorted(blocked))}")
        return node

    def lookup(self, name: str) -> Ratio:
        if name in self.local:
            return self.local[name]
        if name in self.bindings:
            return self.bindings[name]
        if name in self.ctx.named:
            return self.ctx.named[name]
        if name == "gauss":
            if self._gauss is None:
                self._gauss = gauss_residual(self.ctx)
            return self._gauss
        raise ScriptError(f"missing binding {name!r}")

    def call(self, func: str, args: list) -> Ratio:
        if func in ("D1", "D2"):
            if len(args) != 1:
                raise ScriptError(f"{func} takes one argument")
            return derive(self.ctx, int(func[1]), args[0])
        if func == "coeff":
            if len(args) != 3:
                raise ScriptError("coeff takes (expression, variable, power)")
            x, v, n = args
            vs = v.variables()
            if len(vs) != 1 or not v.equals(Ratio.var(vs[0])):
                raise ScriptError("coeff: second argument must be a variable")
            if not n.is_constant() or n.constant_value().denominator != 1:
                raise ScriptError("coeff: third argument must be an integer")
            name, j = vs[0], int(n.constant_value())
            x = self.ctx.expand(x)
            if x.depends_on(name) and any(f.degree(VAR_INDEX[name]) for f in x.den_factors):
                raise ScriptError(f"coeff: {name} occurs in a denominator")
            cs = x.primitive_num.coefficients(name)
            if j < 0 or j >= len(cs):
                return Ratio.const(0)
            return Ratio(cs[j]) * Ratio._parts(x.scale, Poly.const(1), x.den_factors)
        raise ScriptError(f"unknown function {func!r}")

    def eval(self, text: str) -> Ratio:
        node = self.parse(text)
        env = _Env(self)
        return self.ctx.expand(lower(node, env, self.call))


class _Env(Mapping):
    def __init__(self, ev: _Evaluator):
        self.ev = ev

    def __getitem__(self, name):
        return self.ev.lookup(name)

    def __contains__(self, name):
        return True

    def __iter__(self):
        return iter(())

    def __len__(self):
        return 0


def _apply_post(ev: _Evaluator, name: str, x: Ratio, subs, powers) -> Ratio:
    spec = ev.spec
    if subs or powers:
        x = ev.ctx.expand(x.substitute(subs, powers))
    if name in spec.solve_for:
        v, n = _spec_power(spec.solve_for[name])
        x = solve_linear(x, v, n)
    return x


def _substitutions(ev: _Evaluator):
    subs, powers = {}, {}
    for key, text in ev.spec.substitute.items():
        v, n = _spec_power(key)
        val = ev.eval(text)
        if n == 1:
            subs[v] = val
        else:
            powers[(v, n)] = val
    return subs, powers


def _direction(spec: CheckSpec, name: str) -> int:
    d = spec.direction
    if isinstance(d, dict):
        if name not in d:
            raise ScriptError(f"no direction given for {name!r}")
        return d[name]
    if d is None:
        raise ScriptError("derive_and_compare needs 'direction'")
    return d


def _compute(ev: _Evaluator) -> dict[str, Ratio]:
    spec = ev.spec
    proc = spec.procedure
    # parse everything first so missing or unavailable names surface early
    for text in list(spec.inputs.values()) + list(spec.expected.values()) + list(spec.substitute.values()):
        ev.parse(text)
    subs, powers = _substitutions(ev)
    out: dict[str, Ratio] = {}
    if proc == "solve2x2_and_compare":
        v = {n: ev.eval(spec.inputs[n]) for n in ("p1", "q1", "r1", "p2", "q2", "r2")}
        x, y = solve_linear_2x2(v["p1"], v["q1"], v["r1"], v["p2"], v["q2"], v["r2"])
        for name, val in zip(spec.outputs, (x, y)):
            out[name] = _apply_post(ev, name, val, subs, powers)
    elif proc == "equate_two_expressions":
        name = spec.outputs[0]
        val = ev.eval(spec.inputs["lhs"]) - ev.eval(spec.inputs["rhs"])
        out[name] = _apply_post(ev, name, val, subs, powers)
    elif proc == "coefficients_and_compare":
        if len(spec.inputs) != 1:
            raise ScriptError("coefficients_and_compare takes a single input form")
        (text,) = spec.inputs.values()
        form = _apply_post(ev, "", ev.eval(text), subs, powers)
        # "1" names the part free of the listed powers
        keys = {
            name: None if mono.strip() == "1" else _spec_power(mono)
            for name, mono in spec.monomials.items()
        }
        split = linear_coefficients(form, [k for k in keys.values() if k is not None])
        for name, key in keys.items():
            out[name] = split[key]
    else:
        for name, text in spec.inputs.items():
            val = ev.eval(text)
            if proc == "derive_and_compare":
                val = ev.ctx.expand(derive(ev.ctx, _direction(spec, name), val))
            out[name] = _apply_post(ev, name, val, subs, powers)
            ev.local[name] = out[name]
    ev.local.update(out)
    return out


# -- comparison ------------------------------------------------------------------


def _strip(poly: Poly, factors) -> tuple[Poly, list[int]]:
    counts = []
    for f in factors:
        n = 0
        while not poly.is_constant():
            q = poly.divexact(f)
            if q is None:
                break
            poly, n = q, n + 1
        counts.append(n)
    return poly, counts


def explain_multiplier(lam: Ratio, factors) -> tuple[bool, str, Ratio]:
    """Write ``lam`` as a constant times powers of ``factors``.

    Returns (ok, description, unexplained part).
    """
    prims = []
    for f in factors:
        for part in [f.primitive_num] + list(f.den_factors):
            if not part.is_constant() and part not in prims:
                prims.append(part)
    num, cn = _strip(lam.primitive_num, prims)
    den_poly = Ratio._parts(1, Poly.const(1), lam.den_factors).den
    den, cd = _strip(den_poly, prims)
    s_num, p_num = num.primitive()
    s_den, p_den = den.primitive()
    rest = Ratio(num) / Ratio(den)
    if p_num != p_den:
        return False, "", rest
    const = lam.scale * s_num / s_den
    pieces = [str(const)]
    for f, a, b in zip(prims, cn, cd):
        e = a - b
        if e:
            ft = f.to_dsl() if len(f) == 1 else f"({f.to_dsl()})"
            pieces.append(ft if e == 1 else f"{ft}^{e}")
    return True, "*".join(pieces), Ratio.const(const)


def _free_of_ok(lam: Ratio, free_of) -> bool:
    if not free_of:
        return lam.is_constant()
    return not any(lam.depends_on(v) for v in free_of)


def _nonvanishing(expected: Ratio, var: str):
    coeffs = expected.primitive_num.coefficients(var)
    hit = None
    for i, c in enumerate(coeffs):
        if c and set(c.variables()) <= set(CONSTANT_SYMBOLS):
            hit = (i, c)
            break
    return coeffs, hit


def _compare(spec: CheckSpec, computed: dict, expected: dict, factors=()):
    """Return (ok, residual, message, bound values)."""
    mode = spec.mode
    bound = dict(computed)
    notes = []
    if mode == "exact":
        bad = []
        for name, e in expected.items():
            c = computed[name]
            if not c.equals(e):
                bad.append(name)
                diff = c - e
                ratio = ""
                if not e.is_zero() and not c.is_zero():
                    q = c / e
                    if q.size() <= _MESSAGE_TERMS:
                        ratio = f"; computed/expected = {q.to_dsl()}"
                notes.append(f"{name} differs{ratio}")
        if bad:
            residual = "; ".join(f"{n}: {(computed[n] - expected[n]).to_dsl()}" for n in bad)
            return False, residual, "; ".join(notes), bound
        return True, "", "exact match: " + ", ".join(expected), bound

    if mode == "proportional":
        names = list(expected)
        anchor = next((n for n in names if not expected[n].is_zero()), None)
        if anchor is None or computed[anchor].is_zero():
            return False, "no non-zero anchor", "cannot form a multiplier", bound
        lam = computed[anchor] / expected[anchor]
        bad = [n for n in names if not computed[n].equals(lam * expected[n])]
        if bad:
            residual = "; ".join(f"{n}: {(computed[n] - lam * expected[n]).to_dsl()}" for n in bad)
            return False, residual, f"not proportional with multiplier {_brief(lam)} in {', '.join(bad)}", bound
        if not _free_of_ok(lam, spec.free_of):
            return False, lam.to_dsl(), "multiplier depends on " + ", ".join(
                v for v in (spec.free_of or lam.variables()) if lam.depends_on(v)), bound
        for n in names:
            bound[n] = expected[n]
        return True, "", f"proportional with multiplier {_brief(lam)}", bound

    residuals, msgs = [], []
    for name, e in expected.items():
        c = computed[name]
        if e.is_zero() or c.is_zero():
            if not (e.is_zero() and c.is_zero()):
                residuals.append(f"{name}: {c.to_dsl()}")
            continue
        ok, desc, rest = explain_multiplier(c / e, factors)
        if not ok:
            residuals.append(f"{name}: unexplained multiplier {rest.to_dsl()}")
            msgs.append(f"{name} computed as {_brief(c)}")
            continue
        msgs.append(f"{name} = {desc} * expected")
        bound[name] = e
        if mode == "polynomial":
            coeffs, hit = _nonvanishing(e, spec.var)
            listing = ", ".join(c.to_dsl() for c in coeffs)
            msgs.append(f"degree {len(coeffs) - 1} in {spec.var}; coefficients [{listing}]")
            if hit is None:
                residuals.append(f"{name}: no coefficient is a non-zero polynomial in a, c, K alone")
            else:
                msgs.append(f"coefficient of {spec.var}^{hit[0]} is {hit[1].to_dsl()}, non-zero")
    if residuals:
        bound = dict(computed)
        return False, "; ".join(residuals), "; ".join(msgs) or "multiplier not explained by the declared factors", bound
    return True, "", "; ".join(msgs), bound


# -- drivers ----------------------------------------------------------------------


def run_check(spec: CheckSpec, bindings: Mapping | None = None, unavailable=()) -> CheckReport:
    """Execute one check; outputs are attached to the report as ``outputs``."""
    bindings = dict(bindings or {})
    t0 = time.perf_counter()

    def done(status, residual, message, outputs=None):
        ms = round((time.perf_counter() - t0) * 1000.0, 3)
        return CheckReport(spec.id, status, residual, ms, message, outputs or {})

    try:
        ctx = make_context(spec.context, spec.keep)
        ev = _Evaluator(spec, ctx, bindings, unavailable)
        computed = _compute(ev)
        missing = set(spec.expected) - set(computed)
        if missing:
            raise ScriptError(f"expected names without outputs: {sorted(missing)}")
        if spec.procedure == "record":
            listing = "; ".join(f"{n} = {_brief(v)}" for n, v in computed.items())
            return done("pass", "", "recorded " + listing, computed)
        expected = {n: ev.eval(t) for n, t in spec.expected.items()}
        factors = [ev.eval(t) for t in spec.nonzero]
        ok, residual, message, bound = _compare(spec, computed, expected, factors)
        if ok:
            return done("pass", "", message, bound)
        return done("fail", residual or "nonzero", message, bound)
    except _Skip as exc:
        return done("skipped", "", str(exc))
    except (SymkernelError, ScriptError, ValueError, ZeroDivisionError, KeyError) as exc:
        return done("error", "", f"{type(exc).__name__}: {exc}")


def produced_names(spec: CheckSpec) -> list[str]:
    if spec.procedure in ("solve2x2_and_compare", "equate_two_expressions"):
        return list(spec.outputs)
    if spec.procedure == "coefficients_and_compare":
        return list(spec.monomials)
    return list(spec.inputs)


def run_script(script: TheoremScript) -> list[CheckReport]:
    bindings: dict[str, Ratio] = {}
    unavailable: set[str] = set()
    reports = []
    for spec in script.checks:
        rep = run_check(spec, bindings, unavailable)
        reports.append(rep)
        if rep.status in ("pass", "fail"):
            bindings.update(rep.outputs)
        else:
            unavailable.update(produced_names(spec))
    return reports


def run_theorem(name: str, expected_file=None) -> list[CheckReport]:
    """Run a theorem's checks in order; ``expected_file`` defaults to the shipped script."""
    script = load_shipped(name) if expected_file is None else load_script(expected_file)
    if script.name != name:
        raise ScriptError(f"script is for {script.name!r}, not {name!r}")
    return run_script(script)
