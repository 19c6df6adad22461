"""Rational functions with a factored denominator.

A Ratio is ``scale * num / prod(f**e)`` where ``num`` and every factor ``f``
are integral, primitive polynomials with positive leading coefficient and
``scale`` is a Fraction.  Factors are only ever split off when they are
cheap to see (single variables, the primitive remainder of a denominator),
so the representation is not canonical; equality is decided by
cross-multiplication.  After each operation the numerator is trial-divided
by the denominator factors that could plausibly cancel, which keeps the
sizes of long derivation chains under control without a multivariate GCD.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Mapping

from .errors import MissingRuleError, ZeroDenominatorError
from .poly import (
    _FIELD,
    _SHIFT,
    NVARS,
    VARS,
    Poly,
    _divexact,
    mono_degree,
    var_index,
)

_ZERO_POLY = Poly()
_ONE_POLY = Poly.const(1)


@lru_cache(maxsize=4096)
def _power(f: Poly, e: int) -> Poly:
    if e == 1:
        return f
    half = _power(f, e // 2)
    sq = half * half
    return sq * f if e & 1 else sq


def _expand(factors: Mapping[Poly, int]) -> Poly:
    out = _ONE_POLY
    for f, e in sorted(factors.items(), key=lambda fe: len(fe[0])):
        out = out * _power(f, e)
    return out


def _split_den(poly: Poly) -> tuple[Fraction, dict[Poly, int]]:
    """Scale and factor dict of a non-zero polynomial used as a denominator."""
    scale, prim = poly.primitive()
    factors: dict[Poly, int] = {}
    if prim.is_constant():
        return scale, factors
    mc = prim.monomial_content()
    if mc:
        for i, s in enumerate(_SHIFT):
            e = (mc >> s) & _FIELD
            if e:
                factors[Poly.var(i)] = e
        prim = Poly._raw({m - mc: c for m, c in prim.items()})
    if not prim.is_constant():
        factors[prim] = factors.get(prim, 0) + 1
    return scale, factors


def _single_var(f: Poly) -> int | None:
    """Variable index if f is exactly one variable, else None."""
    if len(f) != 1:
        return None
    (m, c), = f.items()
    if c != 1:
        return None
    for i, s in enumerate(_SHIFT):
        if m == 1 << s:
            return i
    return None


def _cancel(n: Poly, d: dict[Poly, int], candidates=None) -> Poly:
    """Divide n by factors of d where possible; d is updated in place."""
    if not n or not d:
        return n
    for f in list(d if candidates is None else candidates):
        e = d.get(f, 0)
        if not e:
            continue
        vi = _single_var(f)
        if vi is not None:
            s = _SHIFT[vi]
            low = min((m >> s) & _FIELD for m, _ in n.items())
            t = min(low, e)
            if t:
                n = Poly._raw({m - (t << s): c for m, c in n.items()})
                e -= t
        else:
            while e:
                q = _divexact(n, f)
                if q is None:
                    break
                n = q
                e -= 1
        if e:
            d[f] = e
        else:
            del d[f]
    return n


class Ratio:
    """Quotient of two polynomials; the universal symbolic value."""

    __slots__ = ("_s", "_n", "_d")

    def __init__(self, num=0, den=1):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = den if isinstance(den, Poly) else Poly.const(den)
        if den.is_zero():
            raise ZeroDenominatorError("zero denominator")
        if num.is_zero():
            self._s, self._n, self._d = Fraction(0), _ZERO_POLY, {}
            return
        s_num, n = num.primitive()
        s_den, d = _split_den(den)
        n = _cancel(n, d)
        self._s = s_num / s_den
        self._n = n
        self._d = d

    @classmethod
    def _parts(cls, s, n: Poly, d: dict) -> "Ratio":
        obj = cls.__new__(cls)
        if not n or not s:
            obj._s, obj._n, obj._d = Fraction(0), _ZERO_POLY, {}
        else:
            obj._s, obj._n, obj._d = Fraction(s), n, d
        return obj

    @classmethod
    def var(cls, name) -> "Ratio":
        return cls._parts(1, Poly.var(name), {})

    @classmethod
    def const(cls, c) -> "Ratio":
        return cls._parts(Fraction(c), _ONE_POLY, {})

    @classmethod
    def coerce(cls, x) -> "Ratio":
        if isinstance(x, Ratio):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls.const(x)

    # -- views ---------------------------------------------------------------

    @property
    def num(self) -> Poly:
        return self._n.scale(self._s.numerator)

    @property
    def den(self) -> Poly:
        return _expand(self._d).scale(self._s.denominator)

    @property
    def scale(self) -> Fraction:
        return self._s

    @property
    def primitive_num(self) -> Poly:
        return self._n

    @property
    def den_factors(self) -> dict[Poly, int]:
        return dict(self._d)

    def is_zero(self) -> bool:
        return not self._n

    def is_poly(self) -> bool:
        return not self._d

    def is_constant(self) -> bool:
        return not self._d and self._n.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("ratio is not constant")
        if not self._n:
            return Fraction(0)
        return self._s * self._n.constant_value()

    def variables(self) -> tuple[str, ...]:
        degs = list(self._n.degrees()) if self._n else [0] * NVARS
        for f in self._d:
            for i, e in enumerate(f.degrees()):
                degs[i] = max(degs[i], e)
        return tuple(VARS[i] for i, e in enumerate(degs) if e)

    def depends_on(self, v) -> bool:
        i = var_index(v)
        if self._n and self._n.degree(i) > 0:
            return True
        return any(f.degree(i) > 0 for f in self._d)

    def size(self) -> int:
        return len(self._n) + sum(len(f) for f in self._d)

    def as_poly(self) -> Poly:
        if self._d:
            raise ValueError("ratio has a non-constant denominator")
        return self._n.scale(self._s)

    # -- arithmetic ------------------------------------------------------------

    def __neg__(self) -> "Ratio":
        return Ratio._parts(-self._s, self._n, self._d)

    def __add__(self, other) -> "Ratio":
        y = Ratio.coerce(other)
        if not self._n:
            return y
        if not y._n:
            return self
        d1, d2 = self._d, y._d
        if d1 == d2:
            lcd = dict(d1)
            m1 = m2 = _ONE_POLY
            shared = list(d1)
        else:
            lcd = dict(d1)
            for f, e in d2.items():
                if lcd.get(f, 0) < e:
                    lcd[f] = e
            m1 = _expand({f: e - d1.get(f, 0) for f, e in lcd.items() if e > d1.get(f, 0)})
            m2 = _expand({f: e - d2.get(f, 0) for f, e in lcd.items() if e > d2.get(f, 0)})
            shared = [f for f, e in d1.items() if d2.get(f) == e]
        s1, s2 = self._s, y._s
        g = Fraction(gcd(s1.numerator, s2.numerator), lcm(s1.denominator, s2.denominator))
        t1, t2 = s1 / g, s2 / g
        total = (self._n * m1).scale(t1.numerator) + (y._n * m2).scale(t2.numerator)
        if not total:
            return Ratio._parts(0, _ZERO_POLY, {})
        c, prim = total.primitive()
        prim = _cancel(prim, lcd, shared)
        return Ratio._parts(g * c, prim, lcd)

    __radd__ = __add__

    def __sub__(self, other) -> "Ratio":
        return self + (-Ratio.coerce(other))

    def __rsub__(self, other) -> "Ratio":
        return Ratio.coerce(other) + (-self)

    def __mul__(self, other) -> "Ratio":
        y = Ratio.coerce(other)
        if not self._n or not y._n:
            return Ratio._parts(0, _ZERO_POLY, {})
        d2 = dict(y._d)
        n1 = _cancel(self._n, d2)
        d1 = dict(self._d)
        n2 = _cancel(y._n, d1)
        for f, e in d2.items():
            d1[f] = d1.get(f, 0) + e
        n = n1 * n2
        if d1:
            # a factor may only appear in the product of the two numerators
            n = _cancel(n, d1)
        return Ratio._parts(self._s * y._s, n, d1)

    __rmul__ = __mul__

    def inverse(self) -> "Ratio":
        if not self._n:
            raise ZeroDenominatorError("division by the zero rational function")
        num = _expand(self._d)
        s, d = _split_den(self._n)
        return Ratio._parts(1 / (self._s * s), num, d)

    def __truediv__(self, other) -> "Ratio":
        return self * Ratio.coerce(other).inverse()

    def __rtruediv__(self, other) -> "Ratio":
        return Ratio.coerce(other) * self.inverse()

    def __pow__(self, e: int) -> "Ratio":
        if not isinstance(e, int):
            raise TypeError("exponent must be an integer")
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return Ratio.const(1)
        if not self._n:
            return self
        return Ratio._parts(self._s ** e, _power(self._n, e), {f: x * e for f, x in self._d.items()})

    # -- comparison ------------------------------------------------------------

    def equals(self, other) -> bool:
        """Cross-multiplication equality."""
        y = Ratio.coerce(other)
        if not self._n or not y._n:
            return not self._n and not y._n
        if self._s != y._s:
            return False
        d1, d2 = self._d, y._d
        if d1 == d2:
            return self._n == y._n
        lcd = dict(d1)
        for f, e in d2.items():
            if lcd.get(f, 0) < e:
                lcd[f] = e
        m1 = _expand({f: e - d1.get(f, 0) for f, e in lcd.items() if e > d1.get(f, 0)})
        m2 = _expand({f: e - d2.get(f, 0) for f, e in lcd.items() if e > d2.get(f, 0)})
        if len(self._n) * len(m1) < 64 and len(y._n) * len(m2) < 64:
            return self._n * m1 == y._n * m2
        return (self._n * m1 - y._n * m2).is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, (Ratio, Poly, int, Fraction)):
            return self.equals(other)
        return NotImplemented

    __hash__ = None

    # -- substitution and derivations ------------------------------------------

    def substitute(self, bindings: Mapping, powers: Mapping | None = None) -> "Ratio":
        """Simultaneous substitution.

        ``bindings`` maps variable names (or indices) to values; ``powers`` maps
        ``(name, n)`` to the value of ``name**n``.
        """
        specs = []
        for v, val in bindings.items():
            specs.append((var_index(v), 1, Ratio.coerce(val)))
        for (v, n), val in (powers or {}).items():
            specs.append((var_index(v), int(n), Ratio.coerce(val)))
        if not specs:
            return self
        seen = [i for i, _, _ in specs]
        if len(set(seen)) != len(seen):
            raise ValueError("a variable may be bound only once")
        if not self._n:
            return self
        result = _subst_poly(self._n, specs).__mul__(Ratio.const(self._s))
        for f, e in self._d.items():
            if not any(f.degree(i) > 0 for i in seen):
                result = result * Ratio._parts(1, _ONE_POLY, {f: e})
                continue
            val = _subst_poly(f, specs)
            if val.is_zero():
                raise ZeroDenominatorError(f"denominator factor {f.to_dsl()} vanishes under substitution")
            result = result * val.inverse() ** e
        return result

    def derive(self, table: Mapping, strict: bool = True) -> "Ratio":
        """Apply the derivation defined by ``table`` (variable -> Ratio)."""
        rules = {var_index(v): Ratio.coerce(t) for v, t in table.items()}
        if not self._n:
            return self
        dn = _derive_poly(self._n, rules, strict)
        acc = None
        for f, e in self._d.items():
            df = _derive_poly(f, rules, strict)
            if not df._n:
                continue
            term = Ratio._parts(df._s * e, df._n, _merge(df._d, {f: 1}))
            acc = term if acc is None else acc + term
        inner = dn if acc is None else dn - Ratio._parts(1, self._n, {}) * acc
        return inner * Ratio._parts(self._s, _ONE_POLY, dict(self._d))

    def partial(self, v) -> "Ratio":
        return self.derive({v: Ratio.const(1)}, strict=False)

    # -- text ------------------------------------------------------------------

    def to_dsl(self) -> str:
        if not self._n:
            return "0"
        num = self._n.scale(self._s.numerator).to_dsl()
        parts = []
        if self._s.denominator != 1:
            parts.append(str(self._s.denominator))
        for f, e in sorted(self._d.items(), key=lambda fe: (len(fe[0]), fe[0].to_dsl())):
            ft = f.to_dsl()
            if _single_var(f) is None:
                ft = f"({ft})"
            parts.append(ft if e == 1 else f"{ft}^{e}")
        if not parts:
            return num
        return f"({num})/({'*'.join(parts)})"

    def __str__(self) -> str:
        return self.to_dsl()

    def __repr__(self) -> str:
        return f"Ratio({self.to_dsl()!r})"

    def evaluate(self, values: Mapping[str, object]):
        den = self._s.denominator
        for f, e in self._d.items():
            den = den * f.evaluate(values) ** e
        return self._s.numerator * self._n.evaluate(values) / den


def _merge(a: Mapping[Poly, int], b: Mapping[Poly, int]) -> dict[Poly, int]:
    out = dict(a)
    for f, e in b.items():
        out[f] = out.get(f, 0) + e
    return out


def _derive_poly(poly: Poly, rules: dict[int, Ratio], strict: bool) -> Ratio:
    degs = poly.degrees()
    acc = None
    for i, d in enumerate(degs):
        if not d:
            continue
        rule = rules.get(i)
        if rule is None:
            if strict:
                raise MissingRuleError(f"no derivation rule for {VARS[i]}")
            continue
        if not rule._n:
            continue
        term = Ratio(poly.diff(i)) * rule
        acc = term if acc is None else acc + term
    return Ratio._parts(0, _ZERO_POLY, {}) if acc is None else acc


def _subst_poly(poly: Poly, specs) -> Ratio:
    """Substitute into a polynomial; specs are (var index, step, value)."""
    shifts = [_SHIFT[i] for i, _, _ in specs]
    groups: dict[tuple[int, ...], dict[int, object]] = {}
    for m, c in poly.items():
        key = []
        rest = m
        for (i, step, _), s in zip(specs, shifts):
            e = (m >> s) & _FIELD
            j = e // step
            key.append(j)
            rest -= (j * step) << s
        groups.setdefault(tuple(key), {})[rest] = c
    tops = [max(key[t] for key in groups) for t in range(len(specs))]
    den: dict[Poly, int] = {}
    for (_, _, val), top in zip(specs, tops):
        if top and val._n:
            for f, e in val._d.items():
                den[f] = den.get(f, 0) + e * top
    total = Poly()
    for key, terms in groups.items():
        piece = Poly._raw(terms)
        coeff = Fraction(1)
        for (_, _, val), j, top in zip(specs, key, tops):
            if j and not val._n:
                piece = _ZERO_POLY
                break
            if j:
                piece = piece * _power(val._n, j)
                coeff *= val._s ** j
            if top - j and val._d:
                piece = piece * _expand({f: e * (top - j) for f, e in val._d.items()})
        if piece:
            total = total + piece.scale(coeff)
    if not total:
        return Ratio._parts(0, _ZERO_POLY, {})
    c, prim = total.primitive()
    prim = _cancel(prim, den)
    return Ratio._parts(c, prim, den)


ZERO = Ratio._parts(0, _ZERO_POLY, {})
ONE = Ratio.const(1)

__all__ = ["Ratio", "ZERO", "ONE", "mono_degree"]
