"""Sparse multivariate polynomials over the rationals.

Monomials are packed into a single Python int: each variable owns a 16-bit
field, variable 0 in the most significant position.  Multiplying monomials
is integer addition and comparing packed ints compares monomials in lex
order, which is what the division routine relies on.
"""

from __future__ import annotations

import heapq
import os
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .errors import SizeLimitError

VARS = ("k", "k2", "K", "c", "a", "w", "g", "m", "p", "q", "k11", "k12", "k22", "nphi")
VAR_INDEX = {name: i for i, name in enumerate(VARS)}
NVARS = len(VARS)

_BITS = 16
_FIELD = (1 << _BITS) - 1
_MAX_EXP = (1 << (_BITS - 1)) - 1
_SHIFT = tuple(_BITS * (NVARS - 1 - i) for i in range(NVARS))
# top bit of every field; valid monomials never set it
_GUARD = sum(1 << (s + _BITS - 1) for s in _SHIFT)

DEFAULT_MAX_TERMS = 2_000_000


def max_terms() -> int:
    """Term-count bound for intermediate polynomials (env MOMENT_MAX_TERMS)."""
    raw = os.environ.get("MOMENT_MAX_TERMS")
    if raw is None:
        return DEFAULT_MAX_TERMS
    return int(raw)


def var_index(v) -> int:
    if isinstance(v, int):
        if not 0 <= v < NVARS:
            raise KeyError(v)
        return v
    return VAR_INDEX[v]


def pack(exps: Iterable[int]) -> int:
    m = 0
    for i, e in enumerate(exps):
        if e:
            if not 0 < e <= _MAX_EXP:
                raise ValueError(f"exponent {e} out of range")
            m |= e << _SHIFT[i]
    return m


def unpack(m: int) -> tuple[int, ...]:
    return tuple((m >> s) & _FIELD for s in _SHIFT)


def mono_degree(m: int, i: int) -> int:
    return (m >> _SHIFT[i]) & _FIELD


def mono_divides(a: int, b: int) -> bool:
    """True when monomial a divides monomial b."""
    return ((b | _GUARD) - a) & _GUARD == _GUARD


def mono_gcd(a: int, b: int) -> int:
    m = 0
    for s in _SHIFT:
        e = min((a >> s) & _FIELD, (b >> s) & _FIELD)
        if e:
            m |= e << s
    return m


def _normalize_coeff(c):
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _normalize_coeff(Fraction(c.numerator, c.denominator))
    raise TypeError(f"coefficient must be rational, got {type(c).__name__}")


def _check_size(terms: dict) -> None:
    limit = max_terms()
    if len(terms) > limit:
        raise SizeLimitError(f"intermediate polynomial has {len(terms)} terms (limit {limit})")


class Poly:
    """Polynomial with exact rational coefficients in the fixed variables ``VARS``.

    The zero polynomial has no terms; no stored coefficient is zero.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        clean = {}
        if terms:
            for key, c in terms.items():
                c = _normalize_coeff(c)
                if c:
                    m = key if isinstance(key, int) else pack(key)
                    clean[m] = clean.get(m, 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "Poly":
        c = _normalize_coeff(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def var(cls, name, power: int = 1) -> "Poly":
        i = var_index(name)
        return cls._raw({power << _SHIFT[i]: 1})

    # -- inspection --------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], object]:
        """Mapping exponent vector -> coefficient."""
        return {unpack(m): c for m, c in self._terms.items()}

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 0 in self._terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get(0, 0)

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self._terms.values())

    def leading(self) -> tuple[int, object]:
        m = max(self._terms)
        return m, self._terms[m]

    def trailing(self) -> tuple[int, object]:
        m = min(self._terms)
        return m, self._terms[m]

    def degree(self, v) -> int:
        if not self._terms:
            return -1
        s = _SHIFT[var_index(v)]
        return max((m >> s) & _FIELD for m in self._terms)

    def degrees(self) -> tuple[int, ...]:
        out = [0] * NVARS
        for m in self._terms:
            for i, s in enumerate(_SHIFT):
                e = (m >> s) & _FIELD
                if e > out[i]:
                    out[i] = e
        return tuple(out)

    def variables(self) -> tuple[str, ...]:
        degs = self.degrees()
        return tuple(VARS[i] for i, d in enumerate(degs) if d)

    def monomial_content(self) -> int:
        it = iter(self._terms)
        g = next(it)
        for m in it:
            g = mono_gcd(g, m)
            if not g:
                break
        return g

    # -- equality ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return Poly.const(x)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if len(self._terms) < len(other._terms):
            self, other = other, self
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v if type(v) is int else _normalize_coeff(v)
                else:
                    del out[m]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) + (-self)

    def scale(self, c) -> "Poly":
        c = _normalize_coeff(c)
        if not c:
            return Poly._raw({})
        if c == 1:
            return self
        if type(c) is int:
            return Poly._raw({m: v * c for m, v in self._terms.items()})
        return Poly._raw({m: _normalize_coeff(v * c) for m, v in self._terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return Poly._raw({})
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            return Poly._raw({ma + mb: ca * cb for ma, ca in a.items()})
        out: dict[int, object] = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = ma + mb
                out[m] = get(m, 0) + ca * cb
        out = {m: c for m, c in out.items() if c}
        if not all(type(c) is int for c in out.values()):
            out = {m: _normalize_coeff(c) for m, c in out.items()}
        _check_size(out)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Poly":
        if not isinstance(e, int) or e < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        if len(self._terms) == 1:
            (m, c), = self._terms.items()
            exps = unpack(m)
            return Poly._raw({pack(x * e for x in exps): _normalize_coeff(c ** e)})
        result = Poly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- calculus and structure ---------------------------------------------

    def diff(self, v) -> "Poly":
        s = _SHIFT[var_index(v)]
        one = 1 << s
        out = {}
        for m, c in self._terms.items():
            e = (m >> s) & _FIELD
            if e:
                out[m - one] = c * e
        return Poly._raw(out)

    def coefficients(self, v, step: int = 1) -> list["Poly"]:
        """Coefficients c_0..c_d of ``self`` as a polynomial in ``v**step``.

        Exponents of ``v`` not divisible by ``step`` raise ValueError.
        """
        if not self._terms:
            return []
        s = _SHIFT[var_index(v)]
        buckets: dict[int, dict] = {}
        for m, c in self._terms.items():
            e = (m >> s) & _FIELD
            j, r = divmod(e, step)
            if r:
                raise ValueError(f"exponent {e} of {VARS[var_index(v)]} is not a multiple of {step}")
            buckets.setdefault(j, {})[m - (e << s)] = c
        d = max(buckets)
        return [Poly._raw(buckets.get(j, {})) for j in range(d + 1)]

    def content(self) -> Fraction:
        """Positive rational c with self/c integral and primitive."""
        from math import gcd, lcm

        num = 0
        den = 1
        for c in self._terms.values():
            if type(c) is int:
                num = gcd(num, c)
            else:
                num = gcd(num, c.numerator)
                den = lcm(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> tuple[Fraction, "Poly"]:
        """Split into (scale, P) with P integral, primitive and positive leading coefficient."""
        if not self._terms:
            return Fraction(0), self
        cont = self.content()
        if self.leading()[1] < 0:
            cont = -cont
        if cont == 1:
            return cont, self
        if cont.denominator == 1:
            d = cont.numerator
            return cont, Poly._raw({m: c // d for m, c in self._terms.items()})
        return cont, Poly._raw({m: _normalize_coeff(c / cont) for m, c in self._terms.items()})

    def divexact(self, other: "Poly") -> "Poly | None":
        """Quotient self/other if other divides self exactly, else None."""
        return _divexact(self, other)

    def evaluate(self, values: Mapping[str, object]):
        """Evaluate at a point; ``values`` maps variable names to numbers."""
        vals = [values.get(name) for name in VARS]
        total = 0
        for m, c in self._terms.items():
            t = c
            for i, s in enumerate(_SHIFT):
                e = (m >> s) & _FIELD
                if e:
                    x = vals[i]
                    if x is None:
                        raise KeyError(VARS[i])
                    t = t * x ** e
            total = total + t
        return total

    # -- text --------------------------------------------------------------

    def sorted_items(self) -> list[tuple[int, object]]:
        return sorted(self._terms.items(), reverse=True)

    def to_dsl(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for idx, (m, c) in enumerate(self.sorted_items()):
            neg = c < 0
            a = -c if neg else c
            factors = []
            for i, s in enumerate(_SHIFT):
                e = (m >> s) & _FIELD
                if e == 1:
                    factors.append(VARS[i])
                elif e:
                    factors.append(f"{VARS[i]}^{e}")
            if isinstance(a, Fraction):
                coeff = f"{a.numerator}/{a.denominator}"
            else:
                coeff = str(a)
            if factors:
                body = "*".join(factors) if a == 1 else coeff + "*" + "*".join(factors)
            else:
                body = coeff
            if idx == 0:
                # unary minus binds tighter than ^ in the DSL, so -k^2 would read as (-k)^2
                if neg and factors and a == 1 and "^" in factors[0]:
                    body = "1*" + body
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_dsl()

    def __repr__(self) -> str:
        return f"Poly({self.to_dsl()!r})"


def _divexact(n: Poly, f: Poly) -> Poly | None:
    if not f._terms:
        raise ZeroDivisionError("division by the zero polynomial")
    if not n._terms:
        return n
    fterms = f._terms
    if len(fterms) == 1:
        (fm, fc), = fterms.items()
        out = {}
        integral = type(fc) is int
        for m, c in n._terms.items():
            if not mono_divides(fm, m):
                return None
            if integral and type(c) is int:
                qc, r = divmod(c, fc)
                if r:
                    return None
            else:
                qc = _normalize_coeff(Fraction(c) / fc)
            out[m - fm] = qc
        return Poly._raw(out)
    flm = max(fterms)
    flc = fterms[flm]
    ftm = min(fterms)
    nlm = max(n._terms)
    ntm = min(n._terms)
    # cheap necessary conditions: leading and trailing monomials divide
    if not mono_divides(flm, nlm) or not mono_divides(ftm, ntm):
        return None
    integral = type(flc) is int and n.is_integral() and f.is_integral()
    if integral and n._terms[nlm] % flc:
        return None
    rest = [(m, c) for m, c in fterms.items() if m != flm]
    rem = dict(n._terms)
    heap = [-m for m in rem]
    heapq.heapify(heap)
    q = {}
    limit = max_terms()
    while heap:
        m = -heapq.heappop(heap)
        c = rem.pop(m, 0)
        if not c:
            continue
        if not mono_divides(flm, m):
            return None
        if integral:
            qc, r = divmod(c, flc)
            if r:
                return None
        else:
            qc = _normalize_coeff(Fraction(c) / flc)
        qm = m - flm
        q[qm] = qc
        if len(q) > limit:
            raise SizeLimitError(f"quotient exceeds {limit} terms")
        for fm, fc in rest:
            t = qm + fm
            v = rem.get(t)
            if v is None:
                rem[t] = -qc * fc
                heapq.heappush(heap, -t)
            else:
                v -= qc * fc
                if v:
                    rem[t] = v
                else:
                    del rem[t]
    return Poly._raw(q)
