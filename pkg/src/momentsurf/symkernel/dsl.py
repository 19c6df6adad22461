"""Expression DSL: tokenizer, recursive-descent parser, printer, lowering.

Grammar (ASCII, whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := base ('^' integer)?
    base   := integer | name | '(' expr ')' | '-' base

Unary minus sits inside ``base``, so it binds tighter than ``^``: ``-k^2``
is ``(-k)^2``.  Write ``-(k^2)`` when the other reading is meant.

Two optional extensions are used by the proof scripts: extra names that
refer to previously bound values, and calls ``f(expr, ...)`` for a fixed
set of function names.  Neither is enabled by default.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

from .errors import DslSyntaxError, UnknownNameError, ZeroDenominatorError
from .poly import VAR_INDEX
from .ratio import Ratio


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "ExprAst"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "ExprAst"
    right: "ExprAst"


@dataclass(frozen=True)
class Pow:
    base: "ExprAst"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple


ExprAst = Union[Num, Var, Ref, Neg, BinOp, Pow, Call]


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in "+-*/^(),":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise DslSyntaxError(f"unexpected character {ch!r}", i, text)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, names: frozenset, functions: frozenset):
        self.text = text
        self.toks = _tokenize(text)
        self.pos = 0
        self.names = names
        self.functions = functions

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise DslSyntaxError(message, tok[2], self.text)

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            self.fail(f"expected {kind!r}")
        return self.take()

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.peek()[0] == "^":
            self.take()
            sign = 1
            if self.peek()[0] == "-":
                self.take()
                sign = -1
            tok = self.peek()
            if tok[0] != "int":
                self.fail("expected integer exponent")
            self.take()
            node = Pow(node, sign * int(tok[1]))
        return node

    def base(self):
        tok = self.peek()
        kind = tok[0]
        if kind == "int":
            self.take()
            return Num(int(tok[1]))
        if kind == "name":
            self.take()
            name = tok[1]
            if self.peek()[0] == "(" and name in self.functions:
                self.take()
                args = [self.expr()]
                while self.peek()[0] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                return Call(name, tuple(args))
            if name in VAR_INDEX:
                return Var(name)
            if name in self.names:
                return Ref(name)
            raise UnknownNameError(name, tok[2])
        if kind == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "-":
            self.take()
            return Neg(self.base())
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {tok[1]!r}")


def parse_expr(text: str, *, names: Iterable[str] = (), functions: Iterable[str] = ()) -> ExprAst:
    """Parse DSL text into an AST.

    Raises DslSyntaxError (with ``offset``) on malformed input and
    UnknownNameError for names outside the variable universe.
    """
    if not isinstance(text, str):
        raise TypeError("DSL text must be a string")
    return _Parser(text, frozenset(names), frozenset(functions)).parse()


# -- printing ------------------------------------------------------------------

def _level(node) -> int:
    if isinstance(node, BinOp):
        return 1 if node.op in "+-" else 2
    if isinstance(node, Pow):
        return 3
    return 4


def _show(node, need: int) -> str:
    text = _render(node)
    return f"({text})" if _level(node) < need else text


def _render(node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, (Var, Ref)):
        return node.name
    if isinstance(node, Neg):
        return "-" + _show(node.operand, 4)
    if isinstance(node, Pow):
        base = _show(node.base, 4)
        if isinstance(node.base, Neg):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Call):
        return f"{node.func}(" + ", ".join(_render(a) for a in node.args) + ")"
    if isinstance(node, BinOp):
        if node.op in "+-":
            return f"{_show(node.left, 1)} {node.op} {_show(node.right, 2)}"
        return f"{_show(node.left, 2)}{node.op}{_show(node.right, 3)}"
    raise TypeError(f"not an AST node: {node!r}")


def to_text(node: ExprAst) -> str:
    """Print an AST so that parsing the text gives the same AST back."""
    return _render(node)


# -- lowering ------------------------------------------------------------------

def lower(
    node: ExprAst,
    env: Mapping[str, Ratio] | None = None,
    call: Callable[[str, list], Ratio] | None = None,
) -> Ratio:
    """Evaluate an AST to a Ratio; ``env`` resolves Ref names, ``call`` handles Call nodes."""
    if isinstance(node, Num):
        return Ratio.const(node.value)
    if isinstance(node, Var):
        return Ratio.var(node.name)
    if isinstance(node, Ref):
        if env is None or node.name not in env:
            raise UnknownNameError(node.name)
        return env[node.name]
    if isinstance(node, Neg):
        return -lower(node.operand, env, call)
    if isinstance(node, Pow):
        base = lower(node.base, env, call)
        if node.exponent < 0 and base.is_zero():
            raise ZeroDenominatorError("zero raised to a negative power")
        return base ** node.exponent
    if isinstance(node, BinOp):
        x = lower(node.left, env, call)
        y = lower(node.right, env, call)
        if node.op == "+":
            return x + y
        if node.op == "-":
            return x - y
        if node.op == "*":
            return x * y
        if y.is_zero():
            raise ZeroDenominatorError("division by the zero rational function")
        return x / y
    if isinstance(node, Call):
        if call is None:
            raise UnknownNameError(node.func)
        return call(node.func, [lower(a, env, call) for a in node.args])
    raise TypeError(f"not an AST node: {node!r}")


def parse_ratio(text: str) -> Ratio:
    """Parse plain DSL text straight to a Ratio."""
    return lower(parse_expr(text))


def refs(node: ExprAst) -> set[str]:
    """Names referenced through Ref nodes."""
    if isinstance(node, Ref):
        return {node.name}
    if isinstance(node, Neg):
        return refs(node.operand)
    if isinstance(node, Pow):
        return refs(node.base)
    if isinstance(node, BinOp):
        return refs(node.left) | refs(node.right)
    if isinstance(node, Call):
        out = set()
        for a in node.args:
            out |= refs(a)
        return out
    return set()


def int_literals(text: str) -> list[tuple[int, int]]:
    """(offset, length) of every integer literal in the text, exponents included."""
    return [(pos, len(val)) for kind, val, pos in _tokenize(text) if kind == "int"]
