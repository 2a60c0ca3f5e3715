"""Closed-form expression language for metric components.

Immutable expression trees over named symbols, with a recursive-descent
parser, exact symbolic differentiation (safe to any order), conservative
simplification and IEEE-double evaluation.  This is deliberately not a CAS:
no factoring, no trig rewriting, no domain-changing cancellations.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping

__all__ = [
    "Expr", "Const", "Sym", "Sum", "Prod", "Neg", "Div", "Pow", "Call",
    "ExprError", "ParseError", "UnboundSymbolError", "EvalDomainError",
    "FUNCTIONS", "parse", "differentiate", "simplify", "evaluate",
    "to_str", "free_symbols",
]

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

FUNCTIONS = ("sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "ln", "sqrt")


class ExprError(Exception):
    pass


class ParseError(ExprError):
    def __init__(self, position: int, message: str):
        super().__init__(f"at position {position}: {message}")
        self.position = position
        self.message = message


class UnboundSymbolError(ExprError):
    def __init__(self, name: str):
        super().__init__(f"unbound symbol '{name}'")
        self.name = name


class EvalDomainError(ExprError):
    """Numeric domain violation (ln of non-positive, sqrt of negative,
    division by zero, ...) carrying the offending sub-expression."""

    def __init__(self, message: str, offender: "Expr"):
        super().__init__(f"{message} in '{to_str(offender)}'")
        self.offender = offender


@dataclass(frozen=True)
class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Sym(Expr):
    name: str


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple[Expr, ...]


@dataclass(frozen=True)
class Prod(Expr):
    factors: tuple[Expr, ...]


@dataclass(frozen=True)
class Neg(Expr):
    child: Expr


@dataclass(frozen=True)
class Div(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Call(Expr):
    name: str
    arg: Expr


ZERO = Const(0.0)
ONE = Const(1.0)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(at, f"unexpected character {stripped[0]!r}")
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive descent over:  expr := term (('+'|'-') term)* ;
    term := unary (('*'|'/') unary)* ;  unary := '-' unary | power ;
    power := atom ('^' unary)? ;  atom := NUMBER | IDENT | IDENT '(' expr ')'
    | '(' expr ')'."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is not None:
            self.i += 1
        return tok

    def expect_op(self, op: str):
        tok = self.next()
        if tok is None:
            raise ParseError(len(self.text), f"expected '{op}', got end of input")
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(tok[2], f"expected '{op}', got {tok[1]!r}")

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok is not None:
            raise ParseError(tok[2], f"trailing input {tok[1]!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.next()
                rhs = self.term()
                e = Sum((e, rhs if tok[1] == "+" else Neg(rhs)))
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "*/":
                self.next()
                rhs = self.unary()
                e = Prod((e, rhs)) if tok[1] == "*" else Div(e, rhs)
            else:
                return e

    def unary(self) -> Expr:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "-":
            self.next()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.next()
            return Pow(base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.next()
        if tok is None:
            raise ParseError(len(self.text), "unexpected end of input")
        kind, value, at = tok
        if kind == "num":
            try:
                return Const(float(value))
            except ValueError:
                raise ParseError(at, f"malformed numeral {value!r}") from None
        if kind == "ident":
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "(":
                if value not in FUNCTIONS:
                    raise ParseError(at, f"unknown function '{value}'")
                self.next()
                arg = self.expr()
                self.expect_op(")")
                return Call(value, arg)
            return Sym(value)
        if kind == "op" and value == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ParseError(at, f"unexpected token {value!r}")


def parse(text: str) -> Expr:
    if not text or not text.strip():
        raise ParseError(0, "empty expression")
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing

# precedence levels for parenthesization; higher binds tighter
_PREC_SUM, _PREC_TERM, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(e: Expr) -> int:
    if isinstance(e, (Const, Sym, Call)):
        return _PREC_ATOM
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Neg):
        return _PREC_UNARY
    if isinstance(e, (Prod, Div)):
        return _PREC_TERM
    return _PREC_SUM


def _wrap(e: Expr, parent_prec: int) -> str:
    s = to_str(e)
    return f"({s})" if _prec(e) < parent_prec else s


def _fmt_const(v: float) -> str:
    if v == int(v) and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def to_str(e: Expr) -> str:
    if isinstance(e, Const):
        return _fmt_const(e.value) if e.value >= 0 else f"(-{_fmt_const(-e.value)})"
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Call):
        return f"{e.name}({to_str(e.arg)})"
    if isinstance(e, Neg):
        return f"-{_wrap(e.child, _PREC_UNARY)}"
    if isinstance(e, Sum):
        parts = [_wrap(e.terms[0], _PREC_SUM)]
        for t in e.terms[1:]:
            if isinstance(t, Neg):
                parts.append(f" - {_wrap(t.child, _PREC_TERM)}")
            else:
                parts.append(f" + {_wrap(t, _PREC_TERM)}")
        return "".join(parts)
    if isinstance(e, Prod):
        return "*".join(_wrap(f, _PREC_TERM + (i > 0)) for i, f in enumerate(e.factors))
    if isinstance(e, Div):
        return f"{_wrap(e.num, _PREC_TERM)}/{_wrap(e.den, _PREC_UNARY)}"
    if isinstance(e, Pow):
        # exponent slot is grammatically 'unary', so Neg needs no parens there
        exp = to_str(e.exponent) if isinstance(e.exponent, Neg) \
            else _wrap(e.exponent, _PREC_POW)
        return f"{_wrap(e.base, _PREC_ATOM)}^{exp}"
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# structure helpers

def free_symbols(e: Expr) -> frozenset[str]:
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Sym):
        return frozenset((e.name,))
    if isinstance(e, Sum):
        out: frozenset[str] = frozenset()
        for t in e.terms:
            out |= free_symbols(t)
        return out
    if isinstance(e, Prod):
        out = frozenset()
        for f in e.factors:
            out |= free_symbols(f)
        return out
    if isinstance(e, Neg):
        return free_symbols(e.child)
    if isinstance(e, Div):
        return free_symbols(e.num) | free_symbols(e.den)
    if isinstance(e, Pow):
        return free_symbols(e.base) | free_symbols(e.exponent)
    if isinstance(e, Call):
        return free_symbols(e.arg)
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# differentiation

def _d(e: Expr, x: str) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Sym):
        return ONE if e.name == x else ZERO
    if isinstance(e, Sum):
        return Sum(tuple(_d(t, x) for t in e.terms))
    if isinstance(e, Neg):
        return Neg(_d(e.child, x))
    if isinstance(e, Prod):
        terms = []
        fs = e.factors
        for i in range(len(fs)):
            terms.append(Prod(tuple(_d(f, x) if j == i else f
                                    for j, f in enumerate(fs))))
        return Sum(tuple(terms))
    if isinstance(e, Div):
        # (n/d)' = n'/d - n d'/d^2
        return Sum((Div(_d(e.num, x), e.den),
                    Neg(Div(Prod((e.num, _d(e.den, x))),
                            Pow(e.den, Const(2.0))))))
    if isinstance(e, Pow):
        if x not in free_symbols(e.exponent):
            # power rule; keeps the tree out of ln() for constant exponents
            return Prod((e.exponent,
                         Pow(e.base, Sum((e.exponent, Neg(ONE)))),
                         _d(e.base, x)))
        # general case: b^e * (e' ln b + e b'/b)
        return Prod((e, Sum((Prod((_d(e.exponent, x), Call("ln", e.base))),
                             Prod((e.exponent, Div(_d(e.base, x), e.base)))))))
    if isinstance(e, Call):
        inner = _d(e.arg, x)
        a = e.arg
        if e.name == "sin":
            outer: Expr = Call("cos", a)
        elif e.name == "cos":
            outer = Neg(Call("sin", a))
        elif e.name == "tan":
            outer = Div(ONE, Pow(Call("cos", a), Const(2.0)))
        elif e.name == "sinh":
            outer = Call("cosh", a)
        elif e.name == "cosh":
            outer = Call("sinh", a)
        elif e.name == "tanh":
            outer = Div(ONE, Pow(Call("cosh", a), Const(2.0)))
        elif e.name == "exp":
            outer = Call("exp", a)
        elif e.name == "ln":
            outer = Div(ONE, a)
        elif e.name == "sqrt":
            outer = Div(ONE, Prod((Const(2.0), Call("sqrt", a))))
        else:
            raise ValueError(f"no derivative rule for '{e.name}'")
        return Prod((outer, inner))
    raise TypeError(f"not an expression: {e!r}")


def differentiate(e: Expr, wrt: str) -> Expr:
    if not IDENT_RE.fullmatch(wrt):
        raise ValueError(f"invalid symbol name {wrt!r}")
    return _d(e, wrt)


# ---------------------------------------------------------------------------
# simplification

_FOLDABLE = {
    "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "sinh": math.sinh, "cosh": math.cosh, "tanh": math.tanh,
    "exp": math.exp, "ln": math.log, "sqrt": math.sqrt,
}


def _is_const(e: Expr, v: float | None = None) -> bool:
    return isinstance(e, Const) and (v is None or e.value == v)


def simplify(e: Expr) -> Expr:
    """Conservative cleanup: constant folding, 0/1 identities, double
    negation, flattening of nested sums/products.  Never rewrites in ways
    that could change the numeric domain of non-constant subtrees."""
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Neg):
        c = simplify(e.child)
        if isinstance(c, Neg):
            return c.child
        if isinstance(c, Const):
            return Const(-c.value)
        return Neg(c)
    if isinstance(e, Sum):
        flat: list[Expr] = []
        const_acc = 0.0
        saw_const = False
        for t in e.terms:
            t = simplify(t)
            if isinstance(t, Sum):
                inner = list(t.terms)
            else:
                inner = [t]
            for s in inner:
                if isinstance(s, Const):
                    const_acc += s.value
                    saw_const = True
                else:
                    flat.append(s)
        if saw_const and const_acc != 0.0:
            flat.append(Const(const_acc))
        if not flat:
            return Const(const_acc if saw_const else 0.0)
        if len(flat) == 1:
            return flat[0]
        return Sum(tuple(flat))
    if isinstance(e, Prod):
        flat = []
        const_acc = 1.0
        saw_const = False
        for f in e.factors:
            f = simplify(f)
            inner = list(f.factors) if isinstance(f, Prod) else [f]
            for s in inner:
                if isinstance(s, Const):
                    const_acc *= s.value
                    saw_const = True
                else:
                    flat.append(s)
        if saw_const and const_acc == 0.0:
            return ZERO
        if saw_const and const_acc != 1.0:
            flat.insert(0, Const(const_acc))
        if not flat:
            return Const(const_acc if saw_const else 1.0)
        if len(flat) == 1:
            return flat[0]
        return Prod(tuple(flat))
    if isinstance(e, Div):
        num = simplify(e.num)
        den = simplify(e.den)
        if _is_const(num, 0.0):
            return ZERO
        if _is_const(den, 1.0):
            return num
        if isinstance(num, Const) and isinstance(den, Const) and den.value != 0.0:
            return Const(num.value / den.value)
        return Div(num, den)
    if isinstance(e, Pow):
        base = simplify(e.base)
        exp = simplify(e.exponent)
        if _is_const(exp, 1.0):
            return base
        if _is_const(exp, 0.0):
            return ONE
        if isinstance(base, Const) and isinstance(exp, Const):
            try:
                v = base.value ** exp.value
                if isinstance(v, float) or isinstance(v, int):
                    return Const(float(v))
            except (ValueError, OverflowError, ZeroDivisionError):
                pass
        return Pow(base, exp)
    if isinstance(e, Call):
        arg = simplify(e.arg)
        if isinstance(arg, Const):
            try:
                return Const(_FOLDABLE[e.name](arg.value))
            except (ValueError, OverflowError):
                pass
        return Call(e.name, arg)
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# evaluation

def evaluate(e: Expr, bindings: Mapping[str, float]) -> float:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Sym):
        try:
            return float(bindings[e.name])
        except KeyError:
            raise UnboundSymbolError(e.name) from None
    if isinstance(e, Sum):
        return math.fsum(evaluate(t, bindings) for t in e.terms)
    if isinstance(e, Prod):
        out = 1.0
        for f in e.factors:
            out *= evaluate(f, bindings)
        return out
    if isinstance(e, Neg):
        return -evaluate(e.child, bindings)
    if isinstance(e, Div):
        den = evaluate(e.den, bindings)
        if den == 0.0:
            raise EvalDomainError("division by zero", e)
        return evaluate(e.num, bindings) / den
    if isinstance(e, Pow):
        base = evaluate(e.base, bindings)
        exp = evaluate(e.exponent, bindings)
        try:
            v = base ** exp
        except (ValueError, OverflowError, ZeroDivisionError):
            raise EvalDomainError(f"invalid power {base}^{exp}", e) from None
        if isinstance(v, complex):
            raise EvalDomainError(f"complex power {base}^{exp}", e)
        return v
    if isinstance(e, Call):
        arg = evaluate(e.arg, bindings)
        if e.name == "ln" and arg <= 0.0:
            raise EvalDomainError(f"ln of non-positive {arg}", e)
        if e.name == "sqrt" and arg < 0.0:
            raise EvalDomainError(f"sqrt of negative {arg}", e)
        try:
            return _FOLDABLE[e.name](arg)
        except (ValueError, OverflowError):
            raise EvalDomainError(f"{e.name}({arg}) out of domain", e) from None
    raise TypeError(f"not an expression: {e!r}")
