"""Minimal arithmetic expression language over the time variable ``t``.

Used for time-dependent Kraus and Hamiltonian entries in JSON configs.

Grammar::

    expr    := term (("+" | "-") term)*
    term    := factor (("*" | "/") factor)*
    factor  := "-" factor | power
    power   := primary ("^" factor)?
    primary := NUMBER | "t" | IDENT "(" expr ")" | "(" expr ")"

"^" is right-associative and binds tighter than unary minus, so
``-2^2`` evaluates to -4 (the conventional mathematical reading).
IDENT is restricted to exp, sqrt, log, sin, cos; ``log`` is the natural
logarithm.  There are no variables besides ``t`` and no user constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

FUNCTIONS = ("exp", "sqrt", "log", "sin", "cos")

_FUNCTION_IMPL = {
    "exp": math.exp,
    "sqrt": math.sqrt,
    "log": math.log,
    "sin": math.sin,
    "cos": math.cos,
}


class ExpressionError(ValueError):
    """Base class for lexing, parsing, and evaluation failures."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (offset {position})")
        self.position = position


class LexError(ExpressionError):
    pass


class ParseError(ExpressionError):
    pass


class DomainError(ExpressionError):
    """Evaluation produced a non-finite or mathematically undefined value."""


@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | t | plus | minus | star | slash | caret | lparen | rparen
    lexeme: str
    position: int


_SINGLE_CHAR = {
    "+": "plus",
    "-": "minus",
    "*": "star",
    "/": "slash",
    "^": "caret",
    "(": "lparen",
    ")": "rparen",
}


def tokenize(src: str) -> list[Token]:
    """Longest-match lexing; whitespace skipped; numbers are decimal with
    optional fraction and exponent."""
    tokens: list[Token] = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SINGLE_CHAR:
            tokens.append(Token(_SINGLE_CHAR[ch], ch, i))
            i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and src[i].isdigit():
                i += 1
            if i < n and src[i] == ".":
                i += 1
                while i < n and src[i].isdigit():
                    i += 1
            if i < n and src[i] in "eE":
                j = i + 1
                if j < n and src[j] in "+-":
                    j += 1
                if j < n and src[j].isdigit():
                    i = j
                    while i < n and src[i].isdigit():
                        i += 1
            tokens.append(Token("number", src[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (src[i].isalnum() or src[i] == "_"):
                i += 1
            name = src[start:i]
            tokens.append(Token("t" if name == "t" else "ident", name, start))
            continue
        raise LexError(f"unexpected character {ch!r}", i)
    return tokens


# ---------------------------------------------------------------------------
# Expression tree.  ``pos`` is carried for error messages but excluded from
# structural equality so pretty-print round trips compare clean.
# ---------------------------------------------------------------------------


class Expression:
    pass


@dataclass(frozen=True)
class Number(Expression):
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TimeVar(Expression):
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Negate(Expression):
    child: Expression
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Binary(Expression):
    op: str  # one of + - * / ^
    left: Expression
    right: Expression
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call(Expression):
    fn: str
    arg: Expression
    pos: int = field(default=0, compare=False)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def _peek(self) -> Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _next(self) -> Token:
        tok = self._peek()
        if tok is None:
            end = self.tokens[-1].position + len(self.tokens[-1].lexeme) if self.tokens else 0
            raise ParseError("unexpected end of expression", end)
        self.i += 1
        return tok

    def _expect(self, kind: str, what: str) -> Token:
        tok = self._next()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.lexeme!r}", tok.position)
        return tok

    def expr(self) -> Expression:
        node = self.term()
        while (tok := self._peek()) is not None and tok.kind in ("plus", "minus"):
            self._next()
            rhs = self.term()
            node = Binary("+" if tok.kind == "plus" else "-", node, rhs, tok.position)
        return node

    def term(self) -> Expression:
        node = self.factor()
        while (tok := self._peek()) is not None and tok.kind in ("star", "slash"):
            self._next()
            rhs = self.factor()
            node = Binary("*" if tok.kind == "star" else "/", node, rhs, tok.position)
        return node

    def factor(self) -> Expression:
        tok = self._peek()
        if tok is not None and tok.kind == "minus":
            self._next()
            return Negate(self.factor(), tok.position)
        return self.power()

    def power(self) -> Expression:
        node = self.primary()
        tok = self._peek()
        if tok is not None and tok.kind == "caret":
            self._next()
            return Binary("^", node, self.factor(), tok.position)
        return node

    def primary(self) -> Expression:
        tok = self._next()
        if tok.kind == "number":
            return Number(float(tok.lexeme), tok.position)
        if tok.kind == "t":
            return TimeVar(tok.position)
        if tok.kind == "ident":
            if tok.lexeme not in FUNCTIONS:
                raise ParseError(f"unknown function {tok.lexeme!r}", tok.position)
            self._expect("lparen", "'('")
            arg = self.expr()
            self._expect("rparen", "')'")
            return Call(tok.lexeme, arg, tok.position)
        if tok.kind == "lparen":
            node = self.expr()
            self._expect("rparen", "')'")
            return node
        raise ParseError(f"unexpected token {tok.lexeme!r}", tok.position)


def parse(tokens: list[Token]) -> Expression:
    """Parse a token stream into an Expression; the whole stream must be consumed."""
    parser = _Parser(tokens)
    node = parser.expr()
    leftover = parser._peek()
    if leftover is not None:
        raise ParseError(f"unexpected trailing token {leftover.lexeme!r}", leftover.position)
    return node


def parse_source(src: str) -> Expression:
    return parse(tokenize(src))


def evaluate(expr: Expression, t: float) -> float:
    """IEEE double evaluation; raises DomainError on any non-finite result."""
    value = _eval(expr, t)
    if not math.isfinite(value):
        raise DomainError("expression evaluated to a non-finite value", getattr(expr, "pos", 0))
    return value


def _eval(expr: Expression, t: float) -> float:
    if isinstance(expr, Number):
        return expr.value
    if isinstance(expr, TimeVar):
        return float(t)
    if isinstance(expr, Negate):
        return -_eval(expr.child, t)
    if isinstance(expr, Binary):
        left = _eval(expr.left, t)
        right = _eval(expr.right, t)
        try:
            if expr.op == "+":
                value = left + right
            elif expr.op == "-":
                value = left - right
            elif expr.op == "*":
                value = left * right
            elif expr.op == "/":
                if right == 0.0:
                    raise DomainError("division by zero", expr.pos)
                value = left / right
            elif expr.op == "^":
                value = math.pow(left, right)
            else:  # pragma: no cover - parser admits no other ops
                raise AssertionError(expr.op)
        except OverflowError:
            raise DomainError(f"overflow in '{expr.op}'", expr.pos) from None
        except ValueError:
            raise DomainError(f"invalid operands for '{expr.op}'", expr.pos) from None
        if not math.isfinite(value):
            raise DomainError(f"non-finite result from '{expr.op}'", expr.pos)
        return value
    if isinstance(expr, Call):
        arg = _eval(expr.arg, t)
        try:
            value = _FUNCTION_IMPL[expr.fn](arg)
        except OverflowError:
            raise DomainError(f"overflow in {expr.fn}()", expr.pos) from None
        except ValueError:
            raise DomainError(f"{expr.fn}() of out-of-domain argument {arg!r}", expr.pos) from None
        if not math.isfinite(value):
            raise DomainError(f"non-finite result from {expr.fn}()", expr.pos)
        return value
    raise TypeError(f"not an Expression node: {expr!r}")


def as_expression(value) -> Expression:
    """Normalize a float, source string, or Expression into an Expression."""
    if isinstance(value, Expression):
        return value
    if isinstance(value, (int, float)):
        v = float(value)
        return Negate(Number(-v)) if v < 0 else Number(v)
    if isinstance(value, str):
        return parse_source(value)
    raise TypeError(f"cannot interpret {value!r} as an expression")


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def format_expression(expr: Expression) -> str:
    """Render with minimal parentheses; parse_source(format_expression(e)) == e."""
    return _format(expr, 0)


def _format(expr: Expression, parent_prec: int) -> str:
    if isinstance(expr, Number):
        text = repr(expr.value)
        return text
    if isinstance(expr, TimeVar):
        return "t"
    if isinstance(expr, Negate):
        inner = _format(expr.child, _PRECEDENCE["neg"])
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PRECEDENCE["neg"] else text
    if isinstance(expr, Call):
        return f"{expr.fn}({_format(expr.arg, 0)})"
    if isinstance(expr, Binary):
        prec = _PRECEDENCE[expr.op]
        if expr.op == "^":
            # right-associative; the right side re-enters at factor level
            left = _format(expr.left, prec + 1)
            right = _format(expr.right, prec)
        else:
            left = _format(expr.left, prec)
            right = _format(expr.right, prec + 1)
        text = f"{left}{expr.op}{right}"
        return f"({text})" if parent_prec > prec else text
    raise TypeError(f"not an Expression node: {expr!r}")
