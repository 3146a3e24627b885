"""Recursive-descent parser for tower relation expressions.

Grammar:

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ['^' uint]
    atom   := ident | uint | '(' expr ')'

'-' is accepted and treated as '+' (characteristic 2).  Errors carry
1-based line/column positions.  ``render`` is a right inverse of ``parse``
on the ASTs it produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .errors import ElaborationError, FrobdescError
from .fields import BivarRational, Fq


class ParseError(FrobdescError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '*' or '/'
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Var, Num, BinOp, Pow]


@dataclass(frozen=True)
class _Token:
    kind: str  # 'ident', 'uint', 'op', 'end'
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("uint", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append(_Token("op", ch, line, col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.next()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(f"expected {op!r}", tok.line, tok.column)

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            self.next()
            node = BinOp("+", node, self.parse_term())
        return node

    def parse_term(self) -> Expr:
        node = self.parse_factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            node = BinOp(op, node, self.parse_factor())
        return node

    def parse_factor(self) -> Expr:
        node = self.parse_atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.next()
            tok = self.next()
            if tok.kind != "uint":
                raise ParseError("expected integer exponent", tok.line, tok.column)
            node = Pow(node, int(tok.text))
        return node

    def parse_atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "ident":
            return Var(tok.text)
        if tok.kind == "uint":
            return Num(int(tok.text))
        if tok.kind == "op" and tok.text == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError("expected identifier, integer or '('", tok.line, tok.column)


def parse(text: str) -> Expr:
    parser = _Parser(_tokenize(text))
    node = parser.parse_expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise ParseError(f"unexpected trailing input {tail.text!r}", tail.line, tail.column)
    return node


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return 1 if node.op == "+" else 2
    if isinstance(node, Pow):
        return 3
    return 4


def render(node: Expr) -> str:
    """Print with minimal parentheses; parse(render(e)) == e."""
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Pow):
        base = render(node.base)
        if _prec(node.base) <= 3:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    lhs, rhs = render(node.lhs), render(node.rhs)
    mine = _prec(node)
    if _prec(node.lhs) < mine:
        lhs = f"({lhs})"
    # right operand needs parens at equal precedence: '-'-free left-assoc tree
    if _prec(node.rhs) <= mine:
        rhs = f"({rhs})"
    return f"{lhs} {node.op} {rhs}" if node.op == "+" else f"{lhs}{node.op}{rhs}"


def free_variables(node: Expr) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Pow):
        return free_variables(node.base)
    return free_variables(node.lhs) | free_variables(node.rhs)


def evaluate(node: Expr, env: Mapping[str, BivarRational], field: Fq) -> BivarRational:
    """Evaluate an AST in an environment of bivariate rationals."""
    if isinstance(node, Var):
        try:
            return env[node.name]
        except KeyError:
            raise ElaborationError(f"undefined symbol {node.name!r}") from None
    if isinstance(node, Num):
        return BivarRational.const(field.from_int(node.value))
    if isinstance(node, Pow):
        return evaluate(node.base, env, field) ** node.exponent
    lhs = evaluate(node.lhs, env, field)
    rhs = evaluate(node.rhs, env, field)
    if node.op == "+":
        return lhs + rhs
    if node.op == "*":
        return lhs * rhs
    if rhs.is_zero():
        raise ElaborationError("division by zero while evaluating a relation")
    return lhs / rhs


def parse_bivar(field: Fq, text: str, var: str = "x") -> BivarRational:
    """Convenience: parse and evaluate over {var, t}; heavy use in tests."""
    env = {var: BivarRational.var_x(field), "t": BivarRational.var_t(field)}
    return evaluate(parse(text), env, field)
