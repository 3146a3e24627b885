import random

import pytest

from frobdesc.errors import ElaborationError
from frobdesc.expr import (
    BinOp,
    Num,
    ParseError,
    Pow,
    Var,
    evaluate,
    free_variables,
    parse,
    parse_bivar,
    render,
)
from frobdesc.fields import BivarRational, Fq


class TestParse:
    def test_two_term_sum(self):
        ast = parse("t*u^2 + u")
        assert ast == BinOp("+", BinOp("*", Var("t"), Pow(Var("u"), 2)), Var("u"))

    def test_nested(self):
        ast = parse("(t + z^4)*z")
        assert ast == BinOp("*", BinOp("+", Var("t"), Pow(Var("z"), 4)), Var("z"))

    def test_truncated_exponent(self):
        with pytest.raises(ParseError) as err:
            parse("u^")
        assert err.value.column == 3 and err.value.line == 1

    def test_error_positions(self):
        with pytest.raises(ParseError) as err:
            parse("x + \n  + y")
        assert err.value.line == 2

    def test_minus_is_plus(self):
        assert parse("a - b") == parse("a + b")

    def test_trailing_garbage(self):
        with pytest.raises(ParseError):
            parse("a b")

    def test_precedence(self):
        assert parse("a + b*c") == BinOp("+", Var("a"), BinOp("*", Var("b"), Var("c")))
        assert parse("a*b^2") == BinOp("*", Var("a"), Pow(Var("b"), 2))


def random_ast(rng: random.Random, depth: int):
    choice = rng.randrange(6 if depth > 0 else 2)
    if choice == 0:
        return Var(rng.choice(["x", "y", "z", "t", "u2"]))
    if choice == 1:
        return Num(rng.randrange(10))
    if choice in (2, 3):
        op = rng.choice(["+", "*", "/"])
        return BinOp(op, random_ast(rng, depth - 1), random_ast(rng, depth - 1))
    return Pow(random_ast(rng, depth - 1), rng.randrange(9))


class TestRoundTrip:
    def test_render_parse_identity(self):
        rng = random.Random(123)
        for _ in range(200):
            ast = random_ast(rng, 4)
            assert parse(render(ast)) == ast, render(ast)


class TestEvaluate:
    def test_env_lookup(self, F2):
        env = {"a": BivarRational.var_x(F2)}
        assert evaluate(parse("a^2 + 1"), env, F2) == parse_bivar(F2, "x^2 + 1")

    def test_undefined_symbol(self, F2):
        with pytest.raises(ElaborationError):
            evaluate(parse("nope"), {}, F2)

    def test_division_by_zero(self, F2):
        with pytest.raises(ElaborationError):
            evaluate(parse("1/(a + a)"), {"a": BivarRational.var_x(F2)}, F2)

    def test_integer_literals_reduce_mod_2(self, F2):
        assert evaluate(parse("2"), {}, F2).is_zero()
        assert evaluate(parse("3"), {}, F2) == BivarRational.one(F2)

    def test_free_variables(self):
        assert free_variables(parse("x*(y + t^2) / z")) == {"x", "y", "t", "z"}
