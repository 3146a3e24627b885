import random

import pytest

from conftest import random_bivar_rational
from frobdesc.curve import (
    RatDifferential,
    RationalPrime,
    differential_order,
    differentiate,
    residue,
    valuation,
)
from frobdesc.errors import NotRegularError, UnsupportedPrimeError
from frobdesc.expr import parse_bivar
from frobdesc.fields import (
    BivarRational,
    Fq,
    PerfectedScalar,
    Rat1,
    bivar_from_rat1,
)


@pytest.fixture
def primes(F2):
    return {
        "x": RationalPrime.x_adic(F2),
        "inf": RationalPrime.infinity(F2),
        "x+t": RationalPrime.linear(Rat1.gen(F2)),
        "x2+t": RationalPrime.purely_inseparable(1, Rat1.gen(F2)),
    }


class TestRationalPrime:
    def test_degrees(self, primes):
        assert primes["x"].degree() == 1
        assert primes["inf"].degree() == 1
        assert primes["x2+t"].degree() == 2

    def test_square_a_rejected(self, F2):
        with pytest.raises(ValueError):
            RationalPrime.purely_inseparable(1, Rat1.gen(F2) ** 2)


class TestValuation:
    def test_examples(self, F2, primes):
        assert valuation(parse_bivar(F2, "x^3*(x+t)"), primes["x"]) == 3
        assert valuation(parse_bivar(F2, "(x^2+t)^2*(x+1)"), primes["x2+t"]) == 2
        f = parse_bivar(F2, "(1+t*u)/u^3", var="u")
        assert valuation(f, primes["inf"]) == 2

    def test_zero_rejected(self, F2, primes):
        with pytest.raises(ZeroDivisionError):
            valuation(BivarRational.zero(F2), primes["x"])

    @pytest.mark.parametrize("kind", ["x", "inf", "x+t", "x2+t"])
    def test_valuation_axioms(self, F2, primes, kind):
        q = primes[kind]
        rng = random.Random(hash(kind) & 0xFFFF)
        for _ in range(150):
            f = random_bivar_rational(rng, F2, nonzero=True)
            g = random_bivar_rational(rng, F2, nonzero=True)
            assert valuation(f * g, q) == valuation(f, q) + valuation(g, q)
            s = f + g
            if s.is_zero():
                continue
            vf, vg = valuation(f, q), valuation(g, q)
            assert valuation(s, q) >= min(vf, vg)
            if vf != vg:
                assert valuation(s, q) == min(vf, vg)

    def test_degree_formula(self, F2, primes):
        # sum of v_q(f) * deg(q) over the support is zero on the projective line
        cases = [
            ("x^3*(x+t)^2/(x^2+t)", {"x": 3, "x+t": 2, "x2+t": -1, "inf": -3}),
            ("(x^2+t)^3/(x*(x+t))", {"x": -1, "x+t": -1, "x2+t": 3, "inf": -4}),
        ]
        for text, expected in cases:
            f = parse_bivar(F2, text)
            total = 0
            for kind, want in expected.items():
                v = valuation(f, primes[kind])
                assert v == want, (text, kind)
                total += v * primes[kind].degree()
            assert total == 0


class TestResidue:
    def test_examples(self, F2, primes):
        t = Rat1.gen(F2)
        r = residue(parse_bivar(F2, "1/u + t", var="u"), primes["inf"])
        assert r == PerfectedScalar.from_rat1(t)
        f = parse_bivar(F2, "u*(1+t*u)^2/(1+t*u+u^3)", var="u")
        assert residue(f, primes["inf"]) == PerfectedScalar.from_rat1(t**2)
        assert residue(parse_bivar(F2, "x + t"), primes["x"]) == PerfectedScalar.from_rat1(t)

    def test_purely_inseparable(self, F2, primes):
        # x evaluated at the zero of x^2 + t is t^(1/2)
        assert residue(BivarRational.var_x(F2), primes["x2+t"]) == PerfectedScalar.t_root(F2, 1)
        # and x^2 + x there has value t + t^(1/2)
        val = residue(parse_bivar(F2, "x^2 + x"), primes["x2+t"])
        assert val == PerfectedScalar.from_rat1(Rat1.gen(F2)) + PerfectedScalar.t_root(F2, 1)

    def test_pole_rejected(self, F2, primes):
        with pytest.raises(NotRegularError):
            residue(parse_bivar(F2, "1/x"), primes["x"])

    def test_residue_valuation_coherence(self, F2, primes):
        rng = random.Random(99)
        for kind in ("x", "x+t", "inf"):
            q = primes[kind]
            checked = 0
            while checked < 60:
                f = random_bivar_rational(rng, F2, nonzero=True)
                if valuation(f, q) < 0:
                    continue
                r = residue(f, q)
                diff = f + bivar_from_rat1(r.to_rat1())
                if not diff.is_zero():
                    assert valuation(diff, q) >= 1
                checked += 1


class TestDifferentiate:
    def test_examples(self, F2):
        # x^(2^(j+1)+1) + t*x^(2^(j+1)) with j = 1 differentiates to x^4
        d = differentiate(parse_bivar(F2, "x^5 + t*x^4"))
        assert d.coeff == parse_bivar(F2, "x^4")
        f = parse_bivar(F2, "u*(1+t*u)^2/(1+t*u+u^3)", var="u")
        expected = parse_bivar(F2, "(1+t*u)^2/(1+t*u+u^3)^2", var="u")
        assert differentiate(f).coeff == expected
        assert differentiate(parse_bivar(F2, "t^5")).is_zero()

    def test_leibniz(self, F2):
        rng = random.Random(21)
        for _ in range(200):
            f = random_bivar_rational(rng, F2)
            g = random_bivar_rational(rng, F2)
            lhs = differentiate(f * g).coeff
            rhs = f * differentiate(g).coeff + g * differentiate(f).coeff
            assert lhs == rhs

    def test_squares_die(self, F2):
        rng = random.Random(22)
        for _ in range(50):
            f = random_bivar_rational(rng, F2)
            assert differentiate(f * f).is_zero()


class TestDifferentialOrder:
    def test_examples(self, F2, primes):
        assert differential_order(RatDifferential(parse_bivar(F2, "x^4")), primes["x"]) == 4
        w0 = RatDifferential(parse_bivar(F2, "1/u^2", var="u"))
        assert differential_order(w0, primes["inf"]) == 0
        w1 = RatDifferential(parse_bivar(F2, "1/u^4", var="u"))
        assert differential_order(w1, primes["inf"]) == 2

    def test_nonrational_prime_rejected(self, F2, primes):
        w = RatDifferential(BivarRational.one(F2))
        with pytest.raises(UnsupportedPrimeError):
            differential_order(w, primes["x2+t"])

    def test_zero_rejected(self, F2, primes):
        with pytest.raises(ZeroDivisionError):
            differential_order(RatDifferential(BivarRational.zero(F2)), primes["x"])

    def test_canonical_degree(self, F2, primes):
        # orders of dx at the finite rational primes and infinity sum to -2
        dx = RatDifferential(BivarRational.one(F2))
        assert differential_order(dx, primes["x"]) == 0
        assert differential_order(dx, primes["x+t"]) == 0
        assert differential_order(dx, primes["inf"]) == -2
