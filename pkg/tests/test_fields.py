import random

import pytest

from conftest import random_bivar_poly, random_bivar_rational, random_rat1
from frobdesc.errors import RepresentationError
from frobdesc.expr import parse_bivar
from frobdesc.fields import (
    BivarPoly,
    BivarRational,
    Fq,
    PerfectedScalar,
    Poly1,
    Rat1,
    bivar_from_rat1,
    bivar_gcd,
    is_pth_power,
    perfected_degree_over_K,
    perfected_root,
    rat1_from_bivar,
)


class TestFq:
    @pytest.mark.parametrize("q", [2, 4, 8, 16])
    def test_field_axioms_spot(self, q):
        F = Fq(q)
        els = list(F.elements())
        assert len(els) == q
        for a in els:
            assert a + F.zero == a
            assert a * F.one == a
            assert a + a == F.zero  # characteristic 2
            if a:
                assert a * a.inverse() == F.one

    @pytest.mark.parametrize("q", [2, 4, 16])
    def test_frobenius_bijective(self, q):
        F = Fq(q)
        squares = {a * a for a in F.elements()}
        assert len(squares) == q
        for a in F.elements():
            assert a.sqrt() * a.sqrt() == a

    def test_distributivity_exhaustive_f4(self):
        F = Fq(4)
        for a in F.elements():
            for b in F.elements():
                for c in F.elements():
                    assert a * (b + c) == a * b + a * c

    def test_bad_sizes(self):
        with pytest.raises(ValueError):
            Fq(6)
        with pytest.raises(ValueError):
            Fq(32)

    def test_instances_cached(self):
        assert Fq(4) is Fq(4)


class TestPoly1:
    def test_divmod_roundtrip(self):
        rng = random.Random(7)
        F = Fq(4)
        for _ in range(200):
            a = random_poly(rng, F)
            b = random_poly(rng, F, nonzero=True)
            q, r = divmod(a, b)
            assert q * b + r == a
            assert r.is_zero() or r.deg < b.deg

    def test_gcd(self):
        rng = random.Random(8)
        F = Fq(2)
        for _ in range(100):
            a = random_poly(rng, F, nonzero=True)
            b = random_poly(rng, F, nonzero=True)
            g = Poly1.gcd(a, b)
            assert (a % g).is_zero() and (b % g).is_zero()

    def test_sqrt(self):
        F = Fq(4)
        t = Poly1.gen(F)
        p = t**2 + Poly1.const(F.elem(2))
        sq = p * p
        assert sq.sqrt() == p
        assert (t ** 3).sqrt() is None

    def test_inflate_deflate(self):
        F = Fq(2)
        t = Poly1.gen(F)
        p = t**3 + Poly1.one(F)
        assert p.inflate(4).deflate(4) == p


def random_poly(rng, field, nonzero=False):
    from conftest import random_poly1

    return random_poly1(rng, field, 5, nonzero)


class TestBivarGcd:
    def test_common_factor_recovered(self):
        rng = random.Random(11)
        F = Fq(2)
        one = BivarPoly.one(F)
        for _ in range(60):
            h = random_bivar_poly(rng, F, nonzero=True)
            f = random_bivar_poly(rng, F, nonzero=True)
            # f and f + 1 are coprime, so gcd(h*f, h*(f+1)) is h up to a unit
            g = bivar_gcd(h * f, h * (f + one))
            assert g.try_div(_unit(h)) is not None and _unit(h).try_div(g) is not None


def _unit(p):
    from frobdesc.fields import _unit_normal

    return _unit_normal(p)


class TestBivarRational:
    def test_cross_multiplication_equality(self):
        rng = random.Random(12)
        F = Fq(2)
        for _ in range(150):
            a = random_bivar_poly(rng, F, nonzero=True)
            b = random_bivar_poly(rng, F, nonzero=True)
            c = random_bivar_poly(rng, F, nonzero=True)
            f1 = BivarRational.make(a * c, b * c)
            f2 = BivarRational.make(a, b)
            assert f1 == f2
            assert hash(f1) == hash(f2)

    def test_canonical_bits(self, F2):
        f1 = parse_bivar(F2, "(t*x + t^2)/(x^2)")
        f2 = parse_bivar(F2, "(t^2*x + t^3)/(t*x^2)")
        assert f1 == f2
        assert f1.num.terms == f2.num.terms

    def test_field_ops(self):
        rng = random.Random(13)
        F = Fq(4)
        for _ in range(60):
            a = random_bivar_rational(rng, F)
            b = random_bivar_rational(rng, F, nonzero=True)
            assert (a / b) * b == a
            assert a + b + a == b  # characteristic 2

    def test_frobenius_additivity(self):
        rng = random.Random(14)
        F = Fq(2)
        for _ in range(200):
            u = random_bivar_rational(rng, F)
            v = random_bivar_rational(rng, F)
            assert (u + v) ** 2 == u**2 + v**2


class TestIsPthPower:
    def test_examples(self, F2):
        g = parse_bivar(F2, "t*x^2 + t^2")
        assert is_pth_power(parse_bivar(F2, "t^2*x^4 + t^4"), 2) == g
        assert is_pth_power(BivarRational.var_t(F2), 2) is None
        one = BivarRational.one(F2)
        assert is_pth_power(one, 2) == one

    def test_round_trip(self):
        rng = random.Random(15)
        F = Fq(4)
        for _ in range(200):
            g = random_bivar_rational(rng, F, nonzero=True)
            assert is_pth_power(g * g, 2) == g

    def test_non_characteristic_rejected(self, F2):
        with pytest.raises(ValueError):
            is_pth_power(BivarRational.one(F2), 3)


class TestPerfectedScalar:
    def test_degree_examples(self, F2):
        assert perfected_degree_over_K(PerfectedScalar.t_root(F2, 2)) == 4
        assert perfected_degree_over_K(PerfectedScalar.t_root(F2, 1)) == 2
        t_cubed = PerfectedScalar.from_rat1(Rat1.gen(F2) ** 3)
        assert perfected_degree_over_K(t_cubed) == 1

    def test_root_examples(self, F2):
        t = Rat1.gen(F2)
        assert perfected_root(PerfectedScalar.from_rat1(t**2), 3) == PerfectedScalar.t_root(F2, 2)
        one = PerfectedScalar.one(F2)
        assert perfected_root(one, 5) == one
        assert perfected_root(PerfectedScalar.from_rat1(t), 1) == PerfectedScalar.t_root(F2, 1)

    def test_root_round_trip(self):
        rng = random.Random(16)
        F = Fq(4)
        for _ in range(200):
            depth = rng.randrange(4)
            r = PerfectedScalar.make(F, depth, random_rat1(rng, F, nonzero=True))
            m = rng.randrange(7)
            assert perfected_root(r, m) ** (1 << m) == r

    def test_squaring_drops_depth_by_one(self, F2):
        r = PerfectedScalar.make(
            F2, 3, Rat1.make(Poly1.gen(F2) + Poly1.one(F2), Poly1.one(F2))
        )
        assert r.depth == 3
        assert (r**2).depth == 2

    def test_lift_preserves_equality(self, F2):
        r = PerfectedScalar.t_root(F2, 1)
        lifted = PerfectedScalar.make(F2, 3, r.lifted_payload(3))
        assert lifted == r

    def test_multiplication_by_base_element_keeps_degree(self):
        rng = random.Random(17)
        F = Fq(2)
        for _ in range(100):
            depth = rng.randrange(4)
            r = PerfectedScalar.make(F, depth, random_rat1(rng, F, nonzero=True))
            w = PerfectedScalar.from_rat1(random_rat1(rng, F, nonzero=True))
            assert perfected_degree_over_K(r * w) == perfected_degree_over_K(r)

    def test_to_rat1_guard(self, F2):
        with pytest.raises(RepresentationError):
            PerfectedScalar.t_root(F2, 1).to_rat1()

    def test_render(self, F2):
        assert PerfectedScalar.t_root(F2, 2).render() == "t^(1/4)"
        assert (PerfectedScalar.t_root(F2, 2) ** 2).render() == "t^(1/2)"


class TestConversions:
    def test_rat1_bivar_round_trip(self):
        rng = random.Random(18)
        F = Fq(4)
        for _ in range(80):
            r = random_rat1(rng, F)
            assert rat1_from_bivar(bivar_from_rat1(r)) == r

    def test_x_dependence_rejected(self, F2):
        with pytest.raises(ValueError):
            rat1_from_bivar(BivarRational.var_x(F2))
