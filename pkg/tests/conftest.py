"""Shared helpers: seeded random generators for exact-arithmetic values."""

import random

import pytest

from frobdesc.fields import BivarPoly, BivarRational, Fq, Poly1, Rat1


@pytest.fixture
def F2():
    return Fq(2)


@pytest.fixture
def F4():
    return Fq(4)


@pytest.fixture
def F16():
    return Fq(16)


def random_poly1(rng: random.Random, field: Fq, max_deg: int = 4,
                 nonzero: bool = False) -> Poly1:
    while True:
        coeffs = [field.elem(rng.randrange(field.q)) for _ in range(max_deg + 1)]
        p = Poly1(field, coeffs)
        if not nonzero or not p.is_zero():
            return p


def random_rat1(rng: random.Random, field: Fq, max_deg: int = 3,
                nonzero: bool = False) -> Rat1:
    num = random_poly1(rng, field, max_deg, nonzero=nonzero)
    den = random_poly1(rng, field, max_deg, nonzero=True)
    return Rat1.make(num, den)


def random_bivar_poly(rng: random.Random, field: Fq, max_exp: int = 3,
                      max_terms: int = 5, nonzero: bool = False) -> BivarPoly:
    while True:
        terms = {}
        for _ in range(rng.randrange(1, max_terms + 1)):
            key = (rng.randrange(max_exp + 1), rng.randrange(max_exp + 1))
            terms[key] = field.elem(rng.randrange(field.q))
        p = BivarPoly(field, terms)
        if not nonzero or not p.is_zero():
            return p


def random_bivar_rational(rng: random.Random, field: Fq, max_exp: int = 3,
                          nonzero: bool = False) -> BivarRational:
    num = random_bivar_poly(rng, field, max_exp, nonzero=nonzero)
    den = random_bivar_poly(rng, field, max_exp, nonzero=True)
    return BivarRational.make(num, den)
