"""Primes, valuations, residues and differentials of K(x)|K, K = F_q(t).

A prime of the rational function field is the infinite place, a monic linear
place x + b with b in K, or a purely inseparable place x^(2^c) + a with
a in K outside the squares.  The latter shape is exactly the irreducible
one: x^(2^c) + a is irreducible over K if and only if a is not a square.

Finite valuations are computed by trial division with the primitive integral
model of the prime polynomial; no factorization is ever needed because
callers always name their primes explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import NotRegularError, UnsupportedPrimeError
from .fields import (
    BivarPoly,
    BivarRational,
    Fq,
    PerfectedScalar,
    Poly1,
    Rat1,
)

INFINITY = "infinity"
LINEAR = "linear"
PURELY_INSEPARABLE = "purely_inseparable"


@dataclass(frozen=True)
class RationalPrime:
    """A closed point of the projective line over K = F_q(t)."""

    field: Fq
    kind: str
    b: Optional[Rat1] = None  # linear: the place x + b
    c: Optional[int] = None  # purely inseparable: x^(2^c) + a
    a: Optional[Rat1] = None

    @staticmethod
    def infinity(field: Fq) -> "RationalPrime":
        return RationalPrime(field, INFINITY)

    @staticmethod
    def linear(b: Rat1) -> "RationalPrime":
        return RationalPrime(b.field, LINEAR, b=b)

    @staticmethod
    def x_adic(field: Fq) -> "RationalPrime":
        return RationalPrime.linear(Rat1.zero(field))

    @staticmethod
    def purely_inseparable(c: int, a: Rat1) -> "RationalPrime":
        if c < 1:
            raise ValueError("need c >= 1")
        if a.sqrt() is not None:
            raise ValueError("a must not be a square in K (irreducibility)")
        return RationalPrime(a.field, PURELY_INSEPARABLE, c=c, a=a)

    def degree(self) -> int:
        if self.kind == PURELY_INSEPARABLE:
            return 1 << self.c
        return 1

    def prime_polynomial(self) -> BivarPoly:
        """Primitive integral model of the prime in F_q[t, x]."""
        if self.kind == INFINITY:
            raise ValueError("the infinite place has no prime polynomial")
        if self.kind == LINEAR:
            num, den = self.b.num, self.b.den
            power = 1
        else:
            num, den = self.a.num, self.a.den
            power = 1 << self.c
        # den * x^power + num; coprimality of num, den makes this primitive
        poly = BivarPoly.from_poly1_t(den) * BivarPoly.var_x(self.field) ** power
        return poly + BivarPoly.from_poly1_t(num)

    def describe(self, xvar: str = "x") -> str:
        if self.kind == INFINITY:
            return f"pole of {xvar}"
        if self.kind == LINEAR:
            if self.b.is_zero():
                return f"zero of {xvar}"
            return f"zero of {xvar} + {self.b.render()}"
        return f"zero of {xvar}^{1 << self.c} + {self.a.render()}"


def _poly_order(poly: BivarPoly, pi: BivarPoly) -> int:
    order = 0
    while True:
        q = poly.try_div(pi)
        if q is None:
            return order
        poly = q
        order += 1


def valuation(f: BivarRational, q: RationalPrime) -> int:
    """Order of vanishing of f at the prime q."""
    if f.is_zero():
        raise ZeroDivisionError("valuation of zero is undefined")
    if q.kind == INFINITY:
        return f.den.deg_x - f.num.deg_x
    pi = q.prime_polynomial()
    return _poly_order(f.num, pi) - _poly_order(f.den, pi)


def residue(f: BivarRational, q: RationalPrime) -> PerfectedScalar:
    """Value of f in the residue field of q; requires f regular at q."""
    v = valuation(f, q)
    if v < 0:
        raise NotRegularError(f"not regular at {q.describe()}: valuation {v}")
    field = q.field
    if q.kind == INFINITY:
        if v > 0:
            return PerfectedScalar.zero(field)
        ratio = Rat1.make(f.num.lc_x(), f.den.lc_x())
        return PerfectedScalar.from_rat1(ratio)
    if q.kind == LINEAR:
        # canonical form + regularity mean the denominator does not vanish
        value = f.num.eval_x(q.b) / f.den.eval_x(q.b)
        return PerfectedScalar.from_rat1(value)
    # purely inseparable: substitute the 2^c-th root of a for x
    m = q.c
    root_a = _kth_root_of_rat(q.a, m)
    num = f.num.eval_perfected(m, root_a)
    den = f.den.eval_perfected(m, root_a)
    return PerfectedScalar.make(field, m, num / den)


def _kth_root_of_rat(a: Rat1, m: int) -> Rat1:
    """The 2^m-th root of a(t), written in the symbol s = t^(1/2^m).

    Coefficients are rooted, exponents stay: (sum c_k t^k)^(1/2^m)
    = sum c_k^(1/2^m) s^k.
    """
    num, den = a.num, a.den
    for _ in range(m):
        num = num.map_coeffs(lambda c: c.sqrt())
        den = den.map_coeffs(lambda c: c.sqrt())
    return Rat1.make(num, den)


@dataclass(frozen=True)
class RatDifferential:
    """A differential f * dx on the projective line."""

    coeff: BivarRational

    def is_zero(self) -> bool:
        return self.coeff.is_zero()


def differentiate(f: BivarRational) -> RatDifferential:
    """df = (partial f / partial x) dx, t held constant, quotient rule exact."""
    return RatDifferential(f.derivative_x())


# dx has divisor -2 * (infinity) on the projective line; the canonical class
# has degree -2, which the tests confirm by summing orders.
_V_INFINITY_DX = -2


def differential_order(w: RatDifferential, q: RationalPrime) -> int:
    """Order of the differential at a rational prime (degree 1 only)."""
    if w.is_zero():
        raise ZeroDivisionError("order of the zero differential is undefined")
    if q.kind == PURELY_INSEPARABLE:
        raise UnsupportedPrimeError(
            "differential order at non-rational prime unsupported"
        )
    v = valuation(w.coeff, q)
    if q.kind == INFINITY:
        return v + _V_INFINITY_DX
    return v  # x + b is a separating local coordinate: v_q(dx) = 0
