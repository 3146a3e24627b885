"""Exact arithmetic over small binary fields and their function fields.

The ground field is F_q with q = 2^e, e <= 4.  On top of it live:

* ``Poly1`` / ``Rat1`` -- univariate polynomials and rational functions in a
  single anonymous symbol, used both for the coefficient field K = F_q(t)
  and for perfect-closure payloads in the symbol s = t^(1/2^M);
* ``BivarPoly`` / ``BivarRational`` -- bivariate polynomials and rationals in
  (t, x), the computational home of the rational function field K(x);
* ``PerfectedScalar`` -- an element of F_q(t^(1/2^M)) tagged with its depth M,
  the representation for residue-field values.

All values are immutable and kept in canonical form, so equality and hashing
are structural: independently constructed equal values compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import RepresentationError

# Irreducible polynomials over F_2 used as moduli, indexed by extension degree.
# Bit k of the mask is the coefficient of x^k.
_IRREDUCIBLE = {1: 0b10, 2: 0b111, 3: 0b1011, 4: 0b10011}


class Fq:
    """The finite field F_q, q = 2^e with e <= 4.

    Instances are cached per q, so fields compare by identity as well as by
    size.  Elements are ``FqElement`` values wrapping a bit-vector of the
    polynomial representation modulo a fixed irreducible.
    """

    _cache: dict[int, "Fq"] = {}

    def __new__(cls, q: int) -> "Fq":
        if q in cls._cache:
            return cls._cache[q]
        e = q.bit_length() - 1
        if q < 2 or q != 1 << e:
            raise ValueError(f"q must be a power of 2, got {q}")
        if e not in _IRREDUCIBLE:
            raise ValueError(f"only e <= 4 supported, got q = {q}")
        self = super().__new__(cls)
        self.q = q
        self.e = e
        self._mod = _IRREDUCIBLE[e]
        cls._cache[q] = self
        return self

    characteristic = 2

    def elem(self, bits: int) -> "FqElement":
        if not 0 <= bits < self.q:
            raise ValueError(f"element bits {bits} out of range for F_{self.q}")
        return FqElement(self, bits)

    def from_int(self, k: int) -> "FqElement":
        """Image of the integer k under the prime-subfield embedding."""
        return FqElement(self, k & 1)

    @property
    def zero(self) -> "FqElement":
        return FqElement(self, 0)

    @property
    def one(self) -> "FqElement":
        return FqElement(self, 1)

    def elements(self) -> Iterator["FqElement"]:
        for bits in range(self.q):
            yield FqElement(self, bits)

    def _mul_bits(self, a: int, b: int) -> int:
        acc = 0
        while b:
            if b & 1:
                acc ^= a
            a <<= 1
            b >>= 1
        # reduce modulo the defining polynomial
        top = self._mod.bit_length() - 1
        for k in range(acc.bit_length() - 1, top - 1, -1):
            if acc >> k & 1:
                acc ^= self._mod << (k - top)
        return acc

    def __repr__(self) -> str:
        return f"F_{self.q}"


@dataclass(frozen=True, slots=True)
class FqElement:
    field: Fq
    bits: int

    def _check(self, other: "FqElement") -> None:
        if self.field is not other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other: "FqElement") -> "FqElement":
        self._check(other)
        return FqElement(self.field, self.bits ^ other.bits)

    __sub__ = __add__  # characteristic 2

    def __mul__(self, other: "FqElement") -> "FqElement":
        self._check(other)
        return FqElement(self.field, self.field._mul_bits(self.bits, other.bits))

    def __truediv__(self, other: "FqElement") -> "FqElement":
        return self * other.inverse()

    def inverse(self) -> "FqElement":
        if not self.bits:
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.q - 2)

    def __pow__(self, n: int) -> "FqElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sqrt(self) -> "FqElement":
        # Frobenius is a bijection on a finite field: x^(q/2) squares to x.
        return self ** (self.field.q // 2)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return f"{self.bits}@F{self.field.q}"


# ---------------------------------------------------------------------------
# univariate polynomials and rational functions
# ---------------------------------------------------------------------------


class Poly1:
    """Polynomial in one symbol over F_q, dense tuple of coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Fq, coeffs: Iterable[FqElement] = ()):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs: tuple[FqElement, ...] = tuple(cs)

    # -- constructors --

    @classmethod
    def zero(cls, field: Fq) -> "Poly1":
        return cls(field)

    @classmethod
    def one(cls, field: Fq) -> "Poly1":
        return cls(field, (field.one,))

    @classmethod
    def const(cls, c: FqElement) -> "Poly1":
        return cls(c.field, (c,))

    @classmethod
    def gen(cls, field: Fq) -> "Poly1":
        """The symbol itself (t, s, ... depending on context)."""
        return cls(field, (field.zero, field.one))

    @classmethod
    def from_ints(cls, field: Fq, ints: Iterable[int]) -> "Poly1":
        return cls(field, (field.elem(k) for k in ints))

    # -- structure --

    @property
    def deg(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def lc(self) -> FqElement:
        if not self.coeffs:
            raise ValueError("leading coefficient of zero")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1].bits == 1

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Poly1)
            and self.field is other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field.q, tuple(c.bits for c in self.coeffs)))

    # -- arithmetic --

    def __add__(self, other: "Poly1") -> "Poly1":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly1(self.field, out)

    __sub__ = __add__

    def __mul__(self, other: "Poly1") -> "Poly1":
        if not self.coeffs or not other.coeffs:
            return Poly1(self.field)
        zero = self.field.zero
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly1(self.field, out)

    def scale(self, c: FqElement) -> "Poly1":
        return Poly1(self.field, (a * c for a in self.coeffs))

    def __pow__(self, n: int) -> "Poly1":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly1.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "Poly1") -> tuple["Poly1", "Poly1"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.deg < other.deg:
            return Poly1(self.field), self
        inv = other.lc().inverse()
        rem = list(self.coeffs)
        q = [self.field.zero] * (self.deg - other.deg + 1)
        for k in range(self.deg - other.deg, -1, -1):
            c = rem[k + other.deg] * inv
            if c:
                q[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] + c * b
        return Poly1(self.field, q), Poly1(self.field, rem)

    def __floordiv__(self, other: "Poly1") -> "Poly1":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly1") -> "Poly1":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly1") -> "Poly1":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("division is not exact")
        return q

    def monic(self) -> "Poly1":
        if self.is_zero():
            return self
        return self.scale(self.lc().inverse())

    @staticmethod
    def gcd(a: "Poly1", b: "Poly1") -> "Poly1":
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    # -- char-2 specials --

    def sqrt(self) -> Optional["Poly1"]:
        """Square root, or None.  Requires even exponents; roots coefficients."""
        out = [self.field.zero] * (len(self.coeffs) // 2 + 1)
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k & 1:
                return None
            out[k // 2] = c.sqrt()
        return Poly1(self.field, out)

    def all_even(self) -> bool:
        return all(not c or k % 2 == 0 for k, c in enumerate(self.coeffs))

    def inflate(self, k: int) -> "Poly1":
        """Substitute the symbol by its k-th power (exponents multiply)."""
        if k == 1 or self.is_zero():
            return self
        out = [self.field.zero] * (self.deg * k + 1)
        for j, c in enumerate(self.coeffs):
            out[j * k] = c
        return Poly1(self.field, out)

    def deflate(self, k: int) -> "Poly1":
        """Inverse of inflate; all exponents must be multiples of k."""
        out = [self.field.zero] * (self.deg // k + 1)
        for j, c in enumerate(self.coeffs):
            if c:
                if j % k:
                    raise ValueError("exponent not divisible in deflate")
                out[j // k] = c
        return Poly1(self.field, out)

    def map_coeffs(self, fn) -> "Poly1":
        return Poly1(self.field, (fn(c) for c in self.coeffs))

    def eval(self, point: FqElement) -> FqElement:
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * point + c
        return acc

    def render(self, symbol: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.deg, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                parts.append(str(c.bits))
            else:
                head = "" if c.bits == 1 else f"{c.bits}*"
                parts.append(f"{head}{symbol}" + (f"^{k}" if k > 1 else ""))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Poly1({self.render()})"


@dataclass(frozen=True, slots=True)
class Rat1:
    """Rational function in one symbol, canonical: reduced, monic denominator."""

    num: Poly1
    den: Poly1

    @staticmethod
    def make(num: Poly1, den: Poly1) -> "Rat1":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return Rat1(num, Poly1.one(num.field))
        g = Poly1.gcd(num, den)
        num, den = num.exact_div(g), den.exact_div(g)
        inv = den.lc().inverse()
        return Rat1(num.scale(inv), den.scale(inv))

    @staticmethod
    def from_poly(p: Poly1) -> "Rat1":
        return Rat1.make(p, Poly1.one(p.field))

    @staticmethod
    def zero(field: Fq) -> "Rat1":
        return Rat1(Poly1.zero(field), Poly1.one(field))

    @staticmethod
    def one(field: Fq) -> "Rat1":
        return Rat1.from_poly(Poly1.one(field))

    @staticmethod
    def gen(field: Fq) -> "Rat1":
        return Rat1.from_poly(Poly1.gen(field))

    @property
    def field(self) -> Fq:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __add__(self, other: "Rat1") -> "Rat1":
        return Rat1.make(self.num * other.den + other.num * self.den, self.den * other.den)

    __sub__ = __add__

    def __mul__(self, other: "Rat1") -> "Rat1":
        return Rat1.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "Rat1") -> "Rat1":
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return Rat1.make(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> "Rat1":
        if n < 0:
            return (Rat1.one(self.field) / self) ** (-n)
        return Rat1.make(self.num**n, self.den**n)

    def sqrt(self) -> Optional["Rat1"]:
        # In canonical reduced form a square has both parts square (char 2).
        n, d = self.num.sqrt(), self.den.sqrt()
        if n is None or d is None:
            return None
        return Rat1.make(n, d)

    def all_even(self) -> bool:
        return self.num.all_even() and self.den.all_even()

    def inflate(self, k: int) -> "Rat1":
        # Reducedness and monicity survive exponent inflation.
        return Rat1(self.num.inflate(k), self.den.inflate(k))

    def deflate(self, k: int) -> "Rat1":
        return Rat1(self.num.deflate(k), self.den.deflate(k))

    def render(self, symbol: str = "t") -> str:
        if self.den.is_monic() and self.den.deg == 0:
            return self.num.render(symbol)
        return f"({self.num.render(symbol)})/({self.den.render(symbol)})"

    def __repr__(self) -> str:
        return f"Rat1({self.render()})"


# ---------------------------------------------------------------------------
# bivariate polynomials and rationals in (t, x)
# ---------------------------------------------------------------------------


class BivarPoly:
    """Sparse polynomial in (t, x) over F_q.

    ``terms`` maps (t_exponent, x_exponent) to a nonzero coefficient.  The
    instance is treated as immutable; never mutate ``terms`` after creation.
    """

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: Fq, terms: dict[tuple[int, int], FqElement] | None = None):
        self.field = field
        self.terms = {k: c for k, c in (terms or {}).items() if c}
        self._hash: int | None = None

    # -- constructors --

    @classmethod
    def zero(cls, field: Fq) -> "BivarPoly":
        return cls(field)

    @classmethod
    def one(cls, field: Fq) -> "BivarPoly":
        return cls(field, {(0, 0): field.one})

    @classmethod
    def const(cls, c: FqElement) -> "BivarPoly":
        return cls(c.field, {(0, 0): c})

    @classmethod
    def var_t(cls, field: Fq) -> "BivarPoly":
        return cls(field, {(1, 0): field.one})

    @classmethod
    def var_x(cls, field: Fq) -> "BivarPoly":
        return cls(field, {(0, 1): field.one})

    @classmethod
    def from_poly1_t(cls, p: Poly1) -> "BivarPoly":
        return cls(p.field, {(k, 0): c for k, c in enumerate(p.coeffs) if c})

    # -- structure --

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def deg_x(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    @property
    def deg_t(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BivarPoly)
            and self.field is other.field
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self.field.q, tuple(sorted((e, c.bits) for e, c in self.terms.items())))
            )
        return self._hash

    def lex_lead(self) -> tuple[tuple[int, int], FqElement]:
        """Leading term in lexicographic order, t before x."""
        if not self.terms:
            raise ValueError("leading term of zero")
        key = max(self.terms)
        return key, self.terms[key]

    # -- arithmetic --

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return BivarPoly(self.field, out)

    __sub__ = __add__

    def __mul__(self, other: "BivarPoly") -> "BivarPoly":
        out: dict[tuple[int, int], FqElement] = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in other.terms.items():
                k = (i1 + i2, j1 + j2)
                c = a * b
                s = out.get(k)
                out[k] = c if s is None else s + c
        return BivarPoly(self.field, out)

    def scale(self, c: FqElement) -> "BivarPoly":
        return BivarPoly(self.field, {k: a * c for k, a in self.terms.items()})

    def scale_poly1_t(self, p: Poly1) -> "BivarPoly":
        return self * BivarPoly.from_poly1_t(p)

    def square(self) -> "BivarPoly":
        # Frobenius: squaring doubles exponents and squares coefficients.
        return BivarPoly(
            self.field, {(2 * i, 2 * j): c * c for (i, j), c in self.terms.items()}
        )

    def __pow__(self, n: int) -> "BivarPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = BivarPoly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base.square()
            n >>= 1
        return result

    # -- views as a polynomial in x over F_q[t] --

    def x_coeffs(self) -> dict[int, Poly1]:
        cols: dict[int, list] = {}
        for (i, j), c in self.terms.items():
            cols.setdefault(j, []).append((i, c))
        out = {}
        for j, pairs in cols.items():
            size = max(i for i, _ in pairs) + 1
            cs = [self.field.zero] * size
            for i, c in pairs:
                cs[i] = c
            out[j] = Poly1(self.field, cs)
        return out

    @classmethod
    def from_x_coeffs(cls, field: Fq, cols: dict[int, Poly1]) -> "BivarPoly":
        terms = {}
        for j, p in cols.items():
            for i, c in enumerate(p.coeffs):
                if c:
                    terms[(i, j)] = c
        return cls(field, terms)

    def lc_x(self) -> Poly1:
        """Leading coefficient as a polynomial in x (an element of F_q[t])."""
        return self.x_coeffs()[self.deg_x]

    def content_t(self) -> Poly1:
        """gcd over F_q[t] of the x-coefficients, monic."""
        g = Poly1.zero(self.field)
        for p in self.x_coeffs().values():
            g = Poly1.gcd(g, p)
            if g.deg == 0:
                break
        return g

    def primitive_parts(self) -> tuple[Poly1, "BivarPoly"]:
        if self.is_zero():
            return Poly1.zero(self.field), self
        c = self.content_t()
        prim = BivarPoly.from_x_coeffs(
            self.field, {j: p.exact_div(c) for j, p in self.x_coeffs().items()}
        )
        return c, prim

    def derivative_x(self) -> "BivarPoly":
        out = {}
        for (i, j), c in self.terms.items():
            if j & 1:  # even x-exponents vanish in characteristic 2
                out[(i, j - 1)] = c
        return BivarPoly(self.field, out)

    # -- division --

    def try_div(self, other: "BivarPoly") -> Optional["BivarPoly"]:
        """Exact quotient self / other in F_q[t][x], or None."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return BivarPoly.zero(self.field)
        r = self.x_coeffs()
        b = other.x_coeffs()
        db = other.deg_x
        lb = b[db]
        q: dict[int, Poly1] = {}
        while r:
            dr = max(r)
            if dr < db:
                return None
            c, rem = divmod(r[dr], lb)
            if not rem.is_zero():
                return None
            q[dr - db] = c
            for j, p in b.items():
                k = j + dr - db
                s = r.get(k, Poly1.zero(self.field)) + p * c
                if s.is_zero():
                    r.pop(k, None)
                else:
                    r[k] = s
        return BivarPoly.from_x_coeffs(self.field, q)

    # -- evaluation / substitution --

    def eval_x(self, b: Rat1) -> Rat1:
        """Substitute x = b, an element of K = F_q(t)."""
        acc = Rat1.zero(self.field)
        cols = self.x_coeffs()
        for j in range(self.deg_x, -1, -1):
            acc = acc * b
            if j in cols:
                acc = acc + Rat1.from_poly(cols[j])
        if self.is_zero():
            return Rat1.zero(self.field)
        return acc

    def eval_perfected(self, c_exp: int, x_value: Rat1) -> Rat1:
        """Substitute t -> s^(2^c_exp) and x -> x_value(s); result lives in F_q(s)."""
        k = 1 << c_exp
        cols = self.x_coeffs()
        acc = Rat1.zero(self.field)
        for j in range(self.deg_x, -1, -1):
            acc = acc * x_value
            if j in cols:
                acc = acc + Rat1.from_poly(cols[j].inflate(k))
        if self.is_zero():
            return Rat1.zero(self.field)
        return acc

    def render(self, tvar: str = "t", xvar: str = "x") -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda e: (-e[1], -e[0])):
            c = self.terms[(i, j)]
            bits = [] if c.bits == 1 and (i or j) else [str(c.bits)]
            if i:
                bits.append(tvar + (f"^{i}" if i > 1 else ""))
            if j:
                bits.append(xvar + (f"^{j}" if j > 1 else ""))
            parts.append("*".join(bits))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"BivarPoly({self.render()})"


def _prem(a: dict[int, Poly1], b: dict[int, Poly1], field: Fq) -> dict[int, Poly1]:
    """Pseudo-remainder of sparse x-coefficient maps; exact up to content."""
    db = max(b)
    lb = b[db]
    r = dict(a)
    while r and max(r) >= db:
        dr = max(r)
        lr = r.pop(dr)
        r = {j: p * lb for j, p in r.items()}
        for j, p in b.items():
            if j == db:
                continue
            k = j + dr - db
            s = r.get(k, Poly1.zero(field)) + p * lr
            if s.is_zero():
                r.pop(k, None)
            else:
                r[k] = s
    return r


def bivar_gcd(a: BivarPoly, b: BivarPoly) -> BivarPoly:
    """gcd in F_q[t, x] via primitive-part/content recursion over F_q[t].

    Normalized so the lexicographic leading coefficient (t before x) is 1.
    """
    field = a.field
    if a.is_zero():
        return _unit_normal(b)
    if b.is_zero():
        return _unit_normal(a)
    ca, pa = a.primitive_parts()
    cb, pb = b.primitive_parts()
    c = Poly1.gcd(ca, cb)
    ra, rb = pa.x_coeffs(), pb.x_coeffs()
    if max(ra) < max(rb):
        ra, rb = rb, ra
    while rb:
        r = _prem(ra, rb, field)
        ra = rb
        if r:
            _, prim = BivarPoly.from_x_coeffs(field, r).primitive_parts()
            rb = prim.x_coeffs()
        else:
            rb = {}
    g = BivarPoly.from_x_coeffs(field, ra).scale_poly1_t(c)
    return _unit_normal(g)


def _unit_normal(p: BivarPoly) -> BivarPoly:
    if p.is_zero():
        return p
    _, lead = p.lex_lead()
    return p.scale(lead.inverse())


class BivarRational:
    """Element of K(x) = F_q(t)(x) as a canonical ratio of bivariate polynomials.

    Canonical form: numerator and denominator coprime in F_q[t, x], and the
    denominator's lexicographic leading coefficient (t before x) equals 1.
    Zero is (0, 1).
    """

    __slots__ = ("num", "den")

    def __init__(self, num: BivarPoly, den: BivarPoly):
        # Trusted constructor; use make() to canonicalize.
        self.num = num
        self.den = den

    @staticmethod
    def make(num: BivarPoly, den: BivarPoly) -> "BivarRational":
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        field = num.field
        if num.is_zero():
            return BivarRational(num, BivarPoly.one(field))
        g = bivar_gcd(num, den)
        if g.deg_x > 0 or g.deg_t > 0:
            num = num.try_div(g)
            den = den.try_div(g)
        _, lead = den.lex_lead()
        inv = lead.inverse()
        return BivarRational(num.scale(inv), den.scale(inv))

    @staticmethod
    def from_poly(p: BivarPoly) -> "BivarRational":
        return BivarRational.make(p, BivarPoly.one(p.field))

    @staticmethod
    def zero(field: Fq) -> "BivarRational":
        return BivarRational(BivarPoly.zero(field), BivarPoly.one(field))

    @staticmethod
    def one(field: Fq) -> "BivarRational":
        return BivarRational.from_poly(BivarPoly.one(field))

    @staticmethod
    def var_x(field: Fq) -> "BivarRational":
        return BivarRational.from_poly(BivarPoly.var_x(field))

    @staticmethod
    def var_t(field: Fq) -> "BivarRational":
        return BivarRational.from_poly(BivarPoly.var_t(field))

    @staticmethod
    def const(c: FqElement) -> "BivarRational":
        return BivarRational.from_poly(BivarPoly.const(c))

    @property
    def field(self) -> Fq:
        return self.num.field

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BivarRational)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other: "BivarRational") -> "BivarRational":
        return BivarRational.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __sub__ = __add__

    def __mul__(self, other: "BivarRational") -> "BivarRational":
        return BivarRational.make(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "BivarRational") -> "BivarRational":
        if other.is_zero():
            raise ZeroDivisionError("division by zero")
        return BivarRational.make(self.num * other.den, self.den * other.num)

    def __pow__(self, n: int) -> "BivarRational":
        if n < 0:
            return (BivarRational.one(self.field) / self) ** (-n)
        return BivarRational.make(self.num**n, self.den**n)

    def square(self) -> "BivarRational":
        # Coprimality and the unit normalization survive squaring.
        return BivarRational(self.num.square(), self.den.square())

    def derivative_x(self) -> "BivarRational":
        n, d = self.num, self.den
        return BivarRational.make(
            n.derivative_x() * d + n * d.derivative_x(), d * d
        )

    def is_x_free(self) -> bool:
        return self.num.deg_x <= 0 and self.den.deg_x <= 0

    def render(self, tvar: str = "t", xvar: str = "x") -> str:
        if self.den == BivarPoly.one(self.field):
            return self.num.render(tvar, xvar)
        return f"({self.num.render(tvar, xvar)})/({self.den.render(tvar, xvar)})"

    def __repr__(self) -> str:
        return f"BivarRational({self.render()})"


def bivar_from_rat1(r: Rat1) -> BivarRational:
    """Embed an element of K = F_q(t) into K(x)."""
    return BivarRational(
        BivarPoly.from_poly1_t(r.num), BivarPoly.from_poly1_t(r.den)
    )


def rat1_from_bivar(f: BivarRational) -> Rat1:
    if not f.is_x_free():
        raise ValueError("value is not free of x")

    def to1(p: BivarPoly) -> Poly1:
        cs: dict[int, FqElement] = {i: c for (i, _), c in p.terms.items()}
        size = max(cs, default=-1) + 1
        out = [p.field.zero] * size
        for i, c in cs.items():
            out[i] = c
        return Poly1(p.field, out)

    return Rat1.make(to1(f.num), to1(f.den))


def is_pth_power(f: BivarRational, p: int) -> Optional[BivarRational]:
    """The p-th root of f in K(x) when one exists, else None.

    Only the ambient characteristic is a legal p here: extraction relies on
    the Frobenius being the q/p-power map on coefficients.
    """
    if p != f.field.characteristic:
        raise ValueError(f"p = {p} is not the field characteristic")

    def root(poly: BivarPoly) -> Optional[BivarPoly]:
        out = {}
        for (i, j), c in poly.terms.items():
            if i % p or j % p:
                return None
            out[(i // p, j // p)] = c.sqrt()
        return BivarPoly(poly.field, out)

    n = root(f.num)
    if n is None:
        return None
    d = root(f.den)
    if d is None:
        return None
    # Canonical input implies canonical output: coprimality and the unit
    # normalization are preserved by taking roots.
    return BivarRational(n, d)


# ---------------------------------------------------------------------------
# perfect-closure scalars
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class PerfectedScalar:
    """Element of F_q(t^(1/2^M)), payload in the symbol s = t^(1/2^M).

    Canonical form keeps the depth minimal: the payload of a depth-M > 0
    value must use an odd s-exponent somewhere (otherwise it lives one
    level down).
    """

    field: Fq
    depth: int
    payload: Rat1

    @staticmethod
    def make(field: Fq, depth: int, payload: Rat1) -> "PerfectedScalar":
        if depth < 0:
            raise ValueError("negative depth")
        while depth > 0 and payload.all_even():
            payload = payload.deflate(2)
            depth -= 1
        return PerfectedScalar(field, depth, payload)

    @staticmethod
    def from_rat1(r: Rat1) -> "PerfectedScalar":
        return PerfectedScalar(r.field, 0, r)

    @staticmethod
    def zero(field: Fq) -> "PerfectedScalar":
        return PerfectedScalar(field, 0, Rat1.zero(field))

    @staticmethod
    def one(field: Fq) -> "PerfectedScalar":
        return PerfectedScalar(field, 0, Rat1.one(field))

    @staticmethod
    def t_root(field: Fq, m: int) -> "PerfectedScalar":
        """The value t^(1/2^m)."""
        return PerfectedScalar.make(field, m, Rat1.gen(field))

    def is_zero(self) -> bool:
        return self.payload.is_zero()

    def lifted_payload(self, depth: int) -> Rat1:
        if depth < self.depth:
            raise ValueError("cannot lift downward")
        return self.payload.inflate(1 << (depth - self.depth))

    def __add__(self, other: "PerfectedScalar") -> "PerfectedScalar":
        d = max(self.depth, other.depth)
        return PerfectedScalar.make(
            self.field, d, self.lifted_payload(d) + other.lifted_payload(d)
        )

    __sub__ = __add__

    def __mul__(self, other: "PerfectedScalar") -> "PerfectedScalar":
        d = max(self.depth, other.depth)
        return PerfectedScalar.make(
            self.field, d, self.lifted_payload(d) * other.lifted_payload(d)
        )

    def __truediv__(self, other: "PerfectedScalar") -> "PerfectedScalar":
        d = max(self.depth, other.depth)
        return PerfectedScalar.make(
            self.field, d, self.lifted_payload(d) / other.lifted_payload(d)
        )

    def __pow__(self, n: int) -> "PerfectedScalar":
        return PerfectedScalar.make(self.field, self.depth, self.payload**n)

    def root(self, m: int) -> "PerfectedScalar":
        """The unique 2^m-th root (Frobenius is bijective on the perfect closure)."""
        if m < 0:
            raise ValueError("negative root exponent")
        payload = self.payload
        for _ in range(m):
            payload = Rat1(payload.num.map_coeffs(lambda c: c.sqrt()),
                           payload.den.map_coeffs(lambda c: c.sqrt()))
        return PerfectedScalar.make(self.field, self.depth + m, payload)

    def degree_over_base(self) -> int:
        """[F_q(t)(self) : F_q(t)], a power of 2."""
        return 1 << self.depth

    def to_rat1(self) -> Rat1:
        if self.depth != 0:
            raise RepresentationError("value does not lie in F_q(t)")
        return self.payload

    def render(self) -> str:
        if self.depth == 0:
            return self.payload.render("t")
        num, den = self.payload.num, self.payload.den
        if den.deg == 0 and den.is_monic() and len([c for c in num.coeffs if c]) == 1:
            k = num.deg
            c = num.coeffs[k]
            from fractions import Fraction

            e = Fraction(k, 1 << self.depth)
            head = "" if c.bits == 1 else f"{c.bits}*"
            return f"{head}t^({e.numerator}/{e.denominator})"
        return f"({self.payload.render('s')} where s = t^(1/{1 << self.depth}))"

    def __repr__(self) -> str:
        return f"PerfectedScalar({self.render()})"


def perfected_degree_over_K(r: PerfectedScalar) -> int:
    """2^mu where mu is minimal with r^(2^mu) in F_q(t)."""
    return r.degree_over_base()


def perfected_root(r: PerfectedScalar, m: int) -> PerfectedScalar:
    return r.root(m)
