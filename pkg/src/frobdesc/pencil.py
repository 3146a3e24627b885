"""The quartic pencil: fiber checks, intersection solver, diophantine search.

The surface in P^2 x P^1 is cut out by

    T0*(Z^4 + X^2*Y^2 + X^3*Z) + T1*(Y^4 + X^2*Z^2) = 0

over F_q of characteristic 2.  This module verifies its stated geometry by
exact polynomial identities and exhaustive finite-field enumeration:
strangeness, the inverse of the projection to P^2, the homogeneity
transformations, singular points of the fibers and their multiplicities, the
non-smooth locus, the intersection combinatorics of the degenerate fiber of
the resolved model, and the non-existence searches for further rational
points.  All negative results are certified only up to the stated degree and
field bounds, and reports say so.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Iterator, Optional

from .errors import GuardError, InvariantError
from .fields import Fq, FqElement, Poly1

# ---------------------------------------------------------------------------
# small multivariate polynomials over F_q
# ---------------------------------------------------------------------------


class MPoly:
    """Sparse multivariate polynomial over F_q with a fixed variable tuple."""

    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: Fq, vars: tuple[str, ...], terms=None):
        self.field = field
        self.vars = vars
        self.terms: dict[tuple[int, ...], FqElement] = {
            k: c for k, c in (terms or {}).items() if c
        }

    @classmethod
    def zero(cls, field: Fq, vars: tuple[str, ...]) -> "MPoly":
        return cls(field, vars)

    @classmethod
    def const(cls, field: Fq, vars: tuple[str, ...], c: FqElement) -> "MPoly":
        return cls(field, vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, field: Fq, vars: tuple[str, ...], name: str) -> "MPoly":
        exps = [0] * len(vars)
        exps[vars.index(name)] = 1
        return cls(field, vars, {tuple(exps): field.one})

    def _check(self, other: "MPoly") -> None:
        if self.vars != other.vars or self.field is not other.field:
            raise ValueError("polynomials over different rings")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MPoly)
            and self.vars == other.vars
            and self.field is other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.vars, tuple(sorted((k, c.bits) for k, c in self.terms.items()))))

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k)
            out[k] = c if s is None else s + c
        return MPoly(self.field, self.vars, out)

    __sub__ = __add__

    def __mul__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        out: dict[tuple[int, ...], FqElement] = {}
        for k1, a in self.terms.items():
            for k2, b in other.terms.items():
                k = tuple(e1 + e2 for e1, e2 in zip(k1, k2))
                c = a * b
                s = out.get(k)
                out[k] = c if s is None else s + c
        return MPoly(self.field, self.vars, out)

    def scale(self, c: FqElement) -> "MPoly":
        return MPoly(self.field, self.vars, {k: a * c for k, a in self.terms.items()})

    def __pow__(self, n: int) -> "MPoly":
        result = MPoly.const(self.field, self.vars, self.field.one)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def partial(self, name: str) -> "MPoly":
        """Formal partial derivative (characteristic 2)."""
        idx = self.vars.index(name)
        out = {}
        for k, c in self.terms.items():
            e = k[idx]
            if e & 1:
                key = k[:idx] + (e - 1,) + k[idx + 1:]
                out[key] = c
        return MPoly(self.field, self.vars, out)

    def subs(self, mapping: dict[str, "MPoly"]) -> "MPoly":
        """Substitute polynomials for variables (unlisted ones stay)."""
        images = {
            name: mapping.get(name, MPoly.var(self.field, self.vars, name))
            for name in self.vars
        }
        acc = MPoly.zero(self.field, self.vars)
        powers: dict[tuple[str, int], MPoly] = {}

        def power(name: str, e: int) -> MPoly:
            key = (name, e)
            if key not in powers:
                powers[key] = images[name] ** e
            return powers[key]

        for k, c in self.terms.items():
            term = MPoly.const(self.field, self.vars, c)
            for name, e in zip(self.vars, k):
                if e:
                    term = term * power(name, e)
            acc = acc + term
        return acc

    def eval(self, point: dict[str, FqElement]) -> FqElement:
        acc = self.field.zero
        for k, c in self.terms.items():
            v = c
            for name, e in zip(self.vars, k):
                if e:
                    v = v * point[name] ** e
            acc = acc + v
        return acc

    def min_total_degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial")
        return min(sum(k) for k in self.terms)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            bits = [] if c.bits == 1 and any(k) else [str(c.bits)]
            for name, e in zip(self.vars, k):
                if e:
                    bits.append(name + (f"^{e}" if e > 1 else ""))
            parts.append("*".join(bits))
        return " + ".join(parts)

    def __repr__(self):
        return f"MPoly({self.render()})"


SURFACE_VARS = ("X", "Y", "Z", "T0", "T1")
FIBER_VARS = ("X", "Y", "Z")


@dataclass(frozen=True)
class PencilData:
    """The bihomogeneous quartic pencil over F_q."""

    field: Fq

    def _v(self, name: str, vars=SURFACE_VARS) -> MPoly:
        return MPoly.var(self.field, vars, name)

    def first_member(self, vars=SURFACE_VARS) -> MPoly:
        X, Y, Z = (MPoly.var(self.field, vars, n) for n in ("X", "Y", "Z"))
        return Z**4 + X**2 * Y**2 + X**3 * Z

    def second_member(self, vars=SURFACE_VARS) -> MPoly:
        X, Y, Z = (MPoly.var(self.field, vars, n) for n in ("X", "Y", "Z"))
        return Y**4 + X**2 * Z**2

    def surface_equation(self) -> MPoly:
        T0, T1 = self._v("T0"), self._v("T1")
        return T0 * self.first_member() + T1 * self.second_member()

    def inverse_substitution_vanishes(self) -> bool:
        """Substituting T0 -> Y^4+X^2Z^2, T1 -> Z^4+X^2Y^2+X^3Z kills the equation."""
        eq = self.surface_equation()
        image = eq.subs({"T0": self.second_member(), "T1": self.first_member()})
        return image.is_zero()


def fiber_quartic(field: Fq, c: FqElement) -> MPoly:
    """The fiber over (1 : c): Z^4 + X^2Y^2 + X^3Z + c(Y^4 + X^2Z^2)."""
    data = PencilData(field)
    A = data.first_member(FIBER_VARS)
    B = data.second_member(FIBER_VARS)
    return A + B.scale(c)


def arithmetic_genus_plane_quartic() -> int:
    """Genus-degree formula for a degree-4 plane curve."""
    d = 4
    return (d - 1) * (d - 2) // 2


def projective_plane_points(field: Fq) -> Iterator[dict[str, FqElement]]:
    """Standard representatives of P^2(F_q)."""
    one, zero = field.one, field.zero
    for y in field.elements():
        for z in field.elements():
            yield {"X": one, "Y": y, "Z": z}
    for z in field.elements():
        yield {"X": zero, "Y": one, "Z": z}
    yield {"X": zero, "Y": zero, "Z": one}


def _fourth_root(c: FqElement) -> FqElement:
    return c.sqrt().sqrt()


@dataclass(frozen=True)
class SingularPointReport:
    c: FqElement
    point: tuple[FqElement, FqElement, FqElement]
    multiplicity: int
    unique_over_field: bool


def singular_point_report(field: Fq, c: FqElement) -> SingularPointReport:
    """Locate and measure the singular point (0 : 1 : c^(1/4)) of the fiber.

    Verifies that the point kills the quartic and its first partials, reads
    off the multiplicity after translating to the origin, and confirms by
    exhaustive search that no other F_q-point of the fiber is singular.
    """
    quartic = fiber_quartic(field, c)
    c4 = _fourth_root(c)
    point = {"X": field.zero, "Y": field.one, "Z": c4}
    partials = {n: quartic.partial(n) for n in FIBER_VARS}
    if quartic.eval(point) or any(p.eval(point) for p in partials.values()):
        raise InvariantError("expected singular point is not singular")

    # translate to the origin in the chart Y = 1 and read the lowest degree
    av = ("x", "z")
    x = MPoly.var(field, av, "x")
    z = MPoly.var(field, av, "z")
    chart = MPoly.zero(field, av)
    for (ex, ey, ez), coeff in quartic.terms.items():
        term = MPoly.const(field, av, coeff) * x**ex * (z + MPoly.const(field, av, c4)) ** ez
        chart = chart + term
    multiplicity = chart.min_total_degree()

    others = []
    for candidate in projective_plane_points(field):
        if quartic.eval(candidate):
            continue
        if any(p.eval(candidate) for p in partials.values()):
            continue
        others.append(candidate)
    unique = others == [point]
    return SingularPointReport(
        c=c, point=(point["X"], point["Y"], point["Z"]),
        multiplicity=multiplicity, unique_over_field=unique,
    )


def expected_multiplicity(field: Fq, c: FqElement) -> int:
    return 3 if c**3 == field.one else 2


def strangeness_check(field: Fq) -> bool:
    """All tangent lines pass through (0:1:0): the Y-partial vanishes identically."""
    vars4 = ("X", "Y", "Z", "c")
    X, Y, Z, c = (MPoly.var(field, vars4, n) for n in vars4)
    quartic = Z**4 + X**2 * Y**2 + X**3 * Z + c * (Y**4 + X**2 * Z**2)
    return quartic.partial("Y").is_zero()


def strangeness_char0_control() -> bool:
    """The same partial over the integers is nonzero (2*X^2*Y + 4*c*Y^3)."""
    # exponent tuples (X, Y, Z, c) with integer coefficients
    quartic = {
        (0, 0, 4, 0): 1, (2, 2, 0, 0): 1, (3, 0, 1, 0): 1,
        (0, 4, 0, 1): 1, (2, 0, 2, 1): 1,
    }
    partial = {}
    for (ex, ey, ez, ec), coeff in quartic.items():
        if ey:
            partial[(ex, ey - 1, ez, ec)] = coeff * ey
    return any(partial.values())


def on_fiber_points(field: Fq, c: FqElement) -> list[dict[str, FqElement]]:
    quartic = fiber_quartic(field, c)
    return [p for p in projective_plane_points(field) if not quartic.eval(p)]


def homogeneity_transform_check(
    field: Fq, c: FqElement, point: dict[str, FqElement]
) -> bool:
    """The transformation (x:y:z) -> (x0*x : x0*y + y0*x : x0*z + z0*x).

    For a point on the fiber it fixes the quartic up to the factor x0^4 and
    sends the point itself to (1:0:0).
    """
    x0, y0, z0 = point["X"], point["Y"], point["Z"]
    if not x0:
        raise ValueError("transformation needs x0 != 0")
    quartic = fiber_quartic(field, c)
    X, Y, Z = (MPoly.var(field, FIBER_VARS, n) for n in FIBER_VARS)
    transformed = quartic.subs(
        {
            "X": X.scale(x0),
            "Y": X.scale(y0) + Y.scale(x0),
            "Z": X.scale(z0) + Z.scale(x0),
        }
    )
    if transformed + quartic.scale(x0**4) != MPoly.zero(field, FIBER_VARS):
        return False
    # the image of the sample point is (x0^2 : 0 : 0) = (1:0:0)
    image = (x0 * x0, x0 * y0 + y0 * x0, x0 * z0 + z0 * x0)
    return bool(image[0]) and not image[1] and not image[2]


def homogeneity_sweep(field: Fq, c: FqElement) -> bool:
    """Run the transform check at every non-singular point of the fiber."""
    report = singular_point_report(field, c)
    singular = {report.point}
    ok = True
    for p in on_fiber_points(field, c):
        key = (p["X"], p["Y"], p["Z"])
        if key in singular:
            continue
        # non-singular points all have X != 0 (X = 0 forces the singular point)
        ok = ok and homogeneity_transform_check(field, c, p)
    return ok


def inverse_map_identity_check(field: Fq, samples: int = 50, seed: int = 20240719) -> bool:
    """Symbolic and sampled vanishing of the pencil under its inverse map."""
    data = PencilData(field)
    if not data.inverse_substitution_vanishes():
        return False
    import random

    rng = random.Random(seed)
    eq = data.surface_equation()
    big = Fq(16)
    big_eq = PencilData(big).surface_equation()
    for _ in range(samples):
        point = {
            "X": big.elem(rng.randrange(16)),
            "Y": big.elem(rng.randrange(16)),
            "Z": big.elem(rng.randrange(16)),
        }
        point["T0"] = PencilData(big).second_member().eval(point)
        point["T1"] = PencilData(big).first_member().eval(point)
        if big_eq.eval(point):
            return False
    return True


def bad_fibre_square_check(field: Fq) -> bool:
    """The fiber over (0:1) is (Y^2 + XZ)^2."""
    data = PencilData(field)
    X, Y, Z = (MPoly.var(field, FIBER_VARS, n) for n in FIBER_VARS)
    square = (Y**2 + X * Z) ** 2
    return data.second_member(FIBER_VARS) == square


def nonsmooth_locus_check(field: Fq) -> bool:
    """The singular points sweep the locus X = 0, T0*Z^4 + T1*Y^4 = 0.

    Checks every fiber parameter c in F_q plus the bad-fiber point
    ((0:0:1), (0:1)), and that the locus covers the base by
    (y : z) -> (y^4 : z^4).
    """
    one, zero = field.one, field.zero
    locus_points = []
    for c in field.elements():
        c4 = _fourth_root(c)
        locus_points.append(((zero, one, c4), (one, c)))
    locus_points.append(((zero, zero, one), (zero, one)))
    for (x, y, z), (t0, t1) in locus_points:
        if x:
            return False
        if t0 * z**4 + t1 * y**4:
            return False
        # base image by fourth powers must reproduce the fiber coordinate
        image = (y**4, z**4)
        if image[0] * t1 + image[1] * t0:  # projective equality check
            return False
    return True


# ---------------------------------------------------------------------------
# the dual graph of the resolved degenerate fiber
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DualGraph:
    """Fiber components with multiplicities and transverse intersections."""

    components: tuple[tuple[str, int], ...]
    edges: tuple[tuple[str, str], ...]
    section_name: Optional[str] = None
    section_attaches: tuple[str, ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.components]
        if len(set(names)) != len(names):
            raise InvariantError("duplicate component names")
        mult = dict(self.components)
        if any(m < 1 for m in mult.values()):
            raise InvariantError("multiplicities must be positive")
        for a, b in self.edges:
            if a == b or a not in mult or b not in mult:
                raise InvariantError(f"bad edge ({a}, {b})")
        g = 0
        for m in mult.values():
            g = math.gcd(g, m)
        if g != 1:
            raise InvariantError("gcd of multiplicities must be 1")
        if not self._connected():
            raise InvariantError("dual graph must be connected")
        for a in self.section_attaches:
            if a not in mult:
                raise InvariantError(f"section attaches to unknown component {a!r}")

    def _connected(self) -> bool:
        names = [n for n, _ in self.components]
        adj = {n: set() for n in names}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        seen = {names[0]}
        stack = [names[0]]
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return len(seen) == len(names)

    def multiplicity(self, name: str) -> int:
        return dict(self.components)[name]

    def neighbors(self, name: str) -> list[str]:
        out = []
        for a, b in self.edges:
            if a == name:
                out.append(b)
            elif b == name:
                out.append(a)
        return out


def load_dual_graph(name: str = "a15_fiber") -> DualGraph:
    """Load a bundled dual-graph fixture."""
    payload = resources.files("frobdesc.data").joinpath(f"{name}.json").read_text()
    doc = json.loads(payload)
    section = doc.get("section") or {}
    return DualGraph(
        components=tuple((c["name"], c["multiplicity"]) for c in doc["components"]),
        edges=tuple((a, b) for a, b in doc["edges"]),
        section_name=section.get("name"),
        section_attaches=tuple(section.get("attaches", ())),
    )


def solve_self_intersections(graph: DualGraph) -> dict[str, int]:
    """Self-intersections from zero pairing of the fiber with each component.

    self(i) = -(sum over neighbors j of m_j) / m_i, demanded integral.
    """
    out = {}
    for name, m in graph.components:
        total = sum(graph.multiplicity(nb) for nb in graph.neighbors(name))
        if total % m:
            raise InvariantError(
                f"inconsistent multiplicity data at {name!r}: "
                f"{total} not divisible by {m}"
            )
        out[name] = -(total // m)
    return out


def quadratic_form_value(graph: DualGraph, selfints: dict[str, int]) -> int:
    """fiber . fiber with the solved self-intersections substituted back."""
    total = 0
    for name, m in graph.components:
        total += m * m * selfints[name]
    for a, b in graph.edges:
        total += 2 * graph.multiplicity(a) * graph.multiplicity(b)
    return total


@dataclass(frozen=True)
class ClassificationReport:
    minimal: bool  # no (-1)-component in the fiber
    a15_path: bool  # the (-2)-components other than E form a 15-vertex path
    section_pairing: Optional[int]
    quadratic_form_zero: bool

    @property
    def all_ok(self) -> bool:
        return (
            self.minimal
            and self.a15_path
            and self.quadratic_form_zero
            and (self.section_pairing in (None, 1))
        )


def model_classification_checks(
    graph: DualGraph, excluded: str = "E", path_length: int = 15
) -> ClassificationReport:
    selfints = solve_self_intersections(graph)
    minimal = all(v != -1 for v in selfints.values())

    nodes = [
        n for n, _ in graph.components if n != excluded and selfints[n] == -2
    ]
    node_set = set(nodes)
    degrees = {
        n: sum(1 for nb in graph.neighbors(n) if nb in node_set) for n in nodes
    }
    is_path = (
        len(nodes) == path_length
        and sorted(degrees.values()).count(1) == 2
        and all(d <= 2 for d in degrees.values())
        and _subgraph_connected(graph, node_set)
    )

    pairing = None
    if graph.section_name is not None:
        pairing = sum(graph.multiplicity(a) for a in graph.section_attaches)

    return ClassificationReport(
        minimal=minimal,
        a15_path=is_path,
        section_pairing=pairing,
        quadratic_form_zero=quadratic_form_value(graph, selfints) == 0,
    )


def _subgraph_connected(graph: DualGraph, nodes: set[str]) -> bool:
    if not nodes:
        return True
    adj = {n: [] for n in nodes}
    for a, b in graph.edges:
        if a in nodes and b in nodes:
            adj[a].append(b)
            adj[b].append(a)
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        for nxt in adj[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen == nodes


# ---------------------------------------------------------------------------
# the diophantine search for further rational points
# ---------------------------------------------------------------------------

DIOPHANTINE_DEGREE_GUARD = 6
DIOPHANTINE_FIELD_GUARD = 4


@dataclass(frozen=True)
class DiophantineInstance:
    """Search space for F^4 g^2 = G^4 f (g + t f) over F_q[t], deg <= D."""

    degree_bound: int
    q: int

    def __post_init__(self):
        if self.degree_bound > DIOPHANTINE_DEGREE_GUARD:
            raise GuardError(f"degree bound guarded to {DIOPHANTINE_DEGREE_GUARD}")
        if self.q > DIOPHANTINE_FIELD_GUARD:
            raise GuardError(f"field size guarded to q <= {DIOPHANTINE_FIELD_GUARD}")


Solution = tuple[Poly1, Poly1, Poly1, Poly1]  # (f, g, F, G)


def identity_residual(f: Poly1, g: Poly1, F: Poly1, G: Poly1) -> Poly1:
    """F^4 g^2 + G^4 f (g + t f); zero exactly on solutions (char 2)."""
    t = Poly1.gen(f.field)
    return F**4 * g**2 + G**4 * f * (g + t * f)


def _all_polys(field: Fq, max_deg: int, monic: bool = False) -> Iterator[Poly1]:
    """All nonzero polynomials of degree <= max_deg (monic ones if asked)."""
    for deg in range(max_deg + 1):
        lead = [field.one] if monic else [c for c in field.elements() if c]
        lower = itertools.product(*(field.elements() for _ in range(deg)))
        for tail in lower:
            for lc in lead:
                yield Poly1(field, tuple(tail) + (lc,))


def _fourth_root_poly(w: Poly1) -> Optional[Poly1]:
    s = w.sqrt()
    if s is None:
        return None
    return s.sqrt()


def diophantine_search(instance: DiophantineInstance) -> list[Solution]:
    """All coprime solutions within the degree bound; expected empty.

    The enumeration uses consequences of the identity as pruning: G^4 | g^2
    forces g = G^2 g', coprimality forces f to be a fourth power f'^4 and
    F = f' F', and the residual relation determines F'^4 = (G^2 g' + t f'^4)
    / g'^2.  Every solution arises this way after scaling (F, G) by a
    common unit, so searching G monic loses nothing; reconstructed tuples
    are verified against the original identity before being reported.
    """
    field = Fq(instance.q)
    D = instance.degree_bound
    t = Poly1.gen(field)
    solutions: list[Solution] = []
    seen = set()
    for f_root in _all_polys(field, D // 4):
        f = f_root**4
        if f.deg > D:
            continue
        tf4 = t * f
        for G in _all_polys(field, D // 2, monic=True):
            G2 = G * G
            if G2.deg > D:
                continue
            for g_prime in _all_polys(field, D - G2.deg):
                g = G2 * g_prime
                if Poly1.gcd(f, g).deg != 0:
                    continue
                numerator = G2 * g_prime + tf4
                if numerator.is_zero():
                    continue
                quotient, rem = divmod(numerator, g_prime * g_prime)
                if not rem.is_zero():
                    continue
                F_prime = _fourth_root_poly(quotient)
                if F_prime is None:
                    continue
                F = f_root * F_prime
                if F.is_zero() or F.deg > D or g.deg > D:
                    continue
                if Poly1.gcd(F, G).deg != 0:
                    continue
                if not identity_residual(f, g, F, G).is_zero():
                    continue
                key = (f, g, F, G)
                if key not in seen:
                    seen.add(key)
                    solutions.append(key)
    return solutions


def diophantine_brute_force(instance: DiophantineInstance) -> list[Solution]:
    """Unpruned full enumeration; only feasible for tiny bounds (oracle)."""
    field = Fq(instance.q)
    D = instance.degree_bound
    if instance.q ** (D + 1) > 40:
        raise GuardError("brute force restricted to tiny search spaces")
    polys = list(_all_polys(field, D))
    out = []
    for f, g in itertools.product(polys, repeat=2):
        if Poly1.gcd(f, g).deg != 0:
            continue
        for F, G in itertools.product(polys, repeat=2):
            if Poly1.gcd(F, G).deg != 0:
                continue
            if identity_residual(f, g, F, G).is_zero():
                out.append((f, g, F, G))
    return out
