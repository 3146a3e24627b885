"""Characteristic-2 engine for towers of square-root field adjunctions.

A tower description gives a rational bottom field K(x) with a designated
degree-1 prime and, above it, levels n = N-1 ... 0 that each adjoin one
generator g_n subject to g_n^2 = r_n, where r_n is an expression in the
generators of deeper levels and t.  Level n corresponds to the field F_n,
with F_{n+1} the square-pullback K * F_n^2 of F_n.

All arithmetic happens through *shadows*: the level-n shadow of an element
e of F_n is e^(2^(N-n)), an element of the bottom field K(x).  Squaring is a
ring homomorphism in characteristic 2, so shadows of expressions are the
expressions in the shadows.

Each step carries a witness, an input that is verified rather than
discovered:

* a ramified step certifies a local parameter: its value at the level's
  prime must have valuation exactly 1;
* an inert step certifies a residue generator: its value at the prime must
  generate a residue field twice as large as the one below.

Singularity degrees come from the differential recursion
``delta_n = 2 * delta_{n+1} + order/2`` driven by the order of
d(shadow of the witness) at the bottom prime; a nonnegative even order is
required, and an inadmissible step falls back to squeezing delta between the
decay bound and a caller-supplied genus.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import expr as ex
from .combinatorics import BoundReport, separability_bound
from .curve import (
    INFINITY,
    LINEAR,
    RationalPrime,
    differential_order,
    differentiate,
    residue,
    valuation,
)
from .errors import (
    ElaborationError,
    InfeasibleError,
    InvariantError,
    WitnessRejected,
)
from .fields import BivarRational, Fq, PerfectedScalar, is_pth_power

RAMIFIED = "ramified"
INERT = "inert"

METHOD_RATIONAL_LEVEL = "rational_level"
METHOD_RECURSION = "recursion"
METHOD_FALLBACK = "constraint_fallback"
METHOD_UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class TowerLevel:
    n: int
    gen: str
    square: str  # expression for gen^2 in deeper generators and t
    step_kind: str  # RAMIFIED or INERT
    witness: str  # expression in generators of levels >= n


@dataclass(frozen=True)
class TowerSpec:
    """Declarative tower; relations and witnesses are expression strings."""

    q: int
    bottom_var: str
    bottom_prime: str  # "inf" or an expression for a monic linear polynomial
    levels: tuple[TowerLevel, ...]
    genus_hint: Optional[int] = None
    expected: Optional[dict] = None
    p: int = 2

    @property
    def depth(self) -> int:
        """N: the bottom field sits at level N."""
        return len(self.levels)

    def level(self, n: int) -> TowerLevel:
        for lv in self.levels:
            if lv.n == n:
                return lv
        raise KeyError(n)

    def validate(self) -> None:
        if self.p != 2:
            raise ElaborationError("engine restriction: p must be 2")
        ns = sorted(lv.n for lv in self.levels)
        if ns != list(range(len(self.levels))):
            raise ElaborationError(f"levels must be contiguous 0..N-1, got {ns}")
        names = [lv.gen for lv in self.levels]
        if len(set(names)) != len(names):
            raise ElaborationError("generator names must be distinct")
        for lv in self.levels:
            if lv.gen in ("t", self.bottom_var):
                raise ElaborationError(f"generator {lv.gen!r} shadows a base symbol")
            if lv.step_kind not in (RAMIFIED, INERT):
                raise ElaborationError(f"unknown step kind {lv.step_kind!r}")


@dataclass(frozen=True)
class ShadowElement:
    """A level-n element represented by its 2^(N-n)-th power in K(x)."""

    level: int
    rep: BivarRational


class Elaboration:
    """Shadow environments for every level of a validated tower."""

    def __init__(self, spec: TowerSpec):
        spec.validate()
        self.spec = spec
        self.field = Fq(spec.q)
        self.N = spec.depth
        self.bottom_prime = parse_bottom_prime(self.field, spec.bottom_var, spec.bottom_prime)
        self._build()

    def _build(self) -> None:
        field, N = self.field, self.N
        env: dict[str, BivarRational] = {
            self.spec.bottom_var: BivarRational.var_x(field),
            "t": BivarRational.var_t(field),
        }
        self.envs: dict[int, dict[str, BivarRational]] = {N: dict(env)}
        self.gen_rep: dict[int, BivarRational] = {}
        for n in range(N - 1, -1, -1):
            lv = self.spec.level(n)
            ast = _parse_in_context(lv.square, f"relation at level {n}")
            for name in ex.free_variables(ast):
                if name not in env:
                    raise ElaborationError(
                        f"relation at level {n} uses undefined symbol {name!r}"
                    )
            rep = ex.evaluate(ast, env, field)
            if rep.is_zero():
                raise ElaborationError(f"generator {lv.gen!r} at level {n} squares to zero")
            # one Frobenius step down: every known shadow gets squared
            env = {name: value.square() for name, value in env.items()}
            env[lv.gen] = rep
            self.envs[n] = dict(env)
            self.gen_rep[n] = rep

    def shadow(self, text: str, n: int) -> ShadowElement:
        """Shadow of an expression formed at level n."""
        ast = _parse_in_context(text, f"expression at level {n}")
        return ShadowElement(n, ex.evaluate(ast, self.envs[n], self.field))


def _parse_in_context(text: str, where: str):
    try:
        return ex.parse(text)
    except ex.ParseError as err:
        raise ElaborationError(f"{where}: {err}") from err


def parse_bottom_prime(field: Fq, var: str, text: str) -> RationalPrime:
    """Interpret the bottom-prime description: "inf" or a monic linear polynomial."""
    if text.strip() in ("inf", "infinity"):
        return RationalPrime.infinity(field)
    ast = _parse_in_context(text, "bottom prime")
    names = ex.free_variables(ast)
    if not names <= {var, "t"}:
        raise ElaborationError(f"bottom prime may only use {var!r} and 't'")
    value = ex.evaluate(
        ast,
        {var: BivarRational.var_x(field), "t": BivarRational.var_t(field)},
        field,
    )
    if value.den.deg_x != 0 or value.num.deg_x != 1:
        raise ElaborationError(
            "bottom prime must be rational: the infinite place or a linear polynomial"
        )
    # the prime of a*(x + b), a in K^*, is the zero of x + b
    from .fields import Poly1, Rat1

    cols = value.num.x_coeffs()
    b = Rat1.make(cols.get(0, Poly1.zero(field)), cols[1])
    return RationalPrime.linear(b)


@dataclass(frozen=True)
class StepResult:
    e: int
    f: int
    m: int  # residue inseparability level: residue field is K(t^(1/2^m))
    residue_repr: Optional[str] = None


def tower_valuation(
    elab: Elaboration, shadow: ShadowElement, e_factors: dict[int, int]
) -> int:
    """Valuation of a level-n element at its level's prime.

    ``e_factors`` must contain the ramification index of every step from
    level n down to the bottom.  The value is
    prod(e) * v_bottom(rep) / 2^(N-n) and must come out an integer.
    """
    n = shadow.level
    if shadow.rep.is_zero():
        raise ZeroDivisionError("valuation of zero is undefined")
    prod = 1
    for k in range(n, elab.N):
        prod *= e_factors[k]
    v = Fraction(prod * valuation(shadow.rep, elab.bottom_prime), 1 << (elab.N - n))
    if v.denominator != 1:
        raise InvariantError(
            f"ramification profile inconsistent with element at level {n}: "
            f"valuation {v} is not an integer"
        )
    return int(v)


def verify_step(
    elab: Elaboration, n: int, e_below: dict[int, int], m_next: int
) -> StepResult:
    """Check the witness claim for the step from level n+1 up to level n."""
    lv = elab.spec.level(n)
    w = elab.shadow(lv.witness, n)
    if lv.step_kind == RAMIFIED:
        e_factors = dict(e_below)
        e_factors[n] = 2
        v = tower_valuation(elab, w, e_factors)
        if v != 1:
            raise WitnessRejected(
                f"witness rejected at level {n}: claimed local parameter has "
                f"valuation {v}, expected 1"
            )
        return StepResult(e=2, f=1, m=m_next)
    # inert: the witness residue must generate the doubled residue field
    v_bottom = valuation(w.rep, elab.bottom_prime)
    if v_bottom < 0:
        raise WitnessRejected(
            f"witness rejected at level {n}: inert witness has a pole "
            f"(bottom valuation {v_bottom})"
        )
    rho = residue(w.rep, elab.bottom_prime).root(elab.N - n)
    degree = rho.degree_over_base()
    wanted = 1 << (m_next + 1)
    if degree != wanted:
        raise WitnessRejected(
            f"witness rejected at level {n}: residue {rho.render()} generates "
            f"a field of degree {degree}, expected {wanted}"
        )
    return StepResult(e=1, f=2, m=m_next + 1, residue_repr=rho.render())


def delta_recursion_step(
    elab: Elaboration, n: int, delta_next: int
) -> Optional[int]:
    """delta_n from the differential recursion, or None when inadmissible.

    Differentiates the bottom shadow of the level's witness; a nonnegative
    even order o at the bottom prime yields 2 * delta_next + o/2.
    """
    lv = elab.spec.level(n)
    w = elab.shadow(lv.witness, n)
    omega = differentiate(w.rep)
    if omega.is_zero():
        return None
    order = differential_order(omega, elab.bottom_prime)
    if order < 0 or order % 2:
        return None
    return 2 * delta_next + order // 2


@dataclass(frozen=True)
class FallbackResult:
    lower: int
    upper: int

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.lower == self.upper else None


def delta_constraint_fallback(
    delta_next: int, drop_next: int, genus_hint: int, p: int = 2
) -> FallbackResult:
    """Squeeze delta_n between the decay bound and the genus.

    lower = delta_next + p * drop_next comes from the per-step decay
    Delta_{n+1} <= Delta_n / p; upper is the genus.  Only a pinched interval
    resolves to a value.
    """
    lower = delta_next + p * drop_next
    upper = genus_hint
    if lower > upper:
        raise InfeasibleError(
            f"constraint system infeasible: lower bound {lower} exceeds genus {upper}"
        )
    return FallbackResult(lower, upper)


@dataclass(frozen=True)
class LevelRecord:
    n: int
    degree: int
    m: int  # residue field K(t^(1/2^m))
    rational: bool
    e: Optional[int]  # step data over level n+1; None at the bottom
    f: Optional[int]
    delta: Optional[int]  # None above an unresolved level
    drop: Optional[int]  # Delta_n = delta_n - delta_{n+1}; None at the bottom
    method: str
    residue_repr: Optional[str] = None


@dataclass(frozen=True)
class Certificates:
    non_decomposed: bool
    gcd_drop: Optional[int]
    first_rational_level: int
    d_prime: Optional[int]
    bound_level: Optional[int]
    attains_bound: Optional[bool]
    unresolved: bool
    unresolved_note: Optional[str] = None


@dataclass(frozen=True)
class TowerTrace:
    q: int
    p: int
    depth: int  # N
    levels: tuple[LevelRecord, ...]  # indexed n = 0 .. N
    certificates: Certificates
    genus_hint: Optional[int] = None

    def record(self, n: int) -> LevelRecord:
        return self.levels[n]

    @property
    def deltas(self) -> tuple[Optional[int], ...]:
        return tuple(r.delta for r in self.levels)

    @property
    def drops(self) -> tuple[Optional[int], ...]:
        return tuple(r.drop for r in self.levels[:-1])

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(r.degree for r in self.levels)


def analyze(spec: TowerSpec) -> TowerTrace:
    """Elaborate, verify every step, compute all invariants and certificates."""
    elab = Elaboration(spec)
    N = elab.N

    # the bottom prime of the rational field is non-singular and rational
    records: dict[int, LevelRecord] = {
        N: LevelRecord(
            n=N, degree=1, m=0, rational=True, e=None, f=None,
            delta=0, drop=None, method=METHOD_RATIONAL_LEVEL,
        )
    }

    e_factors: dict[int, int] = {}
    deltas: dict[int, Optional[int]] = {N: 0}
    unresolved_note = None

    for n in range(N - 1, -1, -1):
        lv = spec.level(n)
        if is_pth_power(elab.gen_rep[n], 2) is not None:
            raise ElaborationError(
                f"degenerate level {n}: generator {lv.gen!r} already lies in the "
                "field below (its shadow is a square)"
            )
        step = verify_step(elab, n, e_factors, records[n + 1].m)
        e_factors[n] = step.e
        degree = records[n + 1].degree * step.f

        delta_next = deltas[n + 1]
        delta: Optional[int]
        method = METHOD_RECURSION
        if delta_next is None:
            delta = None
            method = METHOD_UNRESOLVED
        else:
            delta = delta_recursion_step(elab, n, delta_next)
            if delta is None:
                drop_next = 0 if n + 1 == N else delta_next - deltas[n + 2]
                if spec.genus_hint is None:
                    method = METHOD_UNRESOLVED
                    unresolved_note = (
                        f"level {n}: recursion inadmissible and no genus hint given"
                    )
                else:
                    result = delta_constraint_fallback(
                        delta_next, drop_next, spec.genus_hint
                    )
                    if result.value is None:
                        method = METHOD_UNRESOLVED
                        unresolved_note = (
                            f"level {n}: constraints pin delta only to "
                            f"[{result.lower}, {result.upper}]"
                        )
                    else:
                        delta = result.value
                        method = METHOD_FALLBACK
        deltas[n] = delta
        records[n] = LevelRecord(
            n=n, degree=degree, m=step.m, rational=degree == 1,
            e=step.e, f=step.f, delta=delta, drop=None, method=method,
            residue_repr=step.residue_repr,
        )

    # fill the per-level singularity drops
    for n in range(N):
        rec = records[n]
        drop = None
        if rec.delta is not None and records[n + 1].delta is not None:
            drop = rec.delta - records[n + 1].delta
        records[n] = dataclasses.replace(rec, drop=drop)

    levels = tuple(records[n] for n in range(N + 1))
    trace = TowerTrace(
        q=spec.q, p=2, depth=N, levels=levels,
        certificates=_certificates(levels, unresolved_note),
        genus_hint=spec.genus_hint,
    )
    check_trace_invariants(trace)
    _check_expected(spec, trace)
    return trace


def _certificates(levels: tuple[LevelRecord, ...], note: Optional[str]) -> Certificates:
    N = len(levels) - 1
    drops = [r.drop for r in levels[:-1]]
    unresolved = any(r.delta is None for r in levels)
    first_rational = min(n for n in range(N + 1) if levels[n].degree == 1)
    gcd_drop = None
    d_prime = None
    bound_level = None
    attains = None
    if not unresolved:
        gcd_drop = 0
        for d in drops:
            gcd_drop = math.gcd(gcd_drop, d)
        delta0 = levels[0].delta
        if delta0 > 0:
            report: BoundReport = separability_bound(delta0, 1, 2)
            d_prime = report.d_prime
            bound_level = report.bound_level
            attains = first_rational == bound_level
    return Certificates(
        non_decomposed=True,  # the bottom prime is rational by construction
        gcd_drop=gcd_drop,
        first_rational_level=first_rational,
        d_prime=d_prime,
        bound_level=bound_level,
        attains_bound=attains,
        unresolved=unresolved,
        unresolved_note=note,
    )


def check_trace_invariants(trace: TowerTrace) -> None:
    """The per-level laws every trace must satisfy; violations fail loudly."""
    N = trace.depth
    levels = trace.levels
    if levels[N].degree != 1 or levels[N].delta != 0:
        raise InvariantError("bottom level must be rational with delta 0")
    for n in range(N):
        rec = levels[n]
        if rec.e * rec.f != 2:
            raise InvariantError(f"e*f != 2 at level {n}")
        if rec.degree != rec.f * levels[n + 1].degree:
            raise InvariantError(f"degree law violated at level {n}")
        if rec.delta is None:
            continue
        nxt = levels[n + 1].delta
        if nxt is None:
            raise InvariantError(f"resolved level {n} above unresolved level {n + 1}")
        if rec.delta < nxt:
            raise InvariantError(f"delta must be non-decreasing upward at level {n}")
        if rec.drop != rec.delta - nxt:
            raise InvariantError(f"drop mismatch at level {n}")
        if (2 * rec.drop) % levels[n + 1].degree:
            raise InvariantError(
                f"degree divisibility violated at level {n}: "
                f"deg {levels[n + 1].degree} does not divide 2*Delta = {2 * rec.drop}"
            )
    # geometric decay of the drops
    for n in range(N - 1):
        a, b = levels[n].drop, levels[n + 1].drop
        if a is not None and b is not None and 2 * b > a:
            raise InvariantError(f"drop decay violated between levels {n} and {n + 1}")
    # delta summation (telescoping; asserted explicitly)
    if not trace.certificates.unresolved:
        for n in range(N + 1):
            total = sum(levels[k].drop for k in range(n, N))
            if levels[n].delta != total:
                raise InvariantError(f"delta summation violated at level {n}")


def _check_expected(spec: TowerSpec, trace: TowerTrace) -> None:
    if not spec.expected:
        return
    got = {
        "delta_0": trace.levels[0].delta,
        "first_rational_level": trace.certificates.first_rational_level,
        "degree_0": trace.levels[0].degree,
    }
    for key, want in spec.expected.items():
        if key not in got:
            raise InvariantError(f"unknown expected-invariant key {key!r}")
        if got[key] != want:
            raise InvariantError(
                f"expected invariant {key} = {want}, computed {got[key]}"
            )


@dataclass(frozen=True)
class GenusDropResult:
    ok: bool
    details: str

    def __bool__(self) -> bool:
        return self.ok


def genus_drop_check(trace: TowerTrace, g: int, g_bar: int) -> GenusDropResult:
    """Check g - g_bar against delta_0, assuming the traced prime is the only
    singular one; for p > 2 the drop must also be a multiple of (p-1)/2."""
    delta0 = trace.levels[0].delta
    if delta0 is None:
        return GenusDropResult(False, "trace is unresolved")
    drop = g - g_bar
    if drop != delta0:
        return GenusDropResult(
            False, f"genus drop {drop} does not match delta_0 = {delta0}"
        )
    if trace.p > 2 and (2 * drop) % (trace.p - 1):
        return GenusDropResult(False, f"drop {drop} not a multiple of (p-1)/2")
    return GenusDropResult(True, f"genus drop {drop} accounted for by delta_0")
