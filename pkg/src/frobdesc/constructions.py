"""Towers attaining the sharp rationality bound, for every target degree.

Two families over K = F_q(t), both with bottom K(x) and the zero of x as
designated prime:

* family A, parameters i > j >= 0 and l >= 0: a pure-Frobenius inert segment
  of length j+1, a ramified segment certified by iterated squares of y, and
  a top inert level; singularity degree 2^j + ... + 2^i + l * 2^(j+1).
* family B, parameter i >= 0: an inert segment of length i+1 and one
  ramified top level; singularity degree 2^i.

``decompose_target`` writes any d >= 1 as one of these shapes so that the
constructed tower resolves exactly at the bound level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .combinatorics import (
    consecutive_run_of,
    power_run_value,
    separability_bound,
    tau_closed,
    v_p,
)
from .errors import GuardError, InvariantError
from .tower import INERT, RAMIFIED, TowerLevel, TowerSpec, TowerTrace, analyze

SIZE_GUARD_I = 8
SWEEP_GUARD = 40


@dataclass(frozen=True)
class FamilyAParams:
    i: int
    j: int
    l: int

    def __post_init__(self):
        if not (self.i > self.j >= 0 and self.l >= 0):
            raise ValueError("family A needs i > j >= 0 and l >= 0")

    def target_delta(self) -> int:
        return power_run_value(2, self.j, self.i) + self.l * (1 << (self.j + 1))

    def predicted_resolution_level(self) -> int:
        return self.i + 2


@dataclass(frozen=True)
class FamilyBParams:
    i: int

    def __post_init__(self):
        if self.i < 0:
            raise ValueError("family B needs i >= 0")

    def target_delta(self) -> int:
        return 1 << self.i

    def predicted_resolution_level(self) -> int:
        return self.i + 2


FamilyParams = Union[FamilyAParams, FamilyBParams]


def _frobenius_chain(base: str, count: int, start_level: int, top_relation: str):
    """Inert levels adjoining base, base^2, ...; deepest one squares to
    ``top_relation``, each higher one to the generator below it."""
    levels = []
    below = None
    for k in range(count):
        n = start_level - k  # deepest first
        name = base if count == 1 or k == count - 1 else f"{base}{1 << (count - 1 - k)}"
        relation = top_relation if k == 0 else below
        levels.append(TowerLevel(n, name, relation, INERT, name))
        below = name
    return levels


def build_family_A(params: FamilyAParams) -> TowerSpec:
    """Tower for family A; bottom variable x, prime the zero of x."""
    i, j, l = params.i, params.j, params.l
    if i > SIZE_GUARD_I:
        raise GuardError(f"family A guarded to i <= {SIZE_GUARD_I}")
    levels: list[TowerLevel] = []
    # inert pure-Frobenius segment: z, z^2, ..., z^(2^j) at levels i-j+1 .. i+1
    levels += _frobenius_chain("z", j + 1, start_level=i + 1, top_relation="x + t")
    # ramified segment: y^(2^(n-1)) at levels 1 .. i-j, local parameters
    for n in range(i - j, 0, -1):
        name = "y" if n == 1 else f"y{1 << (n - 1)}"
        # the square is y^(2^n): the generator above, except at the segment top
        relation = "x * z" if n == i - j else f"y{1 << n}"
        levels.append(TowerLevel(n, name, relation, RAMIFIED, name))
    # top inert level
    exponent = 1 + 2 * l
    top_rel = "z + y" if exponent == 1 else f"z + y^{exponent}"
    levels.append(TowerLevel(0, "u", top_rel, INERT, "u"))
    return TowerSpec(
        q=2,
        bottom_var="x",
        bottom_prime="x",
        levels=tuple(levels),
        expected={
            "delta_0": params.target_delta(),
            "first_rational_level": params.predicted_resolution_level(),
        },
    )


def build_family_B(params: FamilyBParams) -> TowerSpec:
    """Tower for family B; for i = 0 this is the quasi-elliptic shape."""
    i = params.i
    if i > SIZE_GUARD_I:
        raise GuardError(f"family B guarded to i <= {SIZE_GUARD_I}")
    levels = _frobenius_chain("z", i + 1, start_level=i + 1, top_relation="x + t")
    levels.append(TowerLevel(0, "y", "x * z", RAMIFIED, "y"))
    return TowerSpec(
        q=2,
        bottom_var="x",
        bottom_prime="x",
        levels=tuple(levels),
        expected={
            "delta_0": params.target_delta(),
            "first_rational_level": params.predicted_resolution_level(),
        },
    )


def build(params: FamilyParams) -> TowerSpec:
    if isinstance(params, FamilyAParams):
        return build_family_A(params)
    return build_family_B(params)


def decompose_target(d: int) -> FamilyParams:
    """Family parameters whose tower has singularity degree exactly d.

    Runs 2^j + ... + 2^i give family A with l = 0 (or family B when the run
    is a single power).  Otherwise j = v_2(d) works: with i determined by
    1 + ... + 2^(i-1) < d < 1 + ... + 2^i, a non-run d cannot be divisible
    by 2^(i-1), so j <= i-2 and l = (d - (2^j + ... + 2^(i-1))) / 2^(j+1).
    """
    if d < 1:
        raise ValueError("d must be positive")
    run = consecutive_run_of(d, 2)
    if run is not None:
        j, i = run
        if j == i:
            return FamilyBParams(i=i)
        return FamilyAParams(i=i, j=j, l=0)
    i, total = 0, 1
    while total < d:
        i += 1
        total = total * 2 + 1
    j = v_p(d, 2)
    if j > i - 2:
        raise InvariantError(f"decomposition failed for d = {d}")  # unreachable
    base = power_run_value(2, j, i - 1)
    if d < base or (d - base) % (1 << (j + 1)):
        raise InvariantError(f"decomposition failed for d = {d}")  # unreachable
    return FamilyAParams(i=i - 1, j=j, l=(d - base) >> (j + 1))


@dataclass(frozen=True)
class SweepRow:
    d: int
    family: str
    params: str
    delta_0: int
    first_rational_level: int
    bound_level: int
    degree_before: int
    ok: bool


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]

    @property
    def all_ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def render(self) -> str:
        lines = [f"{'d':>4} {'family':>8} {'params':>14} {'delta':>6} "
                 f"{'level':>6} {'bound':>6} {'ok':>4}"]
        for r in self.rows:
            lines.append(
                f"{r.d:>4} {r.family:>8} {r.params:>14} {r.delta_0:>6} "
                f"{r.first_rational_level:>6} {r.bound_level:>6} "
                f"{'ok' if r.ok else 'FAIL':>4}"
            )
        lines.append(f"{len(self.rows)} targets, all ok: {self.all_ok}")
        return "\n".join(lines)


def sweep_one(d: int) -> SweepRow:
    """Build, analyze and check the constructed tower for one target."""
    params = decompose_target(d)
    trace: TowerTrace = analyze(build(params))
    bound = separability_bound(d, 1, 2).bound_level
    frl = trace.certificates.first_rational_level
    ok = (
        trace.levels[0].delta == d
        and frl == bound == tau_closed(2 * d, 2)
        and trace.levels[frl - 1].degree == 2
    )
    family = "A" if isinstance(params, FamilyAParams) else "B"
    if not ok:
        raise InvariantError(
            f"sharpness sweep failed at d = {d}: delta {trace.deltas}, "
            f"level {frl}, bound {bound}, degrees {trace.degrees}"
        )
    return SweepRow(
        d=d,
        family=family,
        params=str(params),
        delta_0=trace.levels[0].delta,
        first_rational_level=frl,
        bound_level=bound,
        degree_before=trace.levels[frl - 1].degree,
        ok=ok,
    )


def sharpness_sweep(d_max: int, jobs: int = 1) -> SweepReport:
    """Check bound attainment for every d = 1 .. d_max (guarded to 40)."""
    if d_max > SWEEP_GUARD:
        raise GuardError(f"sweep guarded to d_max <= {SWEEP_GUARD}")
    targets = range(1, d_max + 1)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = tuple(pool.map(sweep_one, targets))
    else:
        rows = tuple(sweep_one(d) for d in targets)
    return SweepReport(rows)
