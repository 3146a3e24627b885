"""Integer combinatorics of geometric-decay partitions.

A partition d = d_1 + ... + d_s is admissible for the prime p when each part
is at most a p-th of its predecessor (p * d_{i+1} <= d_i).  The level
function tau_p(d) is the maximum of s + min_i v_p(d_i) over admissible
partitions; its value is governed by whether d is a sum of consecutive
p-powers p^j + ... + p^i.

Everything here is exact integer arithmetic: p-power comparisons are done by
repeated multiplication, never through floating-point logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import GuardError, InvariantError

BRUTE_FORCE_GUARD = 10_000


def _check_prime(p: int) -> None:
    if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        raise ValueError(f"p must be prime, got {p}")


def v_p(n: int, p: int) -> int:
    """Exponent of the largest p-power dividing n >= 1."""
    _check_prime(p)
    if n <= 0:
        raise ValueError("valuation undefined for n <= 0")
    v = 0
    while n % p == 0:
        v += 1
        n //= p
    return v


def power_run_value(p: int, j: int, i: int) -> int:
    """p^j + p^(j+1) + ... + p^i."""
    if not 0 <= j <= i:
        raise ValueError("need 0 <= j <= i")
    return (p ** (i + 1) - p**j) // (p - 1)


@dataclass(frozen=True)
class PPowerRun:
    """A run of consecutive p-powers, p^j + ... + p^i."""

    p: int
    j: int
    i: int

    def __post_init__(self):
        _check_prime(self.p)
        if not 0 <= self.j <= self.i:
            raise ValueError("need 0 <= j <= i")

    def value(self) -> int:
        return power_run_value(self.p, self.j, self.i)


@dataclass(frozen=True)
class AdmissiblePartition:
    """Partition with geometric decay: p * d_{i+1} <= d_i for consecutive parts."""

    p: int
    parts: tuple[int, ...]

    def __post_init__(self):
        _check_prime(self.p)
        if not self.parts or any(d < 1 for d in self.parts):
            raise ValueError("parts must be positive and nonempty")
        for a, b in zip(self.parts, self.parts[1:]):
            if self.p * b > a:
                raise ValueError(f"decay violated: {b} > {a}/{self.p}")

    def total(self) -> int:
        return sum(self.parts)

    def score(self) -> int:
        return len(self.parts) + min(v_p(d, self.p) for d in self.parts)


def consecutive_run_of(d: int, p: int) -> Optional[tuple[int, int]]:
    """The unique (j, i) with p^j + ... + p^i = d, or None."""
    _check_prime(p)
    if d < 1:
        raise ValueError("d must be positive")
    pj = 1
    j = 0
    while pj <= d:
        value, term, i = pj, pj, j
        while value < d:
            term *= p
            value += term
            i += 1
        if value == d:
            return (j, i)
        pj *= p
        j += 1
    return None


def tau_closed(d: int, p: int) -> int:
    """Closed form of the partition level function.

    Returns i+1 when d is the run p^j + ... + p^i, else the unique i with
    1 + p + ... + p^(i-1) < d < 1 + p + ... + p^i.
    """
    _check_prime(p)
    if d < 1:
        raise ValueError("d must be positive")
    run = consecutive_run_of(d, p)
    if run is not None:
        return run[1] + 1
    i, total = 0, 1  # total = 1 + p + ... + p^i
    while total < d:
        i += 1
        total = total * p + 1
    return i


def tau_bruteforce(d: int, p: int) -> int:
    """Exhaustive maximization over admissible partitions of d.

    Enumerates parts in non-increasing order, pruning continuations that
    cannot reach the remaining sum under the decay constraint.  Guarded to
    d <= 10^4 to keep the recursion bounded.
    """
    _check_prime(p)
    if d < 1:
        raise ValueError("d must be positive")
    if d > BRUTE_FORCE_GUARD:
        raise GuardError(f"brute-force enumeration guarded to d <= {BRUTE_FORCE_GUARD}")

    def vp(n: int) -> int:
        v = 0
        while n % p == 0:
            v += 1
            n //= p
        return v

    def reach(cap: int) -> int:
        # Largest total a partition with first part <= cap can achieve.
        total = 0
        while cap:
            total += cap
            cap //= p
        return total

    def max_parts(cap: int) -> int:
        k = 0
        while cap:
            k += 1
            cap //= p
        return k

    best = 0

    def rec(remaining: int, cap: int, count: int, minv: int) -> None:
        nonlocal best
        for part in range(min(cap, remaining), 0, -1):
            rest = remaining - part
            nxt = part // p
            if rest > reach(nxt):
                continue
            m = min(minv, vp(part))
            if rest == 0:
                if count + 1 + m > best:
                    best = count + 1 + m
            elif count + 1 + max_parts(nxt) + m > best:
                # upper bound: future parts can add at most max_parts(nxt)
                # to the count and the minimum valuation never grows
                rec(rest, nxt, count + 1, m)

    rec(d, d, 0, 10**6)
    return best


@dataclass(frozen=True)
class BoundReport:
    """Outcome of the rationality/separability level bound for one prime."""

    p: int
    delta: int
    sep: int
    d_prime: int
    bound_level: int
    consecutive_run: Optional[tuple[int, int]]

    @property
    def improved_case(self) -> bool:
        """True when d' is not a run of consecutive p-powers (the -1 case)."""
        return self.consecutive_run is None


def separability_bound(delta: int, sep: int, p: int) -> BoundReport:
    """Level from which the restricted prime is guaranteed separable/rational.

    ``delta`` is the geometric singularity degree, ``sep`` the separable
    residue degree.  Requires (p-1)/2 | delta for p > 2 and
    sep | (2/(p-1)) * delta; the bound is tau_p of d' = (2/(p-1)) * delta / sep.
    """
    _check_prime(p)
    if delta < 1 or sep < 1:
        raise ValueError("delta and sep must be >= 1")
    if p > 2:
        if (2 * delta) % (p - 1):
            raise InvariantError(
                f"(p-1)/2 = {(p - 1) // 2} must divide delta = {delta} "
                "(singularity degrees are multiples of (p-1)/2)"
            )
        two_over = 2 * delta // (p - 1)
    else:
        two_over = 2 * delta
    if two_over % sep:
        raise InvariantError(
            f"separable residue degree {sep} must divide (2/(p-1))*delta = {two_over}"
        )
    d_prime = two_over // sep
    return BoundReport(
        p=p,
        delta=delta,
        sep=sep,
        d_prime=d_prime,
        bound_level=tau_closed(d_prime, p),
        consecutive_run=consecutive_run_of(d_prime, p),
    )


def geometric_decomposition(total_degree: int, sep: int, delta: int) -> tuple[int, int, int]:
    """Split a prime's data across the separable base extension.

    Returns (number of primes above, common degree, common singularity
    degree) = (sep, total_degree/sep, delta/sep).
    """
    if total_degree < 1 or sep < 1 or delta < 0:
        raise ValueError("bad arguments")
    if total_degree % sep:
        raise InvariantError(
            f"separable degree {sep} must divide the total degree {total_degree}"
        )
    if delta % sep:
        raise InvariantError(
            f"separable degree {sep} must divide the singularity degree {delta}"
        )
    return (sep, total_degree // sep, delta // sep)
