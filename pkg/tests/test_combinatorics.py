import pytest

from frobdesc.combinatorics import (
    AdmissiblePartition,
    PPowerRun,
    consecutive_run_of,
    geometric_decomposition,
    power_run_value,
    separability_bound,
    tau_bruteforce,
    tau_closed,
    v_p,
)
from frobdesc.errors import GuardError, InvariantError


def all_runs_up_to(bound: int, p: int):
    """Oracle: every consecutive p-power run with value <= bound."""
    runs = {}
    j = 0
    while p**j <= bound:
        value, i = p**j, j
        while value <= bound:
            runs[value] = (j, i)
            i += 1
            value += p**i
        j += 1
    return runs


class TestValuation:
    def test_examples(self):
        assert v_p(12, 2) == 2
        assert v_p(7, 7) == 1
        assert v_p(6, 5) == 0

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            v_p(0, 2)

    def test_defining_property(self):
        for n in range(1, 200):
            for p in (2, 3, 5):
                v = v_p(n, p)
                assert n % p**v == 0 and n % p ** (v + 1) != 0


class TestConsecutiveRuns:
    def test_examples(self):
        assert consecutive_run_of(6, 2) == (1, 2)  # 2 + 4
        assert consecutive_run_of(1, 3) == (0, 0)

    def test_five_is_not_a_run(self):
        # derived by enumerating every run with value <= 5
        oracle = all_runs_up_to(5, 2)
        assert 5 not in oracle
        assert consecutive_run_of(5, 2) is None

    def test_against_enumeration(self):
        for p in (2, 3, 5):
            oracle = all_runs_up_to(400, p)
            for d in range(1, 401):
                assert consecutive_run_of(d, p) == oracle.get(d)

    def test_run_value_roundtrip(self):
        for p in (2, 3):
            for j in range(4):
                for i in range(j, 8):
                    assert consecutive_run_of(power_run_value(p, j, i), p) == (j, i)


class TestPPowerRun:
    def test_value(self):
        assert PPowerRun(2, 1, 2).value() == 6
        assert PPowerRun(3, 0, 1).value() == 4

    def test_chain_ordering(self):
        # P_0^(i-1) < P_i^i < P_(i-1)^i < ... < P_0^i
        for p in (2, 3, 5):
            for i in range(1, 13):
                chain = [power_run_value(p, 0, i - 1)]
                chain += [power_run_value(p, j, i) for j in range(i, -1, -1)]
                assert chain == sorted(chain)
                assert len(set(chain)) == len(chain)

    def test_validation(self):
        with pytest.raises(ValueError):
            PPowerRun(2, 3, 1)
        with pytest.raises(ValueError):
            PPowerRun(4, 0, 1)


class TestAdmissiblePartition:
    def test_score(self):
        part = AdmissiblePartition(2, (4, 2))
        assert part.total() == 6
        assert part.score() == 2 + 1

    def test_decay_enforced(self):
        with pytest.raises(ValueError):
            AdmissiblePartition(2, (3, 2))
        AdmissiblePartition(2, (4, 2, 1))


class TestTau:
    def test_closed_examples(self):
        assert tau_closed(6, 2) == 3  # 6 = 2 + 4, run case gives i + 1
        assert tau_closed(3, 3) == 2  # 3 = 3^1, run case
        # 5 is not a run: the brute-force oracle fixes the value
        assert tau_bruteforce(5, 2) == 2
        assert tau_closed(5, 2) == 2

    def test_bruteforce_examples(self):
        assert tau_bruteforce(6, 2) == 3  # partition (4, 2): s=2, min v = 1
        assert tau_bruteforce(1, 2) == 1
        assert tau_bruteforce(10, 2) == 3  # tau(2*5) = tau(5) + 1

    def test_bruteforce_guard(self):
        with pytest.raises(GuardError):
            tau_bruteforce(10_001, 2)

    def test_equivalence_small(self):
        for d in range(1, 121):
            for p in (2, 3, 5, 7):
                assert tau_closed(d, p) == tau_bruteforce(d, p), (d, p)

    def test_scaling_identity(self):
        for d in range(1, 101):
            for p in (2, 3, 5):
                assert tau_closed(p * d, p) == tau_closed(d, p) + 1

    def test_nonrun_range_formula(self):
        # no run: tau equals the index i with P_0^(i-1) < d < P_0^i,
        # i.e. ceil(log_p((p-1)d + 1)) - 1, checked by integer comparison
        for p in (2, 3, 5):
            for d in range(1, 301):
                if consecutive_run_of(d, p) is not None:
                    continue
                target = (p - 1) * d + 1
                k, power = 0, 1
                while power < target:
                    k += 1
                    power *= p
                assert tau_closed(d, p) == k - 1

    def test_boundary_value_consistent(self):
        # d = P_0^(i-1) sits in two ranges of the case split; the run case
        # at i-1 must win and both readings agree
        for p in (2, 3):
            for i in range(1, 8):
                d = power_run_value(p, 0, i - 1)
                assert tau_closed(d, p) == i


class TestBoundReport:
    def test_examples(self):
        r = separability_bound(3, 1, 2)
        assert r.bound_level == 3 and r.d_prime == 6
        assert r.consecutive_run == (1, 2) and not r.improved_case
        assert separability_bound(1, 1, 2).bound_level == 2
        assert separability_bound(3, 1, 3).bound_level == 2

    def test_divisibility_errors(self):
        with pytest.raises(InvariantError):
            separability_bound(1, 1, 5)  # (p-1)/2 = 2 must divide delta
        with pytest.raises(InvariantError):
            separability_bound(3, 4, 2)  # 4 does not divide 6

    def test_monotone_in_delta(self):
        last = 0
        for delta in range(1, 200):
            level = separability_bound(delta, 1, 2).bound_level
            assert level >= last
            last = level

    def test_improved_case_flag(self):
        assert separability_bound(5, 1, 2).improved_case  # d' = 10, not a run
        assert not separability_bound(3, 1, 2).improved_case  # d' = 6 = 2+4


class TestGeometricDecomposition:
    def test_examples(self):
        assert geometric_decomposition(4, 1, 3) == (1, 4, 3)
        assert geometric_decomposition(3, 3, 0) == (3, 1, 0)
        assert geometric_decomposition(4, 2, 2) == (2, 2, 1)

    def test_divisibility_error(self):
        with pytest.raises(InvariantError):
            geometric_decomposition(4, 3, 3)
        with pytest.raises(InvariantError):
            geometric_decomposition(4, 2, 3)
