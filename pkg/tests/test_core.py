import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from apcert.core import (
    ArithProgression,
    CompactSolution,
    EmptySet,
    NegativeInput,
    OutOfRange,
    OverflowRisk,
    RandomSource,
    SortedIntSet,
    TooSmall,
    check_solution,
    density,
    density_with_argmin,
    gcd_all,
    normalize,
    parse_int_set_text,
    shift_scale_normalize,
    solve_residue_coefficient,
    verify_solution,
)

S = SortedIntSet.from_iterable


class TestNormalize:
    def test_dedupe_and_sort(self):
        out, dropped = normalize([3, 1, 3, 0])
        assert out.elems == (0, 1, 3)
        assert dropped == 1

    def test_empty(self):
        out, dropped = normalize([])
        assert out.elems == () and dropped == 0

    def test_singleton(self):
        out, _ = normalize([5])
        assert out.elems == (5,)

    def test_negative_rejected(self):
        with pytest.raises(NegativeInput):
            normalize([1, -2])

    def test_overflow_rejected(self):
        with pytest.raises(OverflowRisk):
            normalize([2**62 + 1])


class TestGcdAll:
    def test_examples(self):
        assert gcd_all(S([0, 4, 6])) == 2
        assert gcd_all(S([0, 3, 5])) == 1
        assert gcd_all(S([0])) == 0

    def test_empty_rejected(self):
        with pytest.raises(EmptySet):
            gcd_all(SortedIntSet(()))


class TestShiftScale:
    def test_examples(self):
        assert shift_scale_normalize(S([4, 10, 16])) == (S([0, 1, 2]), 4, 6)
        assert shift_scale_normalize(S([0, 1])) == (S([0, 1]), 0, 1)
        assert shift_scale_normalize(S([7, 9])) == (S([0, 1]), 7, 2)

    def test_too_small(self):
        with pytest.raises(TooSmall):
            shift_scale_normalize(S([3]))

    @given(st.sets(st.integers(0, 10**6), min_size=2, max_size=12))
    def test_round_trip(self, vals):
        a = S(vals)
        out, offset, scale = shift_scale_normalize(a)
        assert 0 in out
        assert gcd_all(out) == 1
        assert all(e * scale + offset in a for e in out)
        assert len(out) == len(a)


class TestDensity:
    def brute(self, a, z):
        return min(Fraction(a.count_range(1, zp), zp) for zp in range(1, z + 1))

    def test_examples(self):
        assert density(S([0, 1, 3]), 3) == Fraction(1, 2)
        assert density(S([0]), 5) == 0
        assert density(S(range(0, 9)), 8) == 1

    def test_matches_full_enumeration(self):
        import random

        rnd = random.Random(0)
        for _ in range(200):
            z = rnd.randint(1, 40)
            a = S({0} | set(rnd.sample(range(0, 41), rnd.randint(0, 12))))
            assert density(a, z) == self.brute(a, z)

    @given(
        st.sets(st.integers(0, 30), min_size=1, max_size=10),
        st.integers(1, 30),
    )
    def test_lower_bound_property(self, vals, z):
        a = S(vals)
        rho = density(a, z)
        for zp in range(1, z + 1):
            assert rho * zp <= a.count_range(1, zp)

    def test_argmin_is_a_minimizer(self):
        a = S([0, 1, 5, 6])
        rho, zp = density_with_argmin(a, 9)
        assert Fraction(a.count_range(1, zp), zp) == rho


class TestResidueCoefficient:
    def test_examples(self):
        assert solve_residue_coefficient(6, 4) == (2, 2)
        assert solve_residue_coefficient(6, 5) == (1, 5)
        assert solve_residue_coefficient(4, 8) == (4, 0)

    def test_exhaustive_small(self):
        for d in range(2, 201):
            for g in range(1, 401):
                dp, jstar = solve_residue_coefficient(d, g)
                assert dp == __import__("math").gcd(d, g)
                assert 0 <= jstar <= (d - dp) // dp
                assert jstar * g % d == dp % d


def naive_check(base, parts, target, budget):
    """Independent certificate checker: expand and test directly."""
    expanded = []
    for v, c in parts:
        if c <= 0:
            return False
        expanded.extend([v] * c)
    values = [v for v, _ in parts]
    if len(set(values)) != len(values):
        return False
    if any(v not in set(base) for v in expanded):
        return False
    if sum(expanded) != target:
        return False
    if budget == 0:
        return all(c == 1 for _, c in parts)
    return len(expanded) <= budget


class TestVerifySolution:
    def test_examples(self):
        a = S([0, 1, 3])
        assert verify_solution(a, CompactSolution(((1, 1), (3, 1)), 4, 2))
        assert not verify_solution(a, CompactSolution(((3, 2),), 6, 1))
        assert not verify_solution(a, CompactSolution(((2, 1),), 2, 1))

    def test_reason_codes(self):
        a = S([0, 1, 3])
        assert check_solution(a, CompactSolution(((3, 2),), 6, 1)) == "budget-exceeded"
        assert check_solution(a, CompactSolution(((2, 1),), 2, 1)) == "value-not-in-base"
        assert check_solution(a, CompactSolution(((1, 1),), 2, 1)) == "sum-mismatch"
        assert check_solution(a, CompactSolution(((1, 2),), 2, 0)) == "count-not-one"

    def test_agrees_with_naive_checker_exhaustively(self):
        universe = [0, 1, 2, 5]
        base = S(universe)
        part_values = [0, 1, 2, 3, 5]
        for n_parts in range(0, 3):
            for combo in itertools.combinations(part_values, n_parts):
                for counts in itertools.product([1, 2], repeat=n_parts):
                    parts = tuple(zip(combo, counts))
                    target = sum(v * c for v, c in parts)
                    for budget in (0, 1, 3):
                        sol = CompactSolution(parts, target, budget)
                        assert verify_solution(base, sol) == naive_check(
                            universe, parts, target, budget
                        )
                    bad = CompactSolution(parts, target + 1, 4)
                    assert not verify_solution(base, bad)


class TestArithProgression:
    def test_terms(self):
        p = ArithProgression(3, 2, 4)
        assert list(p.terms()) == [3, 5, 7, 9, 11]
        assert p.term(0) == 3 and p.term(4) == 11 and p.last == 11

    def test_term_out_of_range(self):
        with pytest.raises(OutOfRange):
            ArithProgression(0, 1, 3).term(4)


class TestRandomSource:
    def test_deterministic(self):
        a = RandomSource(42)
        b = RandomSource(42)
        assert [a.uniform_int(0, 99) for _ in range(20)] == [
            b.uniform_int(0, 99) for _ in range(20)
        ]
        assert a.draws == 20

    def test_derive_stable_and_independent(self):
        r = RandomSource(7)
        c1 = r.derive("query", 3)
        c2 = r.derive("query", 3)
        c3 = r.derive("query", 4)
        assert c1.seed == c2.seed != c3.seed


class TestFileFormat:
    def test_comments_and_whitespace(self):
        text = "# heading\n1 2\t3\n4 # trailing\n"
        assert parse_int_set_text(text) == [1, 2, 3, 4]
