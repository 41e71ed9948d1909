import math

import pytest
from hypothesis import given, strategies as st

from bdk.combinat import (
    MultiIndex,
    binomial,
    enumerate_multi_indices,
    factorial,
    factorial_cache_bound,
    falling_factorial,
    format_rational,
    index_factorial,
    multinomial,
    parse_rational,
    set_factorial_cache_bound,
)
from fractions import Fraction


class TestMultiIndex:
    def test_basic_fields(self):
        mi = MultiIndex((2, 1, 0))
        assert mi.degree == 3
        assert mi.dimension == 2
        assert len(mi) == 3
        assert list(mi) == [2, 1, 0]
        assert mi[1] == 1

    def test_rejects_negative_parts(self):
        with pytest.raises(ValueError):
            MultiIndex((1, -1))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            MultiIndex(())

    def test_add_componentwise(self):
        assert (MultiIndex((1, 0, 2)) + MultiIndex((0, 3, 1))).parts == (1, 3, 3)

    def test_dominates_partial_order(self):
        beta = MultiIndex((2, 1))
        assert beta.dominates(MultiIndex((1, 1)))
        assert beta.dominates(beta)
        assert not beta.dominates(MultiIndex((3, 0)))

    def test_hash_and_eq_match_tuple(self):
        assert MultiIndex((1, 2)) == (1, 2)
        assert hash(MultiIndex((1, 2))) == hash((1, 2))


class TestEnumeration:
    def test_ordered_example_d1(self):
        assert [m.parts for m in enumerate_multi_indices(2, 1)] == [(2, 0), (1, 1), (0, 2)]

    def test_degree_zero(self):
        assert [m.parts for m in enumerate_multi_indices(0, 3)] == [(0, 0, 0, 0)]

    def test_count_d2(self):
        assert len(enumerate_multi_indices(2, 2)) == 6

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            enumerate_multi_indices(2, 0)
        with pytest.raises(ValueError):
            enumerate_multi_indices(-1, 1)

    def test_counts_match_binomial(self):
        for d in range(1, 5):
            for n in range(11):
                indices = enumerate_multi_indices(n, d)
                assert len(indices) == binomial(n + d, d)
                assert len(set(m.parts for m in indices)) == len(indices)

    def test_order_is_descending_lexicographic(self):
        for d in (1, 2, 3):
            parts = [m.parts for m in enumerate_multi_indices(4, d)]
            assert parts == sorted(parts, reverse=True)


class TestMultinomial:
    def test_examples(self):
        assert multinomial((2, 1, 0)) == 3
        assert multinomial((0, 0, 0, 0)) == 1
        assert multinomial((1, -1, 2)) == 0

    def test_matches_direct_factorials(self):
        for d in range(1, 4):
            for n in range(9):
                for mi in enumerate_multi_indices(n, d):
                    direct = math.factorial(n)
                    for p in mi:
                        direct //= math.factorial(p)
                    assert multinomial(mi) == direct

    def test_vandermonde_row_sums(self):
        # sum over |beta| = m of C(m, beta) is (d+1)^m
        for d in range(1, 4):
            for m in range(9):
                total = sum(multinomial(b) for b in enumerate_multi_indices(m, d))
                assert total == (d + 1) ** m

    @given(st.permutations([3, 1, 0, 2]))
    def test_symmetric_in_parts(self, parts):
        assert multinomial(parts) == multinomial((0, 1, 2, 3))


class TestBinomial:
    def test_examples(self):
        assert binomial(5, 2) == 10
        assert binomial(3, 0) == 1
        assert binomial(2, 4) == 0

    def test_negative_upper_argument(self):
        # product definition extends to negative integers
        assert binomial(-1, 2) == 1
        assert binomial(-2, 3) == -4
        assert binomial(-1, 0) == 1

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            binomial(5, -1)

    @given(st.integers(0, 40), st.integers(0, 40))
    def test_matches_math_comb(self, s, k):
        assert binomial(s, k) == math.comb(s, k)


class TestFallingFactorial:
    def test_examples(self):
        assert falling_factorial(5, 2) == 20
        assert falling_factorial(9, 0) == 1
        assert falling_factorial(-3, 0) == 1
        assert falling_factorial(1, 1) == 1
        assert falling_factorial(3, 1) == 3

    def test_legendre_weight_ratio(self):
        assert Fraction(falling_factorial(1, 1), falling_factorial(3, 1)) == Fraction(1, 3)

    def test_identity_with_binomial(self):
        for s in range(13):
            for k in range(13):
                assert falling_factorial(s, k) == binomial(s, k) * math.factorial(k)

    def test_vanishes_past_integer_argument(self):
        assert falling_factorial(2, 3) == 0


class TestFactorialCache:
    def test_matches_math_factorial_beyond_bound(self):
        bound = factorial_cache_bound()
        try:
            set_factorial_cache_bound(10)
            assert factorial(15) == math.factorial(15)
            assert factorial(10) == math.factorial(10)
        finally:
            set_factorial_cache_bound(bound)

    def test_rejects_nonpositive_bound(self):
        with pytest.raises(ValueError):
            set_factorial_cache_bound(0)

    def test_negative_argument(self):
        with pytest.raises(ValueError):
            factorial(-1)


class TestIndexFactorial:
    def test_product_of_part_factorials(self):
        assert index_factorial((3, 2, 0)) == 12
        assert index_factorial(MultiIndex((1, 1, 1))) == 1


class TestRationalStrings:
    @pytest.mark.parametrize("text,value", [
        ("2/3", Fraction(2, 3)),
        ("-5/10", Fraction(-1, 2)),
        ("7", Fraction(7)),
        ("+4/6", Fraction(2, 3)),
        ("0", Fraction(0)),
    ])
    def test_parse(self, text, value):
        assert parse_rational(text) == value

    @pytest.mark.parametrize("text", ["1.5", "a/b", "1/0", "", "2/-3", "1e3"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            parse_rational(text)

    @given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
    def test_round_trip(self, p, q):
        f = Fraction(p, q)
        assert parse_rational(format_rational(f)) == f
