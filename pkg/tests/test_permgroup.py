import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from qscd.permgroup import (
    Permutation,
    SecurityParam,
    compose,
    conjugate,
    cycle_type,
    cyclic_class,
    format_permutation,
    fpf_involutions,
    from_cycles,
    identity,
    inverse,
    is_ff_degree,
    is_fpf_involution,
    parse_permutation,
    perm_pow,
    sample_cyclic,
    sample_fpf_involution,
    sign,
)

from oracles import brute_cyclic_class, brute_fpf_involutions

perms6 = st.permutations(list(range(1, 7))).map(lambda xs: Permutation(tuple(xs)))


class TestPermutation:
    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation((1, 1, 3))
        with pytest.raises(ValueError):
            Permutation((0, 1))

    def test_call_is_one_based(self):
        p = Permutation((2, 3, 1))
        assert [p(1), p(2), p(3)] == [2, 3, 1]

    def test_from_cycles_rejects_overlap(self):
        with pytest.raises(ValueError):
            from_cycles(4, [(1, 2), (2, 3)])


class TestCompose:
    def test_identity_neutral(self):
        sigma = Permutation((3, 1, 2))
        assert compose(identity(3), sigma) == sigma
        assert compose(sigma, identity(3)) == sigma

    def test_transpositions_by_hand(self):
        # (1 2)(2 3) multiplied by hand with (sigma tau)(i) = sigma(tau(i))
        # gives the 3-cycle 1 -> 2 -> 3 -> 1.
        left = from_cycles(3, [(1, 2)])
        right = from_cycles(3, [(2, 3)])
        assert compose(left, right) == from_cycles(3, [(1, 2, 3)])

    def test_key_class_elements_square_to_identity(self):
        for pi in fpf_involutions(6):
            assert compose(pi, pi) == identity(6)

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            compose(identity(3), identity(4))

    @settings(max_examples=50, deadline=None)
    @given(perms6, perms6, perms6)
    def test_associative(self, a, b, c):
        assert compose(compose(a, b), c) == compose(a, compose(b, c))


class TestInverse:
    def test_identity(self):
        assert inverse(identity(5)) == identity(5)

    def test_three_cycle(self):
        assert inverse(from_cycles(3, [(1, 2, 3)])) == from_cycles(3, [(1, 3, 2)])

    @settings(max_examples=50, deadline=None)
    @given(perms6)
    def test_roundtrip(self, sigma):
        assert compose(sigma, inverse(sigma)) == identity(6)

    def test_key_class_self_inverse(self):
        for pi in fpf_involutions(6):
            assert inverse(pi) == pi


class TestSign:
    def test_identity_even(self):
        assert sign(identity(4)) == 0

    def test_transposition_odd(self):
        assert sign(from_cycles(4, [(1, 2)])) == 1

    def test_all_of_k6_odd(self):
        oracle = brute_fpf_involutions(6)
        assert len(oracle) == 15
        for images in oracle:
            assert sign(Permutation(images)) == 1

    @settings(max_examples=50, deadline=None)
    @given(perms6, perms6)
    def test_homomorphism(self, a, b):
        assert sign(compose(a, b)) == sign(a) ^ sign(b)

    @settings(max_examples=50, deadline=None)
    @given(perms6)
    def test_inverse_same_sign(self, sigma):
        assert sign(sigma) == sign(inverse(sigma))


class TestSecurityParam:
    def test_ff_degree_set(self):
        assert [n for n in range(1, 15) if is_ff_degree(n)] == [2, 6, 10, 14]

    def test_ff_rejects_bad_degree(self):
        for n in (1, 4, 8, 12):
            with pytest.raises(ValueError):
                SecurityParam.ff(n)

    def test_cyc_divisibility(self):
        SecurityParam.cyc(6, 3)
        with pytest.raises(ValueError):
            SecurityParam.cyc(6, 4)
        with pytest.raises(ValueError):
            SecurityParam.cyc(6, 1)


class TestSampleFpfInvolution:
    def test_n2_is_the_swap(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            assert sample_fpf_involution(SecurityParam.ff(2), rng) == from_cycles(2, [(1, 2)])

    def test_membership_at_n6(self):
        rng = np.random.default_rng(1)
        oracle = brute_fpf_involutions(6)
        for _ in range(200):
            pi = sample_fpf_involution(SecurityParam.ff(6), rng)
            assert pi.image in oracle
            assert compose(pi, pi) == identity(6)
            assert all(pi(i) != i for i in range(1, 7))

    def test_uniform_chisquare(self):
        rng = np.random.default_rng(2)
        cells = {images: 0 for images in brute_fpf_involutions(6)}
        for _ in range(15000):
            cells[sample_fpf_involution(SecurityParam.ff(6), rng).image] += 1
        assert stats.chisquare(list(cells.values())).pvalue > 0.001

    def test_rejects_cyc_params(self):
        with pytest.raises(ValueError):
            sample_fpf_involution(SecurityParam.cyc(6, 3), np.random.default_rng(0))


class TestSampleCyclic:
    def test_order_and_no_fixed_points(self):
        rng = np.random.default_rng(3)
        for n, m in [(6, 3), (8, 4), (12, 6)]:
            for _ in range(50):
                pi = sample_cyclic(SecurityParam.cyc(n, m), rng)
                assert perm_pow(pi, m) == identity(n)
                for t in range(1, m):
                    assert perm_pow(pi, t) != identity(n)
                assert all(pi(i) != i for i in range(1, n + 1))

    def test_n3_m3_hits_both_three_cycles(self):
        rng = np.random.default_rng(4)
        seen = {sample_cyclic(SecurityParam.cyc(3, 3), rng).image for _ in range(50)}
        assert seen == brute_cyclic_class(3, 3)

    def test_n2_m2_is_the_swap(self):
        rng = np.random.default_rng(5)
        assert sample_cyclic(SecurityParam.cyc(2, 2), rng) == from_cycles(2, [(1, 2)])


class TestConjugate:
    def test_identity_fixes(self):
        pi = from_cycles(6, [(1, 2), (3, 4), (5, 6)])
        assert conjugate(pi, identity(6)) == pi

    def test_stays_in_key_class(self):
        rng = np.random.default_rng(6)
        pi = from_cycles(6, [(1, 2), (3, 4), (5, 6)])
        oracle = brute_fpf_involutions(6)
        for _ in range(100):
            tau = Permutation(tuple(int(x) + 1 for x in rng.permutation(6)))
            assert conjugate(pi, tau).image in oracle

    def test_exhaustively_uniform_over_k6(self):
        import itertools

        pi = from_cycles(6, [(1, 2), (3, 4), (5, 6)])
        counts: dict[tuple[int, ...], int] = {}
        for images in itertools.permutations(range(1, 7)):
            hit = conjugate(pi, Permutation(images)).image
            counts[hit] = counts.get(hit, 0) + 1
        assert set(counts) == brute_fpf_involutions(6)
        assert sorted(counts.values()) == [48] * 15

    def test_preserves_cycle_type(self):
        rng = np.random.default_rng(7)
        pi = from_cycles(6, [(1, 2, 3), (4, 5, 6)])
        for _ in range(50):
            tau = Permutation(tuple(int(x) + 1 for x in rng.permutation(6)))
            assert cycle_type(conjugate(pi, tau)) == (3, 3)


class TestEnumerators:
    def test_fpf_involutions_match_brute_force(self):
        assert {p.image for p in fpf_involutions(6)} == brute_fpf_involutions(6)
        assert {p.image for p in fpf_involutions(4)} == brute_fpf_involutions(4)

    def test_cyclic_class_matches_brute_force(self):
        assert {p.image for p in cyclic_class(3, 3)} == brute_cyclic_class(3, 3)
        assert {p.image for p in cyclic_class(4, 2)} == brute_cyclic_class(4, 2)

    def test_k10_samples_are_odd(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            pi = sample_fpf_involution(SecurityParam.ff(10), rng)
            assert is_fpf_involution(pi) and sign(pi) == 1


class TestTextFormat:
    def test_roundtrip(self):
        sigma = Permutation((2, 1, 4, 3, 6, 5))
        assert parse_permutation(format_permutation(sigma)) == sigma
        assert format_permutation(sigma) == "6: 2 1 4 3 6 5"

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            parse_permutation("3: 1 1 2")

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError):
            parse_permutation("4: 1 2 3")

    def test_rejects_missing_colon(self):
        with pytest.raises(ValueError):
            parse_permutation("1 2 3")
