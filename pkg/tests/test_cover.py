import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from inscover.cover import (ResourceLimitError, TuranSystem, build_incidence, greedy_cover, verify_cover,
                            verify_turan)
from inscover.solvers import min_cover
from inscover.words import Code, all_words, is_subsequence, symmetrize
from conftest import GROZEA


def brute_cover(c, k):
    return all(any(is_subsequence(x, a) for x in c.words) for a in all_words(c.n, k))


class TestBuildIncidence:
    def test_grozea_instance(self):
        inst = build_incidence(3, 4, 3)
        assert len(inst.candidates) == 27 and len(inst.targets) == 81
        assert {m.bit_count() for m in inst.cand_masks} == {9}

    def test_turan_instance(self):
        inst = build_incidence(5, 3, 2, "turan")
        assert len(inst.candidates) == 10 and len(inst.targets) == 10
        assert {m.bit_count() for m in inst.cand_masks} == {comb(3, 1)}

    def test_trivial(self):
        inst = build_incidence(1, 2, 1)
        assert inst.cand_masks == (1,)

    def test_turan_small_n_is_empty(self):
        inst = build_incidence(3, 4, 2, "turan")
        assert inst.targets == ()

    @pytest.mark.parametrize("n,k,r", [(2, 3, 1), (2, 4, 2), (3, 3, 1), (3, 4, 2)])
    def test_incidence_agrees_with_subsequence(self, n, k, r):
        inst = build_incidence(n, k, r)
        for i, x in enumerate(inst.candidates):
            for j, a in enumerate(inst.targets):
                assert bool(inst.cand_masks[i] >> j & 1) == is_subsequence(x, a)
                assert bool(inst.target_masks[j] >> i & 1) == is_subsequence(x, a)

    def test_turan_incidence_is_inclusion(self):
        inst = build_incidence(6, 4, 2, "turan")
        for i, s in enumerate(inst.candidates):
            assert inst.cand_masks[i].bit_count() == comb(4, 2)
            for j, t in enumerate(inst.targets):
                assert bool(inst.cand_masks[i] >> j & 1) == (set(s) <= set(t))

    def test_resource_guard(self):
        with pytest.raises(ResourceLimitError):
            build_incidence(4, 4, 3, max_bits=1000)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            build_incidence(3, 3, 3)
        with pytest.raises(ValueError):
            build_incidence(3, 4, 3, mode="graph")


class TestVerify:
    def test_grozea_covers(self):
        assert verify_cover(Code(3, 3, frozenset(GROZEA)), 4)

    def test_grozea_minus_constant(self):
        c = Code(3, 3, frozenset(GROZEA) - {(0, 0, 0)})
        res = verify_cover(c, 4)
        assert not res and res.witness == (0, 0, 0, 0)

    def test_full_code(self):
        assert verify_cover(Code.full(2, 2), 4)

    def test_k_must_exceed_r(self):
        with pytest.raises(ValueError):
            verify_cover(Code.full(2, 2), 2)

    def test_turan_examples(self):
        t = TuranSystem(5, 2, frozenset({(0, 1), (2, 3), (2, 4), (3, 4)}))
        assert verify_turan(t, 3)
        res = verify_turan(TuranSystem(5, 3, frozenset({(0, 1, 2)})), 4)
        assert not res
        # {0,1,2} sits only inside 0123 and 0124, so 0134 is the least uncovered 4-set
        assert res.witness == (0, 1, 3, 4)
        assert verify_turan(TuranSystem(5, 2, frozenset(itertools.combinations(range(5), 2))), 4)

    def test_turan_vacuous(self):
        assert verify_turan(TuranSystem(3, 2, frozenset()), 4)

    @settings(max_examples=60)
    @given(st.integers(1, 3), st.integers(1, 3), st.data())
    def test_witness_is_least(self, n, r, data):
        words = data.draw(st.sets(st.sampled_from(list(all_words(n, r)))))
        c = Code(n, r, frozenset(words))
        k = r + 1
        res = verify_cover(c, k)
        uncovered = [a for a in all_words(n, k) if not any(is_subsequence(x, a) for x in c.words)]
        assert bool(res) == (not uncovered) == brute_cover(c, k)
        if uncovered:
            assert res.witness == uncovered[0]


class TestCoverProperties:
    @settings(max_examples=60)
    @given(st.integers(1, 3), st.integers(1, 3), st.data())
    def test_symmetrize_and_superset_preserve_cover(self, n, r, data):
        words = data.draw(st.sets(st.sampled_from(list(all_words(n, r)))))
        c = Code(n, r, frozenset(words))
        if verify_cover(c, r + 1):
            assert verify_cover(symmetrize(c), r + 1)
            extra = data.draw(st.sets(st.sampled_from(list(all_words(n, r)))))
            assert verify_cover(c.with_words(c.words | extra), r + 1)


class TestGreedy:
    def test_examples(self):
        assert len(greedy_cover(build_incidence(1, 2, 1))) == 1
        assert len(greedy_cover(build_incidence(2, 3, 2))) == 2
        g = greedy_cover(build_incidence(3, 4, 3))
        assert 12 <= len(g) <= 27 and verify_cover(g, 4)

    def test_deterministic(self):
        inst = build_incidence(3, 4, 3)
        assert greedy_cover(inst) == greedy_cover(inst)

    @pytest.mark.parametrize("n,k,r", [(2, 3, 2), (3, 3, 2), (2, 4, 3), (3, 4, 3), (2, 4, 2), (3, 3, 1)])
    def test_greedy_at_least_optimum(self, n, k, r):
        g = greedy_cover(build_incidence(n, k, r))
        assert verify_cover(g, k)
        assert len(g) >= min_cover(n, k, r, workers=1).optimum

    @pytest.mark.parametrize("n,k,r", [(5, 3, 2), (6, 4, 3), (6, 4, 2)])
    def test_greedy_turan_valid(self, n, k, r):
        assert verify_turan(greedy_cover(build_incidence(n, k, r, "turan")), k)
