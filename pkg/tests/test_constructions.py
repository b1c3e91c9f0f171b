import itertools
import statistics
from fractions import Fraction
from math import comb, perm

import pytest
from hypothesis import given, settings, strategies as st

from inscover import constructions as cons
from inscover.cover import TuranSystem, verify_cover, verify_turan
from inscover.words import Code, all_words, is_symmetric, symmetrize
from conftest import GROZEA

PAIR = Code(2, 2, frozenset({(0, 0), (1, 1)}))


def brute_expected_lift(c, n):
    """Average preimage size over every map [n] -> [N]."""
    total = 0
    maps = list(itertools.product(range(c.n), repeat=n))
    for table in maps:
        total += len(cons.preimage_code(c, cons.SymbolMap(n, c.n, table)))
    return Fraction(total, len(maps))


class TestPreimage:
    def test_identity(self):
        g = Code(3, 3, frozenset(GROZEA))
        assert cons.preimage_code(g, cons.SymbolMap(3, 3, (0, 1, 2))) == g

    def test_mod_pair(self):
        lifted = cons.preimage_code(PAIR, cons.SymbolMap.mod(4, 2))
        expected = set(itertools.product((0, 2), repeat=2)) | set(itertools.product((1, 3), repeat=2))
        assert lifted.words == expected and len(lifted) == 2**2 * 2
        assert verify_cover(lifted, 3)

    def test_constant_map(self):
        lifted = cons.preimage_code(PAIR, cons.SymbolMap(5, 2, (0,) * 5))
        assert lifted == Code.full(5, 2)

    def test_wrong_target(self):
        with pytest.raises(ValueError):
            cons.preimage_code(PAIR, cons.SymbolMap(3, 3, (0, 1, 2)))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 6), st.data())
    def test_preserves_cover_and_symmetry(self, m, data):
        table = tuple(data.draw(st.lists(st.integers(0, 1), min_size=m, max_size=m)))
        f = cons.SymbolMap(m, 2, table)
        lifted = cons.preimage_code(PAIR, f)
        assert verify_cover(lifted, 3)
        assert is_symmetric(lifted)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(1, 4), st.data())
    def test_grozea_any_map_covers(self, m, data):
        table = tuple(data.draw(st.lists(st.integers(0, 2), min_size=m, max_size=m)))
        assert verify_cover(cons.preimage_code(Code(3, 3, frozenset(GROZEA)), cons.SymbolMap(m, 3, table)), 4)


class TestModLift:
    def test_same_size(self):
        assert cons.mod_lift(PAIR, 2) == PAIR

    def test_grozea_to_four(self):
        lifted = cons.mod_lift(Code(3, 3, frozenset(GROZEA)), 4)
        assert verify_cover(lifted, 4) and len(lifted) <= 2**3 * 12

    def test_pair_to_five(self):
        lifted = cons.mod_lift(PAIR, 5)
        assert verify_cover(lifted, 3) and len(lifted) <= 3**2 * 2

    @pytest.mark.parametrize("m", range(2, 7))
    def test_size_bound(self, m):
        lifted = cons.mod_lift(PAIR, m)
        assert len(lifted) <= (m // 2 + 1) ** 2 * len(PAIR)
        assert verify_cover(lifted, 3)

    def test_rejects_smaller(self):
        with pytest.raises(ValueError):
            cons.mod_lift(Code(3, 3, frozenset(GROZEA)), 2)

    def test_lift_bound_on_solved(self, solved_covers):
        for (n, k, r), small in solved_covers.items():
            for m in range(n, 6):
                big = solved_covers.get((m, k, r))
                if big is not None:
                    assert big.optimum <= (m // n + 1) ** r * small.optimum


class TestRandomLift:
    def test_single_symbol_source(self):
        one = Code(1, 2, frozenset({(0, 0)}))
        assert cons.random_lift(one, 4, seed=3).code == Code.full(4, 2)

    def test_reproducible_and_exposes_map(self):
        a = cons.random_lift(PAIR, 6, seed=11)
        b = cons.random_lift(PAIR, 6, seed=11)
        assert a == b
        assert cons.preimage_code(PAIR, a.symbol_map) == a.code

    def test_constant_sample_gives_cylinder(self):
        for seed in range(200):
            lift = cons.random_lift(PAIR, 3, seed)
            if len(set(lift.symbol_map.table)) == 1:
                assert lift.code == Code.full(3, 2)
                break
        else:
            pytest.fail("no constant map among 200 seeds")

    @pytest.mark.parametrize("n", range(1, 7))
    def test_covers(self, n):
        for seed in range(10):
            assert verify_cover(cons.random_lift(PAIR, n, seed).code, 3)

    def test_expectation_exact(self):
        assert cons.expected_lift_size(PAIR, 6) == brute_expected_lift(PAIR, 6)
        g = Code(3, 3, frozenset(GROZEA))
        assert cons.expected_lift_size(g, 4) == brute_expected_lift(g, 4)

    def test_expectation_upper(self):
        for n in range(2, 7):
            assert cons.expected_lift_size(PAIR, n) <= cons.random_lift_upper(PAIR, n)

    def test_monte_carlo_mean(self):
        sizes = [len(cons.random_lift(PAIR, 6, s).code) for s in range(1000)]
        mean = statistics.fmean(sizes)
        se = statistics.stdev(sizes) / len(sizes) ** 0.5
        assert abs(mean - float(cons.expected_lift_size(PAIR, 6))) <= 3 * se


class TestTuranCodes:
    MANTEL5 = TuranSystem(5, 2, frozenset({(0, 1), (2, 3), (2, 4), (3, 4)}))

    def test_turan_to_code(self):
        c = cons.turan_to_code(self.MANTEL5, 3)
        assert len(c) == 13 == 4 * 2 + (25 - 20)
        assert verify_cover(c, 3) and is_symmetric(c)

    def test_single_triple(self):
        c = cons.turan_to_code(TuranSystem(3, 3, frozenset({(0, 1, 2)})), 4)
        assert c == Code.full(3, 3)

    def test_empty_system(self):
        c = cons.turan_to_code(TuranSystem(3, 2, frozenset()), 4)
        assert all(len(set(w)) < 2 for w in c.words) and len(c) == 3

    def test_rejects_invalid(self):
        with pytest.raises(cons.ConstructionError) as info:
            cons.turan_to_code(TuranSystem(5, 3, frozenset({(0, 1, 2)})), 4)
        assert info.value.witness == (0, 1, 3, 4)

    def test_roundtrip(self):
        assert cons.code_to_turan(cons.turan_to_code(self.MANTEL5, 3), 3) == self.MANTEL5

    def test_full_code(self):
        t = cons.code_to_turan(Code.full(4, 2), 3)
        assert t.sets == set(itertools.combinations(range(4), 2))

    def test_half_cube_extraction(self):
        t = cons.code_to_turan(symmetrize(cons.half_cube_code(4)), 3)
        assert verify_turan(t, 3)

    def test_code_to_turan_rejects(self):
        with pytest.raises(cons.ConstructionError):
            cons.code_to_turan(Code(3, 2, frozenset({(0, 1)})), 3)
        with pytest.raises(cons.ConstructionError):
            cons.code_to_turan(Code(2, 2, frozenset({(0, 0), (1, 1)})), 3)
        with pytest.raises(cons.ConstructionError):
            cons.code_to_turan(Code(4, 2, frozenset({(0, 0)})), 3)

    def test_roundtrip_on_solved(self, solved_turans):
        for (n, k, r), res in solved_turans.items():
            code = cons.turan_to_code(res.solution, k)
            assert verify_cover(code, k)
            assert len(code) <= cons.code_from_turan_size_bound(res.solution)
            assert len(code) <= len(res.solution) * perm(r, r) + n**r - perm(n, r)
            assert cons.code_to_turan(code, k) == res.solution


class TestExplicit:
    def test_half_cube_examples(self):
        assert cons.half_cube_code(2).words == {(0, 0), (1, 1)}
        assert cons.half_cube_code(1).words == {(0, 0)}
        c5 = cons.half_cube_code(5)
        assert len(c5) == 13 and verify_cover(c5, 3)

    @pytest.mark.parametrize("n", range(1, 10))
    def test_half_cube(self, n):
        c = cons.half_cube_code(n)
        assert len(c) == ((n + 1) // 2) ** 2 + (n // 2) ** 2
        assert is_symmetric(c) and verify_cover(c, 3)

    def test_mantel_examples(self):
        assert cons.mantel_system(5).sets == {(0, 1), (2, 3), (2, 4), (3, 4)}
        assert len(cons.mantel_system(3)) == 1
        assert len(cons.mantel_system(4)) == 2

    @pytest.mark.parametrize("n", range(3, 13))
    def test_mantel(self, n):
        t = cons.mantel_system(n)
        assert len(t) == comb((n + 1) // 2, 2) + comb(n // 2, 2)
        assert verify_turan(t, 3)

    @pytest.mark.parametrize("n", range(3, 13))
    def test_turan43(self, n):
        t = cons.turan43_system(n)
        assert verify_turan(t, 4)
        assert len(t) == cons.turan43_size(n)

    def test_turan43_nine(self):
        t = cons.turan43_system(9)
        assert len(t) == 30 and comb(9, 3) == 84

    def test_turan43_three(self):
        assert cons.turan43_system(3).sets == {(0, 1, 2)}

    def test_turan43_parts_balanced(self):
        for n in range(3, 20):
            sizes = sorted(len(p) for p in cons.turan43_parts(n))
            assert sizes[-1] - sizes[0] <= 1

    def test_turan43_density_trend(self):
        m = 30
        size = cons.turan43_size(3 * m)
        assert size == 3 * comb(m, 3) + 3 * m * comb(m, 2)
        assert abs(Fraction(size, comb(3 * m, 3)) - Fraction(4, 9)) < Fraction(1, 100)

    def test_symmetrized_constructions_cover(self):
        for n in range(2, 6):
            for c in (cons.mod_lift(PAIR, n), cons.half_cube_code(n)):
                assert verify_cover(symmetrize(c), 3)

    def test_words_all_in_range(self):
        for w in cons.mod_lift(PAIR, 6).words:
            assert w in set(all_words(6, 2))
