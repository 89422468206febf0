import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from klrtorsion.exact import LaurentPoly
from klrtorsion.weyl import (
    KS_X,
    KS_Y,
    KLCache,
    Permutation,
    bruhat_interval,
    bruhat_leq,
    double_flag_rep,
    flag_intersections,
    from_rank_matrix,
    injective_strata,
    kl_polynomial,
    length,
    mu_coefficient,
    multisegment_of_permutation,
    rank_matrix,
    zelevinsky_dim,
    zelevinsky_permutation,
)

from oracles import hecke_kl_table, subword_bruhat_leq

perms = st.integers(1, 8).flatmap(lambda n: st.permutations(range(1, n + 1))).map(Permutation)
S4 = Permutation.all(4)


def test_parse_and_print():
    assert str(Permutation.parse("3412")) == "3412"
    w = Permutation(tuple(range(10, 0, -1)))
    assert str(w) == "10,9,8,7,6,5,4,3,2,1"
    assert Permutation.parse(str(w)) == w
    with pytest.raises(ValueError):
        Permutation.parse("1134")


@given(perms)
def test_rank_matrix_round_trip(w):
    assert from_rank_matrix(rank_matrix(w)) == w


@given(perms)
def test_length_and_inverse(w):
    assert length(w) == length(w.inverse())
    assert (w * w.inverse()) == Permutation.identity(w.n)


def test_bruhat_matches_subwords():
    for y, w in itertools.product(S4, repeat=2):
        assert bruhat_leq(y, w) == subword_bruhat_leq(y, w)


@given(st.permutations(range(1, 6)), st.permutations(range(1, 6)))
def test_bruhat_matches_subwords_s5(a, b):
    y, w = Permutation(tuple(a)), Permutation(tuple(b))
    assert bruhat_leq(y, w) == subword_bruhat_leq(y, w)


def test_covering_relations_generate_order():
    """Transitive closure of covers (y < w = y t, lengths differ by 1) is Bruhat order."""
    covers = {
        (y, w)
        for y, w in itertools.product(S4, repeat=2)
        if length(w) == length(y) + 1
        and any(y.swap_positions(i, j) == w for i in range(4) for j in range(i + 1, 4))
    }
    reach = {(w, w) for w in S4} | covers
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(reach), list(covers)):
            if b == c and (a, d) not in reach:
                reach.add((a, d))
                changed = True
    assert reach == {(y, w) for y, w in itertools.product(S4, repeat=2) if bruhat_leq(y, w)}


def test_interval_sizes():
    assert len(bruhat_interval(Permutation.identity(4), Permutation.longest(4))) == 24
    assert len(bruhat_interval(Permutation.parse("1324"), Permutation.parse("3412"))) == 10
    assert bruhat_interval(Permutation.parse("3412"), Permutation.parse("1324")) == []


@pytest.mark.parametrize("n", [3, 4, 5])
def test_kl_matches_hecke_algebra(n):
    cache = KLCache()
    for (y, w), p in hecke_kl_table(n).items():
        assert kl_polynomial(Permutation(y), Permutation(w), cache) == p


def test_kl_basic_values():
    assert kl_polynomial(Permutation.parse("1234"), Permutation.parse("3412")) == LaurentPoly({0: 1, 1: 1}, "q")
    assert kl_polynomial(Permutation.parse("3412"), Permutation.parse("1234")).is_zero()
    assert mu_coefficient(Permutation.parse("1324"), Permutation.parse("3412")) == 1


def test_kl_inverse_symmetry_s5():
    cache = KLCache()
    for y, w in itertools.product(Permutation.all(5), repeat=2):
        if bruhat_leq(y, w):
            assert kl_polynomial(y, w, cache) == kl_polynomial(y.inverse(), w.inverse(), cache)


@pytest.mark.parametrize("n", [2, 3])
def test_zelevinsky_round_trip(n):
    strata = injective_strata(n)
    images = [zelevinsky_permutation(s) for s in strata]
    assert sorted(images) == sorted(Permutation.all(n))
    for w in Permutation.all(n):
        assert zelevinsky_permutation(multisegment_of_permutation(w)) == w


def test_flag_intersections_are_rank_matrix():
    for w in Permutation.all(4):
        inter = flag_intersections(double_flag_rep(w))
        r = rank_matrix(w)
        assert all(inter[i][j] == r[i][j] for i in range(4) for j in range(4))


def test_named_permutations():
    assert length(KS_X) == 16 and length(KS_Y) == 8
    assert bruhat_leq(KS_Y, KS_X) and KS_X != KS_Y
    lam = multisegment_of_permutation(KS_X)
    assert lam.dim == zelevinsky_dim(8)
    assert multisegment_of_permutation(KS_Y).dim == zelevinsky_dim(8)


@pytest.mark.parametrize("n", [3, 4])
def test_closure_order_is_bruhat_order(n):
    from klrtorsion.strata import closure_leq

    strata = {w: multisegment_of_permutation(w) for w in Permutation.all(n)}
    for y, w in itertools.product(strata, repeat=2):
        assert closure_leq(strata[w], strata[y]) == bruhat_leq(y, w)
