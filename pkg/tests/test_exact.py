from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klrtorsion.exact import (
    ExactMatrix,
    GradedRank,
    LaurentPoly,
    interpolate_integer_polynomial,
    is_prime,
    poly_eval,
    prime_power_base,
    rank_and_kernel,
    rref,
)

laurent = st.dictionaries(st.integers(-6, 6), st.integers(-5, 5), max_size=5).map(LaurentPoly)
small_matrix = st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c), min_size=1, max_size=5)
)


@given(laurent, laurent, laurent)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly(0)
    assert a * 1 == a


@given(laurent, laurent)
def test_bar_is_ring_involution(a, b):
    assert a.bar().bar() == a
    assert (a * b).bar() == a.bar() * b.bar()
    assert (a + b).bar() == a.bar() + b.bar()


@given(laurent)
def test_str_parse_round_trip(a):
    assert LaurentPoly.parse(str(a)) == a


def test_printing():
    v = LaurentPoly.monomial(1)
    assert str(1 + v * v) == "1+v^2"
    assert str(LaurentPoly.from_coeff_list([1, 1])) == "1+q"
    assert str(v ** -1 + 2 * v ** 3) == "v^-1+2v^3"
    assert str(LaurentPoly(0)) == "0"


def test_negative_power_needs_unit():
    with pytest.raises(ValueError):
        (1 + LaurentPoly.monomial(1)) ** -1


def test_substitute_power():
    p = LaurentPoly({0: 1, 1: 1}, "q")
    # v^1 * P(v^-2) = v + v^-1
    assert p.substitute_power(-2, 1, "v") == LaurentPoly({1: 1, -1: 1})


def test_graded_rank():
    r = GradedRank((2, 0))
    assert r.degrees == (0, 2) and r.rank == 2
    assert GradedRank.from_poly(r.as_poly()) == r
    assert GradedRank((0, 2, 2)).dominates(r)
    assert not r.dominates(GradedRank((0, 2, 2)))


def test_primes():
    assert [p for p in range(30) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_power_base(8) == 2 and prime_power_base(9) == 3 and prime_power_base(12) is None


@given(small_matrix)
def test_rank_over_fp_never_exceeds_rank_over_q(rows):
    ncols = len(rows[0])
    r0, k0 = rank_and_kernel(ExactMatrix.from_rows(rows))
    assert r0 + len(k0) == ncols
    for p in (2, 3, 5):
        rp, _ = rank_and_kernel(ExactMatrix.from_rows(rows, p))
        assert rp <= r0


@given(small_matrix)
def test_kernel_vectors_are_annihilated(rows):
    for p in (0, 3):
        m = ExactMatrix.from_rows(rows, p)
        _, ker = rank_and_kernel(m)
        for vec in ker:
            for row in m.rows:
                s = sum(a * b for a, b in zip(row, vec))
                assert (s % p if p else s) == 0


def test_rref_is_reduced():
    rows, piv = rref([[2, 4, 1], [1, 2, 0]], 3)
    assert piv == [0, 2]
    assert rows == [[1, 2, 0], [0, 0, 1]]
    rows, piv = rref([[1, 1], [1, 1]], 2, p=2)
    assert piv == [0]


@settings(max_examples=50)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=7))
def test_interpolation_round_trip(coeffs):
    pts = [(x, sum(c * x**i for i, c in enumerate(coeffs))) for x in range(2, 2 + len(coeffs))]
    got = interpolate_integer_polynomial(pts)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    assert list(got) == [Fraction(c) for c in coeffs]
    assert all(poly_eval(got, x) == y for x, y in pts)


def test_interpolation_rejects_duplicates():
    with pytest.raises(ValueError):
        interpolate_integer_polynomial([(2, 1), (2, 1)])
