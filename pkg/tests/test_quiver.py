import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klrtorsion.exact import rref
from klrtorsion.quiver import (
    Quiver,
    Rep,
    decompose,
    direct_sum,
    equioriented_a,
    euler_form,
    ext_dim,
    hom_dim,
    hom_order,
    interval_hom_table,
    interval_module,
    load_quiver,
    parse_quiver,
    positive_roots,
    tits_form,
)

from oracles import weyl_orbit_positive_roots

A4 = equioriented_a(4)
A4_ZIGZAG = Quiver((1, 2, 3, 4), ((1, 2), (3, 2), (3, 4)))
D4 = Quiver((1, 2, 3, 4), ((1, 2), (3, 2), (2, 4)))
E6 = Quiver((1, 2, 3, 4, 5, 6), ((1, 2), (2, 3), (4, 3), (4, 5), (6, 3)))


def test_parse_and_classify():
    q = parse_quiver("# comment\nvertices 3\narrow 1 2\narrow 3 2\n")
    assert q.dynkin_type == "A3" and q.is_type_a and not q.is_equioriented()
    assert load_quiver("a5.qv").dynkin_type == "A5"
    assert D4.dynkin_type == "D4" and E6.dynkin_type == "E6"
    assert parse_quiver(q.to_text()) == q


@pytest.mark.parametrize(
    "text",
    [
        "vertices 3\narrow 1 2\narrow 2 3\narrow 3 1\n",  # cycle
        "vertices 2\narrow 1 1\n",  # loop
        "vertices 3\narrow 1 2\n",  # disconnected
        "vertices 2\narrow 1 2\narrow 1 2\n",  # multiple arrow
        "vertices 5\narrow 1 2\narrow 1 3\narrow 1 4\narrow 1 5\n",  # affine D4
        "vertices 2\nfrobnicate\n",
    ],
)
def test_rejects_non_dynkin(text):
    with pytest.raises(ValueError):
        parse_quiver(text)


@pytest.mark.parametrize(
    "q, edges",
    [
        (D4, [(0, 1), (1, 2), (1, 3)]),
        (E6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]),
        (A4_ZIGZAG, [(0, 1), (1, 2), (2, 3)]),
    ],
)
def test_roots_match_weyl_orbit(q, edges):
    roots = positive_roots(q)
    assert set(roots) == weyl_orbit_positive_roots(q.n, edges)
    assert len(roots) == len(set(roots))
    assert all(tits_form(q, r) == 1 for r in roots)


def test_root_counts():
    assert len(positive_roots(D4)) == 12
    assert len(positive_roots(E6)) == 36


def test_euler_form_on_simples():
    assert euler_form(A4, (1, 0, 0, 0), (0, 1, 0, 0)) == -1
    assert euler_form(A4, (0, 1, 0, 0), (1, 0, 0, 0)) == 0


def _random_rep(q, data):
    roots = positive_roots(q)
    parts = data.draw(st.lists(st.sampled_from(roots), min_size=1, max_size=4))
    return parts, direct_sum([interval_module(q, r) for r in parts])


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_hom_is_additive(data):
    pm, m = _random_rep(A4, data)
    pn, n = _random_rep(A4, data)
    expect = sum(hom_dim(interval_module(A4, a), interval_module(A4, b)) for a in pm for b in pn)
    assert hom_dim(m, n) == expect


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_euler_form_is_hom_minus_ext(data):
    _, m = _random_rep(A4_ZIGZAG, data)
    _, n = _random_rep(A4_ZIGZAG, data)
    assert hom_dim(m, n) - ext_dim(m, n) == euler_form(A4_ZIGZAG, m.dims, n.dims)


def _inverse(g):
    n = len(g)
    rows, piv = rref([list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(g)], 2 * n)
    assert piv == list(range(n))
    return [r[n:] for r in rows]


def _mul(a, b):
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a] if a and b else []


def _base_change(m: Rep, seed: int) -> Rep:
    """Conjugate by unitriangular changes of basis so the block structure is hidden."""
    import random

    rnd = random.Random(seed)
    gs = []
    for d in m.dims:
        lo = [[1 if i == j else (rnd.randint(-2, 2) if i > j else 0) for j in range(d)] for i in range(d)]
        up = [[1 if i == j else (rnd.randint(-2, 2) if i < j else 0) for j in range(d)] for i in range(d)]
        gs.append(_mul(lo, up) if d else [])
    maps = []
    for (s, t), mat in zip(m.quiver.arrow_indices, m.maps):
        if not m.dims[s] or not m.dims[t]:
            maps.append(mat)
            continue
        maps.append(tuple(map(tuple, _mul(_mul(gs[t], [list(r) for r in mat]), _inverse(gs[s])))))
    return Rep(m.quiver, m.dims, tuple(maps), m.p)


@settings(max_examples=40, deadline=None)
@given(st.data(), st.integers(0, 10**6))
def test_decompose_round_trip(data, seed):
    q = data.draw(st.sampled_from([A4, A4_ZIGZAG]))
    roots = positive_roots(q)
    parts = data.draw(st.lists(st.sampled_from(roots), min_size=1, max_size=5))
    if sum(map(sum, parts)) > 8:
        parts = parts[:2]
    m = _base_change(direct_sum([interval_module(q, r) for r in parts]), seed)
    expect = {}
    for r in parts:
        expect[r] = expect.get(r, 0) + 1
    assert decompose(m) == expect


def test_interval_modules_are_bricks():
    for q in (A4, A4_ZIGZAG):
        table = interval_hom_table(q)
        assert all(table[i][i] == 1 for i in range(len(table)))
        order = hom_order(q)
        assert sorted(order) == list(range(len(table)))


def test_hom_over_finite_field():
    m = interval_module(A4, (1, 1, 0, 0), p=2)
    n = interval_module(A4, (0, 1, 0, 0), p=2)
    # the simple at the sink vertex 2 is a submodule of [1,2], not a quotient
    assert hom_dim(n, m) == 1 and hom_dim(m, n) == 0


def test_rep_shape_checked():
    with pytest.raises(ValueError):
        Rep(A4, (1, 1, 0, 0), (((1, 1),), (), (), ()), 0)
