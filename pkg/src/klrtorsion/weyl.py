"""Symmetric groups: Bruhat order, Kazhdan-Lusztig polynomials, and the
dictionary between injective double-flag strata of type A_{2n-1} and S_n.

Relative position convention: a permutation ``w`` corresponds to a pair of
flags ``F, F'`` with ``dim(F_i & F'_j) = #{k <= i : w(k) <= j}``, i.e.
``rank_matrix(w)``.  With this choice the two dictionary maps are mutually
inverse and Bruhat order matches orbit-closure order (larger permutation,
larger orbit).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from typing import Sequence

from .exact import LaurentPoly, rref
from .quiver import Quiver, Rep, decompose
from .strata import Multisegment, rep_of_multisegment

__all__ = [
    "Permutation",
    "length",
    "rank_matrix",
    "from_rank_matrix",
    "bruhat_leq",
    "bruhat_interval",
    "KLCache",
    "kl_polynomial",
    "mu_coefficient",
    "zelevinsky_quiver",
    "zelevinsky_dim",
    "double_flag_rep",
    "multisegment_of_permutation",
    "zelevinsky_permutation",
    "injective_strata",
    "KS_X",
    "KS_Y",
]


@dataclass(frozen=True, order=True)
class Permutation:
    """A permutation of ``1..n`` in one-line notation."""

    w: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(self.w))
        if sorted(self.w) != list(range(1, len(self.w) + 1)):
            raise ValueError(f"{self.w} is not a permutation of 1..{len(self.w)}")

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        text = text.strip()
        if "," in text:
            return cls(tuple(int(x) for x in text.split(",")))
        return cls(tuple(int(c) for c in text))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def longest(cls, n: int) -> "Permutation":
        return cls(tuple(range(n, 0, -1)))

    @classmethod
    def all(cls, n: int) -> list["Permutation"]:
        return [cls(p) for p in itertools.permutations(range(1, n + 1))]

    @property
    def n(self) -> int:
        return len(self.w)

    def __call__(self, i: int) -> int:
        return self.w[i - 1]

    def __str__(self):
        if self.n <= 9:
            return "".join(map(str, self.w))
        return ",".join(map(str, self.w))

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition ``(self * other)(i) = self(other(i))``."""
        return Permutation(tuple(self.w[j - 1] for j in other.w))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.w, 1):
            inv[x - 1] = i
        return Permutation(tuple(inv))

    def swap_values(self, a: int, b: int) -> "Permutation":
        """Left multiplication by the transposition ``(a b)``."""
        return Permutation(tuple(b if x == a else a if x == b else x for x in self.w))

    def swap_positions(self, i: int, j: int) -> "Permutation":
        """Right multiplication by the transposition ``(i j)``."""
        w = list(self.w)
        w[i - 1], w[j - 1] = w[j - 1], w[i - 1]
        return Permutation(tuple(w))

    def left_descents(self) -> list[int]:
        """Indices ``i`` with ``l(s_i w) < l(w)``: value ``i+1`` occurs before ``i``."""
        pos = self.inverse().w
        return [i for i in range(1, self.n) if pos[i] < pos[i - 1]]

    def right_descents(self) -> list[int]:
        return [i for i in range(1, self.n) if self.w[i - 1] > self.w[i]]

    @property
    def length(self) -> int:
        return length(self)


def length(w: Permutation) -> int:
    """Number of inversions."""
    v = w.w
    return sum(1 for i in range(len(v)) for j in range(i + 1, len(v)) if v[i] > v[j])


def rank_matrix(w: Permutation) -> tuple[tuple[int, ...], ...]:
    """``r[i-1][j-1] = #{k <= i : w(k) <= j}`` for ``1 <= i, j <= n``."""
    n = w.n
    rows = []
    counts = [0] * n
    for i in range(n):
        for j in range(w.w[i] - 1, n):
            counts[j] += 1
        rows.append(tuple(counts))
    return tuple(rows)


def from_rank_matrix(r: Sequence[Sequence[int]]) -> Permutation:
    """Inverse of ``rank_matrix`` via second differences; raises if ``r`` is not one."""
    n = len(r)

    def at(i, j):
        return r[i - 1][j - 1] if i and j else 0

    w = []
    for i in range(1, n + 1):
        hits = [j for j in range(1, n + 1) if at(i, j) - at(i - 1, j) - at(i, j - 1) + at(i - 1, j - 1) == 1]
        if len(hits) != 1:
            raise ValueError("not the rank matrix of a permutation")
        w.append(hits[0])
    perm = Permutation(tuple(w))
    if rank_matrix(perm) != tuple(tuple(row) for row in r):
        raise ValueError("not the rank matrix of a permutation")
    return perm


def bruhat_leq(y: Permutation, w: Permutation) -> bool:
    """Rank-matrix dominance: ``y <= w`` iff ``r_y >= r_w`` entrywise."""
    if y.n != w.n:
        raise ValueError("permutations of different sizes")
    ry, rw = rank_matrix(y), rank_matrix(w)
    return all(a >= b for ra, rb in zip(ry, rw) for a, b in zip(ra, rb))


def bruhat_interval(y: Permutation, w: Permutation) -> list[Permutation]:
    """The interval ``[y, w]``, sorted by (length, one-line notation)."""
    if not bruhat_leq(y, w):
        return []
    n = w.n
    seen = {w}
    stack = [w]
    while stack:
        z = stack.pop()
        lz = length(z)
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                t = z.swap_values(a, b)
                if t not in seen and length(t) < lz and bruhat_leq(y, t):
                    seen.add(t)
                    stack.append(t)
    return sorted(seen, key=lambda z: (length(z), z.w))


# -- Kazhdan-Lusztig polynomials -------------------------------------------------


class KLCache:
    """Memo of ``P_{y,w}`` keyed by (normalized y, w); safe for concurrent insertion."""

    def __init__(self):
        self._memo: dict[tuple[Permutation, Permutation], LaurentPoly] = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._memo.get(key)

    def put(self, key, value: LaurentPoly):
        with self._lock:
            self._memo[key] = value

    def __len__(self):
        return len(self._memo)


_DEFAULT_CACHE = KLCache()
_ONE = LaurentPoly(1, "q")
_ZERO = LaurentPoly(0, "q")
_Q = LaurentPoly.monomial(1, var="q")


def _normalize_lower(x: Permutation, w: Permutation) -> Permutation:
    """Raise ``x`` along descents of ``w``; ``P_{x,w} = P_{sx,w}`` whenever ``sw < w``."""
    left = w.left_descents()
    right = w.right_descents()
    changed = True
    while changed:
        changed = False
        for i in left:
            sx = x.swap_values(i, i + 1)
            if length(sx) > length(x):
                x, changed = sx, True
        for i in right:
            xs = x.swap_positions(i, i + 1)
            if length(xs) > length(x):
                x, changed = xs, True
    return x


def kl_polynomial(y: Permutation, w: Permutation, cache: KLCache | None = None) -> LaurentPoly:
    """Kazhdan-Lusztig polynomial ``P_{y,w}`` in ``q`` (zero unless ``y <= w``)."""
    cache = _DEFAULT_CACHE if cache is None else cache
    if not bruhat_leq(y, w):
        return _ZERO
    return _kl(y, w, cache)


def _kl(x: Permutation, w: Permutation, cache: KLCache) -> LaurentPoly:
    if x == w:
        return _ONE
    x = _normalize_lower(x, w)
    if x == w:
        return _ONE
    gap = length(w) - length(x)
    if gap <= 2:
        return _ONE
    key = (x, w)
    hit = cache.get(key)
    if hit is not None:
        return hit
    s = w.left_descents()[0]
    v = w.swap_values(s, s + 1)
    sx = x.swap_values(s, s + 1)
    # after normalization sx < x, so the recursion reads P_{sx,v} + q P_{x,v}
    assert length(sx) < length(x)
    out = _kl_leq(sx, v, cache) + _Q * _kl_leq(x, v, cache)
    lw = length(w)
    for z in bruhat_interval(x, v):
        if z == v:
            continue
        if length(z.swap_values(s, s + 1)) > length(z):
            continue
        m = mu_coefficient(z, v, cache)
        if m:
            out = out - m * _Q ** ((lw - length(z)) // 2) * _kl(x, z, cache)
    _check_kl(out, x, w)
    cache.put(key, out)
    return out


def _kl_leq(x, w, cache):
    return _kl(x, w, cache) if bruhat_leq(x, w) else _ZERO


def _check_kl(p: LaurentPoly, x: Permutation, w: Permutation):
    gap = length(w) - length(x)
    if p.coeff(0) != 1 or p.min_degree() < 0 or 2 * p.degree() > gap - 1:
        raise AssertionError(f"KL polynomial P_{{{x},{w}}} = {p} violates the degree bound")


def mu_coefficient(z: Permutation, v: Permutation, cache: KLCache | None = None) -> int:
    """Coefficient of ``q^((l(v)-l(z)-1)/2)`` in ``P_{z,v}`` (0 for even gaps)."""
    cache = _DEFAULT_CACHE if cache is None else cache
    gap = length(v) - length(z)
    if gap <= 0 or gap % 2 == 0 or not bruhat_leq(z, v):
        return 0
    return _kl(z, v, cache).coeff((gap - 1) // 2)


# -- the double-flag dictionary --------------------------------------------------


def zelevinsky_quiver(n: int) -> Quiver:
    """``1 -> 2 -> ... -> n <- n+1 <- ... <- 2n-1``."""
    verts = tuple(range(1, 2 * n))
    arrows = [(i, i + 1) for i in range(1, n)] + [(i + 1, i) for i in range(n, 2 * n - 1)]
    return Quiver(verts, tuple(arrows))


def zelevinsky_dim(n: int) -> tuple[int, ...]:
    return tuple(list(range(1, n + 1)) + list(range(n - 1, 0, -1)))


def _check_shape(q: Quiver, dims: Sequence[int]) -> int:
    if q.n % 2 == 0:
        raise ValueError("quiver must have an odd number of vertices")
    n = (q.n + 1) // 2
    if q != zelevinsky_quiver(n) or tuple(dims) != zelevinsky_dim(n):
        raise ValueError(f"expected the A_{2 * n - 1} double-flag quiver with d = {zelevinsky_dim(n)}")
    return n


def double_flag_rep(w: Permutation) -> Rep:
    """Injective representation whose two flags in ``V_n`` have relative position ``w``.

    Left chain: ``V_i = k^i`` included by ``e_k -> e_k``.  Right chain:
    ``V_{2n-j} = k^j`` included likewise, and ``V_{n+1} -> V_n`` sends
    ``f_k -> e_{w^{-1}(k)}``, so the right flag is ``span(e_{w^{-1}(1..j)})``.
    """
    n = w.n
    q = zelevinsky_quiver(n)
    dims = zelevinsky_dim(n)
    winv = w.inverse().w
    maps = []
    for s, t in q.arrows:
        ds, dt = dims[s - 1], dims[t - 1]
        m = [[0] * ds for _ in range(dt)]
        if s == n + 1 and t == n:
            for k in range(ds):
                m[winv[k] - 1][k] = 1
        else:
            for k in range(ds):
                m[k][k] = 1
        maps.append(tuple(tuple(r) for r in m))
    return Rep(q, dims, tuple(maps))


def multisegment_of_permutation(w: Permutation) -> Multisegment:
    q = zelevinsky_quiver(w.n)
    return Multisegment.from_mapping(q, decompose(double_flag_rep(w)))


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def _rank(cols_as_rows, ncols):
    if not cols_as_rows:
        return 0
    return len(rref(cols_as_rows, ncols)[1])


def flag_intersections(rep: Rep) -> list[list[int]]:
    """``m[i-1][j-1] = dim(F_i & F'_j)`` for the two flags of an injective representation."""
    q = rep.quiver
    n = _check_shape(q, rep.dims)
    arrow_map = {a: m for a, m in zip(q.arrows, rep.maps)}
    for (s, t), m in arrow_map.items():
        if _rank([list(r) for r in m], len(m[0]) if m else 0) != rep.dims[s - 1]:
            raise ValueError(f"arrow {s}->{t} is not injective")
    # images in V_n as lists of column vectors
    left = {n: [[int(i == j) for i in range(n)] for j in range(n)]}
    comp = None
    for i in range(n - 1, 0, -1):
        a = [list(r) for r in arrow_map[(i, i + 1)]]
        comp = a if comp is None else _matmul(comp, a)
        left[i] = [list(c) for c in zip(*comp)]
    right = {n: left[n]}
    comp = None
    for v in range(n + 1, 2 * n):
        a = [list(r) for r in arrow_map[(v, v - 1)]]
        comp = a if comp is None else _matmul(comp, a)
        right[2 * n - v] = [list(c) for c in zip(*comp)]
    out = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            span = _rank(left[i] + right[j], n)
            row.append(i + j - span)
        out.append(row)
    return out


def zelevinsky_permutation(lam: Multisegment) -> Permutation:
    _check_shape(lam.quiver, lam.dim)
    return from_rank_matrix(flag_intersections(rep_of_multisegment(lam)))


def injective_strata(n: int) -> list[Multisegment]:
    """Injective-arrows strata of the double-flag quiver, in ``Permutation.all`` order."""
    return [multisegment_of_permutation(w) for w in Permutation.all(n)]


# permutations in S_8 whose Schubert singularity is the Kashiwara-Saito one
KS_X = Permutation.parse("62845173")
KS_Y = Permutation.parse("21654387")
