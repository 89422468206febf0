"""Dynkin quivers and their representations.

Dimension vectors are plain tuples aligned with ``Quiver.vertices``.  Explicit
matrix models exist only in type A, where every positive root is an interval
of the underlying line and the interval module with identity maps is the
indecomposable for any orientation.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .exact import normalize, rref

__all__ = [
    "Quiver",
    "Rep",
    "parse_quiver",
    "load_quiver",
    "equioriented_a",
    "positive_roots",
    "tits_form",
    "euler_form",
    "interval_module",
    "hom_dim",
    "ext_dim",
    "direct_sum",
    "decompose",
]

DATA_DIR = Path(__file__).parent / "data"

# largest coefficient of the highest root
_MAX_ROOT_COORD = {"A": 1, "D": 2, "E6": 3, "E7": 4, "E8": 6}


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[int, ...]
    arrows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(tuple(a) for a in self.arrows))
        object.__setattr__(self, "dynkin_type", _classify(self.vertices, self.arrows))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, vertex: int) -> int:
        return self.vertices.index(vertex)

    @functools.cached_property
    def arrow_indices(self) -> tuple[tuple[int, int], ...]:
        return tuple((self.index(s), self.index(t)) for s, t in self.arrows)

    @property
    def is_type_a(self) -> bool:
        return self.dynkin_type.startswith("A")

    @functools.cached_property
    def line(self) -> tuple[int, ...]:
        """Vertex positions along the path (type A), starting at the smaller-labelled end."""
        if not self.is_type_a:
            raise ValueError(f"{self.dynkin_type} is not of type A")
        if self.n == 1:
            return (0,)
        adj = _adjacency(self.n, self.arrow_indices)
        ends = sorted((i for i in range(self.n) if len(adj[i]) == 1), key=lambda i: self.vertices[i])
        order = [ends[0]]
        prev = None
        while len(order) < self.n:
            cur = order[-1]
            nxt = next(j for j in adj[cur] if j != prev)
            prev = cur
            order.append(nxt)
        return tuple(order)

    def is_equioriented(self) -> bool:
        """All arrows point from one path position to the next."""
        if not self.is_type_a:
            return False
        pos = {v: k for k, v in enumerate(self.line)}
        return all(pos[t] == pos[s] + 1 for s, t in self.arrow_indices)

    def interval(self, root: Sequence[int]) -> tuple[int, int]:
        """Path positions ``(a, b)`` (0-based, inclusive) of a type-A root."""
        coords = [root[i] for i in self.line]
        support = [k for k, x in enumerate(coords) if x]
        if not support or any(x not in (0, 1) for x in coords) or support != list(range(support[0], support[-1] + 1)):
            raise ValueError(f"{tuple(root)} is not an interval root")
        return support[0], support[-1]

    def interval_root(self, a: int, b: int) -> tuple[int, ...]:
        """Root supported on path positions ``a..b`` (0-based, inclusive)."""
        d = [0] * self.n
        for k in range(a, b + 1):
            d[self.line[k]] = 1
        return tuple(d)

    def to_text(self) -> str:
        lines = [f"vertices {self.n}"]
        lines += [f"arrow {s} {t}" for s, t in self.arrows]
        return "\n".join(lines) + "\n"


def _adjacency(n, arrows):
    adj = [[] for _ in range(n)]
    for s, t in arrows:
        adj[s].append(t)
        adj[t].append(s)
    return adj


def _classify(vertices, arrows) -> str:
    n = len(vertices)
    if n == 0:
        raise ValueError("empty quiver")
    if len(set(vertices)) != n:
        raise ValueError("repeated vertex")
    idx = {v: i for i, v in enumerate(vertices)}
    edges = set()
    for s, t in arrows:
        if s not in idx or t not in idx:
            raise ValueError(f"arrow {s}->{t} uses an unknown vertex")
        if s == t:
            raise ValueError("loops are not allowed")
        e = frozenset((idx[s], idx[t]))
        if e in edges:
            raise ValueError("multiple edges are not allowed")
        edges.add(e)
    if len(edges) != n - 1:
        raise ValueError("underlying graph is not a tree")
    adj = _adjacency(n, [tuple(e) for e in edges])
    seen, stack = {0}, [0]
    while stack:
        for j in adj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != n:
        raise ValueError("underlying graph is not connected")
    degrees = [len(a) for a in adj]
    if max(degrees, default=0) <= 2:
        return f"A{n}"
    branch = [i for i, d in enumerate(degrees) if d >= 3]
    if len(branch) > 1 or degrees[branch[0]] > 3:
        raise ValueError("underlying graph is not Dynkin")
    c = branch[0]
    arms = []
    for start in adj[c]:
        length, prev, cur = 1, c, start
        while True:
            nxt = [j for j in adj[cur] if j != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length + 1)  # count the branch vertex
    p, q, r = sorted(arms)
    if Fraction(1, p) + Fraction(1, q) + Fraction(1, r) <= 1:
        raise ValueError("underlying graph is not Dynkin")
    if p == 2 and q == 2:
        return f"D{n}"
    return f"E{n}"


def parse_quiver(text: str) -> Quiver:
    """Parse ``vertices n`` followed by ``arrow i j`` lines (vertices 1..n)."""
    n = None
    arrows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertices" and len(parts) == 2:
            n = int(parts[1])
        elif parts[0] == "arrow" and len(parts) == 3:
            arrows.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"bad quiver line: {raw!r}")
    if n is None:
        raise ValueError("missing 'vertices' line")
    return Quiver(tuple(range(1, n + 1)), tuple(arrows))


def load_quiver(path: str | Path) -> Quiver:
    path = Path(path)
    if not path.exists() and (DATA_DIR / path.name).exists():
        path = DATA_DIR / path.name
    return parse_quiver(path.read_text())


def equioriented_a(n: int) -> Quiver:
    return Quiver(tuple(range(1, n + 1)), tuple((i, i + 1) for i in range(1, n)))


# -- forms and roots -------------------------------------------------------------


def euler_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(d, e)) - sum(d[s] * e[t] for s, t in q.arrow_indices)


def tits_form(q: Quiver, d: Sequence[int]) -> int:
    return euler_form(q, d, d)


def root_coordinate_bound(q: Quiver) -> int:
    t = q.dynkin_type
    return _MAX_ROOT_COORD.get(t, _MAX_ROOT_COORD.get(t[0], 6))


@functools.lru_cache(maxsize=None)
def positive_roots(q: Quiver) -> tuple[tuple[int, ...], ...]:
    """Positive roots, i.e. nonzero ``d >= 0`` with Tits form 1.

    The search grows candidates one simple root at a time (every non-simple
    positive root is a positive root plus a simple root) and never leaves the
    box bounded by the highest-root coordinate of the type.
    """
    bound = root_coordinate_bound(q)
    simple = [tuple(int(i == j) for j in range(q.n)) for i in range(q.n)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for r in layer:
            for i in range(q.n):
                d = list(r)
                d[i] += 1
                d = tuple(d)
                if d[i] <= bound and d not in found and tits_form(q, d) == 1:
                    found.add(d)
                    nxt.append(d)
        layer = nxt
    return tuple(sorted(found, key=root_sort_key))


def root_sort_key(r: Sequence[int]):
    """Height descending, then first support position ascending."""
    start = next(i for i, x in enumerate(r) if x)
    return (-sum(r), start, tuple(-x for x in r))


# -- representations -------------------------------------------------------------


@dataclass(frozen=True)
class Rep:
    """A representation with chosen bases.

    ``maps[k]`` is the matrix (``dims[t]`` rows, ``dims[s]`` columns) of the
    k-th arrow ``s -> t``.  Entries live in Q (``p == 0``) or F_p.
    """

    quiver: Quiver
    dims: tuple[int, ...]
    maps: tuple[tuple[tuple, ...], ...]
    p: int = 0

    def __post_init__(self):
        if len(self.dims) != self.quiver.n or len(self.maps) != len(self.quiver.arrows):
            raise ValueError("representation does not match the quiver")
        maps = []
        for (s, t), m in zip(self.quiver.arrow_indices, self.maps):
            m = tuple(tuple(normalize(x, self.p) for x in row) for row in m)
            if len(m) != self.dims[t] or any(len(row) != self.dims[s] for row in m):
                raise ValueError(f"arrow {s}->{t}: matrix shape does not match dimensions")
            maps.append(m)
        object.__setattr__(self, "maps", tuple(maps))

    @property
    def dimvec(self) -> tuple[int, ...]:
        return self.dims

    @classmethod
    def zero(cls, q: Quiver, dims: Sequence[int], p: int = 0) -> "Rep":
        maps = tuple(tuple((0,) * dims[s] for _ in range(dims[t])) for s, t in q.arrow_indices)
        return cls(q, tuple(dims), maps, p)


def interval_module(q: Quiver, root: Sequence[int], p: int = 0) -> Rep:
    """The indecomposable ``I_alpha`` of a type-A root: k on the interval, identities inside."""
    q.interval(root)  # raises if not an interval
    maps = []
    for s, t in q.arrow_indices:
        if root[s] and root[t]:
            maps.append(((1,),))
        else:
            maps.append(tuple((0,) * root[s] for _ in range(root[t])))
    return Rep(q, tuple(root), tuple(maps), p)


def direct_sum(reps: Sequence[Rep]) -> Rep:
    if not reps:
        raise ValueError("empty direct sum")
    q, p = reps[0].quiver, reps[0].p
    if any(r.quiver != q or r.p != p for r in reps):
        raise ValueError("direct sum over mismatched quivers or fields")
    dims = tuple(sum(r.dims[i] for r in reps) for i in range(q.n))
    maps = []
    for k, (s, t) in enumerate(q.arrow_indices):
        block = [[0] * dims[s] for _ in range(dims[t])]
        ro = co = 0
        for r in reps:
            for i, row in enumerate(r.maps[k]):
                block[ro + i][co:co + len(row)] = row
            ro += r.dims[t]
            co += r.dims[s]
        maps.append(tuple(tuple(row) for row in block))
    return Rep(q, dims, tuple(maps), p)


def _check_pair(m: Rep, n: Rep):
    if m.quiver != n.quiver:
        raise ValueError("representations of different quivers")
    if m.p != n.p:
        raise ValueError("representations over different fields")


def hom_dim(m: Rep, n: Rep) -> int:
    """dim Hom(M, N), as the null space of the intertwining system."""
    _check_pair(m, n)
    q, p = m.quiver, m.p
    # unknown phi_v is an (n_v x m_v) matrix, flattened row-major
    offset, total = [], 0
    for v in range(q.n):
        offset.append(total)
        total += n.dims[v] * m.dims[v]
    if total == 0:
        return 0
    rows = []
    for k, (s, t) in enumerate(q.arrow_indices):
        na, ma = n.maps[k], m.maps[k]
        # (N_a phi_s - phi_t M_a)[r][c] == 0
        for r in range(n.dims[t]):
            for c in range(m.dims[s]):
                row = [0] * total
                for j in range(n.dims[s]):
                    if na[r][j]:
                        row[offset[s] + j * m.dims[s] + c] += na[r][j]
                for j in range(m.dims[t]):
                    if ma[j][c]:
                        row[offset[t] + r * m.dims[t] + j] -= ma[j][c]
                if any(row):
                    rows.append(row)
    if not rows:
        return total
    _, pivots = rref(rows, total, p)
    return total - len(pivots)


def ext_dim(m: Rep, n: Rep) -> int:
    value = hom_dim(m, n) - euler_form(m.quiver, m.dims, n.dims)
    assert value >= 0, "negative Ext dimension"
    return value


@functools.lru_cache(maxsize=None)
def interval_hom_table(q: Quiver) -> tuple[tuple[int, ...], ...]:
    """``H[a][b] = dim Hom(I_a, I_b)`` over the roots in ``positive_roots`` order."""
    roots = positive_roots(q)
    mods = [interval_module(q, r) for r in roots]
    return tuple(tuple(hom_dim(a, b) for b in mods) for a in mods)


@functools.lru_cache(maxsize=None)
def hom_order(q: Quiver) -> tuple[int, ...]:
    """Root indices in an order making ``interval_hom_table`` lower unitriangular.

    Hom between distinct indecomposables of a Dynkin quiver only goes one
    way; a cycle here would mean a solver bug.
    """
    h = interval_hom_table(q)
    n = len(h)
    for i in range(n):
        if h[i][i] != 1:
            raise AssertionError("interval module is not a brick")
    # b before a whenever Hom(I_a, I_b) != 0
    indeg = [sum(1 for b in range(n) if b != a and h[a][b]) for a in range(n)]
    ready = [a for a in range(n) if indeg[a] == 0]
    order = []
    while ready:
        b = ready.pop(0)
        order.append(b)
        for a in range(n):
            if a != b and h[a][b]:
                indeg[a] -= 1
                if indeg[a] == 0:
                    ready.append(a)
    if len(order) != n:
        raise AssertionError("Hom relation between indecomposables has a cycle")
    return tuple(order)


def hom_profile(m: Rep) -> tuple[int, ...]:
    """``dim Hom(I_alpha, M)`` for every positive root, in ``positive_roots`` order."""
    q = m.quiver
    return tuple(hom_dim(interval_module(q, r, m.p), m) for r in positive_roots(q))


def decompose(m: Rep) -> dict[tuple[int, ...], int]:
    """Krull-Schmidt multiplicities of the interval modules in ``m``.

    Solves ``sum_b mult_b * Hom(I_a, I_b) = Hom(I_a, M)`` for all roots ``a``;
    the system is unitriangular in ``hom_order``.
    """
    q = m.quiver
    roots = positive_roots(q)
    h = interval_hom_table(q)
    prof = hom_profile(m)
    mult = [0] * len(roots)
    for a in hom_order(q):
        # every b != a with h[a][b] != 0 precedes a
        rest = prof[a] - sum(h[a][b] * mult[b] for b in range(len(roots)) if b != a)
        if rest < 0:
            raise AssertionError(f"negative multiplicity for root {roots[a]}")
        mult[a] = rest
    got = tuple(sum(mult[k] * roots[k][i] for k in range(len(roots))) for i in range(q.n))
    if got != m.dims:
        raise AssertionError("decomposition does not reproduce the dimension vector")
    return {roots[k]: mult[k] for k in range(len(roots)) if mult[k]}
