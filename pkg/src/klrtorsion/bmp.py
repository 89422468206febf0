"""Moment graphs of Bruhat intervals and Braden-MacPherson sheaves.

The structure ring is ``R = k[x_1..x_n]`` with every ``x_i`` in degree 2
(internally we count polynomial degree, ``h``, and report ``2h``).  The edge
between ``z`` and ``t_(a,b) z`` carries the label ``x_a - x_b``; modulo that
label a polynomial is reduced by substituting ``x_a := x_b``, so the edge
quotient ``R / (x_a - x_b)`` has the monomials free of ``x_a`` as a basis.

Stalks are built top-down.  At a vertex ``x`` the image of the sections over
``(x, w]`` in the upward edge modules is computed one degree at a time; the
stalk is its minimal graded free cover, and the chosen generator images
become the restriction maps to the upward edges.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from .exact import GradedRank, is_prime, rref
from .weyl import Permutation, bruhat_interval, bruhat_leq, length

__all__ = [
    "MomentGraph",
    "BMPSheaf",
    "ComparisonReport",
    "moment_graph",
    "bmp_sheaf",
    "stalk_rank",
    "torsion_probe",
]


@dataclass(frozen=True)
class Edge:
    lower: Permutation
    upper: Permutation
    a: int  # label x_a - x_b, a < b
    b: int

    @property
    def label(self) -> tuple[int, ...]:
        n = self.lower.n
        return tuple(1 if i == self.a else -1 if i == self.b else 0 for i in range(1, n + 1))


@dataclass(frozen=True)
class MomentGraph:
    bottom: Permutation
    top: Permutation
    vertices: tuple[Permutation, ...]  # sorted by (length, one-line)
    edges: tuple[Edge, ...]

    @property
    def n(self) -> int:
        return self.top.n

    @functools.cached_property
    def lengths(self) -> dict[Permutation, int]:
        return {z: length(z) for z in self.vertices}

    @functools.cached_property
    def up_edges(self) -> dict[Permutation, list[Edge]]:
        out = {z: [] for z in self.vertices}
        for e in self.edges:
            out[e.lower].append(e)
        return out

    def stats(self) -> dict:
        by_len: dict[int, int] = {}
        for z in self.vertices:
            by_len[self.lengths[z]] = by_len.get(self.lengths[z], 0) + 1
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "vertices_by_length": {str(k): v for k, v in sorted(by_len.items())},
        }


def moment_graph(y: Permutation, w: Permutation) -> MomentGraph:
    """Moment graph on the Bruhat interval ``[y, w]``."""
    if not bruhat_leq(y, w):
        raise ValueError(f"{y} is not below {w} in Bruhat order")
    verts = bruhat_interval(y, w)
    vset = set(verts)
    lens = {z: length(z) for z in verts}
    edges = []
    for z in verts:
        for a in range(1, z.n + 1):
            for b in range(a + 1, z.n + 1):
                t = z.swap_values(a, b)
                if t in vset and lens[t] > lens[z]:
                    edges.append(Edge(z, t, a, b))
    edges.sort(key=lambda e: (lens[e.lower], e.lower.w, lens[e.upper], e.upper.w))
    return MomentGraph(y, w, tuple(verts), tuple(edges))


# -- monomials -----------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def monomials(n: int, h: int, skip: int = 0) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree ``h`` in ``n`` variables, avoiding variable ``skip`` (1-based; 0 = none)."""
    if h < 0:
        return ()
    vars_ = [i for i in range(n) if i != skip - 1]
    out = []
    for combo in itertools.combinations_with_replacement(vars_, h):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def _reduce(mono: tuple[int, ...], a: int, b: int) -> tuple[int, ...]:
    """Image of a monomial in ``R / (x_a - x_b)``: move the x_a exponent onto x_b."""
    if not mono[a - 1]:
        return mono
    e = list(mono)
    e[b - 1] += e[a - 1]
    e[a - 1] = 0
    return tuple(e)


def _mul(m1, m2):
    return tuple(x + y for x, y in zip(m1, m2))


# -- linear algebra backends ----------------------------------------------------


class _FlintField:
    """Null spaces and row spaces over Q (integer-scaled) or F_p, via FLINT."""

    def __init__(self, p: int):
        self.p = p

    def nullspace(self, rows, ncols):
        if ncols == 0:
            return []
        if not rows:
            return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
        if self.p:
            mat, nullity = flint.nmod_mat(rows, self.p).nullspace()
        else:
            mat, nullity = flint.fmpz_mat(rows).nullspace()
        cols = mat.tolist()
        return [[int(cols[i][j]) for i in range(ncols)] for j in range(nullity)]

    def row_basis(self, vectors, ncols):
        if not vectors or ncols == 0:
            return []
        if self.p:
            mat, rank = flint.nmod_mat(vectors, self.p).rref()
        else:
            mat, _, rank = flint.fmpz_mat(vectors).rref()
        rows = mat.tolist()
        return [[int(x) for x in rows[i]] for i in range(rank)]


class _PythonField:
    """Pure-Python fallback built on ``exact.rref``; slow, used as a cross-check."""

    def __init__(self, p: int):
        self.p = p

    def _ints(self, vec):
        if self.p:
            return [int(x) for x in vec]
        den = 1
        for x in vec:
            den = math.lcm(den, x.denominator)
        return [int(x * den) for x in vec]

    def nullspace(self, rows, ncols):
        if ncols == 0:
            return []
        red, piv = rref(rows, ncols, self.p) if rows else ([], [])
        pset = set(piv)
        out = []
        for f in range(ncols):
            if f in pset:
                continue
            vec = [0] * ncols
            vec[f] = 1
            for row, pc in zip(red, piv):
                vec[pc] = (-row[f]) % self.p if self.p else -row[f]
            out.append(self._ints(vec) if not self.p else vec)
        return out

    def row_basis(self, vectors, ncols):
        if not vectors:
            return []
        red, _ = rref(vectors, ncols, self.p)
        return [self._ints(r) for r in red]


def _backend(p: int, backend: str):
    if backend == "flint":
        return _FlintField(p)
    if backend == "python":
        return _PythonField(p)
    raise ValueError(f"unknown backend {backend!r}")


class _Reducer:
    """Incremental echelon basis used to pick generators complementing a subspace."""

    def __init__(self, p: int):
        self.p = p
        self.rows: dict[int, list] = {}  # pivot column -> row with leading 1 there

    def _scalar(self, x):
        return x % self.p if self.p else Fraction(x)

    def reduce(self, vec):
        v = [self._scalar(x) for x in vec]
        for c in sorted(self.rows):
            if v[c]:
                f = v[c]
                r = self.rows[c]
                if self.p:
                    v = [(x - f * y) % self.p for x, y in zip(v, r)]
                else:
                    v = [x - f * y for x, y in zip(v, r)]
        return v

    def add(self, vec) -> bool:
        v = self.reduce(vec)
        piv = next((i for i, x in enumerate(v) if x), None)
        if piv is None:
            return False
        f = v[piv]
        if self.p:
            inv = pow(int(f), -1, self.p)
            v = [x * inv % self.p for x in v]
        else:
            v = [x / f for x in v]
        for c, r in self.rows.items():
            if r[piv]:
                g = r[piv]
                self.rows[c] = [(x - g * y) % self.p if self.p else x - g * y for x, y in zip(r, v)]
        self.rows[piv] = v
        return True


# -- the sheaf --------------------------------------------------------------------


class BudgetExhausted(Exception):
    """Raised inside a sweep when the wall-clock or size budget runs out."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass
class BMPSheaf:
    graph: MomentGraph
    p: int
    # generator polynomial degrees (h) per vertex
    gens: dict[Permutation, list[int]] = field(default_factory=dict)
    # restriction of each generator to each upward edge: {(k', mono): coeff}
    restrictions: dict[tuple[Permutation, Edge], list[dict]] = field(default_factory=dict)
    complete: bool = True
    stop_reason: str | None = None
    elapsed: float = 0.0

    def stalk(self, z: Permutation) -> GradedRank:
        if z not in self.gens:
            raise KeyError(f"{z} is not a computed vertex of the graph")
        return GradedRank(tuple(2 * h for h in self.gens[z]))


def stalk_rank(sheaf: BMPSheaf, z: Permutation) -> GradedRank:
    return sheaf.stalk(z)


def bmp_sheaf(
    graph: MomentGraph,
    p: int = 0,
    *,
    extra_degrees: int = 0,
    reverse_ties: bool = False,
    deadline: float | None = None,
    max_unknowns: int | None = None,
    backend: str = "flint",
) -> BMPSheaf:
    """Braden-MacPherson sheaf of ``graph`` over Q (``p == 0``) or F_p.

    Stalk generators at ``x`` are searched up to degree ``l(w) - l(x)``
    (plus ``2 * extra_degrees``).  ``deadline`` (a ``time.monotonic`` value)
    is checked between vertices and between degrees, ``max_unknowns`` before
    each linear solve; when either trips, the sheaf is returned with
    ``complete=False`` holding the vertices finished so far.
    """
    if p and not is_prime(p):
        raise ValueError(f"{p} is not prime")
    field_ = _backend(p, backend)
    start = time.monotonic()
    sheaf = BMPSheaf(graph, p)
    lens = graph.lengths
    top = graph.top
    ltop = lens[top]
    levels: dict[int, list[Permutation]] = {}
    for z in graph.vertices:
        levels.setdefault(lens[z], []).append(z)
    for lev in sorted(levels, reverse=True):
        verts = sorted(levels[lev], key=lambda z: z.w, reverse=reverse_ties)
        for x in verts:
            if deadline is not None and time.monotonic() > deadline:
                sheaf.complete, sheaf.stop_reason = False, "budget"
                sheaf.elapsed = time.monotonic() - start
                return sheaf
            if x == top:
                sheaf.gens[x] = [0]
                continue
            bound = (ltop - lens[x]) // 2 + extra_degrees
            try:
                _process_vertex(sheaf, x, bound, field_, max_unknowns, deadline)
            except BudgetExhausted as exc:
                sheaf.complete, sheaf.stop_reason = False, exc.reason
                sheaf.elapsed = time.monotonic() - start
                return sheaf
    sheaf.elapsed = time.monotonic() - start
    return sheaf


def _process_vertex(sheaf: BMPSheaf, x: Permutation, bound: int, field_, max_unknowns, deadline=None):
    graph, n, p = sheaf.graph, sheaf.graph.n, sheaf.p
    above = [z for z in graph.vertices if z != x and bruhat_leq(x, z)]
    above_set = set(above)
    inner_edges = [e for e in graph.edges if e.lower in above_set and e.upper in above_set]
    delta = graph.up_edges[x]

    # coordinates of the upward edge modules, per degree
    def edge_coords(h):
        coords = []
        for e in delta:
            for k2, hk in enumerate(sheaf.gens[e.upper]):
                for mono in monomials(n, h - hk, e.a):
                    coords.append((e, k2, mono))
        return coords

    images: dict[int, list[list]] = {}  # degree -> basis of F_{delta x} in that degree
    coords_at: dict[int, list] = {}
    index_at: dict[int, dict] = {}
    new_gens: list[int] = []
    new_restr: dict[Edge, list[dict]] = {e: [] for e in delta}

    for h in range(bound + 1):
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExhausted("budget")
        coords = edge_coords(h)
        cindex = {c: i for i, c in enumerate(coords)}
        coords_at[h], index_at[h] = coords, cindex
        # unknowns: sections over (x, w] in degree h
        unknowns = {}
        for z in above:
            for k, hk in enumerate(sheaf.gens[z]):
                for mono in monomials(n, h - hk):
                    unknowns[(z, k, mono)] = len(unknowns)
        if max_unknowns is not None and len(unknowns) > max_unknowns:
            raise BudgetExhausted("size")
        ncols = len(unknowns)
        rowmap: dict = {}
        rows: list[dict] = []

        def row(key):
            i = rowmap.get(key)
            if i is None:
                i = rowmap[key] = len(rows)
                rows.append({})
            return rows[i]

        for e in inner_edges:
            lo, up = e.lower, e.upper
            restr = sheaf.restrictions[(lo, e)]
            for k, hk in enumerate(sheaf.gens[lo]):
                for mono in monomials(n, h - hk):
                    col = unknowns[(lo, k, mono)]
                    rm = _reduce(mono, e.a, e.b)
                    for (k2, nu), c in restr[k].items():
                        r = row((e, k2, _mul(rm, nu)))
                        r[col] = r.get(col, 0) + c
            for k2, hk in enumerate(sheaf.gens[up]):
                for mono in monomials(n, h - hk):
                    col = unknowns[(up, k2, mono)]
                    r = row((e, k2, _reduce(mono, e.a, e.b)))
                    r[col] = r.get(col, 0) - 1
        dense = []
        for r in rows:
            if any(c % p if p else c for c in r.values()):
                v = [0] * ncols
                for col, c in r.items():
                    v[col] = c % p if p else c
                dense.append(v)
        kernel = field_.nullspace(dense, ncols)
        # project sections onto the upward edges at x
        proj = []
        for vec in kernel:
            out = [0] * len(coords)
            for e in delta:
                up = e.upper
                for k2, hk in enumerate(sheaf.gens[up]):
                    for mono in monomials(n, h - hk):
                        c = vec[unknowns[(up, k2, mono)]]
                        if c:
                            out[cindex[(e, k2, _reduce(mono, e.a, e.b))]] += c
            if any(out):
                proj.append(out)
        basis = field_.row_basis(proj, len(coords))
        images[h] = basis
        # R_+ times lower degrees
        red = _Reducer(p)
        if h >= 1:
            for vec in images[h - 1]:
                for r in range(n):
                    step = [0] * n
                    step[r] = 1
                    step = tuple(step)
                    out = [0] * len(coords)
                    for i, c in enumerate(vec):
                        if c:
                            e, k2, mono = coords_at[h - 1][i]
                            out[cindex[(e, k2, _reduce(_mul(mono, step), e.a, e.b))]] += c
                    red.add(out)
        for vec in basis:
            if red.add(vec):
                new_gens.append(h)
                for e in delta:
                    new_restr[e].append({})
                for i, c in enumerate(vec):
                    c = c % p if p else c
                    if c:
                        e, k2, mono = coords[i]
                        new_restr[e][-1][(k2, mono)] = c
    sheaf.gens[x] = new_gens
    for e in delta:
        sheaf.restrictions[(x, e)] = new_restr[e]


# -- torsion probe -----------------------------------------------------------------


@dataclass
class ComparisonReport:
    y: Permutation
    w: Permutation
    p: int
    ranks_char0: dict[Permutation, GradedRank]
    ranks_charp: dict[Permutation, GradedRank]
    divergent: list[Permutation]
    budget_exhausted: bool
    interval_stats: dict
    elapsed: float = 0.0

    @property
    def verdict(self) -> str:
        if self.divergent:
            return "DIVERGENT"
        return "INCOMPLETE" if self.budget_exhausted else "IDENTICAL"

    def divergent_at(self, z: Permutation) -> bool:
        return z in self.divergent

    def to_json(self) -> dict:
        verts = []
        for z in sorted(set(self.ranks_char0) | set(self.ranks_charp), key=lambda z: (length(z), z.w)):
            r0, rp = self.ranks_char0.get(z), self.ranks_charp.get(z)
            verts.append(
                {
                    "perm": str(z),
                    "ranks_char0": list(r0.degrees) if r0 else None,
                    "ranks_charp": list(rp.degrees) if rp else None,
                }
            )
        return {
            "y": str(self.y),
            "w": str(self.w),
            "p": self.p,
            "vertices": verts,
            "divergent": [str(z) for z in self.divergent],
            "verdict": self.verdict,
            "budget_exhausted": self.budget_exhausted,
            "interval": self.interval_stats,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ComparisonReport":
        r0, rp = {}, {}
        for v in data["vertices"]:
            z = Permutation.parse(v["perm"])
            if v["ranks_char0"] is not None:
                r0[z] = GradedRank(tuple(v["ranks_char0"]))
            if v["ranks_charp"] is not None:
                rp[z] = GradedRank(tuple(v["ranks_charp"]))
        return cls(
            Permutation.parse(data["y"]),
            Permutation.parse(data["w"]),
            data["p"],
            r0,
            rp,
            [Permutation.parse(s) for s in data["divergent"]],
            data["budget_exhausted"],
            data.get("interval", {}),
        )


def default_threads() -> int:
    return max(1, int(os.environ.get("KLRTORSION_THREADS", "2")))


def torsion_probe(
    y: Permutation,
    w: Permutation,
    p: int,
    *,
    budget: float | None = None,
    max_unknowns: int | None = None,
    threads: int | None = None,
    graph: MomentGraph | None = None,
) -> ComparisonReport:
    """Compare BMP stalks over Q and over F_p on ``[y, w]``."""
    start = time.monotonic()
    graph = graph or moment_graph(y, w)
    deadline = None if budget is None else start + budget
    threads = threads or default_threads()
    with ThreadPoolExecutor(max_workers=min(2, threads)) as pool:
        f0 = pool.submit(bmp_sheaf, graph, 0, deadline=deadline, max_unknowns=max_unknowns)
        fp = pool.submit(bmp_sheaf, graph, p, deadline=deadline, max_unknowns=max_unknowns)
        s0, sp = f0.result(), fp.result()
    r0 = {z: s0.stalk(z) for z in s0.gens}
    rp = {z: sp.stalk(z) for z in sp.gens}
    divergent = []
    for z in graph.vertices:
        if z in r0 and z in rp:
            if not rp[z].dominates(r0[z]):
                raise AssertionError(f"F_{p} stalk at {z} is smaller than the rational one")
            if r0[z] != rp[z]:
                divergent.append(z)
    stats = graph.stats()
    stats["computed_char0"] = len(r0)
    stats["computed_charp"] = len(rp)
    stats["stop_reason"] = s0.stop_reason or sp.stop_reason
    return ComparisonReport(
        y, w, p, r0, rp, divergent,
        budget_exhausted=not (s0.complete and sp.complete),
        interval_stats=stats,
        elapsed=time.monotonic() - start,
    )
