"""Orbit strata of representation spaces.

A stratum is labelled by a multisegment (Kostant partition): multiplicities
``lam[alpha]`` of positive roots with ``sum lam[alpha] * alpha == d``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .quiver import (
    Quiver,
    Rep,
    direct_sum,
    ext_dim,
    interval_hom_table,
    interval_module,
    positive_roots,
    root_sort_key,
)

__all__ = [
    "Multisegment",
    "StratumInfo",
    "enumerate_strata",
    "enumerate_seq_count",
    "stratum_info",
    "closure_leq",
    "rank_function",
    "rank_function_leq",
    "rep_of_multisegment",
    "parse_multisegment",
    "KS_DIM",
    "ks_quiver",
    "ks_sigma",
    "ks_pi",
]


@dataclass(frozen=True)
class Multisegment:
    quiver: Quiver
    dim: tuple[int, ...]
    parts: tuple[tuple[tuple[int, ...], int], ...]

    def __post_init__(self):
        roots = set(positive_roots(self.quiver))
        merged: dict[tuple[int, ...], int] = {}
        for r, k in self.parts:
            r = tuple(r)
            if r not in roots:
                raise ValueError(f"{r} is not a positive root")
            if k < 0:
                raise ValueError("negative multiplicity")
            if k:
                merged[r] = merged.get(r, 0) + k
        parts = tuple(sorted(merged.items(), key=lambda rk: root_sort_key(rk[0])))
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "dim", tuple(self.dim))
        total = tuple(sum(k * r[i] for r, k in parts) for i in range(self.quiver.n))
        if total != self.dim:
            raise ValueError(f"multisegment sums to {total}, expected {self.dim}")

    @classmethod
    def from_mapping(cls, quiver: Quiver, mults: Mapping[tuple[int, ...], int]) -> "Multisegment":
        parts = tuple((tuple(r), k) for r, k in mults.items())
        dim = tuple(sum(k * r[i] for r, k in parts) for i in range(quiver.n))
        return cls(quiver, dim, parts)

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.parts)

    def mult(self, root: Sequence[int]) -> int:
        return self.as_dict().get(tuple(root), 0)

    def segments(self) -> list[tuple[int, int, int]]:
        """Type A only: ``(first, last, multiplicity)`` in vertex labels of path order."""
        q = self.quiver
        out = []
        for r, k in self.parts:
            a, b = q.interval(r)
            out.append((q.vertices[q.line[a]], q.vertices[q.line[b]], k))
        return out

    def __str__(self):
        if self.quiver.is_type_a:
            terms = [(f"{k}" if k > 1 else "") + f"[{a},{b}]" for a, b, k in self.segments()]
        else:
            terms = [(f"{k}" if k > 1 else "") + "(" + ",".join(map(str, r)) + ")" for r, k in self.parts]
        return "+".join(terms) if terms else "0"

    def to_json(self):
        if self.quiver.is_type_a:
            return {"text": str(self), "segments": [list(s) for s in self.segments()]}
        return {"text": str(self), "roots": [{"root": list(r), "mult": k} for r, k in self.parts]}


_TERM = re.compile(r"\s*(\d*)\s*\[\s*(\d+)\s*,\s*(\d+)\s*\]\s*")


def parse_multisegment(quiver: Quiver, text: str) -> Multisegment:
    """Parse ``2[3,3]+[1,2]`` (type A, vertex labels along the path)."""
    pos = {quiver.vertices[v]: k for k, v in enumerate(quiver.line)}
    mults: dict[tuple[int, ...], int] = {}
    for term in text.split("+"):
        m = _TERM.fullmatch(term)
        if not m:
            raise ValueError(f"cannot parse segment {term!r}")
        k = int(m.group(1)) if m.group(1) else 1
        a, b = int(m.group(2)), int(m.group(3))
        if a not in pos or b not in pos:
            raise ValueError(f"unknown vertex in {term!r}")
        pa, pb = sorted((pos[a], pos[b]))
        r = quiver.interval_root(pa, pb)
        mults[r] = mults.get(r, 0) + k
    return Multisegment.from_mapping(quiver, mults)


def enumerate_strata(q: Quiver, d: Sequence[int]) -> list[Multisegment]:
    """All multisegments of ``d``, by backtracking over roots (height desc, start asc)."""
    d = tuple(d)
    if len(d) != q.n or any(x < 0 for x in d):
        raise ValueError("bad dimension vector")
    roots = positive_roots(q)
    out: list[Multisegment] = []
    chosen: list[int] = [0] * len(roots)

    def rec(k: int, rem: list[int]):
        if not any(rem):
            parts = tuple((roots[i], chosen[i]) for i in range(len(roots)) if chosen[i])
            out.append(Multisegment(q, d, parts))
            return
        if k == len(roots):
            return
        r = roots[k]
        cap = min((rem[i] // r[i] for i in range(q.n) if r[i]), default=0)
        for m in range(cap, -1, -1):
            chosen[k] = m
            rec(k + 1, [rem[i] - m * r[i] for i in range(q.n)])
        chosen[k] = 0

    rec(0, list(d))
    return out


def enumerate_seq_count(d: Sequence[int]) -> int:
    """Number of vertex sequences with content ``d``: the multinomial coefficient."""
    out = math.factorial(sum(d))
    for x in d:
        out //= math.factorial(x)
    return out


@dataclass(frozen=True)
class StratumInfo:
    dimension: int
    codimension: int
    ambient_dimension: int
    group_dimension: int
    endomorphism_dimension: int


def _end_dim(lam: Multisegment) -> int:
    q = lam.quiver
    idx = {r: k for k, r in enumerate(positive_roots(q))}
    h = interval_hom_table(q)
    return sum(a * b * h[idx[r]][idx[s]] for r, a in lam.parts for s, b in lam.parts)


def stratum_info(lam: Multisegment, check_ext: bool = True) -> StratumInfo:
    q, d = lam.quiver, lam.dim
    ambient = sum(d[s] * d[t] for s, t in q.arrow_indices)
    group = sum(x * x for x in d)
    end = _end_dim(lam)
    orbit = group - end
    codim = ambient - orbit
    if check_ext and q.is_type_a:
        m = rep_of_multisegment(lam)
        e = ext_dim(m, m)
        if e != codim:
            raise AssertionError(f"codimension {codim} != dim Ext^1(M, M) = {e}")
    return StratumInfo(orbit, codim, ambient, group, end)


def _profile(lam: Multisegment) -> list[int]:
    """``dim Hom(I_alpha, M_lam)`` for every root, via additivity."""
    q = lam.quiver
    roots = positive_roots(q)
    idx = {r: k for k, r in enumerate(roots)}
    h = interval_hom_table(q)
    return [sum(k * h[a][idx[r]] for r, k in lam.parts) for a in range(len(roots))]


def _check_same(lam: Multisegment, mu: Multisegment):
    if lam.quiver != mu.quiver:
        raise ValueError("multisegments over different quivers")
    if lam.dim != mu.dim:
        raise ValueError(f"dimension vectors differ: {lam.dim} vs {mu.dim}")


def closure_leq(lam: Multisegment, mu: Multisegment) -> bool:
    """True iff the orbit of ``mu`` lies in the closure of the orbit of ``lam`` (hom order)."""
    _check_same(lam, mu)
    a, b = _profile(lam), _profile(mu)
    return all(y >= x for x, y in zip(a, b))


def rank_function(lam: Multisegment) -> dict[tuple[int, int], int]:
    """``r[i, j]`` = rank of the composite ``V_i -> V_j`` (equioriented type A, path positions)."""
    q = lam.quiver
    if not q.is_equioriented():
        raise ValueError("rank functions need an equioriented type-A quiver")
    segs = [(q.interval(r), k) for r, k in lam.parts]
    return {
        (i, j): sum(k for (a, b), k in segs if a <= i and j <= b)
        for i in range(q.n)
        for j in range(i, q.n)
    }


def rank_function_leq(lam: Multisegment, mu: Multisegment) -> bool:
    _check_same(lam, mu)
    rl, rm = rank_function(lam), rank_function(mu)
    return all(rm[k] <= rl[k] for k in rl)


def rep_of_multisegment(lam: Multisegment, p: int = 0) -> Rep:
    q = lam.quiver
    summands = [interval_module(q, r, p) for r, k in lam.parts for _ in range(k)]
    if not summands:
        return Rep.zero(q, lam.dim, p)
    return direct_sum(summands)


def iter_pairs(strata: Sequence[Multisegment]) -> Iterator[tuple[Multisegment, Multisegment]]:
    for a in strata:
        for b in strata:
            yield a, b


# -- the Kashiwara-Saito pair on equioriented A_5 ----------------------------------

KS_DIM = (2, 4, 4, 4, 2)


def ks_quiver() -> Quiver:
    from .quiver import load_quiver

    return load_quiver("a5.qv")


def ks_sigma() -> Multisegment:
    return parse_multisegment(ks_quiver(), "[1,2]+[2,3]+[3,4]+[4,5]+[1,4]+[2,5]")


def ks_pi() -> Multisegment:
    return parse_multisegment(ks_quiver(), "2[3,3]+2[1,2]+2[4,5]+2[2,4]")
