"""Formal Grothendieck-group bookkeeping over Z[v, v^-1].

Decomposition matrices are square matrices of Laurent polynomials indexed by
stratum labels; column ``mu`` lists the image of the simple ``L(mu)``.  The
extension matrix is the transpose (Brauer reciprocity).  The characteristic
zero matrix for the double-flag quiver has entries

    D[lam][mu] = v^(l(w_mu) - l(w_lam)) * P_{w_lam, w_mu}(v^-2),

a normalization chosen here; raw KL polynomials travel alongside.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exact import LaurentPoly
from .strata import Multisegment, closure_leq
from .weyl import (
    KLCache,
    injective_strata,
    kl_polynomial,
    length,
    zelevinsky_dim,
    zelevinsky_permutation,
    zelevinsky_quiver,
)

__all__ = [
    "BasedLaurentModule",
    "DecompositionMatrix",
    "pairing",
    "extension_from_decomposition",
    "check_brauer_reciprocity",
    "char0_decomposition_matrix",
    "predicted_modular_identity",
    "LabelledStratum",
]

ZERO = LaurentPoly(0)
ONE = LaurentPoly(1)


@dataclass(frozen=True)
class BasedLaurentModule:
    """Free Z[v^±1]-module with a named basis; elements are label -> coefficient maps."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be distinct")

    def basis(self, label: str) -> dict[str, LaurentPoly]:
        if label not in self.labels:
            raise KeyError(label)
        return {label: ONE}

    def element(self, coeffs: Sequence[LaurentPoly]) -> dict[str, LaurentPoly]:
        return {l: c for l, c in zip(self.labels, coeffs) if not c.is_zero()}


def pairing(a: dict[str, LaurentPoly], b: dict[str, LaurentPoly]) -> LaurentPoly:
    """Bilinear pairing making the two given bases dual to each other."""
    out = ZERO
    for label, c in a.items():
        if label in b:
            out = out + c * b[label]
    return out


@dataclass
class DecompositionMatrix:
    labels: list[str]
    entries: list[list[LaurentPoly]]
    # (i, j) means label i <= label j: stratum i lies in the closure of stratum j
    order: set[tuple[int, int]] = field(default_factory=set)
    kl_raw: list[list[LaurentPoly]] | None = None

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise ValueError("labels must be distinct")
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ValueError("decomposition matrix must be square")

    def validate(self) -> None:
        n = len(self.labels)
        for i in range(n):
            if self.entries[i][i] != ONE:
                raise ValueError(f"diagonal entry at {self.labels[i]} is {self.entries[i][i]}")
            for j in range(n):
                e = self.entries[i][j]
                if e.is_zero() or i == j:
                    continue
                if not e.is_nonnegative():
                    raise ValueError(f"negative coefficient at ({self.labels[i]}, {self.labels[j]})")
                if (i, j) not in self.order:
                    raise ValueError(f"entry ({self.labels[i]}, {self.labels[j]}) is off the closure order")

    def transpose(self) -> "DecompositionMatrix":
        n = len(self.labels)
        ent = [[self.entries[j][i] for j in range(n)] for i in range(n)]
        raw = None if self.kl_raw is None else [[self.kl_raw[j][i] for j in range(n)] for i in range(n)]
        return DecompositionMatrix(list(self.labels), ent, {(j, i) for i, j in self.order}, raw)

    def is_identity(self) -> bool:
        n = len(self.labels)
        return all(self.entries[i][j] == (ONE if i == j else ZERO) for i in range(n) for j in range(n))

    def to_json(self) -> dict:
        out = {
            "labels": list(self.labels),
            "order": sorted([list(p) for p in self.order]),
            "entries": [[str(e) for e in row] for row in self.entries],
        }
        if self.kl_raw is not None:
            out["kl_raw"] = [[str(e) for e in row] for row in self.kl_raw]
        return out


def extension_from_decomposition(d: DecompositionMatrix) -> DecompositionMatrix:
    """Matrix of the extension map: the transpose of ``d``."""
    return d.transpose()


def check_brauer_reciprocity(d: DecompositionMatrix, e: DecompositionMatrix) -> bool:
    """``<e(P_lam), L_mu> == <P_lam, d(L_mu)>`` for every pair of basis labels.

    ``d(L_mu)`` is column ``mu`` of ``d`` in the simple basis; ``e(P_lam)`` is
    column ``lam`` of ``e`` in the projective basis; projectives and simples
    are dual bases.
    """
    labels = d.labels
    n = len(labels)
    simples = BasedLaurentModule(tuple(labels))
    for lam in range(n):
        e_p = {labels[i]: e.entries[i][lam] for i in range(n) if not e.entries[i][lam].is_zero()}
        p_lam = simples.basis(labels[lam])
        for mu in range(n):
            d_l = {labels[i]: d.entries[i][mu] for i in range(n) if not d.entries[i][mu].is_zero()}
            l_mu = simples.basis(labels[mu])
            if pairing(e_p, l_mu) != pairing(p_lam, d_l):
                return False
    return True


def char0_decomposition_matrix(n: int, cache: KLCache | None = None) -> DecompositionMatrix:
    """Graded decomposition matrix on the injective strata of the double-flag quiver."""
    q = zelevinsky_quiver(n)
    strata = injective_strata(n)
    for lam in strata:
        if lam.quiver != q or lam.dim != zelevinsky_dim(n):
            raise ValueError("stratum outside the double-flag quiver")
    perms = [zelevinsky_permutation(lam) for lam in strata]
    order_key = sorted(range(len(strata)), key=lambda i: (length(perms[i]), perms[i].w))
    strata = [strata[i] for i in order_key]
    perms = [perms[i] for i in order_key]
    labels = [str(s) for s in strata]
    size = len(strata)
    ent, raw, order = [], [], set()
    for i in range(size):
        row, rrow = [], []
        for j in range(size):
            p = kl_polynomial(perms[i], perms[j], cache)
            rrow.append(p)
            if p.is_zero():
                row.append(ZERO)
            else:
                gap = length(perms[j]) - length(perms[i])
                row.append(p.substitute_power(-2, gap, var="v"))
            if closure_leq(strata[j], strata[i]):
                order.add((i, j))
        ent.append(row)
        raw.append(rrow)
    d = DecompositionMatrix(labels, ent, order, raw)
    d.validate()
    return d


@dataclass(frozen=True)
class LabelledStratum:
    name: str
    stratum: Multisegment


def predicted_modular_identity(report, lower: LabelledStratum, upper: LabelledStratum) -> dict:
    """Format the class identity implied by a DIVERGENT torsion probe.

    ``lower`` must be strictly below ``upper`` in the closure order and the
    report must diverge at its bottom vertex.
    """
    if report.verdict != "DIVERGENT" or not report.divergent_at(report.y):
        raise ValueError("no torsion certified: the report does not diverge at its bottom vertex")
    if lower.stratum == upper.stratum or not closure_leq(upper.stratum, lower.stratum):
        raise ValueError(f"closure order violated: {lower.name} is not strictly below {upper.name}")
    p = report.p
    lo, up = lower.name, upper.name
    return {
        "p": p,
        "lower": {"name": lo, "stratum": str(lower.stratum), "vertex": str(report.y)},
        "upper": {"name": up, "stratum": str(upper.stratum), "vertex": str(report.w)},
        "decomposition": f"[L({lo}, Z_{p}) ⊗ F_{p}] = [L({lo}, F_{p})] + [L({up}, F_{p})]",
        "geometric": f"E({up}, Z_{p}) ⊗ Q_{p} ≅ IC({up}) ⊕ IC({lo})",
        "divergent_vertices": [str(z) for z in report.divergent],
    }
