"""Point counts of the Kashiwara-Saito variety.

``S`` is the variety of quadruples ``(M_0, M_1, M_2, M_3)`` of 2x2 matrices,
indices in Z/4, with ``rank M_i <= 1`` and ``M_i M_{i+1} = 0`` (including the
wrap-around ``M_3 M_0 = 0``).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import interpolate_integer_polynomial, is_prime, poly_eval, prime_power_base

__all__ = [
    "is_ks_point",
    "rank_le_one_matrices",
    "count_points_bruteforce",
    "count_points_stratified",
    "DimensionEstimate",
    "dimension_estimate",
    "DEFAULT_SAMPLES",
    "DEFAULT_HOLDOUT",
    "lower_bound",
]

DEFAULT_SAMPLES = (2, 3, 4, 5, 7, 8, 9, 11, 13)
DEFAULT_HOLDOUT = 17
BRUTEFORCE_MAX_Q = 3

Matrix = tuple[int, int, int, int]  # (a, b, c, d) for [[a, b], [c, d]]


def _mul(m: Matrix, n: Matrix, q: int) -> Matrix:
    a, b, c, d = m
    e, f, g, h = n
    return ((a * e + b * g) % q, (a * f + b * h) % q, (c * e + d * g) % q, (c * f + d * h) % q)


def _det(m: Matrix, q: int) -> int:
    return (m[0] * m[3] - m[1] * m[2]) % q


def is_ks_point(quad: Sequence[Matrix], q: int) -> bool:
    if len(quad) != 4:
        raise ValueError("need four matrices")
    quad = [tuple(x % q for x in m) for m in quad]
    if any(_det(m, q) for m in quad):
        return False
    return all(not any(_mul(quad[i], quad[(i + 1) % 4], q)) for i in range(4))


def rank_le_one_matrices(q: int) -> list[Matrix]:
    if not is_prime(q):
        raise ValueError("explicit matrices need a prime q")
    return [m for m in itertools.product(range(q), repeat=4) if _det(m, q) == 0]


def count_points_bruteforce(q: int) -> int:
    """``|S(F_q)|`` by enumeration, pruning on each consecutive product."""
    if not is_prime(q):
        raise ValueError("brute force needs a prime q")
    if q > BRUTEFORCE_MAX_Q:
        raise ValueError(f"q = {q} exceeds the brute-force budget (q <= {BRUTEFORCE_MAX_Q})")
    mats = rank_le_one_matrices(q)
    zero = (0, 0, 0, 0)
    # right[m] = matrices n with m n = 0
    right = {m: [n for n in mats if _mul(m, n, q) == zero] for m in mats}
    total = 0
    for m0 in mats:
        for m1 in right[m0]:
            for m2 in right[m1]:
                for m3 in right[m2]:
                    if _mul(m3, m0, q) == zero:
                        total += 1
    return total


def count_points_stratified(q: int) -> int:
    """``|S(F_q)|`` by summing over rank patterns and line configurations.

    A rank-one matrix is an image line, a kernel line and a nonzero scalar.
    For consecutive rank-one ``M_i, M_{i+1}`` the product vanishes iff
    ``image(M_{i+1}) == kernel(M_i)``.  The configurations for one pattern
    are counted by identifying the constrained line variables (union-find)
    and giving each class ``q + 1`` choices.
    """
    if prime_power_base(q) is None:
        raise ValueError(f"{q} is not a prime power")
    lines = q + 1
    total = 0
    for pattern in itertools.product((0, 1), repeat=4):
        ones = [i for i in range(4) if pattern[i]]
        # variables: ("im", i) and ("ker", i) for each rank-one M_i
        parent = {}
        for i in ones:
            parent[("im", i)] = ("im", i)
            parent[("ker", i)] = ("ker", i)

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for i in ones:
            j = (i + 1) % 4
            if pattern[j]:
                parent[find(("im", j))] = find(("ker", i))
        classes = len({find(v) for v in parent})
        total += (q - 1) ** len(ones) * lines**classes
    return total


def lower_bound(q: int) -> int:
    """Zero quadruple plus quadruples with exactly one nonzero (singular) matrix."""
    singular_nonzero = q**4 - (q * q - 1) * (q * q - q) - 1
    return 1 + 4 * singular_nonzero


@dataclass(frozen=True)
class DimensionEstimate:
    coefficients: tuple[Fraction, ...]  # ascending powers of q
    degree: int
    samples: tuple[tuple[int, int], ...]
    holdout: tuple[int, int]

    def to_json(self) -> dict:
        return {
            "coefficients": [str(c) for c in self.coefficients],
            "degree": self.degree,
            "samples": [list(s) for s in self.samples],
            "holdout": list(self.holdout),
        }


def dimension_estimate(
    qs: Sequence[int] = DEFAULT_SAMPLES,
    holdout: int = DEFAULT_HOLDOUT,
    deadline: float | None = None,
) -> DimensionEstimate:
    """Interpolate ``|S(F_q)|`` through ``qs`` and confirm the fit at ``holdout``.

    ``deadline`` is a ``time.monotonic()`` value checked between q values.
    """
    qs = list(qs)
    if len(set(qs)) < 9:
        raise ValueError("need at least 9 distinct sample points")
    if holdout in qs:
        raise ValueError("held-out point must not be a sample")
    pts = []
    for q in qs:
        if deadline is not None and time.monotonic() > deadline:
            raise TimeoutError(f"budget exhausted after {len(pts)} of {len(qs)} samples")
        pts.append((q, count_points_stratified(q)))
    coeffs = interpolate_integer_polynomial(pts)
    held = (holdout, count_points_stratified(holdout))
    if poly_eval(coeffs, holdout) != held[1]:
        raise ArithmeticError("point count is not polynomial in q on the samples")
    return DimensionEstimate(coeffs, len(coeffs) - 1, tuple(pts), held)
