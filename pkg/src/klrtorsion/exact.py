"""Exact arithmetic substrate.

Laurent polynomials with integer coefficients, graded ranks, dense exact
matrices over Q or a prime field F_p, row reduction and exact Lagrange
interpolation.  A field is named by its characteristic: ``0`` means the
rationals, a prime ``p`` means F_p with canonical residues ``0..p-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "LaurentPoly",
    "GradedRank",
    "ExactMatrix",
    "is_prime",
    "prime_power_base",
    "normalize",
    "rref",
    "rank_and_kernel",
    "interpolate_integer_polynomial",
    "poly_eval",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    k = 3
    while k * k <= p:
        if p % k == 0:
            return False
        k += 2
    return True


def prime_power_base(q: int) -> int | None:
    """Return the prime ``p`` with ``q == p**k`` (k >= 1), or None."""
    if q < 2:
        return None
    p = 2
    while q % p:
        p += 1
    while q % p == 0:
        q //= p
    return p if q == 1 else None


class LaurentPoly:
    """Integer Laurent polynomial in one variable, stored as ``{exponent: coeff}``.

    Instances are immutable and hashable; zero coefficients are never stored.
    The variable name only affects printing.
    """

    __slots__ = ("_c", "var")

    def __init__(self, coeffs: Mapping[int, int] | int | None = None, var: str = "v"):
        if coeffs is None:
            c = {}
        elif isinstance(coeffs, int):
            c = {0: coeffs} if coeffs else {}
        else:
            c = {}
            for e, a in coeffs.items():
                if a:
                    c[int(e)] = c.get(int(e), 0) + int(a)
            c = {e: a for e, a in c.items() if a}
        object.__setattr__(self, "_c", c)
        object.__setattr__(self, "var", var)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1, var: str = "v") -> "LaurentPoly":
        return cls({exponent: coeff}, var)

    @classmethod
    def from_coeff_list(cls, coeffs: Sequence[int], var: str = "q") -> "LaurentPoly":
        return cls(dict(enumerate(coeffs)), var)

    # -- inspection --------------------------------------------------------
    def items(self):
        return sorted(self._c.items())

    def coeff(self, e: int) -> int:
        return self._c.get(e, 0)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of the zero polynomial")
        return max(self._c)

    def min_degree(self) -> int:
        if not self._c:
            raise ValueError("min_degree of the zero polynomial")
        return min(self._c)

    def is_nonnegative(self) -> bool:
        return all(a > 0 for a in self._c.values())

    def evaluate(self, x):
        x = Fraction(x)
        return sum((Fraction(a) * x**e for e, a in self._c.items()), Fraction(0))

    # -- arithmetic --------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly(other, self.var)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for e, a in o._c.items():
            c[e] = c.get(e, 0) + a
        return LaurentPoly(c, self.var)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -a for e, a in self._c.items()}, self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c: dict[int, int] = {}
        for e1, a1 in self._c.items():
            for e2, a2 in o._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + a1 * a2
        return LaurentPoly(c, self.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._c) == 1:
                (e, a), = self._c.items()
                if a in (1, -1):
                    return LaurentPoly({e * k: a**k}, self.var)
            raise ValueError("only monomials with unit coefficient are invertible")
        out = LaurentPoly(1, self.var)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def bar(self) -> "LaurentPoly":
        """The involution v -> v^{-1}."""
        return LaurentPoly({-e: a for e, a in self._c.items()}, self.var)

    def substitute_power(self, k: int, shift: int = 0, var: str | None = None) -> "LaurentPoly":
        """Return ``v^shift * self(v^k)``."""
        return LaurentPoly({k * e + shift: a for e, a in self._c.items()}, var or self.var)

    def with_var(self, var: str) -> "LaurentPoly":
        return LaurentPoly(self._c, var)

    # -- text --------------------------------------------------------------
    def __str__(self):
        if not self._c:
            return "0"
        out = []
        for e, a in sorted(self._c.items()):
            sign = "-" if a < 0 else "+"
            a = abs(a)
            if e == 0:
                body = str(a)
            else:
                mono = self.var if e == 1 else f"{self.var}^{e}"
                body = mono if a == 1 else f"{a}{mono}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += sign + body
        return s

    def __repr__(self):
        return f"LaurentPoly({self})"

    _TERM = re.compile(r"([+-]?)(\d*)(?:([a-zA-Z])(?:\^(-?\d+))?)?")

    @classmethod
    def parse(cls, text: str, var: str = "v") -> "LaurentPoly":
        text = text.replace(" ", "")
        if text in ("", "0"):
            return cls(None, var)
        c: dict[int, int] = {}
        pos = 0
        while pos < len(text):
            m = cls._TERM.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse Laurent polynomial {text!r}")
            sign, num, letter, exp = m.groups()
            if not num and not letter:
                raise ValueError(f"cannot parse Laurent polynomial {text!r}")
            if letter:
                var = letter
            a = int(num) if num else 1
            e = (int(exp) if exp is not None else 1) if letter else 0
            c[e] = c.get(e, 0) + (-a if sign == "-" else a)
            pos = m.end()
        return cls(c, var)


@dataclass(frozen=True)
class GradedRank:
    """Degrees of the free generators of a graded free module (sorted)."""

    degrees: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees)))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def as_poly(self, step: int = 1, var: str = "v") -> LaurentPoly:
        """Generating polynomial; degree ``d`` contributes ``var^(d // step)``."""
        c: dict[int, int] = {}
        for d in self.degrees:
            if d % step:
                raise ValueError(f"degree {d} not divisible by {step}")
            c[d // step] = c.get(d // step, 0) + 1
        return LaurentPoly(c, var)

    @classmethod
    def from_poly(cls, poly: LaurentPoly, step: int = 1) -> "GradedRank":
        degs = []
        for e, a in poly.items():
            if a < 0:
                raise ValueError("graded rank needs nonnegative coefficients")
            degs.extend([e * step] * a)
        return cls(tuple(degs))

    def dominates(self, other: "GradedRank") -> bool:
        """True if every degree occurs at least as often here as in ``other``."""
        mine, theirs = self.as_poly(), other.as_poly()
        return all(mine.coeff(e) >= a for e, a in theirs.items())


# -- dense exact linear algebra ------------------------------------------------


def normalize(x, p: int):
    """Coerce a scalar into the field of characteristic ``p``."""
    if p:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p
    return Fraction(x)


@dataclass(frozen=True)
class ExactMatrix:
    rows: tuple[tuple, ...]
    ncols: int
    p: int = 0

    def __post_init__(self):
        if self.p and not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        rows = tuple(tuple(normalize(x, self.p) for x in r) for r in self.rows)
        if any(len(r) != self.ncols for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], p: int = 0, ncols: int | None = None) -> "ExactMatrix":
        rows = [tuple(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(tuple(rows), ncols, p)

    @property
    def nrows(self) -> int:
        return len(self.rows)


def rref(rows: Sequence[Sequence], ncols: int, p: int = 0) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns.

    Pivots are taken column by column, choosing the first available row, so
    the output is deterministic.
    """
    m = [[normalize(x, p) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        if p:
            inv = pow(m[r][c], -1, p)
            m[r] = [x * inv % p for x in m[r]]
        else:
            inv = 1 / m[r][c]
            m[r] = [x * inv for x in m[r]]
        row_r = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                if p:
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], row_r)]
                else:
                    m[i] = [a - f * b for a, b in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank_and_kernel(m: ExactMatrix) -> tuple[int, list[tuple]]:
    """Rank and a kernel basis (right null space) of ``m``."""
    red, pivots = rref(m.rows, m.ncols, m.p)
    one, zero = normalize(1, m.p), normalize(0, m.p)
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    kernel = []
    for f in free:
        vec = [zero] * m.ncols
        vec[f] = one
        for row, pc in zip(red, pivots):
            vec[pc] = (-row[f]) % m.p if m.p else -row[f]
        kernel.append(tuple(vec))
    return len(pivots), kernel


# -- interpolation ---------------------------------------------------------------


def poly_eval(coeffs: Sequence, x) -> Fraction:
    """Evaluate an ascending coefficient list at ``x`` (Horner)."""
    acc = Fraction(0)
    for a in reversed(coeffs):
        acc = acc * x + a
    return acc


def interpolate_integer_polynomial(points: Sequence[tuple[int, int]]) -> tuple[Fraction, ...]:
    """Exact Lagrange interpolation.

    Returns the ascending coefficients of the unique polynomial of degree
    ``< len(points)`` through ``points``, with trailing zeros removed.
    """
    if not points:
        raise ValueError("need at least one point")
    xs = [Fraction(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    n = len(points)
    total = [Fraction(0)] * n
    for i, (xi, (_, yi)) in enumerate(zip(xs, points)):
        # numerator polynomial prod_{j != i} (x - x_j)
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        scale = Fraction(yi) / denom
        for k, b in enumerate(basis):
            total[k] += scale * b
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return tuple(total)
