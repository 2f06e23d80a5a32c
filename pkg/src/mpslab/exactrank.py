"""Exact arithmetic in Q(sqrt(p_1), ..., sqrt(p_s)) and full-rank certificates
for sector blocks whose entries are square roots of distinct primes."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

import mpmath
import numpy as np

from .errors import MpslabError, UnsupportedEntryError
from .fock import SectorBlock
from .states import PrimePool

DET_SIZE_CAP = 10

# Working precision for the rigorous nonzero check of float evaluations.
_EVAL_DPS = 60


@dataclass(frozen=True)
class MultiQuad:
    """Element of Q(sqrt(p_1),...,sqrt(p_s)): map from frozensets of primes to
    rational coefficients; the set S stands for the monomial prod sqrt(p), p in S."""

    coeffs: Mapping[frozenset[int], Fraction]

    def __post_init__(self):
        clean = {
            frozenset(s): Fraction(c)
            for s, c in self.coeffs.items()
            if c != 0
        }
        object.__setattr__(self, "coeffs", clean)

    @staticmethod
    def zero() -> "MultiQuad":
        return MultiQuad({})

    @staticmethod
    def from_rational(q) -> "MultiQuad":
        return MultiQuad({frozenset(): Fraction(q)})

    @staticmethod
    def sqrt_prime(p: int, coeff=1) -> "MultiQuad":
        return MultiQuad({frozenset([p]): Fraction(coeff)})

    def __add__(self, other: "MultiQuad") -> "MultiQuad":
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, Fraction(0)) + c
        return MultiQuad(out)

    def __sub__(self, other: "MultiQuad") -> "MultiQuad":
        return self + (-other)

    def __neg__(self) -> "MultiQuad":
        return MultiQuad({s: -c for s, c in self.coeffs.items()})

    def __mul__(self, other: "MultiQuad") -> "MultiQuad":
        # sqrt(p)*sqrt(p) = p: shared primes leave the monomial as integer factors
        out: dict[frozenset[int], Fraction] = {}
        for s1, c1 in self.coeffs.items():
            for s2, c2 in other.coeffs.items():
                s = s1 ^ s2
                c = c1 * c2 * math.prod(s1 & s2)
                out[s] = out.get(s, Fraction(0)) + c
        return MultiQuad(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiQuad):
            return NotImplemented
        return self.coeffs == other.coeffs

    def is_zero(self) -> bool:
        return not self.coeffs

    def to_float(self) -> float:
        return float(self.evaluate())

    def evaluate(self, dps: int = _EVAL_DPS) -> mpmath.mpf:
        with mpmath.workdps(dps):
            total = mpmath.mpf(0)
            for s, c in self.coeffs.items():
                term = mpmath.mpf(c.numerator) / c.denominator
                for p in s:
                    term *= mpmath.sqrt(p)
                total += term
            return total


def mq_add(a: MultiQuad, b: MultiQuad) -> MultiQuad:
    return a + b


def mq_mul(a: MultiQuad, b: MultiQuad) -> MultiQuad:
    return a * b


def mq_is_zero(a: MultiQuad) -> bool:
    """Exact zero test: valid because distinct square-root monomials are
    linearly independent over the rationals."""
    return a.is_zero()


@dataclass(frozen=True)
class ExactMatrix:
    entries: tuple[tuple[MultiQuad, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)


def mq_det(m: ExactMatrix) -> MultiQuad:
    """Exact determinant by Laplace expansion memoized over column subsets."""
    n, ncols = m.shape
    if n != ncols:
        raise ValueError(f"determinant needs a square matrix, got {m.shape}")
    if n > DET_SIZE_CAP:
        raise MpslabError(f"matrix size {n} exceeds cap {DET_SIZE_CAP}")
    if n == 0:
        return MultiQuad.from_rational(1)
    memo: dict[int, MultiQuad] = {0: MultiQuad.from_rational(1)}

    def minor(colmask: int) -> MultiQuad:
        # determinant of rows 0..popcount-1 restricted to columns in colmask
        if colmask in memo:
            return memo[colmask]
        row = bin(colmask).count("1") - 1
        total = MultiQuad.zero()
        sign = 1 if row % 2 == 0 else -1  # bottom-row cofactor sign
        for j in range(n):
            if colmask >> j & 1:
                e = m.entries[row][j]
                if not e.is_zero():
                    sub = minor(colmask & ~(1 << j))
                    term = e * sub
                    total = total + (term if sign > 0 else -term)
                sign = -sign
        memo[colmask] = total
        return total

    return minor((1 << n) - 1)


@dataclass(frozen=True)
class RankCertificate:
    passed: bool
    k: int
    n: int
    rank: int
    rows_used: tuple[int, ...]
    cols_used: tuple[int, ...]
    det: MultiQuad = field(repr=False)

    @property
    def det_value(self) -> float:
        return self.det.to_float()


def _lift_entry(x: float, pool_primes: frozenset[int]) -> MultiQuad:
    p = round(x * x)
    if p not in pool_primes or not math.isclose(abs(x), math.sqrt(p), rel_tol=1e-9):
        raise UnsupportedEntryError(
            f"entry {x!r} is not +/- sqrt(p) for a pool prime"
        )
    return MultiQuad.sqrt_prime(p, 1 if x > 0 else -1)


def certify_full_rank(block: SectorBlock, pool: PrimePool) -> RankCertificate:
    """Certify that a sqrt-prime sector block has full rank, by exhibiting a
    maximal square minor with exactly nonzero determinant.

    Tries the leading maximal square submatrix first; on a zero determinant
    (impossible for pairwise-distinct prime entries, kept as a defensive
    fallback) it searches all maximal minors.
    """
    nrows, ncols = block.entries.shape
    m = min(nrows, ncols)
    if m > DET_SIZE_CAP:
        raise MpslabError(f"square dimension {m} exceeds cap {DET_SIZE_CAP}")
    primes = frozenset(pool.primes)
    lifted = [[_lift_entry(float(x), primes) for x in row] for row in block.entries]

    def try_minor(ri, ci):
        sub = ExactMatrix(tuple(tuple(lifted[r][c] for c in ci) for r in ri))
        return mq_det(sub)

    lead_r, lead_c = tuple(range(m)), tuple(range(m))
    d = try_minor(lead_r, lead_c)
    if not d.is_zero():
        return RankCertificate(True, block.k, block.n, m, lead_r, lead_c, d)
    for ri in combinations(range(nrows), m):
        for ci in combinations(range(ncols), m):
            d = try_minor(ri, ci)
            if not d.is_zero():
                return RankCertificate(True, block.k, block.n, m, ri, ci, d)
    return RankCertificate(False, block.k, block.n, 0, (), (), MultiQuad.zero())


def float_matrix(m: ExactMatrix) -> np.ndarray:
    return np.array([[e.to_float() for e in row] for row in m.entries])
