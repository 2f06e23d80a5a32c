"""Occupation-number representation of N-electron states in L spin-orbitals.

Conventions: orbital indices run 1..L; in bitstrings the first orbital is the
leftmost character and the most significant bit of the integer encoding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Mapping

import numpy as np

from .errors import CapacityError, MalformedTensorError

DENSE_CAP_L = 20

# Off-sector dust below this (relative to the 2-norm) is projected out when an
# OccupationTensor is built from approximate data; anything larger is an error.
SECTOR_DUST_RTOL = 1e-9


def tuple_to_int(indices: Iterable[int], L: int) -> int:
    """Integer encoding of the bitstring that occupies exactly `indices`."""
    b = 0
    for i in indices:
        b |= 1 << (L - i)
    return b


def int_to_tuple(bits: int, L: int) -> tuple[int, ...]:
    return tuple(k for k in range(1, L + 1) if bits >> (L - k) & 1)


def int_to_bitstring(bits: int, L: int) -> str:
    return format(bits, f"0{L}b")


def bitstring_to_int(s: str) -> int:
    return int(s, 2)


def _check_tuple(t: tuple[int, ...], L: int, N: int) -> None:
    if len(t) != N:
        raise ValueError(f"index tuple {t} has length {len(t)}, expected {N}")
    if any(not 1 <= i <= L for i in t):
        raise ValueError(f"index tuple {t} out of range 1..{L}")
    if any(a >= b for a, b in zip(t, t[1:])):
        raise ValueError(f"index tuple {t} is not strictly increasing")


@dataclass(frozen=True)
class CIState:
    """Sparse CI expansion: map from sorted orbital index tuples to amplitudes."""

    L: int
    N: int
    terms: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        if not 1 <= self.N <= self.L:
            raise ValueError(f"need 1 <= N <= L, got N={self.N}, L={self.L}")
        clean = {}
        for t, c in self.terms.items():
            t = tuple(t)
            _check_tuple(t, self.L, self.N)
            if c != 0.0:
                clean[t] = float(c)
        object.__setattr__(self, "terms", clean)

    def norm(self) -> float:
        return float(np.sqrt(sum(c * c for c in self.terms.values())))

    def normalized(self) -> "CIState":
        n = self.norm()
        if n == 0.0:
            return self
        return CIState(self.L, self.N, {t: c / n for t, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, CIState):
            return NotImplemented
        return (self.L, self.N, dict(self.terms)) == (other.L, other.N, dict(other.terms))


@dataclass(frozen=True)
class OccupationTensor:
    """Dense length-2^L coefficient array over occupation bitstrings."""

    L: int
    N: int
    psi: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.L > DENSE_CAP_L:
            raise CapacityError(f"L={self.L} exceeds dense cap {DENSE_CAP_L}")
        psi = np.asarray(self.psi, dtype=float)
        if psi.shape != (2**self.L,):
            raise ValueError(f"psi must have shape ({2**self.L},), got {psi.shape}")
        mask = _sector_mask(self.L, self.N)
        off = psi[~mask]
        if off.size:
            worst = float(np.max(np.abs(off)))
            tol = SECTOR_DUST_RTOL * max(1.0, float(np.linalg.norm(psi)))
            if worst > tol:
                bad = int(np.flatnonzero(~mask)[np.argmax(np.abs(off))])
                raise MalformedTensorError(
                    f"entry {worst:g} at bitstring {int_to_bitstring(bad, self.L)} "
                    f"lies outside the {self.N}-particle sector"
                )
            if worst > 0.0:
                psi = psi.copy()
                psi[~mask] = 0.0
        psi.setflags(write=False)
        object.__setattr__(self, "psi", psi)

    def norm(self) -> float:
        return float(np.linalg.norm(self.psi))


@dataclass(frozen=True)
class Unfolding:
    """2^k x 2^(L-k) matrization; row index = first k occupation bits (MSB first)."""

    k: int
    matrix: np.ndarray = field(repr=False)

    @property
    def L(self) -> int:
        rows, cols = self.matrix.shape
        return self.k + (cols.bit_length() - 1)


@dataclass(frozen=True)
class SectorBlock:
    """Submatrix of an unfolding with fixed left particle count n."""

    k: int
    n: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: np.ndarray = field(repr=False)


def _sector_mask(L: int, N: int) -> np.ndarray:
    pops = np.array([bin(b).count("1") for b in range(2**L)])
    return pops == N


def _popcount_indices(width: int, n: int) -> list[int]:
    return [b for b in range(2**width) if bin(b).count("1") == n]


def ci_to_occupation(state: CIState) -> OccupationTensor:
    """Dense occupation tensor of a CI state; psi[bits(T)] = lambda_T."""
    if state.L > DENSE_CAP_L:
        raise CapacityError(f"L={state.L} exceeds dense cap {DENSE_CAP_L}")
    psi = np.zeros(2**state.L)
    for t, c in state.terms.items():
        psi[tuple_to_int(t, state.L)] = c
    return OccupationTensor(state.L, state.N, psi)


def occupation_to_ci(t: OccupationTensor) -> CIState:
    """Exact inverse of `ci_to_occupation`."""
    terms = {}
    for b in np.flatnonzero(t.psi):
        tup = int_to_tuple(int(b), t.L)
        if len(tup) != t.N:
            raise MalformedTensorError(
                f"nonzero entry at {int_to_bitstring(int(b), t.L)} has popcount "
                f"{len(tup)}, expected {t.N}"
            )
        terms[tup] = float(t.psi[b])
    return CIState(t.L, t.N, terms)


def unfold(t: OccupationTensor, k: int) -> Unfolding:
    """Reshape psi into the cut-k matrization."""
    if not 1 <= k <= t.L - 1:
        raise ValueError(f"cut k={k} out of range 1..{t.L - 1}")
    return Unfolding(k, t.psi.reshape(2**k, 2 ** (t.L - k)))


def refold(u: Unfolding, N: int) -> OccupationTensor:
    """Inverse of `unfold`."""
    return OccupationTensor(u.L, N, u.matrix.reshape(-1))


def sector_blocks(u: Unfolding, N: int) -> list[SectorBlock]:
    """Particle-number sector blocks of an unfolding, feasible n ascending."""
    rows_bits, cols_bits = u.matrix.shape
    k = u.k
    right = cols_bits.bit_length() - 1
    blocks = []
    for n in range(max(0, N - right), min(k, N) + 1):
        rows = _popcount_indices(k, n)
        cols = _popcount_indices(right, N - n)
        entries = u.matrix[np.ix_(rows, cols)]
        blocks.append(SectorBlock(k, n, tuple(rows), tuple(cols), entries))
    return blocks


def max_sector_rank(L: int, N: int, k: int) -> int:
    """Largest possible rank of the cut-k unfolding of any N-particle state."""
    if not 1 <= k <= L - 1:
        raise ValueError(f"cut k={k} out of range 1..{L - 1}")
    total = 0
    for n in range(max(0, N - (L - k)), min(k, N) + 1):
        total += min(comb(k, n), comb(L - k, N - n))
    return total
