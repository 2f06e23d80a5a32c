"""Constructors for the example states: fermionic Bell states, the sqrt-prime
maximally entangled state, general Slater expansions, and random states."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import InsufficientPrimesError
from .fock import CIState

# Identifier recorded in output manifests so draws can be reproduced elsewhere.
PRNG_ID = "numpy-pcg64-v1"


@dataclass(frozen=True)
class PrimePool:
    primes: tuple[int, ...]
    bound: int


@dataclass(frozen=True)
class SlaterCoefficientMatrix:
    """Row k holds the expansion of occupied orbital k over the L basis orbitals."""

    C: np.ndarray

    def __post_init__(self):
        C = np.atleast_2d(np.asarray(self.C, dtype=float))
        if C.shape[0] > C.shape[1]:
            raise ValueError(f"need N <= L, got shape {C.shape}")
        C.setflags(write=False)
        object.__setattr__(self, "C", C)


def primes_below(bound: int) -> PrimePool:
    """All primes < bound, ascending (sieve of Eratosthenes)."""
    if bound < 2:
        return PrimePool((), max(bound, 0))
    sieve = np.ones(bound, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(bound**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return PrimePool(tuple(int(p) for p in np.flatnonzero(sieve)), bound)


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def prime_state(L: int, N: int, seed: int | None = None, normalize: bool = False) -> CIState:
    """State whose CI coefficients are pairwise distinct square roots of primes.

    Primes are drawn without replacement from the pool below 2^(N+L) and
    assigned to index tuples in lexicographic order.  With a seed, the pool is
    shuffled first; without one, the smallest primes are used.
    """
    m = comb(L, N)
    pool = primes_below(2 ** (N + L))
    if len(pool.primes) < m:
        raise InsufficientPrimesError(
            f"need {m} primes below 2^{N + L}, pool has {len(pool.primes)}"
        )
    if seed is None:
        chosen = list(pool.primes[:m])
    else:
        arr = np.array(pool.primes)
        rng_for(seed).shuffle(arr)
        chosen = [int(p) for p in arr[:m]]
    terms = {
        t: float(np.sqrt(p))
        for t, p in zip(combinations(range(1, L + 1), N), chosen)
    }
    state = CIState(L, N, terms)
    return state.normalized() if normalize else state


def slater_expand(C: SlaterCoefficientMatrix) -> CIState:
    """CI expansion of the Slater determinant built from the rows of C.

    The coefficient on tuple (j_1 < ... < j_N) is the determinant of the
    corresponding N x N column minor.
    """
    N, L = C.C.shape
    terms = {}
    for t in combinations(range(1, L + 1), N):
        minor = C.C[:, [j - 1 for j in t]]
        terms[t] = float(np.linalg.det(minor))
    return CIState(L, N, terms)


def bell_state(N: int) -> CIState:
    """Slater determinant of the paired orbitals (phi_k + phi_{k+N})/sqrt(2)."""
    if N < 1:
        raise ValueError("need N >= 1")
    L = 2 * N
    C = np.zeros((N, L))
    for k in range(N):
        C[k, k] = C[k, k + N] = 1.0 / np.sqrt(2.0)
    return slater_expand(SlaterCoefficientMatrix(C))


def random_state(L: int, N: int, seed: int) -> CIState:
    """Normalized state with seed-deterministic standard-normal coefficients."""
    rng = rng_for(seed)
    tuples = list(combinations(range(1, L + 1), N))
    coeffs = rng.standard_normal(len(tuples))
    coeffs /= np.linalg.norm(coeffs)
    return CIState(L, N, dict(zip(tuples, map(float, coeffs))))
