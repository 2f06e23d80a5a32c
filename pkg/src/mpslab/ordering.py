"""Orbital reorderings with fermionic signs, entropy-based mutual information,
Fiedler ordering, and best-ordering search over permutations."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import log2

import numpy as np

from .errors import OrderingSearchError, ZeroStateError
from .fock import CIState, ci_to_occupation, unfold
from .tt import RANK_RTOL

EXHAUSTIVE_CAP_L = 8


@dataclass(frozen=True)
class OrbitalPermutation:
    """New position k holds old orbital perm[k-1] (1-based orbital labels)."""

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError(f"{perm} is not a permutation of 1..{len(perm)}")
        object.__setattr__(self, "perm", perm)

    @property
    def L(self) -> int:
        return len(self.perm)

    def inverse(self) -> "OrbitalPermutation":
        inv = [0] * self.L
        for pos, orb in enumerate(self.perm, start=1):
            inv[orb - 1] = pos
        return OrbitalPermutation(tuple(inv))

    def new_position(self, orbital: int) -> int:
        return self.perm.index(orbital) + 1

    @staticmethod
    def identity(L: int) -> "OrbitalPermutation":
        return OrbitalPermutation(tuple(range(1, L + 1)))


@dataclass(frozen=True)
class MutualInfoMatrix:
    """Symmetric nonnegative pairwise mutual information, zero diagonal (bits)."""

    I: np.ndarray

    def __post_init__(self):
        I = np.asarray(self.I, dtype=float)
        if I.ndim != 2 or I.shape[0] != I.shape[1]:
            raise ValueError("mutual information matrix must be square")
        if not np.allclose(I, I.T, atol=1e-12):
            raise ValueError("mutual information matrix must be symmetric")
        if I.min() < -1e-12:
            raise ValueError("mutual information entries must be >= -1e-12")
        I = np.clip((I + I.T) / 2.0, 0.0, None)
        np.fill_diagonal(I, 0.0)
        I.setflags(write=False)
        object.__setattr__(self, "I", I)

    @property
    def L(self) -> int:
        return self.I.shape[0]


def _inversion_parity(seq) -> int:
    """+1/-1 parity of the permutation sorting seq ascending."""
    inv = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inv += 1
    return -1 if inv % 2 else 1


def apply_permutation(state: CIState, sigma: OrbitalPermutation) -> CIState:
    """Relabel orbitals, re-sorting each determinant's indices with the
    corresponding fermionic sign."""
    if sigma.L != state.L:
        raise ValueError(f"permutation size {sigma.L} != L={state.L}")
    inv = sigma.inverse().perm
    terms: dict[tuple[int, ...], float] = {}
    for t, c in state.terms.items():
        relabeled = [inv[i - 1] for i in t]
        sign = _inversion_parity(relabeled)
        terms[tuple(sorted(relabeled))] = sign * c
    return CIState(state.L, state.N, terms)


def pairing_permutation(N: int) -> OrbitalPermutation:
    """(phi_1, phi_{N+1}, phi_2, phi_{N+2}, ...): paired orbitals adjacent."""
    perm = []
    for k in range(1, N + 1):
        perm += [k, N + k]
    return OrbitalPermutation(tuple(perm))


def _front_spectrum(state: CIState, front: list[int], k: int) -> np.ndarray:
    rest = [j for j in range(1, state.L + 1) if j not in front]
    sigma = OrbitalPermutation(tuple(front + rest))
    moved = apply_permutation(state.normalized(), sigma)
    u = unfold(ci_to_occupation(moved), k)
    return np.linalg.svd(u.matrix, compute_uv=False)


def _entropy_bits(sigmas: np.ndarray) -> float:
    p = sigmas[sigmas > 0.0] ** 2
    return float(-np.sum(p * np.log2(p)))


def site_entropy(state: CIState, i: int) -> float:
    """Single-orbital von Neumann entropy in bits."""
    if state.norm() == 0.0:
        raise ZeroStateError("entropy undefined for the zero state")
    return _entropy_bits(_front_spectrum(state, [i], 1))


def pair_entropy(state: CIState, i: int, j: int) -> float:
    """Two-orbital von Neumann entropy in bits."""
    if i == j:
        raise ValueError("need i != j")
    if state.norm() == 0.0:
        raise ZeroStateError("entropy undefined for the zero state")
    return _entropy_bits(_front_spectrum(state, [i, j], 2))


def mutual_information_matrix(state: CIState) -> MutualInfoMatrix:
    """I_ij = (S_i + S_j - S_ij) / 2, tiny negatives clamped to zero."""
    L = state.L
    S = np.array([site_entropy(state, i) for i in range(1, L + 1)])
    I = np.zeros((L, L))
    for i in range(1, L + 1):
        for j in range(i + 1, L + 1):
            v = 0.5 * (S[i - 1] + S[j - 1] - pair_entropy(state, i, j))
            I[i - 1, j - 1] = I[j - 1, i - 1] = max(v, 0.0)
    return MutualInfoMatrix(I)


def _connected_components(adj: np.ndarray) -> list[list[int]]:
    L = adj.shape[0]
    seen = [False] * L
    comps = []
    for start in range(L):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in np.flatnonzero(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    stack.append(int(w))
        comps.append(sorted(comp))
    return comps


def fiedler_order(mi: MutualInfoMatrix) -> OrbitalPermutation:
    """Order orbitals by the Fiedler vector of the mutual-information Laplacian.

    Disconnected graphs fall back to ordering components by their smallest
    member, applying the Fiedler order within each component.  The result is
    canonicalized to be lexicographically <= its reversal.
    """
    if mi.L < 2:
        raise ValueError("need L >= 2")
    adj = mi.I > 1e-12
    order: list[int] = []
    for comp in sorted(_connected_components(adj), key=min):
        if len(comp) <= 2:
            order += comp
            continue
        sub = mi.I[np.ix_(comp, comp)]
        lap = np.diag(sub.sum(axis=1)) - sub
        w, V = np.linalg.eigh(lap)
        fiedler = V[:, 1]
        ranked = sorted(range(len(comp)), key=lambda a: (fiedler[a], comp[a]))
        order += [comp[a] for a in ranked]
    perm = tuple(o + 1 for o in order)
    if perm[::-1] < perm:
        perm = perm[::-1]
    return OrbitalPermutation(perm)


def bond_profile(state: CIState, sigma: OrbitalPermutation, rel_tol: float = RANK_RTOL) -> tuple[int, ...]:
    """Numerical ranks of every unfolding of the reordered state."""
    t = ci_to_occupation(apply_permutation(state, sigma))
    ranks = []
    for k in range(1, state.L):
        s = np.linalg.svd(unfold(t, k).matrix, compute_uv=False)
        ranks.append(int(np.sum(s > rel_tol * s[0])) if s[0] > 0 else 0)
    return tuple(ranks)


def _score(profile: tuple[int, ...]) -> tuple[int, float]:
    return (max(profile), sum(log2(r) for r in profile if r > 0))


def exhaustive_best_order(state: CIState, objective: str = "maxrank"):
    """Minimize (max bond dim, sum of log2 bond dims) over all orderings,
    quotienting reversal symmetry.  Deterministic lexicographic tie-break."""
    if objective != "maxrank":
        raise ValueError(f"unknown objective {objective!r}")
    L = state.L
    if L > EXHAUSTIVE_CAP_L:
        raise OrderingSearchError(
            f"L={L} > {EXHAUSTIVE_CAP_L}: exhaustive search too large, "
            "use greedy_best_order instead"
        )
    best: tuple | None = None
    for perm in permutations(range(1, L + 1)):
        if perm[::-1] < perm:
            continue
        score = _score(bond_profile(state, OrbitalPermutation(perm)))
        if best is None or (score, perm) < (best[0], best[1].perm):
            best = (score, OrbitalPermutation(perm))
    return best[1], best[0]


def greedy_best_order(state: CIState, objective: str = "maxrank"):
    """Best-effort ordering: start from the Fiedler order and hill-climb with
    pairwise swaps until no swap improves the score."""
    if objective != "maxrank":
        raise ValueError(f"unknown objective {objective!r}")
    current = fiedler_order(mutual_information_matrix(state))
    score = _score(bond_profile(state, current))
    improved = True
    while improved:
        improved = False
        for a in range(state.L):
            for b in range(a + 1, state.L):
                p = list(current.perm)
                p[a], p[b] = p[b], p[a]
                cand = OrbitalPermutation(tuple(p))
                s = _score(bond_profile(state, cand))
                if s < score:
                    current, score = cand, s
                    improved = True
    return current, score
