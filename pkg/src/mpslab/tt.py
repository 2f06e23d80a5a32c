"""Matrix-product-state layer: TT-SVD, contraction, reconstruction, and the
explicit bond-dimension-2 cores of the paired Bell state."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .fock import OccupationTensor

RANK_RTOL = 1e-10  # numerical rank: sigma > RANK_RTOL * sigma_max


@dataclass(frozen=True)
class MPSCore:
    """Site tensor of shape (r_prev, 2, r_next); A(mu) is the mu-th slice."""

    site: int
    tensor: np.ndarray = field(repr=False)

    def __post_init__(self):
        t = np.asarray(self.tensor, dtype=float)
        if t.ndim != 3 or t.shape[1] != 2:
            raise ValueError(f"core tensor must be (r, 2, r'), got {t.shape}")
        t.setflags(write=False)
        object.__setattr__(self, "tensor", t)

    def A(self, mu: int) -> np.ndarray:
        return self.tensor[:, mu, :]


@dataclass(frozen=True)
class MPS:
    cores: tuple[MPSCore, ...]
    n_electrons: int

    def __post_init__(self):
        cores = tuple(self.cores)
        if not cores:
            raise ValueError("MPS needs at least one core")
        if cores[0].tensor.shape[0] != 1 or cores[-1].tensor.shape[2] != 1:
            raise ValueError("boundary bond dimensions must be 1")
        for a, b in zip(cores, cores[1:]):
            if a.tensor.shape[2] != b.tensor.shape[0]:
                raise ValueError(f"bond mismatch between sites {a.site} and {b.site}")
        object.__setattr__(self, "cores", cores)

    @property
    def L(self) -> int:
        return len(self.cores)

    @property
    def bond_dims(self) -> tuple[int, ...]:
        return tuple(c.tensor.shape[2] for c in self.cores[:-1])


def tt_svd(t: OccupationTensor, rel_tol: float = 1e-14) -> MPS:
    """Left-to-right TT-SVD sweep; at each cut, singular values below
    rel_tol * sigma_max of that cut are discarded (at least one kept)."""
    if rel_tol < 0:
        raise ValueError("rel_tol must be >= 0")
    L = t.L
    C = t.psi.reshape(1, -1)
    cores = []
    r_prev = 1
    for site in range(1, L):
        C = C.reshape(r_prev * 2, -1)
        U, S, Vt = np.linalg.svd(C, full_matrices=False)
        if S[0] > 0.0:
            chi = max(1, int(np.sum(S > rel_tol * S[0])))
        else:
            chi = 1
        cores.append(MPSCore(site, U[:, :chi].reshape(r_prev, 2, chi)))
        C = S[:chi, None] * Vt[:chi]
        r_prev = chi
    cores.append(MPSCore(L, C.reshape(r_prev, 2, 1)))
    return MPS(tuple(cores), t.N)


def contract(m: MPS, bits: Sequence[int] | str) -> float:
    """Evaluate the coefficient of one occupation bitstring."""
    if isinstance(bits, str):
        bits = [int(b) for b in bits]
    if len(bits) != m.L:
        raise ValueError(f"bitstring length {len(bits)} != L={m.L}")
    v = m.cores[0].A(bits[0])
    for core, mu in zip(m.cores[1:], bits[1:]):
        v = v @ core.A(mu)
    return float(v[0, 0])


def reconstruct(m: MPS) -> OccupationTensor:
    """Evaluate all 2^L coefficients by sweeping the cores."""
    T = m.cores[0].tensor[0]  # (2, r1)
    for core in m.cores[1:]:
        T = np.tensordot(T, core.tensor, axes=([T.ndim - 1], [0]))
    return OccupationTensor(m.L, m.n_electrons, T.reshape(-1))


def bell_mps_explicit(N: int) -> MPS:
    """Explicit cores of the Bell state in the paired orbital order.

    All bond dimensions are 2; the first core carries the 2^(-N/2) overall
    scale so the contraction matches the reordered Slater expansion exactly.
    """
    if N < 1:
        raise ValueError("need N >= 1")
    L = 2 * N
    scale = 2.0 ** (-N / 2.0)
    first = np.zeros((1, 2, 2))
    first[0, 0, 0] = first[0, 1, 1] = scale
    last = np.zeros((2, 2, 1))
    last[0, 1, 0] = last[1, 0, 0] = 1.0
    even = np.zeros((2, 2, 2))
    even[0, 1, 0] = even[1, 0, 1] = 1.0
    odd = np.zeros((2, 2, 2))
    odd[0, 0, 0] = odd[0, 1, 1] = 1.0
    odd[1, 0, 0] = odd[1, 1, 1] = 1.0
    cores = [MPSCore(1, first)]
    for site in range(2, L):
        cores.append(MPSCore(site, even if site % 2 == 0 else odd))
    cores.append(MPSCore(L, last))
    return MPS(tuple(cores), N)
