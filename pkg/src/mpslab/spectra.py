"""Singular-value spectra of unfoldings under orbital reorderings, entropies,
numerical ranks, and CSV export."""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import ZeroStateError
from .fock import CIState, ci_to_occupation, unfold
from .ordering import OrbitalPermutation, apply_permutation
from .tt import RANK_RTOL

CSV_HEADER = "ordering,cut,index,sigma"


@dataclass(frozen=True)
class SpectrumRecord:
    """One curve: descending singular values of a cut-k unfolding."""

    ordering_label: str
    k: int
    sigmas: np.ndarray = field(repr=False)
    norm: float = 0.0

    def __post_init__(self):
        s = np.asarray(self.sigmas, dtype=float)
        if np.any(np.diff(s) > 0) or np.any(s < 0):
            raise ValueError("singular values must be descending and nonnegative")
        s.setflags(write=False)
        object.__setattr__(self, "sigmas", s)


def singular_spectrum(state: CIState, sigma_perm: OrbitalPermutation, k: int,
                      label: str | None = None) -> SpectrumRecord:
    """Full singular value spectrum of the reordered state's cut-k unfolding."""
    if state.norm() == 0.0:
        raise ZeroStateError("spectrum undefined for the zero state")
    reordered = apply_permutation(state, sigma_perm)
    u = unfold(ci_to_occupation(reordered), k)
    s = np.linalg.svd(u.matrix, compute_uv=False)
    if label is None:
        label = "canonical" if sigma_perm.perm == tuple(range(1, state.L + 1)) else "perm"
    return SpectrumRecord(label, k, s, float(np.linalg.norm(s)))


def numerical_rank(rec: SpectrumRecord, rel_tol: float = RANK_RTOL) -> int:
    s = rec.sigmas
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rel_tol * s[0]))


def entanglement_entropy(rec: SpectrumRecord) -> float:
    """Von Neumann entropy in bits of the normalized spectrum."""
    if rec.norm == 0.0:
        raise ZeroStateError("entropy undefined at zero norm")
    p = (rec.sigmas / rec.norm) ** 2
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def write_csv(records: Iterable[SpectrumRecord], stream: io.TextIOBase) -> None:
    stream.write(CSV_HEADER + "\n")
    for rec in records:
        for i, s in enumerate(rec.sigmas, start=1):
            stream.write(f"{rec.ordering_label},{rec.k},{i},{s:.17e}\n")


def export_csv(records: Iterable[SpectrumRecord], destination: str | Path) -> None:
    """One row per singular value; floats at 17 significant decimal places."""
    destination = Path(destination)
    try:
        with destination.open("w") as fh:
            write_csv(records, fh)
    except OSError as e:
        raise OSError(f"cannot write spectrum CSV to {destination}: {e}") from e
