"""JSON file formats: states, permutations, and run manifests."""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .fock import CIState, bitstring_to_int, int_to_bitstring, int_to_tuple, tuple_to_int
from .ordering import OrbitalPermutation
from .states import PRNG_ID

SCHEMA_VERSION = 1


def save_state(state: CIState, path: str | Path) -> None:
    terms = [
        {"occ": int_to_bitstring(tuple_to_int(t, state.L), state.L),
         "coeff": float(f"{c:.17g}")}
        for t, c in sorted(state.terms.items())
    ]
    doc = {"schema": SCHEMA_VERSION, "L": state.L, "N": state.N, "terms": terms}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_state(path: str | Path) -> CIState:
    doc = json.loads(Path(path).read_text())
    L, N = int(doc["L"]), int(doc["N"])
    terms = {}
    for item in doc["terms"]:
        occ = item["occ"]
        if len(occ) != L or set(occ) - {"0", "1"}:
            raise ValueError(f"{path}: bad occupation string {occ!r}")
        terms[int_to_tuple(bitstring_to_int(occ), L)] = float(item["coeff"])
    return CIState(L, N, terms)


def save_permutation(sigma: OrbitalPermutation, path: str | Path) -> None:
    doc = {"schema": SCHEMA_VERSION, "perm": list(sigma.perm)}
    Path(path).write_text(json.dumps(doc) + "\n")


def load_permutation(path: str | Path) -> OrbitalPermutation:
    doc = json.loads(Path(path).read_text())
    return OrbitalPermutation(tuple(doc["perm"]))


@dataclass(frozen=True)
class RunManifest:
    subcommand: str
    flags: dict
    seed: int | None
    prng: str
    version: str
    timestamp: str


def write_manifest(subcommand: str, flags: dict, out_path: str | Path,
                   seed: int | None = None) -> None:
    """Serialize a manifest alongside an output file (<out>.manifest.json)."""
    from . import __version__

    doc = {
        "schema": SCHEMA_VERSION,
        "subcommand": subcommand,
        "flags": {
            k: v for k, v in flags.items()
            if v is not None and isinstance(v, (str, int, float, bool, list))
        },
        "seed": seed,
        "prng": PRNG_ID,
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    out_path = Path(out_path)
    out_path.with_name(out_path.name + ".manifest.json").write_text(
        json.dumps(doc, indent=1) + "\n"
    )
