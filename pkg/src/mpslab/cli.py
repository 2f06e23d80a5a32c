"""Command-line entry point: generate, decompose, reorder, certify, search,
spectrum, verify.  Exit codes: 0 success, 1 verification failure, 2 usage."""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from pathlib import Path

import numpy as np

from . import __version__
from .errors import MpslabError
from .fock import ci_to_occupation, max_sector_rank, sector_blocks, unfold
from .ordering import (
    OrbitalPermutation,
    apply_permutation,
    bond_profile,
    exhaustive_best_order,
    fiedler_order,
    greedy_best_order,
    mutual_information_matrix,
    pairing_permutation,
)
from .exactrank import certify_full_rank
from .spectra import export_csv, numerical_rank, singular_spectrum
from .states import bell_state, prime_state, primes_below, random_state, rng_for
from .stateio import (
    SCHEMA_VERSION,
    load_permutation,
    load_state,
    save_permutation,
    save_state,
    write_manifest,
)
from .tt import RANK_RTOL, bell_mps_explicit, reconstruct, tt_svd

VERIFY_BELL_CAP = 5
VERIFY_PRIME_EXHAUSTIVE_CAP = 6

# Blocks of all-distinct sqrt-prime entries produce O(n!) unmergeable exact
# monomials; past 8x8 the determinant no longer fits a quick verify run.
VERIFY_CERT_DIM_CAP = 8


def worker_count() -> int:
    """Parallelism cap from MPSLAB_THREADS (0 or unset = auto)."""
    raw = os.environ.get("MPSLAB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    return n if n > 0 else (os.cpu_count() or 1)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


def verify_bell(N: int) -> list[Check]:
    """Bell pipeline: canonical rank 2^N, paired rank 2, explicit-core match."""
    if not 1 <= N <= VERIFY_BELL_CAP:
        raise MpslabError(f"verify bell supports 1 <= N <= {VERIFY_BELL_CAP}")
    state = bell_state(N)
    canon = max(tt_svd(ci_to_occupation(state), RANK_RTOL).bond_dims)
    checks = [Check("canonical-max-bond", canon == 2**N, f"{canon} (want {2**N})")]
    paired = apply_permutation(state, pairing_permutation(N))
    pmax = max(tt_svd(ci_to_occupation(paired), RANK_RTOL).bond_dims)
    checks.append(Check("paired-max-bond", pmax == 2, f"{pmax} (want 2)"))
    err = float(np.max(np.abs(
        reconstruct(bell_mps_explicit(N)).psi - ci_to_occupation(paired).psi
    )))
    checks.append(Check("explicit-core-match", err <= 1e-12, f"max abs err {err:.3e}"))
    return checks


def verify_prime(L: int, N: int, mode: str, seed: int = 0, samples: int = 50) -> list[Check]:
    """Check that every ordering of the sqrt-prime state keeps every cut at the
    maximal sector rank; exact certification where block sizes permit."""
    state = prime_state(L, N, seed=seed)
    want = tuple(max_sector_rank(L, N, k) for k in range(1, L))
    if mode == "exhaustive":
        if L > VERIFY_PRIME_EXHAUSTIVE_CAP:
            raise MpslabError(f"exhaustive mode requires L <= {VERIFY_PRIME_EXHAUSTIVE_CAP}")
        perms = [OrbitalPermutation(p) for p in permutations(range(1, L + 1))]
    elif mode == "sampled":
        rng = rng_for(seed)
        perms = [
            OrbitalPermutation(tuple(int(x) + 1 for x in rng.permutation(L)))
            for _ in range(samples)
        ]
    else:
        raise MpslabError(f"unknown mode {mode!r}")

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        profiles = list(pool.map(lambda s: bond_profile(state, s), perms))
    bad = sum(1 for p in profiles if p != want)
    checks = [Check(
        f"{mode}-orderings-max-rank",
        bad == 0,
        f"{len(perms) - bad}/{len(perms)} orderings at maximal rank {want}",
    )]

    pp = primes_below(2 ** (N + L))
    t = ci_to_occupation(state)
    certified_ok = True
    detail = []
    for k in range(1, L):
        blocks = [b for b in sector_blocks(unfold(t, k), N)
                  if min(b.entries.shape) <= VERIFY_CERT_DIM_CAP]
        total = sum(certify_full_rank(b, pp).rank for b in blocks)
        expect = sum(min(b.entries.shape) for b in blocks)
        if total != expect:
            certified_ok = False
        detail.append(f"k={k}:{total}/{expect}")
    checks.append(Check("exact-certification", certified_ok, " ".join(detail)))
    return checks


def _report(checks: list[Check]) -> int:
    ok = True
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.detail}")
        ok = ok and c.passed
    return 0 if ok else 1


def _order_from_spec(spec: str, state):
    if spec == "canonical":
        return OrbitalPermutation.identity(state.L), "canonical"
    if spec == "fiedler":
        return fiedler_order(mutual_information_matrix(state)), "fiedler"
    if spec == "pairing":
        if state.L % 2:
            raise MpslabError("pairing order requires even L")
        return pairing_permutation(state.L // 2), "pairing"
    if spec.startswith("perm:"):
        return load_permutation(spec[5:]), Path(spec[5:]).stem
    raise MpslabError(f"unknown ordering {spec!r}")


def _cmd_gen(args) -> int:
    if args.kind == "bell":
        if args.N is None:
            raise MpslabError("--kind bell requires --N")
        state = bell_state(args.N)
    elif args.kind == "prime" or args.kind == "random":
        if args.L is None or args.N is None:
            raise MpslabError(f"--kind {args.kind} requires --L and --N")
        if args.kind == "prime":
            state = prime_state(args.L, args.N, seed=args.seed, normalize=args.normalize)
        else:
            state = random_state(args.L, args.N, seed=args.seed if args.seed is not None else 0)
    else:
        raise MpslabError(f"unknown kind {args.kind!r}")
    if args.normalize and args.kind != "prime":
        state = state.normalized()
    save_state(state, args.out)
    write_manifest("gen", vars(args), args.out, seed=args.seed)
    return 0


def _cmd_tt(args) -> int:
    state = load_state(args.state)
    t = ci_to_occupation(state)
    m = tt_svd(t, args.tol)
    recon = reconstruct(m)
    nrm = t.norm()
    err = float(np.linalg.norm(recon.psi - t.psi)) / nrm if nrm > 0 else 0.0
    doc = {
        "schema": SCHEMA_VERSION,
        "bond_dims": list(m.bond_dims),
        "singular_value_counts": {
            str(k): int(m.bond_dims[k - 1]) for k in range(1, state.L)
        },
        "reconstruction_error": err,
    }
    text = json.dumps(doc, indent=1)
    if args.report:
        Path(args.report).write_text(text + "\n")
        write_manifest("tt", vars(args), args.report)
    else:
        print(text)
    return 0


def _cmd_reorder(args) -> int:
    state = load_state(args.state)
    sigma = load_permutation(args.perm)
    save_state(apply_permutation(state, sigma), args.out)
    write_manifest("reorder", vars(args), args.out)
    return 0


def _cmd_spectrum(args) -> int:
    state = load_state(args.state)
    records = []
    for spec in args.order:
        sigma, label = _order_from_spec(spec, state)
        records.append(singular_spectrum(state, sigma, args.cut, label=label))
    export_csv(records, args.out)
    write_manifest("spectrum", vars(args), args.out)
    return 0


def _cmd_certify(args) -> int:
    state = load_state(args.state)
    t = ci_to_occupation(state)
    pool = primes_below(2 ** (state.N + state.L))
    cuts = range(1, state.L) if args.all_cuts else [args.cut]
    report = {"schema": SCHEMA_VERSION, "cuts": []}
    ok = True
    for k in cuts:
        blocks = sector_blocks(unfold(t, k), state.N)
        entry = {"cut": k, "blocks": [], "certified_rank": 0}
        for b in blocks:
            cert = certify_full_rank(b, pool)
            ok = ok and cert.passed
            entry["blocks"].append({
                "n": b.n,
                "shape": list(b.entries.shape),
                "status": "PASS" if cert.passed else "FAIL",
                "rank": cert.rank,
                "det": cert.det_value if cert.passed else 0.0,
            })
            entry["certified_rank"] += cert.rank
        report["cuts"].append(entry)
    text = json.dumps(report, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
        write_manifest("certify", vars(args), args.out)
    else:
        print(text)
    return 0 if ok else 1


def _cmd_search_order(args) -> int:
    state = load_state(args.state)
    try:
        sigma, score = exhaustive_best_order(state, args.objective)
        mode = "exhaustive"
    except MpslabError:
        sigma, score = greedy_best_order(state, args.objective)
        mode = "greedy"
    save_permutation(sigma, args.out)
    write_manifest("search-order", dict(vars(args), mode=mode), args.out)
    print(json.dumps({
        "mode": mode,
        "perm": list(sigma.perm),
        "max_bond_dim": score[0],
        "log2_volume": score[1],
    }))
    return 0


def _cmd_verify(args) -> int:
    if args.target == "bell":
        return _report(verify_bell(args.N))
    return _report(verify_prime(args.L, args.N, args.mode,
                                seed=args.seed or 0, samples=args.samples))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mpslab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a state JSON file")
    g.add_argument("--kind", required=True, choices=["prime", "bell", "random"])
    g.add_argument("--L", type=int)
    g.add_argument("--N", type=int)
    g.add_argument("--seed", type=int)
    g.add_argument("--normalize", action="store_true")
    g.add_argument("--out", required=True)
    g.set_defaults(fn=_cmd_gen)

    t = sub.add_parser("tt", help="TT-SVD a state and report bond dimensions")
    t.add_argument("--state", required=True)
    t.add_argument("--tol", type=float, default=1e-12)
    t.add_argument("--report")
    t.set_defaults(fn=_cmd_tt)

    r = sub.add_parser("reorder", help="apply an orbital permutation")
    r.add_argument("--state", required=True)
    r.add_argument("--perm", required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(fn=_cmd_reorder)

    s = sub.add_parser("spectrum", help="singular value spectra to CSV")
    s.add_argument("--state", required=True)
    s.add_argument("--cut", type=int, required=True)
    s.add_argument("--order", action="append", required=True,
                   help="canonical|fiedler|pairing|perm:<file>; repeatable")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_spectrum)

    c = sub.add_parser("certify", help="exact full-rank certificates per sector block")
    c.add_argument("--state", required=True)
    c.add_argument("--cut", type=int)
    c.add_argument("--all-cuts", action="store_true")
    c.add_argument("--out")
    c.set_defaults(fn=_cmd_certify)

    so = sub.add_parser("search-order", help="best-ordering search")
    so.add_argument("--state", required=True)
    so.add_argument("--objective", default="maxrank", choices=["maxrank"])
    so.add_argument("--out", required=True)
    so.set_defaults(fn=_cmd_search_order)

    v = sub.add_parser("verify", help="run a built-in verification pipeline")
    vs = v.add_subparsers(dest="target", required=True)
    vb = vs.add_parser("bell")
    vb.add_argument("--N", type=int, required=True,
                    choices=range(1, VERIFY_BELL_CAP + 1))
    vb.set_defaults(fn=_cmd_verify)
    vp = vs.add_parser("prime")
    vp.add_argument("--L", type=int, required=True)
    vp.add_argument("--N", type=int, required=True)
    vp.add_argument("--mode", default="exhaustive", choices=["exhaustive", "sampled"])
    vp.add_argument("--seed", type=int, default=0)
    vp.add_argument("--samples", type=int, default=50)
    vp.set_defaults(fn=_cmd_verify)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "cmd", None) == "certify" and not args.all_cuts and args.cut is None:
        build_parser().error("certify requires --cut or --all-cuts")
    try:
        return args.fn(args)
    except MpslabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
