"""Command-line surface: progression construction, the two solvers, and
certificate replay.

Exit codes: 0 success, 1 precondition violated, 2 certificate failure,
3 decision "no", 4 construction exhausted (tuned profile).

Reports are reproducible: the JSON output contains no timing and every
certificate is produced from a RandomSource derived from (seed, term index),
so the bytes depend only on the inputs, flags, and seed. Timing goes to the
human-readable output only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from multiprocessing import get_context
from typing import Optional, Sequence

from .core import (
    ApcertError,
    Exhausted,
    PreconditionViolated,
    RandomSource,
    SortedIntSet,
    check_solution,
    load_int_set,
    normalize,
)
from .dense import build_rpg, dense_decide, dense_search
from .profiles import profile_by_name
from .subsetsum_ap import ap_in_subset_sums
from .sumset_ap import ap_in_kfold_sumset
from .unbounded import UnboundedSolver

SCHEMA = 1

EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_CERTIFICATE = 2
EXIT_DECISION_NO = 3
EXIT_EXHAUSTED = 4


def _emit(report: dict, as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        for line in lines:
            sys.stdout.write(line + "\n")


def _seed_from(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("APCERT_SEED")
    if env is not None:
        return int(env)
    return 0


def _sample_indices(length: int, count: int) -> list[int]:
    """`count` evenly spaced term indices, always including both ends."""
    if count <= 0:
        return []
    if count >= length + 1:
        return list(range(length + 1))
    if count == 1:
        return [0]
    return sorted({round(i * length / (count - 1)) for i in range(count)})


def _query_term(witness, seed: int, j: int):
    rng = RandomSource(seed).derive("query", j)
    return witness.query(j, rng), rng.draws


_POOL_STATE: dict = {}


def _pool_init(witness, base, seed):
    _POOL_STATE["witness"] = witness
    _POOL_STATE["base"] = base
    _POOL_STATE["seed"] = seed


def _pool_verify(chunk: Sequence[int]) -> tuple[int, int, int, list]:
    witness = _POOL_STATE["witness"]
    base = _POOL_STATE["base"]
    seed = _POOL_STATE["seed"]
    checked = passed = draws = 0
    failures = []
    for j in chunk:
        sol, d = _query_term(witness, seed, j)
        draws += d
        checked += 1
        reason = check_solution(base, sol)
        if reason is None and sol.target == witness.ap.term(j):
            passed += 1
        else:
            failures.append((j, reason or "target-mismatch"))
    return checked, passed, draws, failures


def verify_terms(witness, base: SortedIntSet, seed: int, indices: Sequence[int],
                 workers: int = 1) -> dict:
    """Verify certificates for the given term indices with check_solution,
    independently of the pipeline under test. Returns a summary dict."""
    indices = list(indices)
    if workers > 1 and len(indices) >= 4 * workers:
        chunks = [indices[i::workers] for i in range(workers)]
        ctx = get_context("fork")
        with ctx.Pool(workers, _pool_init, (witness, base, seed)) as pool:
            results = pool.map(_pool_verify, chunks)
        checked = sum(r[0] for r in results)
        passed = sum(r[1] for r in results)
        draws = sum(r[2] for r in results)
        failures = [f for r in results for f in r[3]]
    else:
        _pool_init(witness, base, seed)
        checked, passed, draws, failures = _pool_verify(indices)
    return {
        "checked": checked,
        "passed": passed,
        "sampling_draws": draws,
        "failures": failures[:16],
    }


def _certificates(witness, seed: int, indices: Sequence[int]) -> list[dict]:
    out = []
    for j in indices:
        sol, _ = _query_term(witness, seed, j)
        out.append({
            "index": j,
            "target": sol.target,
            "fold_budget": sol.fold_budget,
            "parts": [[v, c] for v, c in sol.parts],
        })
    return out


def _ap_dict(ap) -> dict:
    return {"start": ap.start, "diff": ap.diff, "length": ap.length}


def cmd_ap_sumset(args) -> int:
    seed = _seed_from(args)
    raw = load_int_set(args.input)
    t0 = time.perf_counter()
    res = ap_in_kfold_sumset(raw, args.m, args.k)
    base = normalize(raw)[0]
    build_s = time.perf_counter() - t0
    indices = list(range(res.ap.length + 1)) if args.verify_all else _sample_indices(
        res.ap.length, args.sample
    )
    summary = verify_terms(res.witness, base, seed, indices, args.workers)
    report = {
        "schema": SCHEMA,
        "command": "ap-sumset",
        "seed": seed,
        "m": args.m,
        "k": args.k,
        "k_eff": res.k_eff,
        "fold_budget": res.fold_budget,
        "ap": _ap_dict(res.ap),
        "certificates": _certificates(res.witness, seed, _sample_indices(res.ap.length, args.sample)),
        "verification": {"checked": summary["checked"], "passed": summary["passed"]},
    }
    lines = [
        f"ap-sumset: AP (start={res.ap.start}, diff={res.ap.diff}, length={res.ap.length})"
        f" in {332 * args.k}-fold sumset (budget {res.fold_budget})",
        f"verified {summary['passed']}/{summary['checked']} certificates"
        f" ({summary['sampling_draws']} sampling draws); build {build_s:.3f}s",
    ]
    _emit(report, args.json, lines)
    return EXIT_OK if summary["passed"] == summary["checked"] else EXIT_CERTIFICATE


def cmd_ap_subsetsum(args) -> int:
    seed = _seed_from(args)
    raw = load_int_set(args.input)
    profile = profile_by_name(args.profile)
    t0 = time.perf_counter()
    res = ap_in_subset_sums(raw, args.ell, profile, seed)
    build_s = time.perf_counter() - t0
    indices = list(range(res.ap.length + 1)) if args.verify_all else _sample_indices(
        res.ap.length, args.sample
    )
    summary = verify_terms(res.witness, res.coreset, seed, indices, args.workers)
    report = {
        "schema": SCHEMA,
        "command": "ap-subsetsum",
        "profile": profile.name,
        "seed": seed,
        "ell": args.ell,
        "ap": _ap_dict(res.ap),
        "coreset_size": len(res.coreset),
        "coreset": list(res.coreset.elems),
        "rounds": res.rounds,
        "certificates": _certificates(res.witness, seed, _sample_indices(res.ap.length, args.sample)),
        "verification": {"checked": summary["checked"], "passed": summary["passed"]},
    }
    lines = [
        f"ap-subsetsum: AP (start={res.ap.start}, diff={res.ap.diff}, length={res.ap.length})"
        f" in S(coreset), coreset size {len(res.coreset)}, {res.rounds} rounds",
        f"verified {summary['passed']}/{summary['checked']} certificates; build {build_s:.3f}s",
    ]
    _emit(report, args.json, lines)
    return EXIT_OK if summary["passed"] == summary["checked"] else EXIT_CERTIFICATE


def cmd_unbounded(args) -> int:
    seed = _seed_from(args)
    raw = load_int_set(args.input)
    solver = UnboundedSolver(tuple(raw))
    rng = RandomSource(seed).derive("unbounded", args.target)
    sol = solver.solve(args.target, rng)
    report = {
        "schema": SCHEMA,
        "command": "unbounded",
        "seed": seed,
        "target": args.target,
        "threshold": solver.threshold,
        "x": [[a, x] for a, x in sol.multipliers],
    }
    lines = [
        f"unbounded: target {args.target} = "
        + " + ".join(f"{x}*{a}" for a, x in sol.multipliers if x),
    ]
    _emit(report, args.json, lines)
    return EXIT_OK


def cmd_dense(args) -> int:
    seed = _seed_from(args)
    raw = load_int_set(args.input)
    profile = profile_by_name(args.profile)
    decomp = build_rpg(raw, profile, seed)
    lo, hi = decomp.region()
    if not lo <= args.target <= hi:
        raise PreconditionViolated(
            "target-out-of-region", f"t={args.target} outside [{lo}, {hi}]"
        )
    decision = dense_decide(decomp, args.target)
    report = {
        "schema": SCHEMA,
        "command": "dense",
        "profile": profile.name,
        "seed": seed,
        "target": args.target,
        "gamma": decomp.gamma,
        "region": [lo, hi],
        "decision": decision,
    }
    if not decision:
        report["solution"] = None
        _emit(report, args.json, [f"dense: target {args.target} is NOT a subset sum"])
        return EXIT_DECISION_NO
    rng = RandomSource(seed).derive("dense", args.target)
    sol = dense_search(decomp, args.target, rng)
    report["solution"] = sol
    lines = [f"dense: target {args.target} = sum of {len(sol)} elements"]
    _emit(report, args.json, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.report, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    raw = load_int_set(args.input)
    base = normalize(raw)[0]
    certs = report.get("certificates", [])
    ap = report.get("ap")
    failures = []
    from .core import CompactSolution

    for cert in certs:
        sol = CompactSolution(
            tuple((int(v), int(c)) for v, c in cert["parts"]),
            int(cert["target"]),
            int(cert["fold_budget"]),
        )
        reason = check_solution(base, sol)
        if reason is None and ap is not None:
            expect = ap["start"] + cert["index"] * ap["diff"]
            if sol.target != expect:
                reason = "target-mismatch"
        if reason is not None:
            failures.append((cert["index"], reason))
    out = {
        "schema": SCHEMA,
        "command": "verify",
        "checked": len(certs),
        "passed": len(certs) - len(failures),
        "failures": failures[:16],
    }
    _emit(out, args.json, [f"verify: {out['passed']}/{out['checked']} certificates pass"])
    return EXIT_OK if not failures else EXIT_CERTIFICATE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apcert",
        description="Arithmetic progressions in sumsets and subset sums, with certificates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, profile=False):
        p.add_argument("--input", required=True, help="integer-set file")
        p.add_argument("--seed", type=int, default=None, help="RNG seed (fallback: APCERT_SEED)")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if profile:
            p.add_argument("--profile", choices=["paper", "tuned"], default="tuned")

    p = sub.add_parser("ap-sumset", help="AP of length m in the 332k-fold sumset")
    common(p)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--verify-all", action="store_true")
    p.add_argument("--sample", type=int, default=0, help="emit this many certificates")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_ap_sumset)

    p = sub.add_parser("ap-subsetsum", help="AP of length ell in subset sums of a coreset")
    common(p, profile=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--verify-all", action="store_true")
    p.add_argument("--sample", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_ap_subsetsum)

    p = sub.add_parser("unbounded", help="multiplier vector for an unbounded subset sum")
    common(p)
    p.add_argument("--target", type=int, required=True)
    p.set_defaults(func=cmd_unbounded)

    p = sub.add_parser("dense", help="decide and search a dense subset-sum target")
    common(p, profile=True)
    p.add_argument("--target", type=int, required=True)
    p.set_defaults(func=cmd_dense)

    p = sub.add_parser("verify", help="replay a report's certificates against an input set")
    p.add_argument("--report", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exhausted as exc:
        payload = {"schema": SCHEMA, "error": "exhausted", "reason": exc.reason}
        if exc.partial is not None:
            payload["partial_ap"] = _ap_dict(exc.partial)
        if getattr(args, "json", False):
            sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
        else:
            sys.stderr.write(f"exhausted: {exc.reason}\n")
            if exc.partial is not None:
                sys.stderr.write(f"partial AP: {exc.partial}\n")
        return EXIT_EXHAUSTED
    except PreconditionViolated as exc:
        if getattr(args, "json", False):
            payload = {"schema": SCHEMA, "error": "precondition", "name": exc.name,
                       "detail": exc.detail}
            sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")
        else:
            sys.stderr.write(f"{exc}\n")
        return EXIT_PRECONDITION
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PRECONDITION
    except ApcertError as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_CERTIFICATE


if __name__ == "__main__":
    raise SystemExit(main())
