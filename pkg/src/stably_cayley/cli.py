"""Command-line entry point.

Exit codes: 0 decided / passed, 1 internal failure or failed check,
2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import jsonschema

from . import __version__
from .checks import CHECKS, run_check
from .classify import QuotientSpec, classify_stably_cayley
from .cohomology import BudgetExceeded, DEFAULT_BUDGET, sha2
from .glattice import LatticeError
from .groups import CapExceeded, DEFAULT_ORDER_CAP
from .registry import UnknownReference, lattice_from_ref, select_subgroup
from .rootdata import RootDataError
from .witnesses import WitnessError

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

REQUEST_SCHEMA = {
    "type": "object",
    "required": ["family", "rank", "m"],
    "additionalProperties": False,
    "properties": {
        "family": {"type": "string", "pattern": "^(?i:[ABCDG]|G2|E6|E7|E8|F4|E|F)$"},
        "rank": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 1},
        "subgroup_side": {"enum": ["character", "center"]},
        "generators": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "sha_witness": {"type": "boolean"},
                "max_group_order": {"type": "integer", "minimum": 1},
            },
        },
    },
}


class InputError(Exception):
    pass


def _err(msg: str):
    print(f"error: {msg}", file=sys.stderr)


def validate_request(doc) -> None:
    v = jsonschema.Draft202012Validator(REQUEST_SCHEMA)
    errors = sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = []
        for e in errors:
            where = "/".join(str(p) for p in e.absolute_path) or "<root>"
            msgs.append(f"{where}: {e.message}")
        raise InputError("; ".join(msgs))


def build_report(doc: dict, args) -> dict:
    opts = doc.get("options", {})
    spec = QuotientSpec(
        doc["family"],
        doc["rank"],
        doc["m"],
        doc.get("subgroup_side", "character"),
        doc.get("generators", []),
    )
    t = time.perf_counter()
    verdict = classify_stably_cayley(
        spec,
        sha_witness=bool(args.sha_witness or opts.get("sha_witness", False)),
        max_group_order=opts.get("max_group_order", args.max_group_order),
        h2_path=args.h2_path,
    )
    report = {"tool": "stably-cayley", "version": __version__, "input": doc}
    report.update(verdict.to_dict())
    if args.timings:
        report["timings"] = {"classify_seconds": round(time.perf_counter() - t, 6)}
    return report


def cmd_classify(args) -> int:
    try:
        with open(args.input) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        _err(f"cannot read {args.input}: {e}")
        return EXIT_INPUT
    try:
        validate_request(doc)
        report = build_report(doc, args)
    except (InputError, RootDataError) as e:
        _err(str(e))
        return EXIT_INPUT
    text = json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sha(args) -> int:
    ref = args.lattice or args.ref
    try:
        if ref is None and args.group is not None:
            ref = f"J:{args.group}"
        elif ref in ("J", "perm:regular", "natural") and args.group:
            ref = f"{ref}-of-{args.group}" if ref == "perm:regular" else f"{ref}:{args.group}"
        if ref is None:
            raise InputError("a lattice reference is required")
        L, named = lattice_from_ref(ref, order_cap=args.max_group_order)
        if args.subgroup:
            L = select_subgroup(L, named, args.subgroup)
        res = sha2(L, path=args.h2_path, budget=args.budget)
    except (InputError, UnknownReference, WitnessError, RootDataError, LatticeError, OSError, ValueError) as e:
        _err(str(e))
        return EXIT_INPUT
    except (BudgetExceeded, CapExceeded) as e:
        _err(str(e))
        return EXIT_FAIL
    if args.json:
        out = {"lattice": ref, "sha": str(res.sha), "h2": str(res.ambient_h2), "path": res.path, "audit": res.audit()}
        sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    print(f"lattice: {ref} (rank {L.rank}, group order {L.group.order})")
    print(f"H2: {res.ambient_h2}")
    print(f"Sh: {res.sha}")
    for a in res.audit():
        print(f"  cyclic order {a['order']}: H2 = {a['h2_cyclic']}, image = {a['restriction_image']}")
    return EXIT_OK


def _run(item):
    cid, path = item
    return run_check(cid, path)


def cmd_verify_paper(args) -> int:
    target = args.check or "all"
    if target == "all":
        ids = list(CHECKS)
    elif target in CHECKS:
        ids = [target]
    else:
        _err(f"unknown check {target!r}; known: {', '.join(CHECKS)}")
        return EXIT_INPUT
    items = [(cid, args.h2_path) for cid in ids]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            results = list(ex.map(_run, items))
    else:
        results = [_run(it) for it in items]
    width = max(len(r.check_id) for r in results)
    for r in results:
        line = f"{r.check_id:<{width}}  {'PASS' if r.passed else 'FAIL'}  {r.detail}"
        if args.timings:
            line += f"  ({r.seconds:.2f}s)"
        print(line)
    failed = [r.check_id for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_FAIL


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-group-order", type=int, default=DEFAULT_ORDER_CAP, help="cap on enumerated group orders")
    common.add_argument("--h2-path", choices=["baseline", "optimized", "cross-check"], default="optimized")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings (output no longer deterministic)")

    p = argparse.ArgumentParser(prog="stably-cayley", description="Stably Cayley classification and Sh computations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="decide a quotient H^m/C from a JSON request")
    c.add_argument("--input", required=True)
    c.add_argument("--output")
    c.add_argument("--sha-witness", action="store_true", help="attach a Sh obstruction search to negative verdicts")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("sha", parents=[common], help="compute Sh^2 and H^2 of a named or serialized lattice")
    s.add_argument("ref", nargs="?")
    s.add_argument("--lattice")
    s.add_argument("--group")
    s.add_argument("--subgroup", help="comma-separated element names or indices")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="size cap for the baseline bar complex")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_sha)

    v = sub.add_parser("verify-paper", parents=[common], help="rerun the published computations")
    v.add_argument("check", nargs="?", default="all")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify_paper)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as e:  # anything unexpected is an internal failure
        _err(f"internal failure: {type(e).__name__}: {e}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
