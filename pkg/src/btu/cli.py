"""Command-line front end: ``btu <subcommand> ...``.

Exit codes: 0 success, 2 usage error, 3 oracle guard refusal, 4 failed
invariant or verification check.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .errors import DomainError, GuardRefusal, InvariantViolation
from .microparts import (
    assemble_permutation,
    enumerate_cycle_orders,
    enumerate_label_mappings,
    enumerate_micropartitions,
)
from .partitions import Partition, PartitionFamilySpec, enumerate_p2, optimal_partitions
from .permutations import psi
from .search import (
    SearchBudget,
    SearchResult,
    algorithm_alpha,
    algorithm_alpha1,
    default_workers,
    hierarchy_search,
    implicit_enumeration,
    pipeline_search,
)
from .tanner import Btu, cycle_report, export
from .verify import SUITES, format_table, run_suite, source_partition

EXIT_USAGE, EXIT_GUARD, EXIT_INVARIANT = 2, 3, 4
DEFAULT_SEED = 0
CENSUS_HEADER = ("beta_tuple", "best_girth", "classes_seen")


class UsageError(DomainError):
    pass


def parse_partition(token: str) -> Partition:
    try:
        return Partition.parse(token)
    except DomainError as exc:
        raise UsageError(f"bad partition {token!r}: {exc}") from None


def parse_betas(text: str, m: Optional[int] = None) -> list[Partition]:
    """``"2,2:4"`` -> [(2,2), (4)]; every partition must sum to ``m`` when given."""
    betas = [parse_partition(tok) for tok in text.split(":")]
    total = m if m is not None else betas[0].m
    for tok, beta in zip(text.split(":"), betas):
        if beta.m != total:
            raise UsageError(f"bad partition {tok!r}: sums to {beta.m}, expected {total}")
    return betas


def emit(payload, fmt: str) -> str:
    """Serialize a result; JSON keys sorted, always newline-terminated."""
    if fmt == "json":
        if isinstance(payload, (SearchResult, Btu)) or hasattr(payload, "to_dict"):
            payload = payload.to_dict()
        return json.dumps(payload, sort_keys=True) + "\n"
    if fmt == "csv":
        if not isinstance(payload, list):
            raise UsageError("csv output needs census rows")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CENSUS_HEADER)
        for row in payload:
            w.writerow([row.beta_tuple, "" if row.best_girth is None else row.best_girth, row.classes_seen])
        return buf.getvalue()
    if fmt in ("alist", "dot"):
        if not isinstance(payload, Btu):
            raise UsageError(f"{fmt} output needs a BTU")
        return export(payload, fmt)
    raise UsageError(f"unknown format {fmt!r}")


def _load_btu(path: str) -> Btu:
    try:
        return Btu.from_dict(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"cannot read BTU from {path}: {exc}") from None


# --------------------------------------------------------------------------
# subcommands


def cmd_partitions(args) -> str:
    return "".join(f"{beta}\n" for beta in enumerate_p2(args.m))


def cmd_optimal_params(args) -> str:
    betas = optimal_partitions(args.k, args.r, args.b)
    return emit({"m": args.b * args.k ** (args.r - 1), "betas": [list(b.parts) for b in betas]}, "json")


def cmd_psi(args) -> str:
    beta = parse_partition(args.beta)
    perms = psi(beta).perms
    return emit({"beta": list(beta.parts), "p1": list(perms[0].labels), "p2": list(perms[1].labels)}, "json")


def cmd_enumerate(args) -> str:
    betas = parse_betas(args.betas, args.m)
    if len(betas) < 2:
        raise UsageError("enumerate needs at least two partitions, e.g. --betas 2,2:4")
    lines = []
    if args.stage == "micro":
        for i, (bu, bv) in enumerate(zip(betas, betas[1:]), start=1):
            for micro in enumerate_micropartitions(bu, bv):
                lines.append({"stage": i, "cells": micro.as_lists()})
    else:
        context = list(psi(betas[0]).perms)
        source = source_partition(betas[0])
        for micro in enumerate_micropartitions(betas[0], betas[1]):
            for target in enumerate_label_mappings(micro, source):
                if args.stage == "labels":
                    lines.append({"cells": micro.as_lists(), "subsets": [list(s) for s in target.subsets]})
                    continue
                for order in enumerate_cycle_orders(target, context, restricted=True):
                    q = assemble_permutation(context[-1], order)
                    lines.append({"orders": [list(c) for c in order.subsets], "perm": list(q.labels)})
    return "".join(json.dumps(x, sort_keys=True) + "\n" for x in lines)


def cmd_girth(args) -> str:
    return emit(cycle_report(_load_btu(args.input)), "json")


def cmd_export(args) -> str:
    if args.input:
        b = _load_btu(args.input)
    elif args.beta:
        b = Btu(psi(parse_partition(args.beta)))
    else:
        raise UsageError("export needs --in FILE or --beta PARTITION")
    return export(b, args.format)


def cmd_search(args) -> str:
    workers = args.workers if args.workers is not None else default_workers()
    budget = SearchBudget(args.max_candidates, args.max_seconds, workers)
    mode = args.mode or ("pipeline" if args.betas else "alpha")
    spec = None
    if args.betas:
        betas = parse_betas(args.betas, args.m)
        if args.r is not None and args.r != len(betas) + 1:
            raise UsageError(f"--r {args.r} disagrees with {len(betas)} partitions in --betas")
        spec = PartitionFamilySpec(betas[0].m, len(betas) + 1, betas)
    if mode in ("alpha1", "pipeline"):
        if spec is None:
            raise UsageError(f"mode {mode} needs --betas")
        result = (algorithm_alpha1 if mode == "alpha1" else pipeline_search)(spec, budget)
    else:
        if args.m is None or args.r is None:
            raise UsageError(f"mode {mode} needs --m and --r")
        driver = {"alpha": algorithm_alpha, "implicit": implicit_enumeration, "hierarchy": hierarchy_search}[mode]
        result = driver(args.m, args.r, budget)
    if args.census:
        if mode != "implicit":
            raise UsageError("--census is only produced by --mode implicit")
        Path(args.census).write_text(emit(result.census, "csv"))
    if args.plot_dir and result.census:
        from .plots import plot_census

        plot_census(result.census, Path(args.plot_dir) / f"census_m{args.m}_r{args.r}.png")
    return emit(result, "json")


def cmd_verify(args) -> str:
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = [run_suite(name, seed=args.seed) for name in names]
    if args.plot_dir:
        from .plots import render_suite

        for rep in reports:
            render_suite(rep, Path(args.plot_dir))
    text = format_table(reports)
    if not all(rep.ok for rep in reports):
        raise _VerifyFailed(text)
    return text


class _VerifyFailed(InvariantViolation):
    def __init__(self, text: str):
        super().__init__("verification checks failed")
        self.text = text


def cmd_replay(args) -> str:
    try:
        manifest = json.loads(Path(args.manifest_file).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read manifest {args.manifest_file}: {exc}") from None
    if manifest.get("version") != __version__:
        logging.getLogger(__name__).warning(
            "manifest written by version %s, running %s", manifest.get("version"), __version__
        )
    argv = manifest["argv"]
    if argv and argv[0] == "replay":
        raise UsageError("refusing to replay a replay")
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    if code:
        raise UsageError(f"replayed command exited with {code}")
    return buf.getvalue()


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", metavar="FILE", help="write a run manifest for replay")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = argparse.ArgumentParser(prog="btu", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("partitions", parents=[common], help="list P2(m)")
    s.add_argument("--m", type=int, required=True)
    s.set_defaults(func=cmd_partitions)

    s = sub.add_parser("optimal-params", parents=[common], help="optimal partitions for (k, r, b)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--b", type=int, default=1)
    s.set_defaults(func=cmd_optimal_params)

    s = sub.add_parser("psi", parents=[common], help="canonical (m,2) BTU for a partition")
    s.add_argument("--beta", required=True)
    s.set_defaults(func=cmd_psi)

    s = sub.add_parser("enumerate", parents=[common], help="print one pipeline stage as JSON lines")
    s.add_argument("--m", type=int)
    s.add_argument("--betas", required=True)
    s.add_argument("--stage", choices=("micro", "labels", "orders"), default="micro")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("girth", parents=[common], help="girth and cycle report of a BTU")
    s.add_argument("--in", dest="input", required=True)
    s.set_defaults(func=cmd_girth)

    s = sub.add_parser("export", parents=[common], help="write a BTU as alist, dot or json")
    s.add_argument("--format", choices=("alist", "dot", "json"), default="json")
    s.add_argument("--in", dest="input")
    s.add_argument("--beta")
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("search", parents=[common], help="search for a girth-maximum BTU")
    s.add_argument("--m", type=int)
    s.add_argument("--r", type=int)
    s.add_argument("--betas")
    s.add_argument("--mode", choices=("alpha", "alpha1", "pipeline", "implicit", "hierarchy"))
    s.add_argument("--max-candidates", type=int)
    s.add_argument("--max-seconds", type=float)
    s.add_argument("--workers", type=int)
    s.add_argument("--census", metavar="CSV")
    s.add_argument("--plot-dir", metavar="DIR")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", parents=[common], help="run oracle verification suites")
    s.add_argument("--suite", choices=SUITES + ("all",), default="all")
    s.add_argument("--plot-dir", metavar="DIR")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    s.add_argument("manifest_file")
    s.set_defaults(func=cmd_replay, manifest=None)
    return p


def _strip_manifest(argv: Sequence[str]) -> list[str]:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--manifest":
            skip = True
            continue
        if tok.startswith("--manifest="):
            continue
        out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.monotonic()
    try:
        text = args.func(args)
    except _VerifyFailed as exc:
        sys.stdout.write(exc.text)
        return EXIT_INVARIANT
    except GuardRefusal as exc:
        print(f"btu: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InvariantViolation as exc:
        print(f"btu: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except DomainError as exc:
        print(f"btu: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"btu: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    sys.stdout.write(text)
    if getattr(args, "manifest", None):
        params = {k: v for k, v in vars(args).items() if k not in ("func", "manifest")}
        manifest = {
            "argv": _strip_manifest(argv),
            "command": args.command,
            "params": params,
            "seed": args.seed,
            "budget": {k: params.get(k) for k in ("max_candidates", "max_seconds")},
            "workers": params.get("workers") or default_workers(),
            "result": _summary(text),
            "wall_time": round(time.monotonic() - start, 6),
            "version": __version__,
        }
        Path(args.manifest).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return 0


def _summary(text: str):
    try:
        data = json.loads(text)
    except ValueError:
        return {"lines": text.count("\n")}
    if isinstance(data, dict):
        return {k: data[k] for k in ("girth", "explored", "mode") if k in data} or {"keys": sorted(data)}
    return {"lines": text.count("\n")}


if __name__ == "__main__":
    sys.exit(main())
