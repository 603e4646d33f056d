"""Command line entry point: ``covsys verify|transform|enumerate|exact|compare``.

Exit status: 0 on success, 1 when a verification or comparison fails, 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import catalog, core, exact, search, transforms


def _system(text: str) -> core.CongruenceSystem:
    try:
        return core.CongruenceSystem.parse(text)
    except core.ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _affine(text: str) -> transforms.AffineParams:
    try:
        return transforms.AffineParams.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,n', got {text!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covsys", description="Verify, transform and enumerate covering systems of congruences."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="report covers/distinct/exact/minimal and R(S)")
    p.add_argument("system", type=_system, nargs="?", help='e.g. "0/2,0/3,1/4,1/6,11/12"')
    p.add_argument("--file", help="read one system per line instead")

    p = sub.add_parser("transform", help="apply aS+n, delta, or canonicalise")
    p.add_argument("system", type=_system)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--affine", type=_affine, metavar="A,N")
    g.add_argument("--delta", action="store_true")
    g.add_argument("--preimage", action="store_true", help="inverse of --delta, if any")
    g.add_argument("--canonical", action="store_true")
    g.add_argument("--primitive", action="store_true", help="report delta-primitivity")

    p = sub.add_parser("enumerate", help="classify distinct minimal covering systems")
    p.add_argument("--k-min", type=_positive, required=True)
    p.add_argument("--k-max", type=_positive, required=True)
    p.add_argument("--min-modulus", type=int, default=2)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--threads", type=_positive, default=1, help="worker processes")
    p.add_argument("--no-prune", action="store_true", help="skip prune_bad (for cross-checks)")
    p.add_argument("--max-nodes", type=_positive, default=None, help="node budget per candidate")
    p.add_argument("--quiet", action="store_true", help="no progress on stderr")

    p = sub.add_parser("exact", help="exact covering system constructions and counts")
    esub = p.add_subparsers(dest="exact_command", required=True)
    e = esub.add_parser("construct", help="exact cover by k classes, moduli powers of n")
    e.add_argument("--base", type=int, required=True)
    e.add_argument("--k", type=int, required=True)
    for name, helptext in (("count", "count two-moduli exact covers"), ("enumerate", "list them")):
        e = esub.add_parser(name, help=helptext)
        e.add_argument("--m", type=int, required=True)
        e.add_argument("--k", type=int, required=True)

    p = sub.add_parser("compare", help="compare a classification against published counts")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--expect", choices=sorted(catalog.EXPECTATIONS), default="table1")
    p.add_argument("--k", type=int, action="append", help="restrict to these k (repeatable)")
    return parser


def _cmd_verify(args, parser) -> int:
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            texts = [line for line in fh if line.strip()]
        systems = [core.CongruenceSystem.parse(t) for t in texts]
    elif args.system is not None:
        systems = [args.system]
    else:
        parser.error("verify needs a system or --file")
    status = 0
    for system in systems:
        report = core.analyze(system)
        prefix = f"{system}: " if len(systems) > 1 else ""
        print(prefix + report.summary())
        if not report.covers:
            status = 1
    return status


def _cmd_transform(args) -> int:
    s = args.system
    if args.affine is not None:
        print(transforms.affine_apply(s, args.affine))
    elif args.delta:
        print(transforms.delta(s))
    elif args.preimage:
        t = transforms.delta_preimage(s)
        if t is None:
            print("none")
            return 1
        print(t)
    elif args.canonical:
        print(transforms.canonical_form(s))
    else:
        primitive = transforms.is_delta_primitive(s)
        print(f"delta_primitive={'true' if primitive else 'false'}")
    return 0


def _cmd_enumerate(args, parser) -> int:
    if args.k_min > args.k_max:
        parser.error("--k-min must not exceed --k-max")
    if args.min_modulus < 2:
        parser.error("--min-modulus must be at least 2")
    progress = None if args.quiet else (lambda msg: print(msg, file=sys.stderr, flush=True))
    config = search.ClassifyConfig(
        args.k_min,
        args.k_max,
        args.min_modulus,
        prune=not args.no_prune,
        workers=args.threads,
        max_nodes_per_candidate=args.max_nodes,
    )
    result = search.classify_detailed(config, progress)
    records = [catalog.ClassificationRecord.from_system(c.system, c.delta_primitive) for _, c in result.classes]
    if args.out == "-":
        catalog.write_records(records, sys.stdout, args.format)
    else:
        catalog.write_records(records, args.out, args.format)
    for k in range(args.k_min, args.k_max + 1):
        prim = [r for r in records if r.k == k and r.delta_primitive]
        print(
            f"k={k}: {result.candidates[k]} candidate lists, {result.pruned[k]} pruned, "
            f"{len(result.good[k])} good; {sum(r.k == k for r in records)} affine classes, "
            f"{len(prim)} delta-primitive over {len({r.moduli for r in prim})} moduli sets",
            file=sys.stderr if args.out == "-" else sys.stdout,
        )
    return 0


def _cmd_exact(args) -> int:
    if args.exact_command == "construct":
        print(exact.exact_prime_power_construct(args.base, args.k))
    elif args.exact_command == "count":
        print(exact.exact_two_moduli_count(args.m, args.k))
    else:
        for system in exact.exact_two_moduli_enumerate(args.m, args.k):
            print(system)
    return 0


def _cmd_compare(args) -> int:
    records = catalog.read_records(args.infile)
    report = catalog.compare_to_expected(records, catalog.EXPECTATIONS[args.expect], ks=args.k)
    print(report)
    return 0 if report.ok else 1


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _cmd_verify(args, parser)
        if args.command == "transform":
            return _cmd_transform(args)
        if args.command == "enumerate":
            return _cmd_enumerate(args, parser)
        if args.command == "exact":
            return _cmd_exact(args)
        return _cmd_compare(args)
    except (core.PreconditionError, core.ParseError, catalog.RecordParseError) as exc:
        print(f"covsys: error: {exc}", file=sys.stderr)
        return 2
    except (core.LcmOverflowError, search.CapacityError) as exc:
        print(f"covsys: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
