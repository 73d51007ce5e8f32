"""Command line interface.

Verbs:
    field inspect       invariants of a field description
    primes frobenius    per-prime Frobenius vectors below a height
    gaps search         bounded-gap tuple search, JSON report
    algebra embed-check quadratic-extension embedding certificates
    volume              Borel covolume of a ramification set
    twins construct     full pipeline run from a request file
    twins verify        re-derive every certificate of a report
    manifold check      torsion-freeness witness table

Exit codes: 0 success, 1 usage/input error, 2 hypothesis-validation
failure, 3 no tuples found below the height.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .config import (
    FieldDescription,
    field_description_from_pairs,
    load_field_file,
    load_request_file,
    parse_key_values,
)
from .errors import HypothesisFailure, NoTuplesFound, OrbigapError
from .numberfield import factor_prime, parse_element, prime_from_label
from .pipeline import (
    SCHEMA_VERSION,
    report_to_json,
    run_request,
    validate_base,
    verify_report,
)
from .quaternion import algebra, is_division, is_kleinian_admissible, torsion_free_check
from .search import SearchSpec, find_bounded_gap_tuples, gap_statistics
from .sieve import primes_up_to
from .splitting import (
    RamifiedCoordinates,
    extension_from_trace,
    frobenius_vector,
    make_quadratic_extension,
)
from .quaternion import admits_embedding
from .volume import borel_volume, dedekind_zeta_2


def _load_field(args):
    if getattr(args, "field", None):
        return load_field_file(args.field).build()
    if getattr(args, "poly", None):
        desc = FieldDescription(args.poly, getattr(args, "disc", None))
        return desc.build()
    raise OrbigapError("give --field <file> or --poly <polynomial>")


def _parse_extensions(field, specs):
    extensions = []
    for i, spec in enumerate(specs or (), 1):
        kind, sep, body = spec.partition(":")
        if not sep or kind not in ("trace", "radicand"):
            raise OrbigapError(f"extension spec must be trace:<elt> or radicand:<elt>, got {spec!r}")
        element = parse_element(field, body)
        label = f"L{i}"
        if kind == "trace":
            extensions.append(extension_from_trace(field, element, label))
        else:
            extensions.append(make_quadratic_extension(field, element, label))
    return tuple(extensions)


def _parse_height(text):
    return int(float(text))


def _ram_from_args(field, args):
    primes = tuple(prime_from_label(field, lbl) for lbl in (args.ram_primes or ()))
    return algebra(field, tuple(args.ram_real or ()), primes, tuple(args.ram_opaque or ()))


def _emit(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _add_field_args(parser):
    parser.add_argument("--field", help="field description file")
    parser.add_argument("--poly", help="inline defining polynomial")
    parser.add_argument("--disc", type=int, help="field discriminant (with --poly)")


def _add_ram_args(parser):
    parser.add_argument("--ram-real", type=int, action="append", default=[],
                        help="ramified real place index (repeatable)")
    parser.add_argument("--ram-primes", action="append", default=[],
                        help="ramified prime label p:index (repeatable)")
    parser.add_argument("--ram-opaque", action="append", default=[],
                        help="opaque ramified place token[@norm] (repeatable)")


def cmd_field_inspect(args):
    field = _load_field(args)
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "field_report",
            "poly": str(field.poly),
            "degree": field.degree,
            "signature": list(field.signature),
            "disc_poly": field.disc_poly,
            "field_disc": field.field_disc,
            "excluded": sorted(field.excluded),
            "declared_splitting": {
                str(p): list(ns) for p, ns in sorted(field.declared_splitting.items())
            },
        },
        args.out,
    )
    return 0


def cmd_primes_frobenius(args):
    field = _load_field(args)
    extensions = _parse_extensions(field, args.ext)
    height = _parse_height(args.height)
    rows = []
    for p in primes_up_to(height):
        p = int(p)
        if p in field.excluded:
            continue
        for prime in factor_prime(field, p):
            if prime.norm > height:
                continue
            vec = frobenius_vector(prime, extensions)
            row = {
                "label": prime.label,
                "norm": prime.norm,
                "degree": prime.inertia_degree,
                "factor": str(prime.factor),
            }
            if isinstance(vec, RamifiedCoordinates):
                row["ramified_coordinates"] = list(vec.labels)
            else:
                row["vector"] = list(vec.bits)
            rows.append(row)
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "frobenius_report",
            "poly": str(field.poly),
            "extensions": [
                {"label": e.label, "radicand": str(e.radicand)} for e in extensions
            ],
            "height": height,
            "primes": rows,
        },
        args.out,
    )
    return 0


def cmd_gaps_search(args):
    started = time.monotonic()
    field = _load_field(args)
    extensions = _parse_extensions(field, args.ext)
    target = tuple(int(b) for b in args.target.split(",")) if args.target else (1,) * len(extensions)
    avoid = frozenset(prime_from_label(field, lbl) for lbl in (args.avoid or ()))
    spec = SearchSpec(
        field=field,
        extensions=extensions,
        target=target,
        height=_parse_height(args.height),
        k=args.k,
        window=args.window,
        avoid=avoid,
        policy=args.policy,
        segment_size=args.segment_size,
        workers=args.workers,
    )
    tuples = find_bounded_gap_tuples(spec)
    stats = gap_statistics(spec)
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": "gap_report",
        "spec": {
            "poly": str(field.poly),
            "extensions": [
                {"label": e.label, "radicand": str(e.radicand)} for e in extensions
            ],
            "target": list(target),
            "height": spec.height,
            "k": spec.k,
            "window": spec.window,
            "policy": spec.policy,
            "avoid": sorted(q.label for q in avoid),
        },
        "tuples": [
            {
                "norms": list(t.norms),
                "labels": list(t.labels),
                "factors": [str(p.factor) for p in t.primes],
                "span": t.span,
            }
            for t in tuples
        ],
        "statistics": stats.to_dict(),
        "wall_time_seconds": round(time.monotonic() - started, 3),
    }
    _emit(report, args.out)
    return 0


def cmd_algebra_embed_check(args):
    field = _load_field(args)
    B = _ram_from_args(field, args)
    extensions = _parse_extensions(field, args.ext)
    certs = [admits_embedding(B, ext) for ext in extensions]
    ok, reasons = is_kleinian_admissible(B)
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "embedding_report",
            "poly": str(field.poly),
            "ram": list(B.ram.labels()),
            "kleinian": ok,
            "kleinian_reasons": list(reasons),
            "division": is_division(B),
            "certificates": [c.to_dict() for c in certs],
        },
        args.out,
    )
    return 0


def cmd_volume(args):
    field = _load_field(args)
    B = _ram_from_args(field, args)
    zeta = dedekind_zeta_2(field, _parse_height(args.zeta_cutoff), args.precision)
    vol = borel_volume(field, B.ram, zeta, args.precision)
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "volume_report",
            "poly": str(field.poly),
            "ram": list(B.ram.labels()),
            **vol.to_dict(),
        },
        args.out,
    )
    return 0


def cmd_twins_construct(args):
    request = load_request_file(args.request)
    report = run_request(request)
    text = report_to_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_twins_verify(args):
    with open(args.report, encoding="utf-8") as handle:
        report = json.load(handle)
    problems = verify_report(report)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": "verification_report",
        "report": args.report,
        "ok": not problems,
        "problems": problems,
    }
    _emit(payload, args.out)
    return 0 if not problems else 2


def cmd_manifold_check(args):
    field = _load_field(args)
    B = _ram_from_args(field, args)
    tf = torsion_free_check(B, args.nmax, _parse_height(args.height))
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "kind": "manifold_report",
            "poly": str(field.poly),
            "ram": list(B.ram.labels()),
            **tf.to_dict(),
        },
        args.out,
    )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="orbigap",
        description="bounded-gap constructions of arithmetic Kleinian commensurability classes",
    )
    sub = parser.add_subparsers(dest="group", required=True)

    field_group = sub.add_parser("field", help="field utilities").add_subparsers(
        dest="verb", required=True
    )
    p = field_group.add_parser("inspect", help="field invariants")
    _add_field_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_field_inspect)

    primes_group = sub.add_parser("primes", help="prime splitting utilities").add_subparsers(
        dest="verb", required=True
    )
    p = primes_group.add_parser("frobenius", help="Frobenius vectors below a height")
    _add_field_args(p)
    p.add_argument("--ext", action="append", required=True,
                   help="trace:<elt> or radicand:<elt> (repeatable, ordered)")
    p.add_argument("--height", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_primes_frobenius)

    gaps_group = sub.add_parser("gaps", help="bounded-gap searches").add_subparsers(
        dest="verb", required=True
    )
    p = gaps_group.add_parser("search", help="search for bounded-gap tuples")
    _add_field_args(p)
    p.add_argument("--ext", action="append", required=True)
    p.add_argument("--target", help="comma-separated 0/1 bits (default all 1)")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--window", type=int, default=0)
    p.add_argument("--height", required=True)
    p.add_argument("--policy", choices=("sliding", "disjoint"), default="sliding")
    p.add_argument("--avoid", action="append", help="prime label to avoid (repeatable)")
    p.add_argument("--segment-size", type=int, default=1 << 20)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gaps_search)

    algebra_group = sub.add_parser("algebra", help="quaternion algebra checks").add_subparsers(
        dest="verb", required=True
    )
    p = algebra_group.add_parser("embed-check", help="embedding certificates")
    _add_field_args(p)
    _add_ram_args(p)
    p.add_argument("--ext", action="append", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_algebra_embed_check)

    p = sub.add_parser("volume", help="Borel covolume")
    _add_field_args(p)
    _add_ram_args(p)
    p.add_argument("--zeta-cutoff", default="1e6")
    p.add_argument("--precision", type=int, default=128)
    p.add_argument("--out")
    p.set_defaults(func=cmd_volume)

    twins_group = sub.add_parser("twins", help="full pipeline").add_subparsers(
        dest="verb", required=True
    )
    p = twins_group.add_parser("construct", help="run a twin-construction request")
    p.add_argument("--request", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_twins_construct)
    p = twins_group.add_parser("verify", help="re-derive a report's certificates")
    p.add_argument("--report", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_twins_verify)

    manifold_group = sub.add_parser("manifold", help="manifold criteria").add_subparsers(
        dest="verb", required=True
    )
    p = manifold_group.add_parser("check", help="torsion-freeness witnesses")
    _add_field_args(p)
    _add_ram_args(p)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--height", default="10000")
    p.add_argument("--out")
    p.set_defaults(func=cmd_manifold_check)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoTuplesFound as exc:
        sys.stderr.write(f"no tuples: {exc}\n")
        if exc.diagnostics:
            sys.stderr.write(report_to_json(exc.diagnostics))
        return 3
    except HypothesisFailure as exc:
        sys.stderr.write(f"hypothesis failure: {exc}\n")
        return 2
    except OrbigapError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
