"""Command-line front end.

    orbq lattice info <gram>
    orbq aut analyze <gram> <aut> [--beta ...]
    orbq run <job.json> [--trunc-weight W] [--json]
    orbq fetch <name> [--cache-dir DIR]
    orbq cache ls|gc

Exit codes: 0 success, 2 validation/parse failure, 3 not type 0,
4 enumeration needs a cache entry.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .autlift import LatticeAutomorphism, LiftSpec, NonIntegralType, \
    conformal_weight, orbifold_type, suggest_type0_beta
from .cycletype import CycleType
from .gramio import (JobSpec, ParseError, parse_automorphism_file,
                     parse_gram_file, report_json, report_text, write_report)
from .lattice import NotAnIsometry, NotPositiveDefinite, NotSymmetric
from .orbifold import NotType0, fixed_point_free_orbifold, orbifold_character
from .qseries import NonIntegerCoefficient, NonRationalCoefficient
from .theta import NeedsCache, cache_dir, enumerate_by_norm, extremal_theta

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NOT_TYPE0 = 3
EXIT_NEEDS_CACHE = 4


def _parse_beta(text: str) -> list[Fraction]:
    return [Fraction(tok) for tok in text.replace(",", " ").split()]


def cmd_lattice_info(args) -> int:
    lat = parse_gram_file(args.gram)
    print(f"dimension   : {lat.dim}")
    print(f"determinant : {lat.det}")
    print(f"even        : {lat.is_even}")
    print(f"unimodular  : {lat.is_unimodular}")
    if lat.is_even:
        print(f"level       : {lat.level()}")
    if lat.dim <= 26:
        hist = enumerate_by_norm(lat, 4)
        print("norms <= 4  : " + ", ".join(f"{n}:{c}" for n, c in hist.items()))
    return EXIT_OK


def cmd_aut_analyze(args) -> int:
    lat = parse_gram_file(args.gram)
    mat = parse_automorphism_file(args.aut)
    aut = LatticeAutomorphism(lat, mat)
    beta = _parse_beta(args.beta) if args.beta else None
    spec = LiftSpec(aut, beta)
    print(f"lattice order n : {aut.order}")
    print(f"cycle type      : {aut.cycle_type}")
    print(f"fixed rank      : {aut.fixed(1).rank}")
    print(f"lift order      : {spec.hat_order}")
    print(f"classification  : {spec.classification()}")
    rho = conformal_weight(spec)
    ty = orbifold_type(spec)
    print(f"conformal weight: {rho}")
    print(f"type            : {ty}")
    if ty != 0 and aut.fixed(1).rank:
        try:
            suggestions = suggest_type0_beta(aut)
            for s in suggestions[:3]:
                print(f"type-0 lift     : beta = "
                      f"[{', '.join(str(b) for b in s.beta)}], "
                      f"order {s.hat_order}")
        except Exception as exc:  # search is best effort
            print(f"type-0 search   : {exc}")
    return EXIT_OK if ty == 0 else EXIT_NOT_TYPE0


def run_job(spec: JobSpec, emit=print, as_json: bool = False) -> int:
    """Execute one job spec; returns the process exit code."""
    if spec.cycle_type is not None:
        cycle = CycleType.parse(spec.cycle_type)
        if spec.theta not in ("extremal", "auto"):
            raise ValueError("abstract jobs need theta = extremal")
        theta_full = extremal_theta(spec.central_charge,
                                    Fraction(spec.trunc_weight + 1))
        report = fixed_point_free_orbifold(cycle, theta_full,
                                           spec.trunc_weight)
    else:
        lat = parse_gram_file(spec.lattice)
        mat = parse_automorphism_file(spec.automorphism)
        aut = LatticeAutomorphism(lat, mat)
        lift = LiftSpec(aut, [Fraction(str(b)) for b in spec.beta]
                        if spec.beta else None)
        emit(f"# {lift.classification()}, cycle type {aut.cycle_type}, "
             f"lift order {lift.hat_order}")
        use_extremal = spec.theta == "extremal"
        report = orbifold_character(lift, trunc_weight=spec.trunc_weight,
                                    use_extremal=use_extremal,
                                    allow_large=spec.allow_large)
    if spec.report:
        write_report(report, spec.report)
        emit(f"# report written to {spec.report}")
    emit(json.dumps(report_json(report), indent=1) if as_json
         else report_text(report))
    return EXIT_OK


def cmd_run(args) -> int:
    spec = JobSpec.load(args.job)
    if args.trunc_weight:
        spec.trunc_weight = args.trunc_weight
    return run_job(spec, as_json=args.json)


def cmd_fetch(args) -> int:
    from .catalogue import CatalogueRef, NetworkError, ValidationFailed, \
        fetch_lattice
    directory = args.cache_dir or cache_dir() or "."
    ref = CatalogueRef.known(args.name, directory)
    try:
        lat = fetch_lattice(ref, offline=args.offline)
    except NetworkError as exc:
        print(f"network error: {exc}", file=sys.stderr)
        return EXIT_NEEDS_CACHE
    except ValidationFailed as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"{ref.name}: dim {lat.dim}, det {lat.det}, even {lat.is_even}; "
          f"cached at {ref.cache_path}")
    return EXIT_OK


def cmd_cache(args) -> int:
    d = cache_dir()
    if not d or not os.path.isdir(d):
        print("cache directory not set (export ORBQ_CACHE_DIR) or empty")
        return EXIT_OK
    entries = sorted(os.listdir(d))
    if args.action == "ls":
        for name in entries:
            path = os.path.join(d, name)
            size = os.path.getsize(path)
            head = ""
            if name.endswith(".theta"):
                with open(path) as fh:
                    head = fh.readline().strip().lstrip("# ")[:90]
            print(f"{size:>10}  {name}  {head}")
        print(f"{len(entries)} entries")
    else:  # gc
        for name in entries:
            os.unlink(os.path.join(d, name))
        print(f"removed {len(entries)} entries")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbq",
                                description="cyclic orbifold characters of "
                                            "lattice vertex operator algebras")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker hint for enumeration (currently single-process)")
    sub = p.add_subparsers(dest="command", required=True)

    lat = sub.add_parser("lattice", help="lattice utilities")
    lat_sub = lat.add_subparsers(dest="sub", required=True)
    info = lat_sub.add_parser("info", help="validate and describe a Gram file")
    info.add_argument("gram")
    info.set_defaults(fn=cmd_lattice_info)

    aut = sub.add_parser("aut", help="automorphism utilities")
    aut_sub = aut.add_subparsers(dest="sub", required=True)
    ana = aut_sub.add_parser("analyze", help="lift analysis of an isometry")
    ana.add_argument("gram")
    ana.add_argument("aut")
    ana.add_argument("--beta", default=None,
                     help="comma/space separated rationals, e.g. '1/2,0'")
    ana.set_defaults(fn=cmd_aut_analyze)

    run = sub.add_parser("run", help="run a job file")
    run.add_argument("job")
    run.add_argument("--trunc-weight", type=int, default=None)
    run.add_argument("--json", action="store_true")
    run.set_defaults(fn=cmd_run)

    fetch = sub.add_parser("fetch", help="fetch a catalogue lattice")
    fetch.add_argument("name")
    fetch.add_argument("--cache-dir", default=None)
    fetch.add_argument("--offline", action="store_true")
    fetch.set_defaults(fn=cmd_fetch)

    cache = sub.add_parser("cache", help="theta cache maintenance")
    cache.add_argument("action", choices=["ls", "gc"])
    cache.set_defaults(fn=cmd_cache)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NotType0 as exc:
        print(f"not type 0: {exc}", file=sys.stderr)
        return EXIT_NOT_TYPE0
    except NonIntegralType as exc:
        print(f"inconsistent lift: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NeedsCache as exc:
        print(f"needs cache: {exc}", file=sys.stderr)
        return EXIT_NEEDS_CACHE
    except (ParseError, NotSymmetric, NotPositiveDefinite, NotAnIsometry,
            NonRationalCoefficient, NonIntegerCoefficient, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
