"""Command-line interface.

Exit codes: 0 pass, 1 I/O or schema error, 2 validation failure (polytope or
star condition), 3 a theorem check failed.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .acceptance import format_table, run_criteria
from .analysis import ValidationFailure, analyze, report_json, report_passed
from .chain import betti_mod2, euler_characteristic
from .charfun import (
    canonical_form_at_vertex,
    check_star,
    direct_general_position,
    is_general_position,
    orientability_functional,
    xi_is_unique,
)
from .fixtures import FixtureSchemaError, builtin_fixtures, export_fixtures, get_fixture, load_fixture_dir, load_fixture_file
from .polytope import h_vector, validate
from .smallcover import build, doubling_isomorphism, doubling_model, filtration_checks, orbit_space
from .standard_action import SignSubgroup, is_generated_by_rotations, quotient_sphere_homology, stabilizer, standard_G

log = logging.getLogger("smallcovers")

EXIT_OK, EXIT_ENV, EXIT_INVALID, EXIT_THEOREM = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _load(spec: str):
    if spec.startswith("builtin:"):
        try:
            return get_fixture(spec.split(":", 1)[1])
        except KeyError as exc:
            raise CliError(str(exc.args[0]), EXIT_ENV) from None
    try:
        return load_fixture_file(spec)
    except OSError as exc:
        raise CliError(f"{spec}: {exc.strerror or exc}", EXIT_ENV) from None
    except FixtureSchemaError as exc:
        raise CliError(f"schema error: {exc}", EXIT_ENV) from None


def _valid(fx):
    for rep in (validate(fx.polytope), check_star(fx.polytope, fx.lam)):
        if not rep:
            raise CliError(f"{fx.name}: {rep.name} failed: {rep.message}", EXIT_INVALID)


def _emit(args, payload: dict, text: str | None = None) -> None:
    if args.json or text is None:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def cmd_validate(args) -> int:
    fx = _load(args.fixture)
    prep = validate(fx.polytope)
    payload = {"name": fx.name, "polytope": prep.to_dict()}
    code = EXIT_OK
    if prep:
        srep = check_star(fx.polytope, fx.lam)
        payload["star"] = srep.to_dict()
        if not srep:
            code = EXIT_INVALID
    else:
        code = EXIT_INVALID
    payload["passed"] = code == EXIT_OK
    failing = next((r for r in (payload["polytope"], payload.get("star")) if r and not r["passed"]), None)
    text = f"{fx.name}: pass" if code == EXIT_OK else f"{fx.name}: FAIL ({failing['name']}: {failing['message']})"
    _emit(args, payload, text)
    return code


def _analyze_one(fx):
    try:
        return analyze(fx), None
    except ValidationFailure as exc:
        return None, f"{fx.name}: {exc.report.name} failed: {exc}"


def cmd_report(args) -> int:
    fixtures = [_load(s) for s in args.fixtures] if args.fixtures else builtin_fixtures()
    if args.filter:
        fixtures = [fx for fx in fixtures if args.filter in fx.name]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_analyze_one, fixtures))
    else:
        results = [_analyze_one(fx) for fx in fixtures]
    code = EXIT_OK
    for report, error in results:
        if error:
            print(error, file=sys.stderr)
            code = max(code, EXIT_INVALID)
            continue
        print(report_json(report))
        if not report_passed(report):
            code = EXIT_THEOREM
    return code


def cmd_orientable(args) -> int:
    fx = _load(args.fixture)
    _valid(fx)
    G = orientability_functional(fx.lam)
    payload = {"name": fx.name, "orientable": G is not None, "xi": list(G.xi.bits) if G else None}
    _emit(args, payload, f"{fx.name}: {'orientable, xi = ' + str(G.xi) if G else 'not orientable'}")
    return EXIT_OK


def cmd_subtorus(args) -> int:
    fx = _load(args.fixture)
    _valid(fx)
    P, lam = fx.polytope, fx.lam
    G = orientability_functional(lam)
    if G is None:
        _emit(args, {"name": fx.name, "exists": False}, f"{fx.name}: no 2-subtorus in general position")
        return EXIT_OK
    vertex = args.vertex
    cf = canonical_form_at_vertex(P, lam, vertex, G)
    payload = {
        "name": fx.name,
        "exists": True,
        "xi": list(G.xi.bits),
        "basis": [list(v.bits) for v in G.basis],
        "unique": xi_is_unique(lam),
        "general_position": is_general_position(P, lam, G),
        "general_position_direct": direct_general_position(P, lam, G),
        "canonical_form": {
            "vertex": vertex,
            "facets": list(cf.facets),
            "coords": [list(v.bits) for v in cf.subgroup_coords],
            "sum_zero": cf.certified,
        },
    }
    ok = payload["unique"] and payload["general_position"] and payload["general_position_direct"] and cf.certified
    _emit(args, payload, f"{fx.name}: G = Ker({G.xi}), basis {[str(v) for v in G.basis]}, unique={payload['unique']}")
    return EXIT_OK if ok else EXIT_THEOREM


def cmd_homology(args) -> int:
    fx = _load(args.fixture)
    _valid(fx)
    S = build(fx.polytope, fx.lam)
    payload = {
        "name": fx.name,
        "betti_X": list(S.betti),
        "h_vector": list(h_vector(fx.polytope)),
        "euler": euler_characteristic(S.complex),
        "cells": list(S.complex.cell_counts),
    }
    if args.dump:
        payload["complex"] = S.complex.to_dict()
    _emit(args, payload, None if args.dump else f"{fx.name}: betti {payload['betti_X']}, h {payload['h_vector']}")
    return EXIT_OK if payload["betti_X"] == payload["h_vector"] else EXIT_THEOREM


def cmd_quotient(args) -> int:
    fx = _load(args.fixture)
    _valid(fx)
    G = orientability_functional(fx.lam)
    if G is None:
        print(f"{fx.name}: not orientable; no 2-subtorus in general position", file=sys.stderr)
        return EXIT_INVALID
    Q = orbit_space(build(fx.polytope, fx.lam), G)
    rep = filtration_checks(Q, fx.polytope)
    payload = {
        "name": fx.name,
        "betti_Q": list(betti_mod2(Q.complex)),
        "cells": list(Q.complex.cell_counts),
        "filtration": rep.to_dict(),
    }
    if args.dump:
        payload["complex"] = Q.complex.to_dict()
    _emit(args, payload, None if args.dump else f"{fx.name}: betti(X/G) {payload['betti_Q']}, filtration {'ok' if rep else 'FAIL'}")
    n = fx.polytope.dim
    sphere = payload["betti_Q"] == [1] + [0] * (n - 1) + [1]
    return EXIT_OK if sphere and rep else EXIT_THEOREM


def cmd_doubling(args) -> int:
    fx = _load(args.fixture)
    _valid(fx)
    D = doubling_model(fx.polytope)
    payload = {"name": fx.name, "betti": list(betti_mod2(D)), "cells": list(D.cell_counts)}
    G = orientability_functional(fx.lam)
    code = EXIT_OK
    if G is not None:
        ok, _ = doubling_isomorphism(orbit_space(build(fx.polytope, fx.lam), G), fx.polytope)
        payload["isomorphic_to_orbit_space"] = ok
        code = EXIT_OK if ok else EXIT_THEOREM
    _emit(args, payload, f"{fx.name}: double of P has betti {payload['betti']}")
    return code


def _zero_set(text: str, n: int) -> list[int]:
    if not text:
        return []
    out = []
    for part in text.split(","):
        i = int(part)
        if not 1 <= i <= n:
            raise CliError(f"--zero-set: coordinate {i} out of range 1..{n}", EXIT_ENV)
        out.append(i - 1)
    return out


def cmd_standard_action(args) -> int:
    n = args.n
    if n < 1:
        raise CliError("--n must be >= 1", EXIT_ENV)
    G = standard_G(n)
    H = stabilizer(G, _zero_set(args.zero_set, n)) if args.zero_set is not None else G
    payload = {"order": H.order, "elements": ["".join(map(str, v.bits)) for v in H.elements()]}
    if args.check_rotations:
        payload["rotation_generated"] = is_generated_by_rotations(H)
    if args.sphere_quotient:
        payload["betti"] = list(quotient_sphere_homology(n, H))
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def cmd_selftest(args) -> int:
    fixtures = load_fixture_dir(args.fixtures) if args.fixtures else None
    results = run_criteria(fixtures, args.filter)
    if args.json:
        print(json.dumps([r.__dict__ for r in results], sort_keys=True))
    else:
        print(format_table(results))
    if not results:
        print(f"no criterion matches filter {args.filter!r}", file=sys.stderr)
        return EXIT_ENV
    return EXIT_OK if all(r.passed for r in results) else EXIT_THEOREM


def cmd_export_fixtures(args) -> int:
    written = export_fixtures(args.directory)
    for p in written:
        log.info("wrote %s", p)
    print(json.dumps([str(p) for p in written]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--filter", default=argparse.SUPPRESS, metavar="SUBSTRING", help="restrict fixtures or criteria by name")

    parser = argparse.ArgumentParser(prog="smallcovers", description="Small covers and their complexity-one orbit spaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true")
    parser.add_argument("--verbose", "-v", action="store_true")
    parser.add_argument("--filter", metavar="SUBSTRING")
    sub = parser.add_subparsers(dest="command", required=True)

    fixture_help = "fixture JSON file, or builtin:NAME"

    p = sub.add_parser("validate", parents=[common], help="check the polytope and the star condition")
    p.add_argument("fixture", help=fixture_help)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", parents=[common], help="full JSON report per fixture (all bundled if none given)")
    p.add_argument("fixtures", nargs="*", help=fixture_help)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_report)

    for name, func, helptext in (
        ("orientable", cmd_orientable, "orientability functional xi"),
        ("homology", cmd_homology, "mod-2 Betti numbers of X(P, lambda)"),
        ("quotient", cmd_quotient, "orbit space X/G and its filtration"),
        ("doubling", cmd_doubling, "doubling model of P"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("fixture", help=fixture_help)
        if name in ("homology", "quotient"):
            p.add_argument("--dump", action="store_true", help="include the cell complex")
        p.set_defaults(func=func)

    p = sub.add_parser("subtorus", parents=[common], help="the 2-subtorus in general position")
    p.add_argument("fixture", help=fixture_help)
    p.add_argument("--vertex", type=int, default=0, help="vertex for the canonical form")
    p.set_defaults(func=cmd_subtorus)

    p = sub.add_parser("standard-action", parents=[common], help="standard complexity-one sign action on R^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--zero-set", help="comma-separated 1-based zero coordinates (stabilizer of such a point)")
    p.add_argument("--check-rotations", action="store_true")
    p.add_argument("--sphere-quotient", action="store_true")
    p.set_defaults(func=cmd_standard_action)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    p.add_argument("--fixtures", metavar="DIR", help="load fixtures from DIR instead of the bundled set")
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("export-fixtures", parents=[common], help="write bundled fixtures as JSON files")
    p.add_argument("directory")
    p.set_defaults(func=cmd_export_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
