"""Per-fixture pipeline: validate, build X(P, lambda), find G, check X/G."""
from __future__ import annotations

import json

from .chain import betti_mod2, euler_characteristic
from .charfun import (
    check_star,
    direct_general_position,
    is_general_position,
    orientability_functional,
    stabilizer_not_in_subtorus,
    xi_is_unique,
)
from .fixtures import FixtureSpec
from .polytope import h_vector, validate
from .smallcover import (
    build,
    doubling_isomorphism,
    euler_by_orbit_count,
    filtration_checks,
    formality_check,
    orbit_space,
)

__all__ = ["analyze", "report_json", "report_passed", "ValidationFailure"]


class ValidationFailure(ValueError):
    def __init__(self, report):
        super().__init__(report.message)
        self.report = report


def analyze(fx: FixtureSpec) -> dict:
    """Full report for one fixture; raises ValidationFailure on invalid input."""
    P, lam = fx.polytope, fx.lam
    prep = validate(P)
    if not prep:
        raise ValidationFailure(prep)
    srep = check_star(P, lam)
    if not srep:
        raise ValidationFailure(srep)

    S = build(P, lam)
    betti_X = list(S.betti)
    h = list(h_vector(P))
    chi = euler_characteristic(S.complex)
    checks = {
        "dj_betti_equals_h": betti_X == h,
        "euler_matches_orbit_count": chi == euler_by_orbit_count(P) == sum((-1) ** i * b for i, b in enumerate(betti_X)),
        "total_betti_equals_vertices": sum(betti_X) == P.vertex_count,
    }
    G = orientability_functional(lam)
    out = {
        "name": fx.name,
        "orientable": G is not None,
        "xi": list(G.xi.bits) if G is not None else None,
        "unique": xi_is_unique(lam),
        "betti_X": betti_X,
        "h_vector": h,
    }
    if G is not None:
        checks["general_position"] = is_general_position(P, lam, G)
        checks["general_position_direct"] = direct_general_position(P, lam, G)
        checks["stabilizers_not_in_G"] = bool(stabilizer_not_in_subtorus(P, lam, G))
        out["formality_pass"] = bool(formality_check(S, G))
        Q = orbit_space(S, G)
        betti_Q = list(betti_mod2(Q.complex))
        out["betti_Q"] = betti_Q
        checks["Q_is_sphere"] = betti_Q == [1] + [0] * (P.dim - 1) + [1]
        checks["Q_euler"] = euler_characteristic(Q.complex) == 1 + (-1) ** P.dim
        out["doubling_isomorphic"], _ = doubling_isomorphism(Q, P)
        out["filtration_pass"] = bool(filtration_checks(Q, P))
    exp = fx.expected or {}
    for key in ("orientable", "betti_X", "betti_Q"):
        if key in exp:
            checks[f"expected_{key}"] = exp[key] == out.get(key)
    out["checks"] = checks
    return out


def report_passed(report: dict) -> bool:
    flags = list(report["checks"].values())
    for key in ("formality_pass", "doubling_isomorphic", "filtration_pass", "unique"):
        if key in report:
            flags.append(report[key])
    return all(flags)


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":"))
