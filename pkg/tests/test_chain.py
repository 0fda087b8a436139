import json
import random

import pytest

from smallcovers.chain import (
    CellComplex,
    ComplexError,
    RegularityError,
    Subcomplex,
    betti_mod2,
    euler_characteristic,
    quotient_by_action,
    relative_betti_mod2,
)
from smallcovers.charfun import orientability_functional
from smallcovers.fixtures import builtin_fixtures, random_valid_fixture, rp_fixture, torus_fixture
from smallcovers.smallcover import build, orbit_space
from smallcovers.standard_action import cross_polytope_sphere

from oracles import dense_betti


def disc():
    # a 2-cell bounded by a 3-edge circle
    return CellComplex(
        {0: ["a", "b", "c"], 1: ["ab", "bc", "ca"], 2: ["D"]},
        {"ab": ["a", "b"], "bc": ["b", "c"], "ca": ["c", "a"], "D": ["ab", "bc", "ca"]},
    )


def test_point_and_loop():
    assert betti_mod2(CellComplex({0: ["p"]}, {})) == (1,)
    loop = CellComplex({0: ["v"], 1: ["e"]}, {"e": ["v", "v"]})
    assert betti_mod2(loop) == (1, 1)


def test_rp2_complex():
    S = build(rp_fixture(2).polytope, rp_fixture(2).lam)
    assert S.complex.cell_counts == (3, 6, 4)
    assert betti_mod2(S.complex) == (1, 1, 1)
    assert euler_characteristic(S.complex) == 3 - 6 + 4 == 1


def test_torus_euler():
    for n in (1, 2, 3):
        fx = torus_fixture(n)
        assert euler_characteristic(build(fx.polytope, fx.lam).complex) == 0


def test_boundary_squared_checked():
    with pytest.raises(ComplexError, match="boundary of boundary"):
        CellComplex({0: ["a", "b"], 1: ["e"], 2: ["D"]}, {"e": ["a", "b"], "D": ["e"]})
    with pytest.raises(ComplexError, match="not a 0-cell"):
        CellComplex({0: ["a"], 1: ["e", "f"]}, {"e": ["f"]})


def test_relative_disc_mod_boundary():
    D = disc()
    A = Subcomplex(D, {"a", "b", "c", "ab", "bc", "ca"})
    assert relative_betti_mod2(D, A) == (0, 0, 1)
    assert relative_betti_mod2(D, Subcomplex(D, frozenset())) == betti_mod2(D)
    with pytest.raises(ComplexError, match="not closed"):
        Subcomplex(D, {"ab"})


def test_relative_torus_quotient_vs_vertices():
    fx = torus_fixture(2)
    Q = orbit_space(build(fx.polytope, fx.lam), orientability_functional(fx.lam))
    rel = relative_betti_mod2(Q.complex, Q.level(0))
    # (S^2, 4 points): H_0 = 0, H_1 = 3, H_2 = 1
    assert rel == (0, 3, 1)
    q0 = Q.level(0).as_complex()
    assert sum((-1) ** i * b for i, b in enumerate(rel)) == euler_characteristic(Q.complex) - euler_characteristic(q0)


def test_quotient_trivial_group():
    fx = torus_fixture(2)
    C = build(fx.polytope, fx.lam).complex
    Q, orbit_of = quotient_by_action(C, [{}])
    assert Q.to_json() == C.to_json()


def test_torus_quotient_cells():
    fx = torus_fixture(2)
    Q = orbit_space(build(fx.polytope, fx.lam), orientability_functional(fx.lam))
    assert Q.complex.cell_counts == (4, 4, 2)
    assert euler_characteristic(Q.complex) == 2


def test_regularity_violation_reported():
    C = CellComplex({0: ["a", "b"], 1: ["e"]}, {"e": ["a", "b"]})
    flip = {"a": "b", "b": "a", "e": "e"}
    with pytest.raises(RegularityError) as exc:
        quotient_by_action(C, [{}, flip])
    assert exc.value.cell == "e"


def test_json_dump_roundtrip():
    fx = torus_fixture(2)
    C = build(fx.polytope, fx.lam).complex
    data = json.loads(C.to_json())
    assert set(data) == {"cells", "boundary"}
    back = CellComplex.from_dict(data)
    assert back.to_json() == C.to_json()


def _all_test_complexes():
    out = [disc(), cross_polytope_sphere(3), cross_polytope_sphere(4)]
    for fx in builtin_fixtures():
        S = build(fx.polytope, fx.lam)
        out.append(S.complex)
        G = orientability_functional(fx.lam)
        if G is not None:
            out.append(orbit_space(S, G).complex)
    rng = random.Random(11)
    for _ in range(20):
        fx = random_valid_fixture(rng, max_facets=8)
        out.append(build(fx.polytope, fx.lam).complex)
    return [C for C in out if len(C) <= 200]


def test_betti_matches_dense_oracle():
    complexes = _all_test_complexes()
    assert len(complexes) > 20
    for C in complexes:
        b = betti_mod2(C)
        assert b == dense_betti(C)
        assert sum((-1) ** d * x for d, x in enumerate(b)) == euler_characteristic(C)


def test_functoriality_on_torus():
    # quotient by G in two steps (first a subgroup, then the residual group)
    fx = torus_fixture(2)
    S = build(fx.polytope, fx.lam)
    G = orientability_functional(fx.lam)
    g = G.elements()
    assert len(g) == 2

    def act(v):
        return {cell: (cell[0], S.stabilizers[cell[0]].reduce(cell[1] ^ v.value)) for cell in S.complex.all_cells()}

    whole, _ = quotient_by_action(S.complex, [act(v) for v in g])
    # trivial subgroup first, then the residual group (all of G)
    step1, orbit1 = quotient_by_action(S.complex, [act(g[0])])
    residual = [{orbit1[c]: orbit1[act(v)[c]] for c in S.complex.all_cells()} for v in g]
    step2, _ = quotient_by_action(step1, residual)
    assert step2.cell_counts == whole.cell_counts
    assert betti_mod2(step2) == betti_mod2(whole)


def test_functoriality_on_t3_nontrivial_subgroup():
    fx = torus_fixture(3)
    S = build(fx.polytope, fx.lam)
    G = orientability_functional(fx.lam)
    elements = G.elements()

    def act(v):
        return {cell: (cell[0], S.stabilizers[cell[0]].reduce(cell[1] ^ v.value)) for cell in S.complex.all_cells()}

    whole, _ = quotient_by_action(S.complex, [act(v) for v in elements])
    sub = [v for v in elements if v.value in (0, elements[1].value)]
    step1, orbit1 = quotient_by_action(S.complex, [act(v) for v in sub])
    residual = [{orbit1[c]: orbit1[act(v)[c]] for c in S.complex.all_cells()} for v in elements]
    step2, _ = quotient_by_action(step1, residual)
    assert step2.cell_counts == whole.cell_counts
    assert betti_mod2(step2) == betti_mod2(whole) == (1, 0, 0, 1)
