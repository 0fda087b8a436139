import itertools
import random

import pytest

from smallcovers.charfun import (
    CharacteristicFunction,
    NotInGeneralPosition,
    Subtorus,
    canonical_form_at_vertex,
    check_star,
    direct_general_position,
    is_general_position,
    orientability_functional,
    orientation_functionals_bruteforce,
    stabilizer_not_in_subtorus,
    tangent_weights,
)
from smallcovers.fixtures import builtin_fixtures, random_valid_fixture, rp_fixture, torus_fixture
from smallcovers.gf2 import GF2Matrix, GF2Vector, rank_of_rows
from smallcovers.polytope import cube, polygon, segment, simplex

from oracles import functionals_by_enumeration

E1, E2, E12 = 0b01, 0b10, 0b11


def lam(rows, n):
    return CharacteristicFunction.from_rows(rows, n)


def test_star_rp2_passes():
    assert check_star(simplex(2), lam([E1, E2, E12], 2))


def test_star_repeated_vector_fails_at_f1_f3():
    rep = check_star(simplex(2), lam([E1, E2, E1], 2))
    assert not rep
    # vertex 1 avoids facet 1, so it is F_0 ∩ F_2 (F1 ∩ F3 in 1-based naming)
    assert rep.details["facets"] == [0, 2]


def test_star_torus_passes():
    assert check_star(cube(3), torus_fixture(3).lam)


def test_star_shape_mismatch():
    with pytest.raises(ValueError):
        check_star(simplex(2), lam([E1, E2], 2))


def test_tangent_weights_cube_self_dual():
    fx = torus_fixture(3)
    P = fx.polytope
    v = next(i for i, fs in enumerate(P.vertices) if fs == {0, 2, 4})
    tw = tangent_weights(P, fx.lam, v)
    assert [str(w) for w in tw.weights] == ["100", "010", "001"]


def test_tangent_weights_triangle_vertex():
    # vertex 2 of the triangle lies on facets 0, 1 with rows e1, e1+e2
    P = simplex(2)
    L = lam([E1, E12, E2], 2)
    tw = tangent_weights(P, L, 2)
    assert tw.facets == (0, 1)
    assert [str(w) for w in tw.weights] == ["11", "01"]


def test_tangent_weights_out_of_range():
    with pytest.raises(IndexError):
        tangent_weights(simplex(2), lam([E1, E2, E12], 2), 5)


@pytest.mark.parametrize("fx", builtin_fixtures(), ids=lambda fx: fx.name)
def test_weights_pair_to_identity(fx):
    P = fx.polytope
    for v in range(P.vertex_count):
        tw = tangent_weights(P, fx.lam, v)
        rows = [fx.lam.matrix.rows[j] for j in tw.facets]
        pairing = [[w.dot(GF2Vector(r, P.dim)) for r in rows] for w in tw.weights]
        assert pairing == GF2Matrix.identity(P.dim).to_lists()


def test_orientability_examples():
    assert orientability_functional(rp_fixture(2).lam) is None
    G = orientability_functional(rp_fixture(3).lam)
    assert functionals_by_enumeration(rp_fixture(3).lam.matrix.rows, 3) == [0b111]
    assert G.xi.bits == (1, 1, 1)
    for n in range(1, 5):
        fx = torus_fixture(n)
        assert functionals_by_enumeration(fx.lam.matrix.rows, n) == [(1 << n) - 1]
        assert orientability_functional(fx.lam).xi == GF2Vector.ones(n)


@pytest.mark.parametrize("fx", builtin_fixtures(), ids=lambda fx: fx.name)
def test_uniqueness_exhaustive(fx):
    brute = functionals_by_enumeration(fx.lam.matrix.rows, fx.lam.n)
    assert [v.value for v in orientation_functionals_bruteforce(fx.lam)] == brute
    assert len(brute) == (1 if fx.expected["orientable"] else 0)


@pytest.mark.parametrize("n", range(1, 7))
def test_rp_orientable_iff_odd(n):
    assert (orientability_functional(rp_fixture(n).lam) is not None) == (n % 2 == 1)


def test_general_position_square():
    P, L = cube(2), torus_fixture(2).lam
    good = Subtorus.from_functional(GF2Vector(0b11, 2))
    bad = Subtorus.from_functional(GF2Vector(0b01, 2))
    assert is_general_position(P, L, good) and direct_general_position(P, L, good)
    assert not is_general_position(P, L, bad) and not direct_general_position(P, L, bad)


def test_rp2_no_index_two_subgroup_in_general_position():
    fx = rp_fixture(2)
    for xi in range(1, 4):
        G = Subtorus.from_functional(GF2Vector(xi, 2))
        assert not direct_general_position(fx.polytope, fx.lam, G)
        assert not is_general_position(fx.polytope, fx.lam, G)


def test_segment_vacuous_general_position():
    L = lam([1, 1], 1)
    G = Subtorus.from_functional(GF2Vector(1, 1))
    assert G.basis == ()
    assert direct_general_position(segment(), L, G)
    assert is_general_position(segment(), L, G)


def _all_subtori(n):
    return [Subtorus.from_functional(GF2Vector(x, n)) for x in range(1, 1 << n)]


@pytest.mark.parametrize("fx", builtin_fixtures(), ids=lambda fx: fx.name)
def test_general_position_agreement_all_subtori(fx):
    for G in _all_subtori(fx.lam.n):
        assert is_general_position(fx.polytope, fx.lam, G) == direct_general_position(fx.polytope, fx.lam, G)


def test_general_position_agreement_random():
    rng = random.Random(7)
    checked = 0
    for _ in range(60):
        fx = random_valid_fixture(rng, max_facets=10)
        for G in _all_subtori(fx.lam.n):
            assert is_general_position(fx.polytope, fx.lam, G) == direct_general_position(fx.polytope, fx.lam, G)
            checked += 1
    assert checked > 60


def test_canonical_form_square():
    fx = torus_fixture(2)
    G = orientability_functional(fx.lam)
    v = next(i for i, fs in enumerate(fx.polytope.vertices) if fs == {0, 2})
    cf = canonical_form_at_vertex(fx.polytope, fx.lam, v, G)
    assert cf.certified
    assert cf.change_of_basis == GF2Matrix.identity(2)
    assert [str(c) for c in cf.subgroup_coords] == ["11"]


def test_canonical_form_rp3_every_vertex():
    fx = rp_fixture(3)
    G = orientability_functional(fx.lam)
    sum_zero = {x for x in range(8) if bin(x).count("1") % 2 == 0}
    for v in range(4):
        cf = canonical_form_at_vertex(fx.polytope, fx.lam, v, G)
        span = {0}
        for c in cf.subgroup_coords:
            span |= {s ^ c.value for s in span}
        assert cf.certified and span == sum_zero and len(span) == 4


def test_canonical_form_rejects_non_general_position():
    fx = torus_fixture(2)
    with pytest.raises(NotInGeneralPosition):
        canonical_form_at_vertex(fx.polytope, fx.lam, 0, Subtorus.from_functional(GF2Vector(0b01, 2)))


@pytest.mark.parametrize("fx", [f for f in builtin_fixtures() if f.expected["orientable"]], ids=lambda fx: fx.name)
def test_stabilizers_escape_general_position_subtorus(fx):
    G = orientability_functional(fx.lam)
    assert stabilizer_not_in_subtorus(fx.polytope, fx.lam, G)
    # and directly: every proper face has a characteristic vector outside G
    for level in fx.polytope.faces[: fx.polytope.dim]:
        for F in level:
            assert any(G.xi.dot(fx.lam.vector(j)) for j in F.facet_set)


def test_subtorus_invariants():
    G = Subtorus.from_functional(GF2Vector(0b101, 3))
    assert len(G.basis) == 2
    assert all(G.xi.dot(v) == 0 for v in G.basis)
    assert rank_of_rows(v.value for v in G.basis) == 2
    assert len(G.elements()) == 4
    with pytest.raises(ValueError):
        Subtorus(GF2Vector(0, 3), ())
