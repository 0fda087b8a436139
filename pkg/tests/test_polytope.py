import json

import pytest

from smallcovers.polytope import (
    PolytopeSchemaError,
    SimplePolytope,
    cube,
    enumerate_faces,
    f_vector,
    h_vector,
    isomorphic,
    polygon,
    product,
    segment,
    simplex,
    validate,
)

from oracles import faces_by_facet_subsets, h_by_polynomial

GENERATED = [simplex(1), simplex(2), simplex(3), simplex(4), cube(2), cube(3), cube(4), polygon(5),
             polygon(6), polygon(8), product(polygon(3), segment()), product(polygon(5), segment())]


def codim_counts(P):
    return {P.dim - d: len(level) for d, level in enumerate(P.faces)}


def test_simplex2_valid():
    assert validate(simplex(2))


def test_triangle_with_vertex_in_three_facets_fails():
    P = SimplePolytope(2, 3, (frozenset({0, 1, 2}), frozenset({0, 2}), frozenset({1, 2})))
    rep = validate(P)
    assert not rep
    assert "not simple" in rep.message and rep.details["vertex"] == 0


def test_cube3_valid_counts():
    P = cube(3)
    assert validate(P)
    assert P.vertex_count == 8 and P.n_facets == 6


@pytest.mark.parametrize("P", GENERATED, ids=lambda P: f"{P.dim}d-{P.n_facets}f")
def test_faces_match_bruteforce(P):
    brute = faces_by_facet_subsets(P)
    faces = [F for level in enumerate_faces(P) for F in level]
    assert {F.vertex_set for F in faces} == set(brute)
    for F in faces:
        assert F.facet_set == frozenset(brute[F.vertex_set])
        assert F.dim == P.dim - len(F.facet_set)


def test_face_counts_examples():
    assert [len(level) for level in simplex(2).faces] == [3, 3, 1]
    assert [len(level) for level in cube(3).faces] == [8, 12, 6, 1]
    assert [len(level) for level in polygon(6).faces] == [6, 6, 1]


@pytest.mark.parametrize("P", GENERATED, ids=lambda P: f"{P.dim}d-{P.n_facets}f")
def test_h_vector_matches_polynomial_expansion(P):
    h = h_vector(P)
    assert h == h_by_polynomial(P.dim, codim_counts(P))
    assert sum(h) == P.vertex_count
    assert h == h[::-1]


def test_h_vector_examples():
    assert f_vector(cube(3)) == (8, 12, 6)
    assert h_vector(cube(3)) == (1, 3, 3, 1)
    for n in range(1, 6):
        assert h_vector(simplex(n)) == (1,) * (n + 1)
    for m in range(3, 9):
        assert f_vector(polygon(m)) == (m, m)
        assert h_vector(polygon(m)) == (1, m - 2, 1)


def test_generators():
    assert isomorphic(product(segment(), segment()), cube(2))
    assert isomorphic(polygon(4), cube(2))
    assert not isomorphic(polygon(5), cube(2))
    prism = product(polygon(3), segment())
    assert prism.vertex_count == 6 and prism.dim == 3 and prism.n_facets == 5
    for P in GENERATED:
        assert validate(P)


def test_generator_ranges():
    with pytest.raises(ValueError):
        polygon(2)
    with pytest.raises(ValueError):
        cube(0)
    with pytest.raises(ValueError):
        simplex(0)


def test_each_vertex_in_n_facets_and_faces_have_enough_vertices():
    for P in GENERATED:
        for level in P.faces[1:]:
            for F in level:
                assert len(F.vertex_set) >= F.dim + 1
        for i in range(P.vertex_count):
            containing = [F for F in P.faces[P.dim - 1] if i in F.vertex_set]
            assert len(containing) == P.dim


def test_validation_failures():
    # duplicate vertex sets
    P = SimplePolytope(2, 3, (frozenset({0, 1}), frozenset({0, 1}), frozenset({1, 2})))
    assert "same facet set" in validate(P).message
    # facet 3 has no vertex
    P = SimplePolytope(2, 4, simplex(2).vertices)
    assert "facet 3" in validate(P).message
    # too few facets
    assert not validate(SimplePolytope(2, 2, (frozenset({0, 1}),)))


def test_json_roundtrip_and_errors():
    P = cube(3)
    assert SimplePolytope.from_json(json.dumps(P.to_dict())) == P
    with pytest.raises(PolytopeSchemaError, match=r"vertices\[1\]\[0\]"):
        SimplePolytope.from_dict({"dim": 2, "facets": 3, "vertices": [[0, 1], [7, 2]]})
    with pytest.raises(PolytopeSchemaError, match="missing key 'dim'"):
        SimplePolytope.from_dict({"facets": 3, "vertices": []})
    with pytest.raises(PolytopeSchemaError, match=r"vertices\[0\]\[1\]"):
        SimplePolytope.from_dict({"dim": 2, "facets": 3, "vertices": [[0, "x"]]})
