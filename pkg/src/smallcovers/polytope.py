"""Simple polytopes given by vertex-facet incidence.

No coordinates are involved anywhere: a polytope is its dimension, its number
of facets, and for every vertex the set of facets through it.  Faces are
intersections of facets, identified by their vertex sets.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

from .report import Report

__all__ = [
    "SimplePolytope",
    "Face",
    "PolytopeSchemaError",
    "validate",
    "enumerate_faces",
    "f_vector",
    "h_vector",
    "simplex",
    "cube",
    "polygon",
    "segment",
    "product",
    "isomorphic",
]


class PolytopeSchemaError(ValueError):
    """Malformed polytope input (JSON shape, index ranges)."""


@dataclass(frozen=True)
class Face:
    facet_set: frozenset[int]
    vertex_set: frozenset[int]
    dim: int

    @property
    def key(self) -> tuple[int, ...]:
        """Sorted facet indices; ``()`` is the whole polytope."""
        return tuple(sorted(self.facet_set))

    @property
    def codim(self) -> int:
        return len(self.facet_set)


@dataclass(frozen=True, eq=False)
class SimplePolytope:
    dim: int
    n_facets: int
    vertices: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(frozenset(v) for v in self.vertices))

    def __eq__(self, other):
        if not isinstance(other, SimplePolytope):
            return NotImplemented
        return (self.dim, self.n_facets, self.vertices) == (other.dim, other.n_facets, other.vertices)

    def __hash__(self):
        return hash((self.dim, self.n_facets, self.vertices))

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    def facet_vertices(self, j: int) -> frozenset[int]:
        return frozenset(i for i, fs in enumerate(self.vertices) if j in fs)

    def vertices_of(self, facets: Iterable[int]) -> frozenset[int]:
        """Vertex set of the intersection of the given facets."""
        facets = frozenset(facets)
        return frozenset(i for i, fs in enumerate(self.vertices) if facets <= fs)

    def facets_containing(self, vertex_set: Iterable[int]) -> frozenset[int]:
        vs = list(vertex_set)
        if not vs:
            return frozenset(range(self.n_facets))
        return frozenset.intersection(*(self.vertices[i] for i in vs))

    def face(self, facets: Iterable[int]) -> Face:
        vs = self.vertices_of(facets)
        if not vs:
            raise ValueError(f"facets {sorted(facets)} do not meet")
        fs = self.facets_containing(vs)
        return Face(fs, vs, self.dim - len(fs))

    @cached_property
    def faces(self) -> list[list[Face]]:
        return enumerate_faces(self)

    @cached_property
    def face_by_key(self) -> dict[tuple[int, ...], Face]:
        return {f.key: f for level in self.faces for f in level}

    def vertex_face(self, i: int) -> Face:
        return Face(self.vertices[i], frozenset([i]), 0)

    # -- JSON -------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "facets": self.n_facets,
            "vertices": [sorted(v) for v in self.vertices],
        }

    @classmethod
    def from_dict(cls, data) -> "SimplePolytope":
        if not isinstance(data, dict):
            raise PolytopeSchemaError("polytope: expected a JSON object")
        for key in ("dim", "facets", "vertices"):
            if key not in data:
                raise PolytopeSchemaError(f"polytope: missing key {key!r}")
        dim, m, verts = data["dim"], data["facets"], data["vertices"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
            raise PolytopeSchemaError(f"polytope.dim: expected a non-negative integer, got {dim!r}")
        if not isinstance(m, int) or isinstance(m, bool) or m < 0:
            raise PolytopeSchemaError(f"polytope.facets: expected a non-negative integer, got {m!r}")
        if not isinstance(verts, list):
            raise PolytopeSchemaError("polytope.vertices: expected a list of facet-index lists")
        rows = []
        for i, v in enumerate(verts):
            if not isinstance(v, list):
                raise PolytopeSchemaError(f"vertices[{i}]: expected a list of facet indices")
            for k, j in enumerate(v):
                if not isinstance(j, int) or isinstance(j, bool):
                    raise PolytopeSchemaError(f"vertices[{i}][{k}]: expected an integer, got {j!r}")
                if not 0 <= j < m:
                    raise PolytopeSchemaError(f"vertices[{i}][{k}]: facet index {j} out of range 0..{m - 1}")
            if len(set(v)) != len(v):
                raise PolytopeSchemaError(f"vertices[{i}]: repeated facet index")
            rows.append(frozenset(v))
        return cls(dim, m, tuple(rows))

    @classmethod
    def from_json(cls, text: str) -> "SimplePolytope":
        return cls.from_dict(json.loads(text))


def validate(P: SimplePolytope) -> Report:
    """Check simplicity and gradedness of the facet-intersection poset.

    Polytopality of arbitrary incidence data is not decided; the bundled
    generators are genuine polytopes.
    """
    rep = Report("polytope")
    rep.notes.append("incidence data is checked for simplicity and gradedness only, not realizability")
    n, m = P.dim, P.n_facets
    if n >= 1 and m < n + 1:
        return rep.fail(f"a {n}-polytope needs at least {n + 1} facets, got {m}")
    if not P.vertices:
        return rep.fail("polytope has no vertices")
    for i, fs in enumerate(P.vertices):
        bad = [j for j in fs if not 0 <= j < m]
        if bad:
            return rep.fail(f"vertex {i}: facet index {bad[0]} out of range", vertex=i)
        if len(fs) != n:
            return rep.fail(f"not simple: vertex {i} lies in {len(fs)} facets, expected {n}", vertex=i)
    seen: dict[frozenset[int], int] = {}
    for i, fs in enumerate(P.vertices):
        if fs in seen:
            return rep.fail(f"vertices {seen[fs]} and {i} have the same facet set", vertex=i)
        seen[fs] = i
    for j in range(m):
        if not P.facet_vertices(j):
            return rep.fail(f"facet {j} contains no vertex", facet=j)
    if n == 0 and len(P.vertices) != 1:
        return rep.fail("a 0-polytope has exactly one vertex")

    faces = _faces_by_vertex_subsets(P)
    for fs, vs in faces.items():
        if len(fs) > n:
            return rep.fail(f"face on vertices {sorted(vs)} lies in {len(fs)} > {n} facets")
    if frozenset() not in faces:
        j = min(P.facets_containing(range(len(P.vertices))))
        return rep.fail(f"facet {j} contains every vertex; no unique maximal face", facet=j)
    # graded: dropping one facet from a face's facet set must give a face one dimension up
    for fs, vs in faces.items():
        for j in fs:
            up = fs - {j}
            if up not in faces:
                return rep.fail(
                    f"not graded: face {sorted(fs)} has no cover obtained by dropping facet {j}",
                    facet=j,
                )
        if n - len(fs) == 1 and len(vs) != 2:
            return rep.fail(f"edge {sorted(fs)} has {len(vs)} vertices, expected 2")
    rep.details.update(vertices=len(P.vertices), facets=m, faces=len(faces))
    return rep


def _faces_by_vertex_subsets(P: SimplePolytope) -> dict[frozenset[int], frozenset[int]]:
    # every face of a simple polytope is cut out by a subset of some vertex's facets
    out: dict[frozenset[int], frozenset[int]] = {}
    by_vertices: dict[frozenset[int], frozenset[int]] = {}
    for fs in P.vertices:
        items = sorted(fs)
        for r in range(len(items) + 1):
            for sub in itertools.combinations(items, r):
                vs = P.vertices_of(sub)
                if vs in by_vertices:
                    continue
                full = P.facets_containing(vs)
                by_vertices[vs] = full
                out[full] = vs
    return out


def enumerate_faces(P: SimplePolytope) -> list[list[Face]]:
    """All nonempty faces, graded by dimension.

    ``faces[d]`` lists the d-faces sorted by their vertex sets; ``faces[n]``
    holds the polytope itself.
    """
    by_dim: list[list[Face]] = [[] for _ in range(P.dim + 1)]
    for fs, vs in _faces_by_vertex_subsets(P).items():
        d = P.dim - len(fs)
        by_dim[d].append(Face(fs, vs, d))
    for level in by_dim:
        level.sort(key=lambda f: (sorted(f.vertex_set), sorted(f.facet_set)))
    return by_dim


def f_vector(P: SimplePolytope) -> tuple[int, ...]:
    """(f_0, ..., f_{n-1}) with f_i the number of i-dimensional faces."""
    return tuple(len(level) for level in P.faces[: P.dim])


def h_vector(P: SimplePolytope) -> tuple[int, ...]:
    """h-vector of a simple polytope.

    Defined by sum h_i t^(n-i) = sum_i g_{i-1} (t-1)^(n-i), where g_{i-1} counts
    faces of codimension i (g_{-1} = 1).
    """
    n = P.dim
    f = f_vector(P)
    # g[i] = number of faces of codimension i, i = 0..n
    g = [1] + [f[n - i] for i in range(1, n + 1)]
    h = []
    for k in range(n + 1):
        h.append(sum((-1) ** (k - i) * comb(n - i, k - i) * g[i] for i in range(k + 1)))
    return tuple(h)


# -- generators ------------------------------------------------------------


def simplex(n: int) -> SimplePolytope:
    """The n-simplex; vertex i avoids facet i."""
    if n < 1:
        raise ValueError(f"simplex dimension must be >= 1, got {n}")
    return SimplePolytope(n, n + 1, tuple(frozenset(j for j in range(n + 1) if j != i) for i in range(n + 1)))


def segment() -> SimplePolytope:
    return simplex(1)


def cube(n: int) -> SimplePolytope:
    """The n-cube; facets 2i and 2i+1 are the opposite pair x_i = 0, x_i = 1."""
    if n < 1:
        raise ValueError(f"cube dimension must be >= 1, got {n}")
    verts = []
    for bits in itertools.product((0, 1), repeat=n):
        verts.append(frozenset(2 * i + b for i, b in enumerate(bits)))
    return SimplePolytope(n, 2 * n, tuple(verts))


def polygon(m: int) -> SimplePolytope:
    """The m-gon; vertex i is the meeting point of edges i and i+1 (mod m)."""
    if m < 3:
        raise ValueError(f"a polygon needs at least 3 edges, got {m}")
    return SimplePolytope(2, m, tuple(frozenset({i, (i + 1) % m}) for i in range(m)))


def product(P: SimplePolytope, Q: SimplePolytope) -> SimplePolytope:
    """Cartesian product; facets of P come first, then facets of Q shifted by P.n_facets."""
    shift = P.n_facets
    verts = []
    for a in P.vertices:
        for b in Q.vertices:
            verts.append(a | frozenset(j + shift for j in b))
    return SimplePolytope(P.dim + Q.dim, P.n_facets + Q.n_facets, tuple(verts))


def isomorphic(P: SimplePolytope, Q: SimplePolytope) -> bool:
    """Whether some facet relabelling carries P's vertex sets onto Q's."""
    if (P.dim, P.n_facets, len(P.vertices)) != (Q.dim, Q.n_facets, len(Q.vertices)):
        return False
    target = set(Q.vertices)
    p_deg = [len(P.facet_vertices(j)) for j in range(P.n_facets)]
    q_deg = [len(Q.facet_vertices(j)) for j in range(Q.n_facets)]
    if sorted(p_deg) != sorted(q_deg):
        return False
    m = P.n_facets
    image: list[int] = []
    used: set[int] = set()

    def extend() -> bool:
        j = len(image)
        if j == m:
            return {frozenset(image[k] for k in v) for v in P.vertices} == target
        for k in range(m):
            if k in used or q_deg[k] != p_deg[j]:
                continue
            image.append(k)
            used.add(k)
            if _partial_ok(P, target, image) and extend():
                return True
            image.pop()
            used.discard(k)
        return False

    return extend()


def _partial_ok(P: SimplePolytope, target: set, image: Sequence[int]) -> bool:
    # vertices whose facets are all mapped must land on vertices of Q
    mapped = len(image)
    for v in P.vertices:
        if all(j < mapped for j in v):
            if frozenset(image[j] for j in v) not in target:
                return False
    return True
