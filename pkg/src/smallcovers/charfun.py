"""Characteristic functions and 2-subtori of index two.

A characteristic function assigns a vector of GF(2)^n to every facet.  A
functional xi in the dual space is stored in the same coordinates, so that
``xi(v) = xi.dot(v)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .gf2 import GF2Matrix, GF2Vector, rank_of_rows, rref_rows
from .polytope import SimplePolytope
from .report import Report

__all__ = [
    "CharacteristicFunction",
    "Subtorus",
    "TangentWeights",
    "CanonicalForm",
    "NotInGeneralPosition",
    "check_star",
    "tangent_weights",
    "orientability_functional",
    "orientation_functionals_bruteforce",
    "xi_is_unique",
    "is_general_position",
    "direct_general_position",
    "canonical_form_at_vertex",
    "stabilizer_not_in_subtorus",
]

EXHAUSTIVE_LIMIT = 20


class NotInGeneralPosition(ValueError):
    pass


@dataclass(frozen=True)
class CharacteristicFunction:
    matrix: GF2Matrix

    @classmethod
    def from_rows(cls, rows, n: int | None = None) -> "CharacteristicFunction":
        return cls(GF2Matrix.from_rows(rows, n))

    @property
    def n(self) -> int:
        return self.matrix.ncols

    @property
    def m(self) -> int:
        return self.matrix.nrows

    def vector(self, facet: int) -> GF2Vector:
        return self.matrix.row(facet)

    def rows_for(self, facets) -> list[int]:
        return [self.matrix.rows[j] for j in sorted(facets)]

    def to_lists(self) -> list[list[int]]:
        return self.matrix.to_lists()


@dataclass(frozen=True)
class Subtorus:
    """The index-two subgroup Ker(xi) of GF(2)^n."""

    xi: GF2Vector
    basis: tuple[GF2Vector, ...]

    def __post_init__(self):
        if self.xi.is_zero():
            raise ValueError("xi must be nonzero")
        if any(self.xi.dot(v) for v in self.basis):
            raise ValueError("basis vector outside Ker(xi)")
        if rank_of_rows(v.value for v in self.basis) != self.xi.length - 1:
            raise ValueError("basis does not have rank n-1")

    @classmethod
    def from_functional(cls, xi: GF2Vector) -> "Subtorus":
        kernel = GF2Matrix((xi.value,), xi.length).kernel_basis()
        return cls(xi, tuple(kernel))

    @property
    def n(self) -> int:
        return self.xi.length

    def contains(self, v: GF2Vector) -> bool:
        return self.xi.dot(v) == 0

    def elements(self) -> list[GF2Vector]:
        return [v for v in (GF2Vector(x, self.n) for x in range(1 << self.n)) if self.contains(v)]


@dataclass(frozen=True)
class TangentWeights:
    vertex: int
    facets: tuple[int, ...]
    weights: tuple[GF2Vector, ...]


@dataclass(frozen=True)
class CanonicalForm:
    vertex: int
    facets: tuple[int, ...]
    change_of_basis: GF2Matrix
    subgroup_coords: tuple[GF2Vector, ...]
    certified: bool


def _check_shape(P: SimplePolytope, lam: CharacteristicFunction) -> None:
    if lam.m != P.n_facets or lam.n != P.dim:
        raise ValueError(
            f"characteristic matrix is {lam.m}x{lam.n}, polytope needs {P.n_facets}x{P.dim}"
        )


def check_star(P: SimplePolytope, lam: CharacteristicFunction) -> Report:
    """Independence of the characteristic vectors at every vertex.

    Checking vertices suffices: any face's facet set extends to a vertex's
    facet set, and subsets of independent sets are independent.
    """
    _check_shape(P, lam)
    rep = Report("star-condition")
    rep.notes.append("checked at vertices; independence passes to all faces through them")
    for i, fs in enumerate(P.vertices):
        rows = lam.rows_for(fs)
        if rank_of_rows(rows) != P.dim:
            return rep.fail(
                f"vertex {i} (facets {sorted(fs)}): characteristic vectors are dependent",
                vertex=i,
                facets=sorted(fs),
            )
    return rep


def _vertex_basis(P: SimplePolytope, lam: CharacteristicFunction, vertex: int) -> tuple[tuple[int, ...], GF2Matrix]:
    if not 0 <= vertex < P.vertex_count:
        raise IndexError(f"vertex {vertex} out of range 0..{P.vertex_count - 1}")
    facets = tuple(sorted(P.vertices[vertex]))
    return facets, GF2Matrix(tuple(lam.matrix.rows[j] for j in facets), lam.n)


def tangent_weights(P: SimplePolytope, lam: CharacteristicFunction, vertex: int) -> TangentWeights:
    """Dual basis to the characteristic vectors at a vertex."""
    _check_shape(P, lam)
    facets, A = _vertex_basis(P, lam, vertex)
    # rows of (A^-1)^T pair with rows of A to the identity
    W = A.inverse().transpose()
    return TangentWeights(vertex, facets, tuple(W.row_vectors()))


def orientability_functional(lam: CharacteristicFunction) -> Subtorus | None:
    """Ker(xi) for the xi with xi(lambda_i) = 1 on every facet, if one exists."""
    sol = lam.matrix.solve_affine(GF2Vector.ones(lam.m))
    if sol is None:
        return None
    xi, _ = sol
    if xi.is_zero():
        return None
    return Subtorus.from_functional(xi)


def orientation_functionals_bruteforce(lam: CharacteristicFunction) -> list[GF2Vector]:
    """Every nonzero xi with xi(lambda_i) = 1 for all i, by enumeration."""
    n = lam.n
    if n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"exhaustive enumeration limited to n <= {EXHAUSTIVE_LIMIT}")
    xs = np.arange(1, 1 << n, dtype=np.int64)
    bits = ((xs[:, None] >> np.arange(n)) & 1).astype(np.uint8)
    L = np.array(lam.to_lists(), dtype=np.uint8).reshape(lam.m, n)
    values = (bits.astype(np.int64) @ L.T.astype(np.int64)) % 2
    hits = np.nonzero(values.all(axis=1))[0]
    return [GF2Vector(int(xs[k]), n) for k in hits]


def xi_is_unique(lam: CharacteristicFunction) -> bool:
    """Whether at most one functional solves xi(lambda_i) = 1 for all i."""
    if lam.n <= EXHAUSTIVE_LIMIT:
        return len(orientation_functionals_bruteforce(lam)) <= 1
    return lam.matrix.rank() == lam.n


def is_general_position(P: SimplePolytope, lam: CharacteristicFunction, G: Subtorus) -> bool:
    """Ker(xi) is in general position iff xi(lambda_i) = 1 for every facet."""
    _check_shape(P, lam)
    return all(G.xi.dot(v) == 1 for v in lam.matrix.row_vectors())


def direct_general_position(P: SimplePolytope, lam: CharacteristicFunction, G: Subtorus) -> bool:
    """General position from the definition, vertex by vertex.

    The tangent weights restricted to G are the dual basis vectors taken in
    the quotient of the dual space by <xi>.  Every n-1 of them must be
    independent there.
    """
    _check_shape(P, lam)
    n = P.dim
    xi = G.xi.value
    for v in range(P.vertex_count):
        tw = tangent_weights(P, lam, v)
        for subset in itertools.combinations(tw.weights, n - 1):
            # rank in the quotient = rank(subset + xi) - rank(xi)
            if rank_of_rows([w.value for w in subset] + [xi]) - 1 != n - 1:
                return False
    return True


def canonical_form_at_vertex(
    P: SimplePolytope, lam: CharacteristicFunction, vertex: int, G: Subtorus
) -> CanonicalForm:
    """Coordinates of G in the basis of characteristic vectors at a vertex.

    Certifies that G becomes the coordinate-sum-zero subspace there.
    """
    if not is_general_position(P, lam, G):
        bad = next(j for j, v in enumerate(lam.matrix.row_vectors()) if G.xi.dot(v) == 0)
        raise NotInGeneralPosition(f"facet {bad}: characteristic vector lies in G")
    facets, A = _vertex_basis(P, lam, vertex)
    A_inv = A.inverse()
    n = lam.n
    # g = sum c_k a_k  <=>  c = g A^{-1} (row vectors)
    coords = tuple((GF2Matrix((g.value,), n) * A_inv).row(0) for g in G.basis)
    reduced, _ = rref_rows([c.value for c in coords], n)
    certified = len(reduced) == n - 1 and all(c.weight % 2 == 0 for c in coords)
    return CanonicalForm(vertex, facets, A, coords, certified)


def stabilizer_not_in_subtorus(P: SimplePolytope, lam: CharacteristicFunction, G: Subtorus) -> Report:
    """For each proper face, the span of its characteristic vectors is not inside G."""
    rep = Report("stabilizer-not-in-G")
    basis = [v.value for v in G.basis]
    for level in P.faces[: P.dim]:
        for F in level:
            rows = lam.rows_for(F.facet_set)
            if rank_of_rows(basis + rows) == len(basis):
                return rep.fail(f"face {sorted(F.facet_set)}: stabilizer lies in G", face=sorted(F.facet_set))
    return rep
