"""Coordinate sign actions on R^n, handled combinatorially.

Sign groups are stored additively: the vector ``v`` stands for the sign
element that is -1 exactly on the support of ``v``.  The index-two subgroup
of products equal to +1 becomes the subspace of even-weight vectors.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .chain import CellComplex, RegularityError, betti_mod2, quotient_by_action
from .gf2 import GF2Matrix, GF2Vector, intersect_subspaces, rank_of_rows, rref_rows

__all__ = [
    "SignSubgroup",
    "WeakEquivalence",
    "standard_G",
    "stabilizer",
    "stabilizer_order_formula",
    "is_generated_by_rotations",
    "weak_equivalence_iso",
    "cross_polytope_simplices",
    "cross_polytope_sphere",
    "barycentric_subdivision",
    "simplicial_complex",
    "quotient_simplicial",
    "quotient_sphere_homology",
    "ENUMERATION_LIMIT",
]

ENUMERATION_LIMIT = 16


@dataclass(frozen=True)
class SignSubgroup:
    ambient_n: int
    basis: tuple[GF2Vector, ...]

    def __post_init__(self):
        basis = tuple(self.basis)
        for v in basis:
            if v.length != self.ambient_n:
                raise ValueError(f"basis vector of length {v.length} in Z2^{self.ambient_n}")
        if rank_of_rows(v.value for v in basis) != len(basis):
            raise ValueError("basis vectors are dependent")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def spanned_by(cls, n: int, vectors: Iterable[GF2Vector]) -> "SignSubgroup":
        reduced, _ = rref_rows([v.value for v in vectors], n)
        return cls(n, tuple(GF2Vector(r, n) for r in reduced))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return 1 << len(self.basis)

    def elements(self) -> list[GF2Vector]:
        out = []
        for coeffs in range(self.order):
            v = 0
            for i, b in enumerate(self.basis):
                if (coeffs >> i) & 1:
                    v ^= b.value
            out.append(GF2Vector(v, self.ambient_n))
        return sorted(out, key=lambda v: v.bits[::-1])

    def element_set(self) -> frozenset[int]:
        return frozenset(v.value for v in self.elements())

    def contains(self, v: GF2Vector) -> bool:
        rows = [b.value for b in self.basis]
        return rank_of_rows(rows + [v.value]) == len(rows)

    def signs(self) -> list[tuple[int, ...]]:
        """Elements in multiplicative notation, +1/-1 per coordinate."""
        return [tuple(-1 if b else 1 for b in v.bits) for v in self.elements()]


def standard_G(n: int) -> SignSubgroup:
    """Sign vectors with product +1: the even-weight subspace of Z2^n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    basis = tuple(GF2Vector((1 << i) | (1 << (i + 1)), n) for i in range(n - 1))
    return SignSubgroup(n, basis)


def stabilizer(G: SignSubgroup, zero_set: Iterable[int]) -> SignSubgroup:
    """Elements of G supported on the zero-coordinate set I (0-based)."""
    n = G.ambient_n
    I = sorted(set(zero_set))
    for i in I:
        if not 0 <= i < n:
            raise ValueError(f"coordinate {i} out of range 0..{n - 1}")
    coords = [GF2Vector.unit(i, n) for i in I]
    return SignSubgroup(n, tuple(intersect_subspaces(G.basis, coords, n)))


def stabilizer_order_formula(k: int) -> int:
    """C(k,0) + C(k,2) + C(k,4) + ...; the empty case k = 0 gives 1."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    return sum(comb(k, j) for j in range(0, k + 1, 2))


def is_generated_by_rotations(H: SignSubgroup) -> bool:
    """Whether the weight-two elements (rotations) of H span H."""
    if H.rank > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration limited to rank <= {ENUMERATION_LIMIT}")
    rotations = [v.value for v in H.elements() if v.weight == 2]
    return rank_of_rows(rotations) == H.rank


class WeightsNotInGeneralPosition(ValueError):
    def __init__(self, message: str, subset: tuple[int, ...]):
        super().__init__(message)
        self.subset = subset


@dataclass(frozen=True)
class WeakEquivalence:
    """phi(t) = (alpha_1(t), ..., alpha_n(t)) from Z2^(n-1) into Z2^n."""

    weights: tuple[GF2Vector, ...]
    matrix: GF2Matrix

    @property
    def n(self) -> int:
        return len(self.weights)

    def __call__(self, t: GF2Vector) -> GF2Vector:
        return self.matrix.apply(t)

    def image(self) -> list[GF2Vector]:
        k = self.matrix.ncols
        return [self(GF2Vector(x, k)) for x in range(1 << k)]

    def is_injective(self) -> bool:
        return self.matrix.rank() == self.matrix.ncols


def weak_equivalence_iso(weights: Sequence[GF2Vector]) -> WeakEquivalence:
    """The map phi for n weights on Z2^(n-1) in general position.

    Raises ``WeightsNotInGeneralPosition`` with the offending index subset
    (a zero weight, or n-1 dependent weights).
    """
    weights = tuple(weights)
    n = len(weights)
    if n < 1:
        raise ValueError("need at least one weight")
    k = n - 1
    for i, w in enumerate(weights):
        if w.length != k:
            raise ValueError(f"weight {i} has length {w.length}, expected {k}")
    for i, w in enumerate(weights):
        if w.is_zero() and k > 0:
            raise WeightsNotInGeneralPosition(
                f"weight {i} is zero: the fixed point set is not discrete", (i,)
            )
    for subset in itertools.combinations(range(n), k):
        if rank_of_rows(weights[i].value for i in subset) != k:
            raise WeightsNotInGeneralPosition(f"weights {list(subset)} are dependent", subset)
    return WeakEquivalence(weights, GF2Matrix(tuple(w.value for w in weights), k))


# -- cross-polytope spheres --------------------------------------------------
# vertex +(i+1) is e_i, vertex -(i+1) is -e_i; simplices are tuples sorted by |vertex|


def _canon(simplex: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(simplex, key=abs))


def cross_polytope_simplices(n: int) -> list[tuple[int, ...]]:
    """Nonempty simplices of the boundary of the n-dimensional cross-polytope."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    out = []
    for r in range(1, n + 1):
        for coords in itertools.combinations(range(1, n + 1), r):
            for signs in itertools.product((1, -1), repeat=r):
                out.append(tuple(s * c for s, c in zip(signs, coords)))
    return out


def simplicial_complex(simplices: Iterable[Sequence]) -> CellComplex:
    """Cell complex of a simplicial complex given by all its nonempty simplices.

    Simplex ids must already be canonical (a fixed vertex order).
    """
    simplices = [tuple(s) for s in simplices]
    present = set(simplices)
    index = {frozenset(s): s for s in simplices}
    cells: dict[int, list] = {}
    boundary = {}
    for s in simplices:
        cells.setdefault(len(s) - 1, []).append(s)
        faces = []
        if len(s) > 1:
            for i in range(len(s)):
                f = index.get(frozenset(s[:i] + s[i + 1 :]))
                if f is None or f not in present:
                    raise ValueError(f"face of {s!r} missing from the complex")
                faces.append(f)
        boundary[s] = faces
    return CellComplex(cells, boundary)


def cross_polytope_sphere(n: int) -> CellComplex:
    """The boundary sphere S^(n-1) of the cross-polytope with vertices +-e_i."""
    return simplicial_complex(cross_polytope_simplices(n))


def _sign_vertex_map(v: GF2Vector):
    def act(vertex: int) -> int:
        return -vertex if (v.value >> (abs(vertex) - 1)) & 1 else vertex

    return act


def barycentric_subdivision(simplices: Sequence[tuple]) -> list[tuple]:
    """Chains of faces, each as a tuple of original simplices ordered by size."""
    by_set = {frozenset(s): s for s in simplices}
    faces_below: dict[tuple, list[tuple]] = {}
    for s in simplices:
        fs = frozenset(s)
        faces_below[s] = [by_set[g] for g in by_set if g < fs]
    out = []

    def grow(chain: tuple):
        out.append(chain)
        for f in faces_below[chain[0]]:
            grow((f,) + chain)

    for s in sorted(simplices, key=lambda s: (len(s), s)):
        grow((s,))
    return [tuple(sorted(c, key=len)) for c in out]


def quotient_simplicial(
    simplices: Sequence[tuple],
    vertex_maps: Sequence,
    canon=_canon,
    subdivide: bool = True,
) -> tuple[CellComplex, bool]:
    """Quotient of a simplicial complex by a simplicial group action.

    ``vertex_maps`` lists every group element as a function on vertices.  If
    the action is not regular, one barycentric subdivision is tried before
    giving up.  Returns the quotient and whether the subdivision was used.
    """
    simplices = [canon(s) for s in simplices]
    C = simplicial_complex(simplices)
    perms = [{s: canon(g(x) for x in s) for s in simplices} for g in vertex_maps]
    try:
        Q, _ = quotient_by_action(C, perms)
        return Q, False
    except RegularityError:
        if not subdivide:
            raise
    sd = barycentric_subdivision(simplices)

    def canon_chain(chain):
        return tuple(sorted(chain, key=lambda s: (len(s), s)))

    sd = [canon_chain(c) for c in sd]
    C2 = simplicial_complex(sd)
    perms2 = [
        {c: canon_chain(canon(g(x) for x in s) for s in c) for c in sd}
        for g in vertex_maps
    ]
    # a simplicial action on a barycentric subdivision is always regular
    Q, _ = quotient_by_action(C2, perms2)
    return Q, True


def quotient_sphere_homology(n: int, H: SignSubgroup) -> tuple[int, ...]:
    """Mod-2 Betti numbers of the cross-polytope sphere S^(n-1) modulo H."""
    if H.ambient_n != n:
        raise ValueError(f"subgroup lives in Z2^{H.ambient_n}, sphere needs Z2^{n}")
    maps = [_sign_vertex_map(h) for h in H.elements()]
    Q, _ = quotient_simplicial(cross_polytope_simplices(n), maps)
    return betti_mod2(Q)
