"""Small covers X(P, lambda) as cell complexes, and their orbit spaces.

The cells of X(P, lambda) are pairs (F, c): a face F of P and a coset c of
the stabilizer G_F (the span of the characteristic vectors of the facets
through F) in Z2^n.  Each closed cell is a copy of F, so the complex is
regular and the boundary of (F, c) is the sum of (F', c mod G_F') over the
facets F' of F.

Cell ids are ``(facet_key, coset)`` where ``facet_key`` is the sorted tuple of
facets cutting out F and ``coset`` is the canonical reduced representative
as an int.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .chain import (
    CellComplex,
    Subcomplex,
    betti_mod2,
    euler_characteristic,
    is_isomorphism,
    quotient_by_action,
    relative_betti_mod2,
)
from .charfun import (
    CharacteristicFunction,
    NotInGeneralPosition,
    Subtorus,
    check_star,
    is_general_position,
)
from .gf2 import GF2Vector, rank_of_rows, reduce_against, rref_rows
from .polytope import Face, SimplePolytope, h_vector
from .report import Report

__all__ = [
    "SmallCoverComplex",
    "OrbitSpaceComplex",
    "StarConditionError",
    "build",
    "fixed_set",
    "formality_check",
    "face_submanifold",
    "induced_characteristic",
    "orbit_space",
    "doubling_model",
    "doubling_isomorphism",
    "filtration_checks",
    "euler_by_orbit_count",
    "free_cells",
]


class StarConditionError(ValueError):
    def __init__(self, report: Report):
        super().__init__(report.message)
        self.report = report


@dataclass(frozen=True)
class _Echelon:
    rows: tuple[int, ...]
    pivots: tuple[int, ...]

    @classmethod
    def of(cls, vectors, n: int) -> "_Echelon":
        rows, pivots = rref_rows(list(vectors), n)
        return cls(tuple(rows), tuple(pivots))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: int) -> int:
        return reduce_against(v, self.rows, self.pivots)

    def free_columns(self, n: int) -> list[int]:
        return [j for j in range(n) if j not in self.pivots]


def _coset_reps(E: _Echelon, n: int) -> list[int]:
    # canonical reps have zeros on pivot columns; every pattern on the free columns occurs once
    free = E.free_columns(n)
    reps = []
    for x in range(1 << len(free)):
        v = 0
        for k, j in enumerate(free):
            if (x >> k) & 1:
                v |= 1 << j
        reps.append(v)
    return reps


@dataclass(frozen=True, eq=False)
class SmallCoverComplex:
    polytope: SimplePolytope
    charfun: CharacteristicFunction
    complex: CellComplex
    stabilizers: dict = field(repr=False)

    @property
    def n(self) -> int:
        return self.polytope.dim

    def stabilizer_basis(self, F: Face | tuple) -> list[GF2Vector]:
        key = F.key if isinstance(F, Face) else tuple(F)
        E = self.stabilizers[key]
        return [GF2Vector(r, self.n) for r in E.rows]

    def cells_over(self, F: Face | tuple) -> list:
        key = F.key if isinstance(F, Face) else tuple(F)
        d = self.n - len(key)
        return [c for c in self.complex.cells(d) if c[0] == key]

    @cached_property
    def betti(self) -> tuple[int, ...]:
        return betti_mod2(self.complex)


def build(P: SimplePolytope, lam: CharacteristicFunction) -> SmallCoverComplex:
    """Cell complex of X(P, lambda) = P x Z2^n / ~."""
    rep = check_star(P, lam)
    if not rep:
        raise StarConditionError(rep)
    n = P.dim
    stabilizers = {}
    cells: dict[int, list] = {}
    boundary: dict = {}
    for d, level in enumerate(P.faces):
        for F in level:
            E = _Echelon.of(lam.rows_for(F.facet_set), n)
            stabilizers[F.key] = E
            cells.setdefault(d, []).extend((F.key, c) for c in _coset_reps(E, n))
    for d, level in enumerate(P.faces):
        for F in level:
            facets_of_F = [G for G in P.faces[d - 1] if G.facet_set > F.facet_set] if d > 0 else []
            for c in _coset_reps(stabilizers[F.key], n):
                boundary[(F.key, c)] = [(G.key, stabilizers[G.key].reduce(c)) for G in facets_of_F]
    return SmallCoverComplex(P, lam, CellComplex(cells, boundary), stabilizers)


def euler_by_orbit_count(P: SimplePolytope) -> int:
    """sum over faces F of (-1)^dim F * 2^dim F."""
    return sum((-1) ** d * (1 << d) * len(level) for d, level in enumerate(P.faces))


def _as_basis(H, n: int) -> list[int]:
    if H is None:
        return []
    if isinstance(H, Subtorus):
        return [v.value for v in H.basis]
    if hasattr(H, "basis"):
        return [v.value for v in H.basis]
    return [v.value if isinstance(v, GF2Vector) else int(v) for v in H]


def fixed_set(S: SmallCoverComplex, H) -> list:
    """Cells (F, c) whose stabilizer G_F contains the subgroup H."""
    h = _as_basis(H, S.n)
    out = []
    for d in range(S.complex.dim + 1):
        for cell in S.complex.cells(d):
            E = S.stabilizers[cell[0]]
            if all(E.reduce(v) == 0 for v in h):
                out.append(cell)
    return out


def free_cells(S: SmallCoverComplex, G: Subtorus) -> list:
    """Cells on which G acts with trivial stabilizer (G_F meets G trivially)."""
    g = [v.value for v in G.basis]
    out = []
    for cell in S.complex.all_cells():
        E = S.stabilizers[cell[0]]
        if rank_of_rows(list(E.rows) + g) == E.rank + len(g):
            out.append(cell)
    return out


def formality_check(S: SmallCoverComplex, G: Subtorus) -> Report:
    """Total mod-2 Betti number of the fixed set of G against that of X.

    For n >= 2 the fixed set is the vertex cells, and this is the count of
    fixed points.  For n = 1, G is trivial and fixes all of X.
    """
    rep = Report("equivariant-formality")
    if not is_general_position(S.polytope, S.charfun, G):
        raise NotInGeneralPosition("formality count needs G in general position")
    fixed = fixed_set(S, G)
    total = sum(S.betti)
    # fixed cells form a subcomplex: faces of F have larger stabilizers
    fixed_total = sum(betti_mod2(Subcomplex(S.complex, frozenset(fixed)).as_complex()))
    isolated = all(S.complex.dim_of(c) == 0 for c in fixed)
    rep.details.update(fixed_cells=len(fixed), fixed_total_betti=fixed_total, total_betti=total, isolated=isolated)
    if S.n >= 2 and not isolated:
        return rep.fail("fixed set of a general-position subtorus is not discrete")
    if fixed_total != total:
        rep.fail(f"fixed set has total Betti number {fixed_total}, X has {total}")
    return rep


# -- face submanifolds -------------------------------------------------------


def _face_polytope(P: SimplePolytope, F: Face) -> tuple[SimplePolytope, list[int], list[int]]:
    """F as a simple polytope; returns it with its facet list and vertex list (P indices)."""
    verts = sorted(F.vertex_set)
    facets = sorted({j for v in verts for j in P.vertices[v]} - F.facet_set)
    findex = {j: k for k, j in enumerate(facets)}
    rows = tuple(frozenset(findex[j] for j in P.vertices[v] - F.facet_set) for v in verts)
    return SimplePolytope(F.dim, len(facets), rows), facets, verts


def induced_characteristic(S: SmallCoverComplex, F: Face) -> tuple[SimplePolytope, CharacteristicFunction, dict]:
    """The polytope F with characteristic data projected to Z2^n / G_F.

    Coordinates on the quotient are the free columns of the reduced basis of
    G_F.  Also returns a map from P-face keys inside F to F-face keys.
    """
    P = S.polytope
    E = S.stabilizers[F.key]
    free = E.free_columns(S.n)
    Fpoly, facets, _ = _face_polytope(P, F)

    def project(v: int) -> int:
        r = E.reduce(v)
        return sum(((r >> j) & 1) << k for k, j in enumerate(free))

    rows = tuple(project(S.charfun.matrix.rows[j]) for j in facets)
    lam = CharacteristicFunction.from_rows(rows, len(free))
    findex = {j: k for k, j in enumerate(facets)}
    key_map = {}
    for level in P.faces:
        for G in level:
            if G.facet_set >= F.facet_set:
                key_map[G.key] = tuple(sorted(findex[j] for j in G.facet_set - F.facet_set))
    return Fpoly, lam, {"key_map": key_map, "project": project}


def face_submanifold(S: SmallCoverComplex, F: Face) -> tuple[SmallCoverComplex, Subcomplex]:
    """The small cover over a proper face F, with the subcomplex of X it came from.

    The induced small cover is built independently and checked to be
    isomorphic to the subcomplex of cells over faces of F.
    """
    if not F.facet_set:
        raise ValueError("face_submanifold needs a proper face, got the whole polytope")
    P = S.polytope
    inside = [c for c in S.complex.all_cells() if frozenset(c[0]) >= F.facet_set]
    sub = Subcomplex(S.complex, frozenset(inside))
    Fpoly, lam, aux = induced_characteristic(S, F)
    XF = build(Fpoly, lam)
    key_map, project = aux["key_map"], aux["project"]
    mapping = {c: (key_map[c[0]], XF.stabilizers[key_map[c[0]]].reduce(project(c[1]))) for c in inside}
    if not is_isomorphism(sub.as_complex(), XF.complex, mapping):
        raise AssertionError(f"subcomplex over face {F.key} does not match the induced small cover")
    return XF, sub


# -- orbit space ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OrbitSpaceComplex:
    complex: CellComplex
    filtration: tuple[frozenset, ...]
    face_index: dict
    subtorus: Subtorus
    n: int

    def level(self, i: int) -> Subcomplex:
        return Subcomplex(self.complex, self.filtration[i] if i >= 0 else frozenset())


def orbit_space(S: SmallCoverComplex, G: Subtorus, representative: str = "min") -> OrbitSpaceComplex:
    """Q = X/G for the 2-subtorus in general position.

    Orbit cells are named ``(facet_key, rep)`` with rep the canonical coset
    representative modulo G_F + G.
    """
    P, n = S.polytope, S.n
    if G.n != n:
        raise ValueError(f"subtorus lives in Z2^{G.n}, small cover has n = {n}")
    if not is_general_position(P, S.charfun, G):
        raise NotInGeneralPosition("G is not in general position; its orbit space has boundary")
    elements = G.elements()
    # G only moves the coset coordinate, so an element fixing (F, c) lies in G_F and fixes every face of F
    perms = []
    for g in elements:
        perm = {}
        for cell in S.complex.all_cells():
            key, c = cell
            perm[cell] = (key, S.stabilizers[key].reduce(c ^ g.value))
        perms.append(perm)
    Q, orbit_of = quotient_by_action(S.complex, perms, representative=representative)

    g_rows = [v.value for v in G.basis]
    names = {}
    for cell in Q.all_cells():
        key, c = cell
        E = _Echelon.of(list(S.stabilizers[key].rows) + g_rows, n)
        names[cell] = (key, E.reduce(c))
    Q = Q.relabel(names)

    face_index: dict = {}
    for cell in Q.all_cells():
        face_index.setdefault(cell[0], []).append(cell)
    for key in face_index:
        face_index[key].sort()
    top = face_index.get((), [])
    if len(top) != 2:
        raise AssertionError(f"expected two top cells in X/G, found {len(top)}")
    for key, cs in face_index.items():
        if key and len(cs) != 1:
            raise AssertionError(f"face {key} carries {len(cs)} cells in X/G")

    levels = []
    for i in range(n):
        if i == n - 1:
            levels.append(frozenset(Q.all_cells()))
        else:
            levels.append(frozenset(c for c in Q.all_cells() if Q.dim_of(c) <= i))
    return OrbitSpaceComplex(Q, tuple(levels), face_index, G, n)


def doubling_model(P: SimplePolytope) -> CellComplex:
    """Two copies of P glued along the boundary: one cell per proper face plus two n-cells."""
    n = P.dim
    cells: dict[int, list] = {}
    boundary = {}
    for d, level in enumerate(P.faces):
        for F in level:
            below = [G.key for G in P.faces[d - 1] if G.facet_set > F.facet_set] if d > 0 else []
            copies = (0, 1) if d == n else (0,)
            for s in copies:
                cid = (F.key, s)
                cells.setdefault(d, []).append(cid)
                boundary[cid] = [(k, 0) for k in below]
    return CellComplex(cells, boundary)


def doubling_isomorphism(Q: OrbitSpaceComplex, P: SimplePolytope) -> tuple[bool, dict]:
    """Match Q's cells with the doubling model through the face index and test it."""
    D = doubling_model(P)
    mapping = {}
    for key, cs in Q.face_index.items():
        for s, cell in enumerate(cs):
            mapping[cell] = (key, s)
    return is_isomorphism(Q.complex, D, mapping), mapping


# -- filtration ---------------------------------------------------------------


def _components(C: CellComplex, cells: frozenset) -> list[frozenset]:
    parent = {c: c for c in cells}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in cells:
        for f in C.boundary(c):
            if f in parent:
                a, b = find(c), find(f)
                if a != b:
                    parent[a] = b
    groups: dict = {}
    for c in cells:
        groups.setdefault(find(c), set()).add(c)
    return sorted((frozenset(g) for g in groups.values()), key=lambda g: sorted(g))


def filtration_checks(Q: OrbitSpaceComplex, P: SimplePolytope | None = None) -> Report:
    """Relative-homology facts about the orbit-type filtration of Q.

    (a) H(Q, Q_{n-2}) vanishes below degree n-1.
    (b) Every face of rank i <= n-2 has relative Betti numbers of (D^i, S^(i-1)).
    (c) Faces of rank i <= n-2 correspond one-to-one to i-faces of P.
    """
    rep = Report("filtration")
    C, n = Q.complex, Q.n
    if n >= 2:
        rel = relative_betti_mod2(C, Q.level(n - 2))
        rep.details["relative_betti_Q_Qn-2"] = list(rel)
        if any(rel[: n - 1]):
            rep.fail(f"H(Q, Q_{n - 2}) is nonzero below degree {n - 1}: {list(rel)}")
    faces_by_rank: dict[int, int] = {}
    for i in range(max(n - 1, 0)):
        stratum = Q.filtration[i] - (Q.filtration[i - 1] if i > 0 else frozenset())
        comps = _components(C, stratum)
        faces_by_rank[i] = len(comps)
        for comp in comps:
            closure = C.closure(comp)
            below = closure & (Q.filtration[i - 1] if i > 0 else frozenset())
            face = Subcomplex(C, closure).as_complex()
            rel = relative_betti_mod2(face, below)
            expected = tuple([0] * i + [1])
            if tuple(rel) != expected:
                rep.fail(
                    f"face of rank {i} on {sorted(comp)[0]!r}: relative Betti {list(rel)}, expected {list(expected)}"
                )
        if P is not None:
            keys = sorted(next(iter(comp))[0] for comp in comps)
            p_keys = sorted(F.key for F in P.faces[i])
            if len(comps) != len(P.faces[i]) or keys != p_keys or any(
                len({c[0] for c in comp}) != 1 for comp in comps
            ):
                rep.fail(f"rank-{i} faces of Q do not match the {i}-faces of P")
    rep.details["faces_by_rank"] = faces_by_rank
    return rep
