"""Finite cell complexes with mod-2 boundary incidences.

Cells are identified by hashable, sortable ids (tuples and ints).  The
boundary of a cell is the set of codimension-one cells meeting it with odd
incidence.  Every complex checks that the boundary squares to zero when it is
built.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .gf2 import rank_of_rows

__all__ = [
    "CellComplex",
    "Subcomplex",
    "ComplexError",
    "RegularityError",
    "betti_mod2",
    "relative_betti_mod2",
    "euler_characteristic",
    "quotient_by_action",
    "is_isomorphism",
]

CellId = Hashable


class ComplexError(ValueError):
    pass


class RegularityError(ComplexError):
    def __init__(self, element_index: int, cell, face):
        super().__init__(
            f"group element #{element_index} fixes cell {cell!r} but moves its boundary cell {face!r}"
        )
        self.element_index = element_index
        self.cell = cell
        self.face = face


def _odd(items: Iterable[CellId]) -> frozenset:
    counts = Counter(items)
    return frozenset(c for c, k in counts.items() if k % 2)


def _sort_key(cell):
    # ids in one complex share a shape; repr breaks ties between mixed types
    return (0, cell) if isinstance(cell, (tuple, int, str)) else (1, repr(cell))


class CellComplex:
    """Graded cells plus mod-2 boundary sets.

    ``cells`` maps a dimension to the ids of that dimension.  ``boundary``
    maps an id to an iterable of faces; repeated faces cancel in pairs.
    """

    def __init__(self, cells: Mapping[int, Iterable[CellId]], boundary: Mapping[CellId, Iterable[CellId]]):
        dims = sorted(d for d in cells)
        if dims and dims[0] < 0:
            raise ComplexError("negative cell dimension")
        top = dims[-1] if dims else -1
        graded: list[tuple] = []
        dim_of: dict = {}
        for d in range(top + 1):
            ids = list(cells.get(d, ()))
            for c in ids:
                if c in dim_of:
                    raise ComplexError(f"cell {c!r} listed twice")
                dim_of[c] = d
            graded.append(tuple(sorted(ids, key=_sort_key)))
        bd: dict = {}
        for c, d in dim_of.items():
            faces = _odd(boundary.get(c, ()))
            for f in faces:
                if dim_of.get(f) != d - 1:
                    raise ComplexError(f"boundary of {c!r} (dim {d}) references {f!r}, not a {d - 1}-cell")
            bd[c] = faces
        extra = set(boundary) - set(dim_of)
        if extra:
            raise ComplexError(f"boundary given for unknown cell {sorted(extra, key=_sort_key)[0]!r}")
        self._cells = tuple(graded)
        self._dim_of = dim_of
        self._boundary = bd
        self._check_boundary_squared()

    def _check_boundary_squared(self) -> None:
        for c, faces in self._boundary.items():
            second = _odd(g for f in faces for g in self._boundary[f])
            if second:
                raise ComplexError(f"boundary of boundary of {c!r} is nonzero (contains {min(second, key=_sort_key)!r})")

    # -- access -----------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self._cells) - 1

    def cells(self, d: int) -> tuple:
        return self._cells[d] if 0 <= d < len(self._cells) else ()

    def all_cells(self) -> list:
        return [c for level in self._cells for c in level]

    def dim_of(self, cell) -> int:
        return self._dim_of[cell]

    def boundary(self, cell) -> frozenset:
        return self._boundary[cell]

    def __contains__(self, cell) -> bool:
        return cell in self._dim_of

    def __len__(self) -> int:
        return len(self._dim_of)

    @property
    def cell_counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self._cells)

    @cached_property
    def coboundary(self) -> dict:
        up: dict = {c: set() for c in self._dim_of}
        for c, faces in self._boundary.items():
            for f in faces:
                up[f].add(c)
        return {c: frozenset(s) for c, s in up.items()}

    def closure(self, cells: Iterable[CellId]) -> frozenset:
        seen = set()
        stack = list(cells)
        while stack:
            c = stack.pop()
            if c in seen:
                continue
            seen.add(c)
            stack.extend(self._boundary[c])
        return frozenset(seen)

    def boundary_rows(self, d: int, keep: Callable[[CellId], bool] | None = None) -> list[int]:
        """Boundary map from d-cells to (d-1)-cells as bit-packed rows."""
        lower = [c for c in self.cells(d - 1) if keep is None or keep(c)]
        index = {c: k for k, c in enumerate(lower)}
        rows = []
        for c in self.cells(d):
            if keep is not None and not keep(c):
                continue
            r = 0
            for f in self._boundary[c]:
                k = index.get(f)
                if k is not None:
                    r |= 1 << k
            rows.append(r)
        return rows

    def relabel(self, mapping: Mapping[CellId, CellId]) -> "CellComplex":
        cells = {d: [mapping[c] for c in level] for d, level in enumerate(self._cells)}
        boundary = {mapping[c]: [mapping[f] for f in faces] for c, faces in self._boundary.items()}
        return CellComplex(cells, boundary)

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "cells": {str(d): [_jsonable(c) for c in level] for d, level in enumerate(self._cells)},
            "boundary": {
                _key(c): sorted((_jsonable(f) for f in self._boundary[c]), key=json.dumps)
                for level in self._cells
                for c in level
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CellComplex":
        cells = {int(d): [_hashable(c) for c in ids] for d, ids in data["cells"].items()}
        boundary = {_hashable(json.loads(k)): [_hashable(f) for f in fs] for k, fs in data["boundary"].items()}
        return cls(cells, boundary)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _jsonable(c):
    if isinstance(c, (tuple, list, frozenset)):
        items = sorted(c, key=_sort_key) if isinstance(c, frozenset) else c
        return [_jsonable(x) for x in items]
    return c


def _hashable(c):
    if isinstance(c, list):
        return tuple(_hashable(x) for x in c)
    return c


def _key(c) -> str:
    return json.dumps(_jsonable(c))


@dataclass(frozen=True)
class Subcomplex:
    parent: CellComplex
    selected: frozenset

    def __post_init__(self):
        object.__setattr__(self, "selected", frozenset(self.selected))
        for c in self.selected:
            if c not in self.parent:
                raise ComplexError(f"{c!r} is not a cell of the parent complex")
            missing = self.parent.boundary(c) - self.selected
            if missing:
                raise ComplexError(f"not closed under boundary: {c!r} needs {min(missing, key=_sort_key)!r}")

    def as_complex(self) -> CellComplex:
        P = self.parent
        cells = {d: [c for c in P.cells(d) if c in self.selected] for d in range(P.dim + 1)}
        while cells and not cells[max(cells)]:
            del cells[max(cells)]
        return CellComplex(cells, {c: P.boundary(c) for c in self.selected})


def betti_mod2(C: CellComplex) -> tuple[int, ...]:
    """Mod-2 Betti numbers b_0..b_dim."""
    return _betti(C, None)


def relative_betti_mod2(C: CellComplex, A: Subcomplex | Iterable[CellId] | None = None) -> tuple[int, ...]:
    """Betti numbers of the quotient chain complex C/A over GF(2)."""
    if A is None:
        return betti_mod2(C)
    if not isinstance(A, Subcomplex):
        A = Subcomplex(C, frozenset(A))
    elif A.parent is not C:
        raise ComplexError("subcomplex belongs to a different complex")
    excluded = A.selected
    return _betti(C, lambda c: c not in excluded)


def _betti(C: CellComplex, keep) -> tuple[int, ...]:
    top = C.dim
    ranks = [0] * (top + 2)
    for d in range(1, top + 1):
        ranks[d] = rank_of_rows(C.boundary_rows(d, keep))
    out = []
    for d in range(top + 1):
        n_d = sum(1 for c in C.cells(d) if keep is None or keep(c))
        out.append(n_d - ranks[d] - ranks[d + 1])
    return tuple(out)


def euler_characteristic(C: CellComplex) -> int:
    return sum((-1) ** d * n for d, n in enumerate(C.cell_counts))


def quotient_by_action(
    C: CellComplex,
    elements: Sequence[Mapping[CellId, CellId]],
    representative: str = "min",
) -> tuple[CellComplex, dict]:
    """Quotient of C by a finite group given as its list of cell permutations.

    Pass every group element, not just generators: regularity (an element
    fixing a cell fixes each of its boundary cells) is checked per element.
    Orbits are named by their smallest member.  Each orbit's boundary is read
    off one representative (``representative`` is ``"min"`` or ``"max"``) and
    checked against every other member.

    Returns the quotient complex and the map cell -> orbit id.
    """
    if representative not in ("min", "max"):
        raise ValueError("representative must be 'min' or 'max'")
    all_cells = C.all_cells()
    for k, g in enumerate(elements):
        for c in all_cells:
            gc = g.get(c, c)
            if gc not in C or C.dim_of(gc) != C.dim_of(c):
                raise ComplexError(f"group element #{k} maps {c!r} outside its dimension")
            image = frozenset(g.get(f, f) for f in C.boundary(c))
            if image != C.boundary(gc):
                raise ComplexError(f"group element #{k} does not commute with the boundary at {c!r}")
            if gc == c:
                for f in C.boundary(c):
                    if g.get(f, f) != f:
                        raise RegularityError(k, c, f)

    orbit_of: dict = {}
    members: dict = {}
    for c in all_cells:
        if c in orbit_of:
            continue
        orbit = {c}
        stack = [c]
        while stack:
            x = stack.pop()
            for g in elements:
                y = g.get(x, x)
                if y not in orbit:
                    orbit.add(y)
                    stack.append(y)
        ordered = sorted(orbit, key=_sort_key)
        name = ordered[0]
        members[name] = ordered
        for x in orbit:
            orbit_of[x] = name

    def induced(cell) -> frozenset:
        return _odd(orbit_of[f] for f in C.boundary(cell))

    cells: dict[int, list] = {}
    boundary = {}
    for name, ordered in members.items():
        rep = ordered[0] if representative == "min" else ordered[-1]
        b = induced(rep)
        for other in ordered:
            if induced(other) != b:
                raise ComplexError(f"orbit {name!r}: boundary depends on the representative")
        cells.setdefault(C.dim_of(name), []).append(name)
        boundary[name] = b
    return CellComplex(cells, boundary), orbit_of


def is_isomorphism(A: CellComplex, B: CellComplex, mapping: Mapping[CellId, CellId]) -> bool:
    """Whether ``mapping`` is a dimension-preserving bijection commuting with the boundary."""
    if len(A) != len(B) or set(mapping) != set(A.all_cells()):
        return False
    if len(set(mapping.values())) != len(mapping):
        return False
    for a, b in mapping.items():
        if b not in B or A.dim_of(a) != B.dim_of(b):
            return False
        if frozenset(mapping[f] for f in A.boundary(a)) != B.boundary(b):
            return False
    return True
