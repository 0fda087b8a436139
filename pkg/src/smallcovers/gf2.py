"""Exact linear algebra over GF(2) on bit-packed rows.

A row (or vector) of length ``n`` is stored as a Python int whose bit ``j``
holds coordinate ``j``.  Row operations are XORs of whole words, so rank and
elimination cost scale with the number of rows times the number of pivots.

Pivoting is deterministic: the leftmost (lowest-index) nonzero column is taken
first, and among candidate rows the topmost one wins.  Kernel bases and
solution representatives are therefore reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "GF2Vector",
    "GF2Matrix",
    "rank_of_rows",
    "rref_rows",
    "reduce_against",
    "span_rank",
    "in_span",
    "intersect_subspaces",
    "all_vectors",
]


def _mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True, order=True)
class GF2Vector:
    """Element of GF(2)^length; addition is XOR."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise ValueError("vector length must be non-negative")
        if self.value < 0 or self.value >> self.length:
            raise ValueError(f"value {self.value} does not fit in {self.length} bits")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "GF2Vector":
        value = 0
        n = 0
        for j, b in enumerate(bits):
            if b not in (0, 1, True, False):
                raise ValueError(f"entry {j} is {b!r}, expected 0 or 1")
            if b:
                value |= 1 << j
            n = j + 1
        return cls(value, n)

    @classmethod
    def zero(cls, n: int) -> "GF2Vector":
        return cls(0, n)

    @classmethod
    def unit(cls, i: int, n: int) -> "GF2Vector":
        if not 0 <= i < n:
            raise IndexError(f"unit index {i} out of range for length {n}")
        return cls(1 << i, n)

    @classmethod
    def ones(cls, n: int) -> "GF2Vector":
        return cls(_mask(n), n)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> j) & 1 for j in range(self.length))

    @property
    def weight(self) -> int:
        return bin(self.value).count("1")

    @property
    def support(self) -> frozenset[int]:
        return frozenset(j for j in range(self.length) if (self.value >> j) & 1)

    def is_zero(self) -> bool:
        return self.value == 0

    def _check(self, other: "GF2Vector") -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def __add__(self, other: "GF2Vector") -> "GF2Vector":
        self._check(other)
        return GF2Vector(self.value ^ other.value, self.length)

    __xor__ = __add__
    __sub__ = __add__

    def dot(self, other: "GF2Vector") -> int:
        """Standard pairing; also the value of a functional on a vector."""
        self._check(other)
        return bin(self.value & other.value).count("1") & 1

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.value >> j) & 1

    def __len__(self) -> int:
        return self.length

    def __iter__(self):
        return iter(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def _as_int(v, n: int | None = None) -> int:
    if isinstance(v, GF2Vector):
        if n is not None and v.length != n:
            raise ValueError(f"vector of length {v.length}, expected {n}")
        return v.value
    if isinstance(v, int):
        return v
    bits = list(v)
    if n is not None and len(bits) != n:
        raise ValueError(f"row of length {len(bits)}, expected {n}")
    return GF2Vector.from_bits(bits).value


def rank_of_rows(rows: Iterable[int]) -> int:
    """Rank of a family of bit-packed rows (order-independent)."""
    basis: dict[int, int] = {}
    for r in rows:
        while r:
            low = r & -r
            b = basis.get(low)
            if b is None:
                basis[low] = r
                break
            r ^= b
    return len(basis)


def rref_rows(rows: Sequence[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form.

    Returns the nonzero reduced rows (in pivot order) and their pivot columns.
    """
    work = list(rows)
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        bit = 1 << col
        for r in range(top, len(work)):
            if work[r] & bit:
                break
        else:
            continue
        work[top], work[r] = work[r], work[top]
        prow = work[top]
        for r in range(len(work)):
            if r != top and work[r] & bit:
                work[r] ^= prow
        pivots.append(col)
        top += 1
        if top == len(work):
            break
    return work[:top], pivots


def reduce_against(v: int, rref: Sequence[int], pivots: Sequence[int]) -> int:
    """Canonical representative of ``v`` modulo the row space of an RREF basis."""
    for row, col in zip(rref, pivots):
        if (v >> col) & 1:
            v ^= row
    return v


def span_rank(vectors: Iterable[GF2Vector | int]) -> int:
    return rank_of_rows(_as_int(v) for v in vectors)


def in_span(v: GF2Vector | int, vectors: Sequence[GF2Vector | int]) -> bool:
    rows = [_as_int(u) for u in vectors]
    return rank_of_rows(rows + [_as_int(v)]) == rank_of_rows(rows)


def all_vectors(n: int):
    """Every vector of GF(2)^n, in increasing integer order."""
    for value in range(1 << n):
        yield GF2Vector(value, n)


@dataclass(frozen=True)
class GF2Matrix:
    """Dense matrix over GF(2) with bit-packed rows."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 0:
            raise ValueError("column count must be non-negative")
        object.__setattr__(self, "rows", tuple(self.rows))
        for i, r in enumerate(self.rows):
            if r < 0 or r >> self.ncols:
                raise ValueError(f"row {i} has bits beyond column {self.ncols - 1}")

    @classmethod
    def from_rows(cls, rows: Iterable, ncols: int | None = None) -> "GF2Matrix":
        rows = list(rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix with no rows")
            first = rows[0]
            if isinstance(first, int):
                raise ValueError("ncols is required for integer rows")
            ncols = len(first)
        return cls(tuple(_as_int(r, None if isinstance(r, int) else ncols) for r in rows), ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "GF2Matrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "GF2Matrix":
        return cls(tuple(1 << i for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def row(self, i: int) -> GF2Vector:
        return GF2Vector(self.rows[i], self.ncols)

    def row_vectors(self) -> list[GF2Vector]:
        return [GF2Vector(r, self.ncols) for r in self.rows]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self.ncols:
            raise IndexError(ij)
        return (self.rows[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "GF2Matrix":
        cols = []
        for j in range(self.ncols):
            c = 0
            for i, r in enumerate(self.rows):
                if (r >> j) & 1:
                    c |= 1 << i
            cols.append(c)
        return GF2Matrix(tuple(cols), len(self.rows))

    def submatrix(self, row_indices: Iterable[int]) -> "GF2Matrix":
        return GF2Matrix(tuple(self.rows[i] for i in row_indices), self.ncols)

    def rank(self) -> int:
        return rank_of_rows(self.rows)

    def rref(self) -> tuple["GF2Matrix", list[int]]:
        """Reduced row echelon form (zero rows dropped) and pivot columns."""
        reduced, pivots = rref_rows(self.rows, self.ncols)
        return GF2Matrix(tuple(reduced), self.ncols), pivots

    def kernel_basis(self) -> list[GF2Vector]:
        """Basis of {x : M x = 0}, one vector per free column."""
        reduced, pivots = rref_rows(self.rows, self.ncols)
        pivot_set = set(pivots)
        basis = []
        for free in range(self.ncols):
            if free in pivot_set:
                continue
            x = 1 << free
            for row, col in zip(reduced, pivots):
                if (row >> free) & 1:
                    x |= 1 << col
            basis.append(GF2Vector(x, self.ncols))
        return basis

    def apply(self, x: GF2Vector) -> GF2Vector:
        """Matrix-vector product M x."""
        if x.length != self.ncols:
            raise ValueError(f"vector of length {x.length}, matrix has {self.ncols} columns")
        out = 0
        for i, r in enumerate(self.rows):
            if bin(r & x.value).count("1") & 1:
                out |= 1 << i
        return GF2Vector(out, len(self.rows))

    __matmul__ = apply

    def solve_affine(self, b: GF2Vector) -> tuple[GF2Vector, bool] | None:
        """Solve M x = b.

        Returns ``(x, unique)`` with ``unique`` true iff the kernel is trivial,
        or ``None`` when b is outside the column space.
        """
        if b.length != len(self.rows):
            raise ValueError(f"right-hand side has length {b.length}, matrix has {len(self.rows)} rows")
        n = self.ncols
        augmented = [r | (((b.value >> i) & 1) << n) for i, r in enumerate(self.rows)]
        reduced, pivots = rref_rows(augmented, n + 1)
        if pivots and pivots[-1] == n:
            return None
        x = 0
        for row, col in zip(reduced, pivots):
            if (row >> n) & 1:
                x |= 1 << col
        return GF2Vector(x, n), len(pivots) == n

    def inverse(self) -> "GF2Matrix":
        n = self.ncols
        if len(self.rows) != n:
            raise ValueError(f"matrix of shape {self.shape} is not square")
        augmented = [r | (1 << (n + i)) for i, r in enumerate(self.rows)]
        reduced, pivots = rref_rows(augmented, 2 * n)
        if pivots[:n] != list(range(n)) or len(reduced) < n:
            raise ValueError("matrix is singular")
        return GF2Matrix(tuple(r >> n for r in reduced[:n]), n)

    def __mul__(self, other: "GF2Matrix") -> "GF2Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for r in self.rows:
            acc = 0
            k = 0
            while r:
                if r & 1:
                    acc ^= other.rows[k]
                r >>= 1
                k += 1
            out.append(acc)
        return GF2Matrix(tuple(out), other.ncols)

    def __str__(self) -> str:
        return "\n".join(str(GF2Vector(r, self.ncols)) for r in self.rows)


def intersect_subspaces(a: Sequence[GF2Vector], b: Sequence[GF2Vector], n: int) -> list[GF2Vector]:
    """Basis (in RREF) of span(a) ∩ span(b) inside GF(2)^n."""
    a_rows = [_as_int(v, n) for v in a]
    b_rows = [_as_int(v, n) for v in b]
    # columns are the generators; kernel vectors (s, t) give sum s_i a_i = sum t_j b_j
    gens = a_rows + b_rows
    stacked = GF2Matrix(tuple(gens), n).transpose()
    common = []
    for k in stacked.kernel_basis():
        v = 0
        for i, row in enumerate(a_rows):
            if (k.value >> i) & 1:
                v ^= row
        common.append(v)
    reduced, _ = rref_rows(common, n)
    return [GF2Vector(r, n) for r in reduced]
