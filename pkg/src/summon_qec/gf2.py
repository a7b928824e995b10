"""
Dense GF(2) linear algebra on packed bit vectors.

Vectors are stored as Python integers: bit ``i`` of the integer is coordinate
``i``.  XOR is addition, ``&`` followed by a popcount gives the inner product,
and Gaussian elimination works row-by-row on whole integers.  Edges of the
complete graph ``K_n`` are mapped to coordinates in row-major pair order
``(1,2), (1,3), ..., (1,n), (2,3), ...`` with 1-based vertex labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np


class InvalidEdgeError(ValueError):
    """Raised for a vertex pair that is not an edge of ``K_n``."""


class DimensionError(ValueError):
    """Raised when operand lengths do not agree."""


# ---------------------------------------------------------------------------
# Edge <-> coordinate isomorphism
# ---------------------------------------------------------------------------


def n_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(i: int, j: int, n: int) -> int:
    """Canonical coordinate of the undirected edge ``{i, j}`` of ``K_n``.

    Vertices are 1-based.  The order is row-major over pairs ``i < j``.

    Raises:
        InvalidEdgeError: if ``i == j`` or either vertex is outside ``[1, n]``.
    """
    if not (1 <= i <= n and 1 <= j <= n):
        raise InvalidEdgeError(f"vertex out of range for K_{n}: ({i}, {j})")
    if i == j:
        raise InvalidEdgeError(f"self-loop ({i}, {j}) is not an edge")
    a, b = (i, j) if i < j else (j, i)
    a0 = a - 1
    # edges whose smaller endpoint precedes a, then the offset inside row a
    return a0 * n - a0 * (a0 + 1) // 2 + (b - a - 1)


def edge_pair(index: int, n: int) -> tuple[int, int]:
    """Inverse of :func:`edge_index`; returns ``(i, j)`` with ``i < j``."""
    if not 0 <= index < n_edges(n):
        raise InvalidEdgeError(f"edge index {index} out of range for K_{n}")
    i = 1
    row = n - 1
    while index >= row:
        index -= row
        i += 1
        row -= 1
    return i, i + 1 + index


@dataclass(frozen=True)
class EdgeIndexMap:
    """Bijection between edges of ``K_n`` and ``range(C(n, 2))``."""

    n: int

    def __len__(self) -> int:
        return n_edges(self.n)

    def index(self, i: int, j: int) -> int:
        return edge_index(i, j, self.n)

    def pair(self, index: int) -> tuple[int, int]:
        return edge_pair(index, self.n)

    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(1, self.n + 1), 2))

    def label(self, index: int) -> str:
        i, j = self.pair(index)
        return f"e_{i}_{j}"

    def star(self, r: int) -> list[int]:
        """Coordinates of the edges adjacent to vertex ``r``, ascending."""
        return sorted(self.index(r, k) for k in range(1, self.n + 1) if k != r)


# ---------------------------------------------------------------------------
# Vectors and matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BitVector:
    """Fixed-length vector over GF(2), packed into an integer."""

    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0 or self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(0, length)

    @classmethod
    def ones(cls, length: int) -> BitVector:
        return cls((1 << length) - 1, length)

    @classmethod
    def unit(cls, index: int, length: int) -> BitVector:
        if not 0 <= index < length:
            raise DimensionError(f"index {index} outside length {length}")
        return cls(1 << index, length)

    @classmethod
    def from_indices(cls, indices: Iterable[int], length: int) -> BitVector:
        bits = 0
        for i in indices:
            if not 0 <= i < length:
                raise DimensionError(f"index {i} outside length {length}")
            bits ^= 1 << i
        return cls(bits, length)

    @classmethod
    def from_bits(cls, values: Iterable[int]) -> BitVector:
        values = list(values)
        return cls.from_indices((i for i, b in enumerate(values) if b & 1), len(values))

    @classmethod
    def from_string(cls, text: str) -> BitVector:
        """Parse ``"0110"``; the first character is coordinate 0."""
        return cls.from_bits(int(ch) for ch in text if ch in "01")

    def _check(self, other: BitVector) -> None:
        if self.length != other.length:
            raise DimensionError(f"length mismatch: {self.length} vs {other.length}")

    def __add__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.bits ^ other.bits, self.length)

    __xor__ = __add__

    def __and__(self, other: BitVector) -> BitVector:
        self._check(other)
        return BitVector(self.bits & other.bits, self.length)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.length))

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return "".join(str(b) for b in self)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def restrict(self, indices: Sequence[int]) -> BitVector:
        """Project onto ``indices``; output coordinate ``k`` is ``self[indices[k]]``."""
        return BitVector.from_bits(self[i] for i in indices)

    def to_array(self) -> np.ndarray:
        return np.fromiter(self, dtype=np.uint8, count=self.length)


def dot(u: BitVector, v: BitVector) -> int:
    """Inner product ``sum_i u_i v_i mod 2``."""
    u._check(v)
    return (u.bits & v.bits).bit_count() & 1


@dataclass(frozen=True)
class BitMatrix:
    """Matrix over GF(2) stored as a tuple of packed rows."""

    rows: tuple[BitVector, ...]
    ncols: int

    def __post_init__(self) -> None:
        for row in self.rows:
            if row.length != self.ncols:
                raise DimensionError(f"row of length {row.length} in matrix with {self.ncols} columns")

    @classmethod
    def from_rows(cls, rows: Iterable[BitVector], ncols: int | None = None) -> BitMatrix:
        rows = tuple(rows)
        if ncols is None:
            if not rows:
                raise DimensionError("ncols is required for an empty matrix")
            ncols = rows[0].length
        return cls(rows, ncols)

    @classmethod
    def from_array(cls, array) -> BitMatrix:
        a = np.atleast_2d(np.asarray(array, dtype=np.uint8) % 2)
        return cls(tuple(BitVector.from_bits(r) for r in a), a.shape[1])

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(tuple(BitVector.unit(i, n) for i in range(n)), n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(tuple(BitVector.zeros(ncols) for _ in range(nrows)), ncols)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[BitVector]:
        return iter(self.rows)

    def __getitem__(self, i: int) -> BitVector:
        return self.rows[i]

    def to_array(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.ncols), dtype=np.uint8)
        return np.stack([r.to_array() for r in self.rows])

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rows)


# ---------------------------------------------------------------------------
# Elimination kernels
# ---------------------------------------------------------------------------


def _echelon(rows: Iterable[int]) -> list[tuple[int, int]]:
    """Reduced echelon basis as ``(pivot_bit, row)`` pairs.

    Each pivot bit is the lowest set bit of its row and is cleared in every
    other basis row.
    """
    basis: list[tuple[int, int]] = []
    for row in rows:
        for pivot, b in basis:
            if (row >> pivot) & 1:
                row ^= b
        if row == 0:
            continue
        pivot = (row & -row).bit_length() - 1
        basis = [(p, b ^ row if (b >> pivot) & 1 else b) for p, b in basis]
        basis.append((pivot, row))
    return basis


def _reduce(v: int, basis: list[tuple[int, int]]) -> int:
    for pivot, b in basis:
        if (v >> pivot) & 1:
            v ^= b
    return v


def rank(m: BitMatrix) -> int:
    """Row rank over GF(2)."""
    return len(_echelon(r.bits for r in m.rows))


def row_basis(m: BitMatrix) -> BitMatrix:
    """An independent set of rows spanning the row space of ``m``."""
    basis = _echelon(r.bits for r in m.rows)
    return BitMatrix(tuple(BitVector(b, m.ncols) for _, b in sorted(basis)), m.ncols)


def in_span(v: BitVector, basis: BitMatrix) -> bool:
    """True iff ``v`` is a GF(2) combination of the rows of ``basis``."""
    if v.length != basis.ncols:
        raise DimensionError(f"vector length {v.length} vs matrix width {basis.ncols}")
    return _reduce(v.bits, _echelon(r.bits for r in basis.rows)) == 0


def span_contains(outer: BitMatrix, inner: BitMatrix) -> bool:
    """True iff every row of ``inner`` lies in the row space of ``outer``."""
    if outer.ncols != inner.ncols:
        raise DimensionError(f"width mismatch: {outer.ncols} vs {inner.ncols}")
    basis = _echelon(r.bits for r in outer.rows)
    return all(_reduce(r.bits, basis) == 0 for r in inner.rows)


def same_span(a: BitMatrix, b: BitMatrix) -> bool:
    return span_contains(a, b) and span_contains(b, a)


def kernel(m: BitMatrix) -> BitMatrix:
    """Basis of ``{v : dot(row, v) = 0 for every row}``.

    The result has ``ncols - rank(m)`` rows.
    """
    basis = _echelon(r.bits for r in m.rows)
    pivots = {p for p, _ in basis}
    out = []
    for free in range(m.ncols):
        if free in pivots:
            continue
        v = 1 << free
        for p, b in basis:
            if (b >> free) & 1:
                v |= 1 << p
        out.append(BitVector(v, m.ncols))
    return BitMatrix(tuple(out), m.ncols)


def span_elements(m: BitMatrix) -> list[BitVector]:
    """Every element of the row space (``2**rank`` vectors)."""
    basis = [b for _, b in _echelon(r.bits for r in m.rows)]
    elems = [0]
    for b in basis:
        elems += [e ^ b for e in elems]
    return [BitVector(e, m.ncols) for e in elems]
