"""Symmetric matrices over F_p and congruence transformations ``A -> R^t A R``.

Matrices are stored as tuples of row tuples of canonical ints in ``[0, p)``.
``Scalar`` objects appear only at the public boundary (``entry``,
``determinant``, diagonals) so elimination stays cheap.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionError, FieldDivisionError, PreconditionError, VerificationError
from .ffield import (
    PrimeModulus,
    ResidueClass,
    Scalar,
    as_modulus,
    legendre,
    residue_class_int,
    smallest_nonresidue_int,
    sqrt_int,
    two_square_split_int,
)

Rows = tuple[tuple[int, ...], ...]


# -- plain matrix helpers over F_p ------------------------------------------


def identity_rows(n: int) -> Rows:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: Rows) -> Rows:
    return tuple(zip(*a)) if a else ()


def _fits_int64(n: int, p: int) -> bool:
    return n * (p - 1) ** 2 < 2**62


def mat_mul(a: Rows, b: Rows, p: int) -> Rows:
    if a and len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    if a and b and _fits_int64(len(b), p):
        prod = np.array(a, dtype=np.int64) @ np.array(b, dtype=np.int64) % p
        return tuple(map(tuple, prod.tolist()))
    width = len(b[0]) if b else 0
    out = []
    # row-by-row accumulation skips zeros; adjacency inputs are mostly 0/1
    for row in a:
        acc = [0] * width
        for x, brow in zip(row, b):
            if x == 1:
                acc = [u + v for u, v in zip(acc, brow)]
            elif x:
                acc = [u + x * v for u, v in zip(acc, brow)]
        out.append(tuple(u % p for u in acc))
    return tuple(out)


def congruent(r: Rows, a: Rows, p: int) -> Rows:
    """Return ``R^t A R`` reduced mod p."""
    if r and _fits_int64(len(r), p):
        rm = np.array(r, dtype=np.int64)
        out = (rm.T @ np.array(a, dtype=np.int64) % p) @ rm % p
        return tuple(map(tuple, out.tolist()))
    return mat_mul(mat_mul(transpose(r), a, p), r, p)


def _echelon(a: Sequence[Sequence[int]], p: int) -> tuple[int, int]:
    """Forward elimination; returns (rank, determinant-if-square)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    det = 1
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if m[i][c] % p), None)
        if piv is None:
            det = 0
            continue
        if piv != rank:
            m[rank], m[piv] = m[piv], m[rank]
            det = -det
        pv = m[rank][c] % p
        det = det * pv % p
        pinv = pow(pv, -1, p)
        for i in range(rank + 1, rows):
            f = m[i][c] * pinv % p
            if f:
                ri, rr = m[i], m[rank]
                for j in range(c, cols):
                    ri[j] = (ri[j] - f * rr[j]) % p
        rank += 1
    return rank, det % p


def det_mod(a: Rows, p: int) -> int:
    if not a:
        return 1
    return _echelon(a, p)[1]


def rank_mod(a: Rows, p: int) -> int:
    return _echelon(a, p)[0] if a else 0


def inverse_mod(a: Rows, p: int) -> Rows:
    """Gauss-Jordan inverse over F_p."""
    n = len(a)
    m = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] % p), None)
        if piv is None:
            raise FieldDivisionError("matrix is singular over F_%d" % p)
        m[c], m[piv] = m[piv], m[c]
        pinv = pow(m[c][c], -1, p)
        m[c] = [x * pinv % p for x in m[c]]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def block_diag(blocks: Iterable[Rows]) -> Rows:
    blocks = list(blocks)
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            out[off + i][off : off + k] = b[i]
        off += k
    return tuple(tuple(row) for row in out)


def diag_rows(values: Sequence[int], p: int) -> Rows:
    n = len(values)
    return tuple(
        tuple(values[i] % p if i == j else 0 for j in range(n)) for i in range(n)
    )


# -- domain types -------------------------------------------------------------


@dataclass(frozen=True)
class SymMatrix:
    entries: Rows
    modulus: PrimeModulus

    def __post_init__(self):
        n = len(self.entries)
        p = self.modulus.p
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise DimensionError(f"row {i} has length {len(row)}, expected {n}")
            for j, v in enumerate(row):
                if not 0 <= v < p:
                    raise PreconditionError(f"entry ({i},{j}) = {v} not reduced mod {p}")
                if self.entries[j][i] != v:
                    raise PreconditionError(f"matrix is not symmetric at ({i},{j})")

    @classmethod
    def trusted(cls, entries: Rows, modulus: PrimeModulus) -> "SymMatrix":
        """Build without re-validating; for entries symmetric and reduced by construction."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "entries", entries)
        object.__setattr__(obj, "modulus", modulus)
        return obj

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], p: "int | PrimeModulus") -> "SymMatrix":
        m = as_modulus(p)
        return cls(tuple(tuple(int(v) % m.p for v in row) for row in rows), m)

    @classmethod
    def diagonal(cls, values: Sequence[int], p: "int | PrimeModulus") -> "SymMatrix":
        m = as_modulus(p)
        return cls(diag_rows(values, m.p), m)

    @classmethod
    def identity(cls, n: int, p: "int | PrimeModulus") -> "SymMatrix":
        return cls(identity_rows(n), as_modulus(p))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def p(self) -> int:
        return self.modulus.p

    def entry(self, i: int, j: int) -> Scalar:
        return Scalar(self.entries[i][j], self.modulus)

    def rank(self) -> int:
        return rank_mod(self.entries, self.p)

    def is_diagonal(self) -> bool:
        return all(
            v == 0 for i, row in enumerate(self.entries) for j, v in enumerate(row) if i != j
        )

    def diagonal_values(self) -> list[int]:
        return [self.entries[i][i] for i in range(self.n)]

    def direct_sum(self, other: "SymMatrix") -> "SymMatrix":
        if other.modulus != self.modulus:
            raise PreconditionError("direct sum of matrices over different fields")
        return SymMatrix(block_diag([self.entries, other.entries]), self.modulus)


def determinant(a: SymMatrix) -> Scalar:
    return Scalar(det_mod(a.entries, a.p), a.modulus)


@dataclass(frozen=True)
class CongruenceMap:
    """An invertible ``R`` with ``R^t source R == target``."""

    R: Rows
    source: SymMatrix
    target: SymMatrix

    @classmethod
    def from_matrix(cls, r: Rows, source: SymMatrix) -> "CongruenceMap":
        if len(r) != source.n:
            raise DimensionError(f"transform is {len(r)}x?, source is {source.n}x{source.n}")
        r = tuple(tuple(v % source.p for v in row) for row in r)
        target = SymMatrix(congruent(r, source.entries, source.p), source.modulus)
        return cls(r, source, target)

    @classmethod
    def identity(cls, a: SymMatrix) -> "CongruenceMap":
        return cls(identity_rows(a.n), a, a)

    @property
    def n(self) -> int:
        return len(self.R)

    def is_valid(self) -> bool:
        p = self.source.p
        return (
            len(self.R) == self.source.n == self.target.n
            and det_mod(self.R, p) != 0
            and congruent(self.R, self.source.entries, p) == self.target.entries
        )


def compose(first: CongruenceMap, second: CongruenceMap) -> CongruenceMap:
    """Apply ``first`` then ``second``: ``(R1 R2)^t A (R1 R2)``."""
    if first.n != second.n:
        raise DimensionError(f"cannot compose {first.n}x{first.n} with {second.n}x{second.n}")
    if first.target != second.source:
        raise PreconditionError("target of the first map is not the source of the second")
    p = first.source.p
    return CongruenceMap(mat_mul(first.R, second.R, p), first.source, second.target)


def invert(m: CongruenceMap) -> CongruenceMap:
    return CongruenceMap(inverse_mod(m.R, m.source.p), m.target, m.source)


# -- diagonalization ----------------------------------------------------------


def _diagonalize(a: Rows, p: int) -> tuple[list[list[int]], list[int]]:
    """Symmetric Gaussian elimination. Returns (R as mutable rows, diagonal).

    Nonzero pivots are taken in first-found order; zero diagonal entries
    therefore collect at the end.
    """
    n = len(a)
    m = [list(row) for row in a]
    r = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap(i: int, j: int) -> None:
        m[i], m[j] = m[j], m[i]
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in r:
            row[i], row[j] = row[j], row[i]

    def add_col(dst: int, src: int, c: int) -> None:
        # col_dst += c * col_src, mirrored on rows
        for row in m:
            row[dst] = (row[dst] + c * row[src]) % p
        md, ms = m[dst], m[src]
        for j in range(n):
            md[j] = (md[j] + c * ms[j]) % p
        for row in r:
            row[dst] = (row[dst] + c * row[src]) % p

    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][i]), None)
        if piv is None:
            pair = next(
                ((i, j) for i in range(k, n) for j in range(i + 1, n) if m[i][j]), None
            )
            if pair is None:
                break
            i, j = pair
            # diagonal is zero here, so the new (i, i) entry is 2c * a_ij == 1
            add_col(i, j, pow(2 * m[i][j], -1, p))
            piv = i
        if piv != k:
            swap(piv, k)
        pinv = pow(m[k][k], -1, p)
        for j in range(k + 1, n):
            if m[j][k]:
                add_col(j, k, -m[j][k] * pinv % p)
    return r, [m[i][i] for i in range(n)]


def congruence_diagonalize(a: SymMatrix) -> tuple[CongruenceMap, list[Scalar]]:
    a.modulus.require_odd()
    r, d = _diagonalize(a.entries, a.p)
    rr = tuple(tuple(row) for row in r)
    target = SymMatrix(diag_rows(d, a.p), a.modulus)
    return CongruenceMap(rr, a, target), [Scalar(v, a.modulus) for v in d]


def _pair_rescale_int(x: int, p: int) -> tuple[tuple[int, int], tuple[int, int]]:
    x %= p
    if x == 0:
        raise PreconditionError("pair_rescale needs a nonzero scalar")
    if legendre(x, p) == 1:
        s = sqrt_int(x, p)
        return ((s, 0), (0, s))
    a, b = two_square_split_int(x, p)
    sa, sb = sqrt_int(a, p), sqrt_int(b, p)
    return ((sa, sb), (-sb % p, sa))


def pair_rescale(x: Scalar) -> CongruenceMap:
    """2x2 map taking the identity to ``x * I``.

    For a residue the map is ``sqrt(x) * I``. For a nonresidue, split
    ``x = a + b`` into residues and use the rotation-like matrix
    ``[[sqrt a, sqrt b], [-sqrt b, sqrt a]]``.
    """
    x.modulus.require_odd()
    m = _pair_rescale_int(x.value, x.modulus.p)
    src = SymMatrix.identity(2, x.modulus)
    return CongruenceMap(m, src, SymMatrix.diagonal([x.value, x.value], x.modulus))


class Tail(enum.Enum):
    EMPTY = "empty"
    ALL_ONES = "all_ones"
    ONES_THEN_T = "ones_then_t"


@dataclass(frozen=True)
class CanonicalForm:
    n: int
    rank: int
    tail: Tail
    t: int | None
    cls: ResidueClass
    p: int

    def diagonal(self) -> list[int]:
        if self.rank == 0:
            return [0] * self.n
        last = 1 if self.tail is Tail.ALL_ONES else self.t
        return [1] * (self.rank - 1) + [last] + [0] * (self.n - self.rank)

    def matrix(self) -> SymMatrix:
        return SymMatrix.diagonal(self.diagonal(), self.p)


def canonical_form(n: int, rank: int, cls: ResidueClass, p: int) -> CanonicalForm:
    if rank == 0:
        return CanonicalForm(n, 0, Tail.EMPTY, None, ResidueClass.ZERO, p)
    if cls is ResidueClass.RESIDUE:
        return CanonicalForm(n, rank, Tail.ALL_ONES, None, cls, p)
    return CanonicalForm(n, rank, Tail.ONES_THEN_T, smallest_nonresidue_int(p), cls, p)


def _normalize_rows(a: Rows, p: int) -> tuple[list[list[int]], int, ResidueClass]:
    r, d = _diagonalize(a, p)
    rank = sum(1 for v in d if v)
    t = smallest_nonresidue_int(p)
    t_slots = []
    for i in range(rank):
        v = d[i]
        if legendre(v, p) == 1:
            s = sqrt_int(pow(v, -1, p), p)
        else:
            s = sqrt_int(t * pow(v, -1, p), p)
            t_slots.append(i)
        for row in r:
            row[i] = row[i] * s % p
    if len(t_slots) >= 2:
        # diag(t, t) -> I via the pair map for 1/t, which sends t*I to I
        (m00, m01), (m10, m11) = _pair_rescale_int(pow(t, -1, p), p)
        for i, j in zip(t_slots[0::2], t_slots[1::2]):
            for row in r:
                ri, rj = row[i], row[j]
                row[i] = (ri * m00 + rj * m10) % p
                row[j] = (ri * m01 + rj * m11) % p
    if len(t_slots) % 2:
        last = t_slots[-1]
        if last != rank - 1:
            for row in r:
                row[last], row[rank - 1] = row[rank - 1], row[last]
        cls = ResidueClass.NONRESIDUE
    else:
        cls = ResidueClass.RESIDUE if rank else ResidueClass.ZERO
    return r, rank, cls


def normalize(a: SymMatrix) -> tuple[CongruenceMap, CanonicalForm]:
    """Congruence to ``diag(1, ..., 1, [t,] 0, ..., 0)``, ``t`` the least nonresidue.

    The trailing entry before the zeros is ``t`` exactly when the product of
    the nonzero diagonal entries is a nonresidue.
    """
    a.modulus.require_odd()
    p = a.p
    r, rank, cls = _normalize_rows(a.entries, p)
    form = canonical_form(a.n, rank, cls, p)
    rr = tuple(tuple(row) for row in r)
    target = form.matrix()
    if congruent(rr, a.entries, p) != target.entries or (a.n and det_mod(rr, p) == 0):
        raise VerificationError("normalization produced an invalid transform")
    return CongruenceMap(rr, a, target), form


def canonical_class(a: SymMatrix) -> CanonicalForm:
    """The canonical form of ``a`` without building a transform."""
    a.modulus.require_odd()
    p = a.p
    _, d = _diagonalize(a.entries, p)
    nz = [v for v in d if v]
    prod = 1
    for v in nz:
        prod = prod * v % p
    cls = residue_class_int(prod, p) if nz else ResidueClass.ZERO
    return canonical_form(a.n, len(nz), cls, p)
