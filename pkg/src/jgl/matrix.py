"""Exact matrices and subspaces over a :class:`~jgl.ring.Ring`.

Matrices are immutable tuples of row tuples.  Subspaces are stored as the
unique reduced row echelon basis with zero rows dropped, so equality of
subspaces is plain equality of representations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import RingError, ShapeError
from .ring import Ring


def vec_add(ring: Ring, u, v):
    return tuple(ring.add(a, b) for a, b in zip(u, v))


def vec_sub(ring: Ring, u, v):
    return tuple(ring.sub(a, b) for a, b in zip(u, v))


def vec_scale(ring: Ring, c, u):
    return tuple(ring.mul(c, a) for a in u)


def vec_is_zero(u) -> bool:
    return all(a == 0 for a in u)


@dataclass(frozen=True)
class Matrix:
    ring: Ring
    rows: int
    cols: int
    entries: tuple  # tuple of row tuples

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rows(ring: Ring, rows: Iterable[Iterable]) -> "Matrix":
        ents = tuple(tuple(ring.of(x) for x in row) for row in rows)
        ncols = len(ents[0]) if ents else 0
        if any(len(r) != ncols for r in ents):
            raise ShapeError("ragged rows")
        return Matrix(ring, len(ents), ncols, ents)

    @staticmethod
    def zero(ring: Ring, rows: int, cols: int) -> "Matrix":
        z = ring.zero
        return Matrix(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @staticmethod
    def identity(ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return Matrix(
            ring, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))
        )

    @staticmethod
    def column(ring: Ring, vec) -> "Matrix":
        return Matrix.from_rows(ring, [[x] for x in vec])

    # -- elementwise / structural ------------------------------------------

    def _check_same_shape(self, other: "Matrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols) or self.ring != other.ring:
            raise ShapeError("matrix shape or ring mismatch")

    def add(self, other: "Matrix") -> "Matrix":
        self._check_same_shape(other)
        r = self.ring
        return Matrix(
            self.ring,
            self.rows,
            self.cols,
            tuple(
                tuple(r.add(a, b) for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            ),
        )

    def sub(self, other: "Matrix") -> "Matrix":
        return self.add(other.scale(self.ring.neg(self.ring.one)))

    def scale(self, c) -> "Matrix":
        r = self.ring
        c = r.of(c)
        return Matrix(
            self.ring,
            self.rows,
            self.cols,
            tuple(tuple(r.mul(c, a) for a in row) for row in self.entries),
        )

    def mul(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows or self.ring != other.ring:
            raise ShapeError("matrix product shape mismatch")
        r = self.ring
        bt = tuple(zip(*other.entries)) if other.entries else ()
        out = []
        for row in self.entries:
            orow = []
            for col in bt:
                acc = r.zero
                for a, b in zip(row, col):
                    if a != 0 and b != 0:
                        acc = r.add(acc, r.mul(a, b))
                orow.append(acc)
            out.append(tuple(orow))
        return Matrix(self.ring, self.rows, other.cols, tuple(out))

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, self.cols, self.rows, tuple(zip(*self.entries)) if self.entries else ())

    def apply(self, vec) -> tuple:
        """Matrix times column vector (given and returned as a tuple)."""
        if len(vec) != self.cols:
            raise ShapeError("vector length mismatch")
        r = self.ring
        out = []
        for row in self.entries:
            acc = r.zero
            for a, x in zip(row, vec):
                if a != 0 and x != 0:
                    acc = r.add(acc, r.mul(a, x))
            out.append(acc)
        return tuple(out)

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def is_zero(self) -> bool:
        return all(vec_is_zero(row) for row in self.entries)

    def augment(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.ring != other.ring:
            raise ShapeError("augment shape mismatch")
        return Matrix(
            self.ring,
            self.rows,
            self.cols + other.cols,
            tuple(ra + rb for ra, rb in zip(self.entries, other.entries)),
        )

    def to_lists(self):
        return [list(row) for row in self.entries]

    # -- elimination --------------------------------------------------------

    def rref(self, drop_zero_rows: bool = True) -> "Matrix":
        rows, _ = _rref_rows(self.ring, [list(r) for r in self.entries], drop_zero_rows)
        return Matrix(self.ring, len(rows), self.cols, tuple(tuple(r) for r in rows))

    def rref_with_pivots(self, drop_zero_rows: bool = True):
        rows, piv = _rref_rows(self.ring, [list(r) for r in self.entries], drop_zero_rows)
        return Matrix(self.ring, len(rows), self.cols, tuple(tuple(r) for r in rows)), piv

    def column_echelon(self, drop_zero_cols: bool = True) -> "Matrix":
        return self.transpose().rref(drop_zero_cols).transpose()

    def rank(self) -> int:
        return self.rref().rows

    def solve(self, rhs: "Matrix") -> Optional["Matrix"]:
        """Particular solution X of self @ X = rhs (free variables 0), or None."""
        if rhs.rows != self.rows or rhs.ring != self.ring:
            raise ShapeError("solve shape mismatch")
        aug = self.augment(rhs)
        red, piv = aug.rref_with_pivots(drop_zero_rows=False)
        n = self.cols
        pivots = [p for p in piv if p < n]
        # inconsistent iff a pivot lands in the rhs block
        if any(p >= n for p in piv):
            return None
        r = self.ring
        z = r.zero
        sol = [[z] * rhs.cols for _ in range(n)]
        for i, p in enumerate(pivots):
            for j in range(rhs.cols):
                sol[p][j] = red.entries[i][n + j]
        return Matrix(self.ring, n, rhs.cols, tuple(tuple(row) for row in sol))

    def inverse(self) -> Optional["Matrix"]:
        if self.rows != self.cols:
            return None
        sol = self.solve(Matrix.identity(self.ring, self.rows))
        if sol is None:
            return None
        # solve() already guarantees consistency; verify rank by pivot count
        if self.rank() != self.rows:
            return None
        return sol

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def nullspace(self) -> "Matrix":
        """Rows form the canonical basis of the right kernel {v : self v = 0}."""
        red, piv = self.rref_with_pivots()
        r = self.ring
        z, o = r.zero, r.one
        free = [j for j in range(self.cols) if j not in piv]
        rows = []
        for f in free:
            v = [z] * self.cols
            v[f] = o
            for i, p in enumerate(piv):
                v[p] = r.neg(red.entries[i][f])
            rows.append(tuple(v))
        return Matrix(self.ring, len(rows), self.cols, tuple(rows))


def _rref_rows(ring: Ring, m: list, drop_zero_rows: bool):
    """In-place Gauss-Jordan; returns (rows, pivot column list)."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    piv_cols = []
    pr = 0
    for pc in range(ncols):
        pivot = None
        for i in range(pr, nrows):
            if m[i][pc] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[pr], m[pivot] = m[pivot], m[pr]
        inv = ring.inv(m[pr][pc])
        if inv != ring.one:
            m[pr] = [ring.mul(inv, x) for x in m[pr]]
        for i in range(nrows):
            if i != pr and m[i][pc] != 0:
                c = m[i][pc]
                m[i] = [ring.sub(x, ring.mul(c, y)) for x, y in zip(m[i], m[pr])]
        piv_cols.append(pc)
        pr += 1
        if pr == nrows:
            break
    if drop_zero_rows:
        m = [row for row in m[:pr]]
    return m, piv_cols


def canonical_form(m: Matrix, mode: str = "row") -> Matrix:
    """Reduced echelon form; ``mode`` selects row or column reduction.

    Idempotent, zero rows (columns) dropped, row (column) space preserved.
    """
    if not m.ring.is_field:
        raise RingError("canonical_form requires a field")
    if mode == "row":
        return m.rref()
    if mode == "column":
        return m.column_echelon()
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class Subspace:
    """Row space of a canonical (RREF, zero rows dropped) basis matrix."""

    ambient_dim: int
    basis: Matrix

    @staticmethod
    def from_vectors(ring: Ring, ambient_dim: int, vectors: Iterable[Iterable]) -> "Subspace":
        vecs = [tuple(ring.of(x) for x in v) for v in vectors]
        if any(len(v) != ambient_dim for v in vecs):
            raise ShapeError("vector length != ambient dimension")
        if not vecs:
            return Subspace(ambient_dim, Matrix(ring, 0, ambient_dim, ()))
        return Subspace(ambient_dim, Matrix.from_rows(ring, vecs).rref())

    @staticmethod
    def zero(ring: Ring, ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix(ring, 0, ambient_dim, ()))

    @staticmethod
    def full(ring: Ring, ambient_dim: int) -> "Subspace":
        return Subspace(ambient_dim, Matrix.identity(ring, ambient_dim))

    @property
    def ring(self) -> Ring:
        return self.basis.ring

    @property
    def dim(self) -> int:
        return self.basis.rows

    def contains(self, vec) -> bool:
        if self.dim == 0:
            return vec_is_zero(vec)
        sol = self.basis.transpose().solve(Matrix.column(self.ring, vec))
        return sol is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis.entries)

    def vectors(self):
        """All vectors of the subspace (finite fields only), lexicographic."""
        import itertools

        ring = self.ring
        if not ring.is_finite:
            raise RingError("vector enumeration needs a finite field")
        for coeffs in itertools.product(range(ring.p), repeat=self.dim):
            v = (ring.zero,) * self.ambient_dim
            for c, row in zip(coeffs, self.basis.entries):
                if c:
                    v = vec_add(ring, v, vec_scale(ring, c, row))
            yield v


def _check_compatible(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim or a.ring != b.ring:
        raise ShapeError("subspace ambient mismatch")


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_compatible(a, b)
    rows = list(a.basis.entries) + list(b.basis.entries)
    return Subspace.from_vectors(a.ring, a.ambient_dim, rows)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus: row reduce [A|A] over [B|0] and read the intersection block."""
    _check_compatible(a, b)
    ring = a.ring
    n = a.ambient_dim
    z = ring.zero
    block = [list(row) + list(row) for row in a.basis.entries]
    block += [list(row) + [z] * n for row in b.basis.entries]
    if not block:
        return Subspace.zero(ring, n)
    reduced, _ = _rref_rows(ring, block, drop_zero_rows=True)
    inter = [row[n:] for row in reduced if vec_is_zero(row[:n]) and not vec_is_zero(row[n:])]
    return Subspace.from_vectors(ring, n, inter)


def direct_sum_check(a: Subspace, b: Subspace) -> bool:
    _check_compatible(a, b)
    return a.dim + b.dim == a.ambient_dim and subspace_intersect(a, b).dim == 0


def complement_of(a: Subspace) -> Subspace:
    """A complement spanned by standard basis vectors at non-pivot columns."""
    _check_compatible(a, a)
    ring = a.ring
    _, piv = a.basis.rref_with_pivots()
    rows = []
    for j in range(a.ambient_dim):
        if j not in piv:
            v = [ring.zero] * a.ambient_dim
            v[j] = ring.one
            rows.append(v)
    return Subspace.from_vectors(ring, a.ambient_dim, rows)


def subspace_combine(a: Subspace, b: Subspace, kind: str):
    """Lattice operations used throughout the geometry modules."""
    if kind == "sum":
        return subspace_sum(a, b)
    if kind == "intersect":
        return subspace_intersect(a, b)
    if kind == "direct_sum_check":
        return direct_sum_check(a, b)
    if kind == "complement_of_a":
        return complement_of(a)
    raise ValueError(f"unknown kind {kind!r}")
