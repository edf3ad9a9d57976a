"""Exact linear algebra over the rationals.

Scalars are :class:`fractions.Fraction`; vectors are tuples of fractions.
Subspaces are stored by their reduced row-echelon basis, so two subspaces
are equal exactly when their stored bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vector = tuple  # tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


def as_fraction(value) -> Fraction:
    """Coerce ints, fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused; a float has already lost exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; pass a 'p/q' string")
    return Fraction(value)


def vec(*entries) -> Vector:
    return tuple(as_fraction(e) for e in entries)


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    if len(u) != len(v):
        raise DimensionError(f"length {len(u)} != {len(v)}")
    return tuple(a + b for a, b in zip(u, v))


def scale(c, u: Sequence[Fraction]) -> Vector:
    c = as_fraction(c)
    return tuple(c * a for a in u)


def combine(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], n: int) -> Vector:
    """Linear combination sum(c_i * v_i) in an n-dimensional space."""
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if not c:
            continue
        for k, a in enumerate(v):
            if a:
                out[k] += c * a
    return tuple(out)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def is_zero(u: Sequence[Fraction]) -> bool:
    return not any(u)


@dataclass(frozen=True)
class Matrix:
    """Dense rational matrix stored row-major as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: Optional[int] = None) -> "Matrix":
        data = tuple(tuple(as_fraction(a) for a in r) for r in rows)
        if cols is None:
            if not data:
                raise DimensionError("cannot infer the column count of an empty matrix")
            cols = len(data[0])
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(unit_vector(n, i) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, tuple(zero_vector(cols) for _ in range(rows)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(
            () for _ in range(self.cols)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for r in self.entries:
            acc = [ZERO] * other.cols
            for k, a in enumerate(r):
                if not a:
                    continue
                for j, b in enumerate(other.entries[k]):
                    if b:
                        acc[j] += a * b
            out.append(tuple(acc))
        return Matrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} for {self.cols} columns")
        return tuple(dot(r, v) for r in self.entries)

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionError("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), ZERO)

    def flatten(self) -> Vector:
        return tuple(a for r in self.entries for a in r)

    def __str__(self):
        return "\n".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.entries)


def _rref_rows(rows: list, ncols: int):
    """In-place Gauss-Jordan on a list of mutable rows; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r]
        inv = 1 / piv[c]
        if inv != 1:
            for k in range(c, ncols):
                if piv[k]:
                    piv[k] *= inv
        support = [k for k in range(c, ncols) if piv[k]]
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                row = rows[i]
                for k in support:
                    row[k] -= f * piv[k]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: Matrix) -> Matrix:
    """Reduced row-echelon form of ``m`` (same shape, zero rows at the bottom)."""
    rows = [list(r) for r in m.entries]
    _rref_rows(rows, m.cols)
    return Matrix(m.rows, m.cols, tuple(tuple(r) for r in rows))


def rank(m: Matrix) -> int:
    rows = [list(r) for r in m.entries]
    return len(_rref_rows(rows, m.cols))


def nullspace(m: Matrix) -> list:
    """Basis of {v : m v = 0}, one vector per free column."""
    rows = [list(r) for r in m.entries]
    pivots = _rref_rows(rows, m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[free] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][free]
        basis.append(tuple(v))
    return basis


def solve(m: Matrix, rhs: Sequence) -> Optional[Vector]:
    """A particular solution of ``m x = rhs``, or None when inconsistent.

    Free variables are set to zero.
    """
    if m.rows != len(rhs):
        raise DimensionError(f"{m.rows} rows but right-hand side of length {len(rhs)}")
    rows = [list(r) + [as_fraction(b)] for r, b in zip(m.entries, rhs)]
    pivots = _rref_rows(rows, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [ZERO] * m.cols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][m.cols]
    return tuple(x)


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^n, canonical by construction.

    Build instances with :func:`span`; the constructor trusts its input.
    """

    ambient_dim: int
    basis: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __contains__(self, v) -> bool:
        return contains(self, v)

    def __le__(self, other: "Subspace") -> bool:
        return is_subspace(self, other)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and is_subspace(self, other)

    def __add__(self, other: "Subspace") -> "Subspace":
        return sum_(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def pivots(self) -> tuple:
        return tuple(next(k for k, a in enumerate(b) if a) for b in self.basis)

    def coordinates(self, v: Sequence[Fraction]) -> Optional[Vector]:
        """Coefficients of ``v`` in the canonical basis, None when v is outside."""
        _check_len(self, v)
        coeffs = tuple(v[p] for p in self.pivots())
        if combine(coeffs, self.basis, self.ambient_dim) != tuple(v):
            return None
        return coeffs

    def sort_key(self):
        return (self.dim, self.basis)


def _check_len(s: Subspace, v: Sequence) -> None:
    if len(v) != s.ambient_dim:
        raise DimensionError(f"vector of length {len(v)} in ambient dimension {s.ambient_dim}")


def span(vectors: Iterable[Sequence], ambient_dim: Optional[int] = None) -> Subspace:
    vs = [tuple(as_fraction(a) for a in v) for v in vectors]
    if ambient_dim is None:
        if not vs:
            raise DimensionError("ambient dimension required for an empty spanning set")
        ambient_dim = len(vs[0])
    if any(len(v) != ambient_dim for v in vs):
        raise DimensionError("spanning vectors have mismatched lengths")
    rows = [list(v) for v in vs]
    pivots = _rref_rows(rows, ambient_dim)
    return Subspace(ambient_dim, tuple(tuple(r) for r in rows[: len(pivots)]))


def zero_subspace(n: int) -> Subspace:
    return Subspace(n, ())


def full_space(n: int) -> Subspace:
    return Subspace(n, tuple(unit_vector(n, i) for i in range(n)))


def _same_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions {a.ambient_dim} and {b.ambient_dim} differ")


def sum_(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    return span(a.basis + b.basis, a.ambient_dim)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """a ∩ b from the kernel of [A^T | -B^T]."""
    _same_ambient(a, b)
    n = a.ambient_dim
    if not a.basis or not b.basis:
        return zero_subspace(n)
    ka, kb = len(a.basis), len(b.basis)
    system = Matrix(n, ka + kb, tuple(
        tuple(a.basis[i][r] for i in range(ka)) + tuple(-b.basis[j][r] for j in range(kb))
        for r in range(n)))
    kernel = nullspace(system)
    return span((combine(k[:ka], a.basis, n) for k in kernel), n)


def contains(a: Subspace, v: Sequence) -> bool:
    _check_len(a, v)
    return a.coordinates(tuple(as_fraction(x) for x in v)) is not None


def is_subspace(a: Subspace, b: Subspace) -> bool:
    _same_ambient(a, b)
    return all(b.coordinates(v) is not None for v in a.basis)


def equals(a: Subspace, b: Subspace) -> bool:
    _same_ambient(a, b)
    return a.basis == b.basis


def complement_basis(s: Subspace) -> list:
    """Unit vectors on the non-pivot coordinates; together with s they span Q^n."""
    piv = set(s.pivots())
    return [unit_vector(s.ambient_dim, k) for k in range(s.ambient_dim) if k not in piv]


def annihilator(s: Subspace) -> list:
    """Basis of linear functionals vanishing on s (as row vectors)."""
    if not s.basis:
        return [unit_vector(s.ambient_dim, k) for k in range(s.ambient_dim)]
    return nullspace(Matrix(s.dim, s.ambient_dim, s.basis))
