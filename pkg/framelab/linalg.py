"""
Exact-rational and floating-point vectors and matrices.

Every decision in framelab is a zero/sign test, so the exact backend keeps
entries as ``fractions.Fraction`` and never rounds. The float backend stores
``float`` entries and carries the relative tolerance used by all of its rank
and zero tests.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

import numpy as np
from scipy import linalg as sla

from .config import DEFAULT_SETTINGS
from .errors import LengthMismatch, NotABasis

EXACT = "exact"
FLOAT = "float"

Scalar = Union[Fraction, float]


def to_fraction(value) -> Fraction:
    """
    Convert a number or a numeric string to an exact rational.

    Floats are read through their shortest decimal representation, so 0.1
    becomes 1/10 rather than its binary expansion.

    Args:
        value (int | float | str | Fraction): The value to convert.

    Returns (Fraction):
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot read {value!r} as a rational")


def rationalize(value, max_denominator: int) -> Fraction:
    """
    Snap a float to the closest rational with a bounded denominator
    """
    return Fraction(float(value)).limit_denominator(max_denominator)


@dataclass(frozen=True)
class Backend:
    """
    Scalar backend tag

    Args:
        name (str): Either "exact" or "float".
        tolerance (float): Relative zero tolerance (float backend only).
    """

    name: str = EXACT
    tolerance: float = DEFAULT_SETTINGS.tolerance

    def __post_init__(self):
        if self.name not in (EXACT, FLOAT):
            raise ValueError(f"unknown backend {self.name!r}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")

    @property
    def exact(self) -> bool:
        """
        True for the rational backend
        """
        return self.name == EXACT

    def coerce(self, value) -> Scalar:
        """
        Convert a value to this backend's scalar type
        """
        if self.exact:
            return to_fraction(value)
        if isinstance(value, str):
            return float(to_fraction(value))
        return float(value)

    def is_zero(self, value: Scalar, scale: float = 1.0) -> bool:
        """
        Zero test; on the float backend relative to `scale`, so only an
        exact zero passes at scale 0
        """
        if self.exact:
            return value == 0
        return abs(value) <= self.tolerance * scale

    def sign(self, value: Scalar, scale: float = 1.0) -> int:
        """
        Sign of a scalar, 0 when it tests as zero
        """
        if self.is_zero(value, scale):
            return 0
        return 1 if value > 0 else -1


EXACT_BACKEND = Backend(EXACT)
FLOAT_BACKEND = Backend(FLOAT)


@dataclass(frozen=True)
class Vector:
    """
    An immutable vector of backend scalars
    """

    entries: tuple
    backend: Backend = EXACT_BACKEND

    def __post_init__(self):
        entries = tuple(self.backend.coerce(v) for v in self.entries)
        if not entries:
            raise ValueError("a vector needs at least one entry")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, values: Iterable, backend: Backend = EXACT_BACKEND):
        """
        Build a vector from any iterable of numbers
        """
        return cls(tuple(values), backend)

    @classmethod
    def zeros(cls, n: int, backend: Backend = EXACT_BACKEND) -> "Vector":
        return cls((0,) * n, backend)

    @classmethod
    def basis(
        cls, n: int, index: int, backend: Backend = EXACT_BACKEND
    ) -> "Vector":
        """
        The canonical basis vector e_index of R^n (zero-based)
        """
        return cls(tuple(int(i == index) for i in range(n)), backend)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Scalar]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> Scalar:
        return self.entries[index]

    def __str__(self) -> str:
        return "(" + ", ".join(format_scalar(v) for v in self.entries) + ")"

    @property
    def magnitude(self) -> float:
        """
        Largest absolute entry as a float; the float backend's zero scale
        """
        return max(abs(float(v)) for v in self.entries)

    def _check(self, other: "Vector") -> None:
        if len(other) != len(self):
            raise LengthMismatch(
                f"vectors of length {len(self)} and {len(other)}"
            )

    def dot(self, other: "Vector") -> Scalar:
        self._check(other)
        total = self.backend.coerce(0)
        for a, b in zip(self.entries, other.entries):
            total += a * b
        return total

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(
            tuple(a + b for a, b in zip(self.entries, other.entries)),
            self.backend,
        )

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(
            tuple(a - b for a, b in zip(self.entries, other.entries)),
            self.backend,
        )

    def __neg__(self) -> "Vector":
        return Vector(tuple(-a for a in self.entries), self.backend)

    def scaled(self, factor) -> "Vector":
        factor = self.backend.coerce(factor)
        return Vector(tuple(factor * a for a in self.entries), self.backend)

    def norm_squared(self) -> Scalar:
        return self.dot(self)

    def norm(self) -> float:
        return math.sqrt(float(self.norm_squared()))

    def is_zero_at(self, index: int) -> bool:
        return self.backend.is_zero(self.entries[index], self.magnitude)

    def is_zero(self) -> bool:
        return all(self.is_zero_at(i) for i in range(len(self)))

    def sign_at(self, index: int) -> int:
        return self.backend.sign(self.entries[index], self.magnitude)

    def support(self) -> tuple:
        """
        Zero-based indices of the nonzero coordinates
        """
        return tuple(i for i in range(len(self)) if not self.is_zero_at(i))

    def restrict(self, indices: Sequence[int]) -> "Vector":
        """
        The coordinates listed in `indices`, in that order
        """
        return Vector(tuple(self.entries[i] for i in indices), self.backend)

    def normalized(self) -> "Vector":
        """
        Deterministic representative of the line through this vector.

        Exact vectors are divided by their first nonzero entry, so that entry
        becomes +1. Float vectors are scaled to unit norm with their first
        significant entry positive. The zero vector is returned unchanged.
        """
        support = self.support()
        if not support:
            return self
        lead = self.entries[support[0]]
        if self.backend.exact:
            return self.scaled(1 / lead)
        factor = (1.0 if lead > 0 else -1.0) / self.norm()
        return self.scaled(factor)

    def to_numpy(self) -> np.ndarray:
        return np.array([float(v) for v in self.entries], dtype=float)

    def as_backend(
        self,
        backend: Backend,
        max_denominator: int = DEFAULT_SETTINGS.rational_denominator,
    ) -> "Vector":
        """
        Convert to another backend; floats become bounded-denominator
        rationals on the way to the exact backend
        """
        if backend.exact and not self.backend.exact:
            return Vector(
                tuple(rationalize(v, max_denominator) for v in self.entries),
                backend,
            )
        return Vector(self.entries, backend)


@dataclass(frozen=True)
class Matrix:
    """
    A rectangular, backend-homogeneous stack of row vectors
    """

    rows: tuple

    def __post_init__(self):
        rows = tuple(self.rows)
        if not rows:
            raise ValueError("a matrix needs at least one row")
        width = len(rows[0])
        backend = rows[0].backend
        for row in rows:
            if len(row) != width:
                raise LengthMismatch("rows of a matrix must share a length")
            if row.backend != backend:
                raise ValueError("rows of a matrix must share a backend")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(
        cls, rows: Iterable[Iterable], backend: Backend = EXACT_BACKEND
    ) -> "Matrix":
        return cls(
            tuple(
                r if isinstance(r, Vector) else Vector.of(r, backend)
                for r in rows
            )
        )

    @classmethod
    def identity(cls, n: int, backend: Backend = EXACT_BACKEND) -> "Matrix":
        return cls(tuple(Vector.basis(n, i, backend) for i in range(n)))

    @property
    def backend(self) -> Backend:
        return self.rows[0].backend

    @property
    def shape(self) -> tuple:
        return len(self.rows), len(self.rows[0])

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self) -> Iterator[Vector]:
        return iter(self.rows)

    def __getitem__(self, index: int) -> Vector:
        return self.rows[index]

    def select(self, indices: Sequence[int]) -> "Matrix":
        return Matrix(tuple(self.rows[i] for i in indices))

    def apply(self, vector: Vector) -> Vector:
        """
        The product M v, i.e. the inner products of v with every row
        """
        return Vector(tuple(r.dot(vector) for r in self.rows), self.backend)

    def transpose(self) -> "Matrix":
        return Matrix(
            tuple(
                Vector(tuple(r[j] for r in self.rows), self.backend)
                for j in range(self.ncols)
            )
        )

    def to_numpy(self) -> np.ndarray:
        return np.array(
            [[float(v) for v in r.entries] for r in self.rows], dtype=float
        )


def format_scalar(value: Scalar) -> str:
    if isinstance(value, Fraction):
        return str(value)
    return format(value, ".12g")


def _integer_rows(matrix: Matrix) -> tuple:
    """
    Clear denominators row by row; returns the integer rows and the factor
    each row was multiplied by
    """
    rows, factors = [], []
    for row in matrix.rows:
        scale = math.lcm(*(v.denominator for v in row.entries))
        rows.append([int(v * scale) for v in row.entries])
        factors.append(scale)
    return rows, factors


def _bareiss(rows: list) -> tuple:
    """
    Fraction-free (Bareiss) row echelon reduction of an integer matrix,
    in place.

    Returns (rank, signed last pivot). For a square matrix of full rank the
    signed last pivot is its determinant.
    """
    nrows, ncols = len(rows), len(rows[0])
    rank, previous, sign = 0, 1, 1
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next(
            (r for r in range(rank, nrows) if rows[r][col] != 0), None
        )
        if pivot is None:
            continue
        if pivot != rank:
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            sign = -sign
        lead = rows[rank][col]
        for r in range(rank + 1, nrows):
            factor = rows[r][col]
            for c in range(col + 1, ncols):
                rows[r][c] = (
                    lead * rows[r][c] - factor * rows[rank][c]
                ) // previous
            rows[r][col] = 0
        previous = lead
        rank += 1
    return rank, sign * previous


def rank(matrix: Matrix, tolerance: float = None) -> int:
    """
    Rank of a matrix.

    Exact backend: Bareiss elimination over the integers. Float backend:
    number of singular values above tolerance times the largest one.
    """
    if matrix.backend.exact:
        rows, _ = _integer_rows(matrix)
        return _bareiss(rows)[0]
    values = singular_values(matrix)
    tol = matrix.backend.tolerance if tolerance is None else tolerance
    if values[0] == 0.0:
        return 0
    return sum(1 for v in values if v > tol * values[0])


def determinant(matrix: Matrix) -> Scalar:
    """
    Determinant of a square matrix (exact on the exact backend)
    """
    nrows, ncols = matrix.shape
    if nrows != ncols:
        raise LengthMismatch(f"determinant of a {nrows}x{ncols} matrix")
    if not matrix.backend.exact:
        return float(np.linalg.det(matrix.to_numpy()))
    rows, factors = _integer_rows(matrix)
    found, pivot = _bareiss(rows)
    if found < nrows:
        return Fraction(0)
    return Fraction(pivot, math.prod(factors))


def _rref(rows: list) -> list:
    """
    Gauss-Jordan reduction over the rationals, in place; returns the pivot
    columns
    """
    nrows, ncols = len(rows), len(rows[0])
    pivots = []
    for col in range(ncols):
        r = len(pivots)
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(nrows):
            factor = rows[i][col]
            if i != r and factor != 0:
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
    return pivots


def inverse(matrix: Matrix) -> Matrix:
    """
    Inverse of a square matrix, exact on the exact backend

    Raises:
        NotABasis: When the matrix is singular.
    """
    nrows, ncols = matrix.shape
    if nrows != ncols:
        raise LengthMismatch(f"inverse of a {nrows}x{ncols} matrix")
    backend = matrix.backend
    if not backend.exact:
        if rank(matrix) < nrows:
            raise NotABasis("singular matrix")
        return Matrix.from_rows(np.linalg.inv(matrix.to_numpy()), backend)
    rows = [
        list(r.entries) + [Fraction(int(i == j)) for j in range(nrows)]
        for i, r in enumerate(matrix.rows)
    ]
    if _rref(rows)[:nrows] != list(range(nrows)):
        raise NotABasis("singular matrix")
    return Matrix.from_rows((r[nrows:] for r in rows), backend)


def nullspace_basis(matrix: Matrix, tolerance: float = None) -> list:
    """
    Basis of {v : M v = 0}.

    On the exact backend the basis comes from the reduced echelon form, one
    vector per free column in index order, each scaled so its first nonzero
    entry is +1. On the float backend it is an orthonormal basis from the
    SVD.

    Args:
        matrix (Matrix): The matrix M.
        tolerance (float): Override of the float backend's tolerance.

    Returns (list): A list of Vector.
    """
    backend = matrix.backend
    ncols = matrix.ncols
    if not backend.exact:
        tol = backend.tolerance if tolerance is None else tolerance
        basis = sla.null_space(matrix.to_numpy(), rcond=tol)
        return [
            Vector.of(basis[:, k], backend).normalized()
            for k in range(basis.shape[1])
        ]
    rows = [list(r.entries) for r in matrix.rows]
    pivots = _rref(rows)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        entries = [Fraction(0)] * ncols
        entries[free] = Fraction(1)
        for k, col in enumerate(pivots):
            entries[col] = -rows[k][free]
        basis.append(Vector(tuple(entries), backend).normalized())
    return basis


def singular_values(matrix: Matrix) -> list:
    """
    Singular values in descending order (computed in floating point)
    """
    values = sla.svdvals(matrix.to_numpy())
    return sorted((max(float(v), 0.0) for v in values), reverse=True)


def span_rank(vectors: Sequence[Vector], n: int) -> int:
    """
    Dimension of the span of a possibly empty family in R^n
    """
    if not vectors:
        return 0
    return rank(Matrix(tuple(vectors)))


def orthogonal_complement(
    vectors: Sequence[Vector], n: int, backend: Backend = EXACT_BACKEND
) -> list:
    """
    Basis of the vectors orthogonal to every member of a possibly empty
    family in R^n
    """
    if not vectors:
        return [Vector.basis(n, i, backend) for i in range(n)]
    return nullspace_basis(Matrix(tuple(vectors)))
