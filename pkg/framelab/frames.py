"""
Frames and their quantitative constants: frame bounds, Riesz bounds and
unconditional basis constants
"""

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from loguru import logger
from scipy import linalg as sla

from .config import DEFAULT_SETTINGS
from .errors import DependentFamily, LengthMismatch, NotABasis, SizeLimit
from .linalg import (
    EXACT_BACKEND,
    FLOAT_BACKEND,
    Backend,
    Matrix,
    Vector,
    rank,
    singular_values,
)


@dataclass(frozen=True)
class Frame:
    """
    An ordered family of m vectors in R^n.

    Spanning is not required: non-spanning families are legal inputs and the
    operations report it.
    """

    vectors: tuple

    def __post_init__(self):
        vectors = tuple(self.vectors)
        if not vectors:
            raise ValueError("a frame needs at least one vector")
        # Matrix validates lengths and backends.
        Matrix(vectors)
        object.__setattr__(self, "vectors", vectors)

    @classmethod
    def from_rows(
        cls, rows: Iterable[Iterable], backend: Backend = EXACT_BACKEND
    ) -> "Frame":
        return cls(Matrix.from_rows(rows, backend).rows)

    @property
    def backend(self) -> Backend:
        return self.vectors[0].backend

    @property
    def m(self) -> int:
        return len(self.vectors)

    @property
    def n(self) -> int:
        return len(self.vectors[0])

    @property
    def matrix(self) -> Matrix:
        """
        The m x n matrix whose rows are the frame vectors
        """
        return Matrix(self.vectors)

    def __len__(self) -> int:
        return self.m

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, index: int) -> Vector:
        return self.vectors[index]

    def subset(self, indices: Iterable[int]) -> tuple:
        return tuple(self.vectors[i] for i in indices)

    def scaled(self, factors: Sequence) -> "Frame":
        """
        Multiply vector i by factors[i]
        """
        if len(factors) != self.m:
            raise LengthMismatch(f"{len(factors)} factors for {self.m}")
        return Frame(tuple(v.scaled(c) for v, c in zip(self.vectors, factors)))

    def with_backend(
        self,
        backend: Backend,
        max_denominator: int = DEFAULT_SETTINGS.rational_denominator,
    ) -> "Frame":
        return Frame(
            tuple(v.as_backend(backend, max_denominator) for v in self.vectors)
        )

    def rationalized(
        self, max_denominator: int = DEFAULT_SETTINGS.rational_denominator
    ) -> "Frame":
        """
        Exact copy with float entries snapped to bounded-denominator
        rationals
        """
        return self.with_backend(EXACT_BACKEND, max_denominator)

    def to_numpy(self) -> np.ndarray:
        return self.matrix.to_numpy()

    def spans(self) -> bool:
        return rank(self.matrix) == self.n


@dataclass(frozen=True)
class FrameBounds:
    """
    Lower and upper frame (or Riesz) bounds

    Args:
        lower (float): A, the lower bound.
        upper (float): B, the upper bound.
        tight (bool): A and B agree within tolerance.
        parseval (bool): Tight with A = 1 within tolerance.
    """

    lower: float
    upper: float
    tight: bool = False
    parseval: bool = False


def _bounds(lower: float, upper: float, tolerance: float) -> FrameBounds:
    tight = upper - lower <= tolerance * upper
    return FrameBounds(
        lower=lower,
        upper=upper,
        tight=tight,
        parseval=tight and abs(lower - 1.0) <= tolerance,
    )


def frame_bounds(frame: Frame, tolerance: float = None) -> FrameBounds:
    """
    Optimal frame bounds: the extreme eigenvalues of the frame operator.

    Args:
        frame (Frame): The family.
        tolerance (float): Tightness tolerance (defaults to the backend's).

    Returns (FrameBounds): A > 0 exactly when the family spans.
    """
    tol = frame.backend.tolerance if tolerance is None else tolerance
    synthesis = frame.to_numpy()
    eigenvalues = sla.eigvalsh(synthesis.T @ synthesis)
    lower = max(float(eigenvalues[0]), 0.0)
    upper = max(float(eigenvalues[-1]), 0.0)
    if rank(frame.matrix) < frame.n:
        lower = 0.0
    return _bounds(lower, upper, tol)


def riesz_bounds(frame: Frame, tolerance: float = None) -> FrameBounds:
    """
    Optimal Riesz bounds of a linearly independent family

    Raises:
        DependentFamily: When the vectors are linearly dependent.
    """
    if rank(frame.matrix) < frame.m:
        raise DependentFamily(
            f"{frame.m} vectors span only a "
            f"{rank(frame.matrix)}-dimensional space"
        )
    tol = frame.backend.tolerance if tolerance is None else tolerance
    values = singular_values(frame.matrix)
    return _bounds(values[-1] ** 2, values[0] ** 2, tol)


def _require_basis(frame: Frame) -> np.ndarray:
    if frame.m != frame.n or rank(frame.matrix) < frame.n:
        raise NotABasis(
            f"{frame.m} vectors of rank {rank(frame.matrix)} in "
            f"R^{frame.n} are not a basis"
        )
    return frame.to_numpy().T


def unconditional_constant(
    frame: Frame,
    max_dimension: int = DEFAULT_SETTINGS.max_unconditional_dimension,
) -> float:
    """
    Unconditional basis constant by brute force over sign patterns.

    The constant is the largest operator norm of T D T^-1 over diagonal sign
    matrices D, where T has the basis vectors as columns. Flipping every sign
    gives the same norm, so the first sign is pinned to +1.

    Raises:
        NotABasis: When the family is not a basis of R^n.
        SizeLimit: When n exceeds `max_dimension`.
    """
    synthesis = _require_basis(frame)
    n = frame.n
    if n > max_dimension:
        raise SizeLimit(
            f"2^{n} sign patterns exceed the cap of n <= {max_dimension}"
        )
    inverse = np.linalg.inv(synthesis)
    best = 1.0
    for tail in itertools.product((1.0, -1.0), repeat=n - 1):
        signs = np.array((1.0,) + tail)
        flipped = synthesis @ (signs[:, None] * inverse)
        best = max(best, float(np.linalg.norm(flipped, 2)))
    logger.debug("unconditional constant of {} vectors: {}", n, best)
    return best


def coefficient_bound(frame: Frame) -> float:
    """
    Largest norm of a coefficient functional of an independent family.

    For x = sum a_i x_i in the span, |a_i| <= bound * ||x||.
    """
    if rank(frame.matrix) < frame.m:
        raise DependentFamily("coefficients of a dependent family")
    functionals = np.linalg.pinv(frame.to_numpy().T)
    return float(np.max(np.linalg.norm(functionals, axis=1)))


def equivalence_constants(base: Frame, other: Frame) -> tuple:
    """
    Constants (c, C) with c ||sum a_i x_i|| <= ||sum a_i y_i|| <=
    C ||sum a_i x_i|| for all coefficients.

    Args:
        base (Frame): The independent family {x_i}.
        other (Frame): The family {y_i}, same size and dimension.

    Returns (tuple): (lower, upper) as floats.
    """
    if base.m != other.m or base.n != other.n:
        raise LengthMismatch("families of different shapes")
    if rank(base.matrix) < base.m:
        raise DependentFamily("the base family must be independent")
    base_synthesis = base.to_numpy().T
    other_synthesis = other.to_numpy().T
    span = sla.orth(base_synthesis)
    transfer = other_synthesis @ np.linalg.pinv(base_synthesis) @ span
    values = sla.svdvals(transfer)
    return float(values[-1]), float(values[0])


def transform_frame(frame: Frame, operator: Matrix) -> Frame:
    """
    The family {R x_i} for a square operator R
    """
    if operator.shape != (frame.n, frame.n):
        raise LengthMismatch(
            f"operator of shape {operator.shape} on R^{frame.n}"
        )
    if operator.backend != frame.backend:
        operator = Matrix(
            tuple(r.as_backend(FLOAT_BACKEND) for r in operator.rows)
        )
        frame = frame.with_backend(FLOAT_BACKEND)
    return Frame(tuple(operator.apply(v) for v in frame.vectors))
