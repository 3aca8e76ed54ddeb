"""
Randomized constructions (each verified before it is returned) and the
registry of worked example frames
"""

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from .config import DEFAULT_SETTINGS
from .errors import PairNotBad, RetryLimit, SizeLimit, TooFewVectors
from .frames import Frame
from .linalg import (
    EXACT_BACKEND,
    Matrix,
    Vector,
    determinant,
    inverse,
    nullspace_basis,
    rank,
)
from .spark import Outcome, is_full_spark
from .wpr import decide_wpr, measurements_agree, weakly_same_phase

ENTRY_RANGE = 100


def _integers(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.integers(-ENTRY_RANGE, ENTRY_RANGE + 1, size=shape)


def _product(left: Matrix, right: Matrix) -> Matrix:
    columns = right.transpose()
    return Matrix(tuple(columns.apply(row) for row in left.rows))


def _orthogonal(n: int, rng: np.random.Generator) -> Matrix:
    """
    A random exactly orthogonal rational matrix, the Cayley transform
    (I - S)(I + S)^-1 of a skew-symmetric integer matrix S
    """
    upper = np.triu(rng.integers(-9, 10, size=(n, n)), 1)
    skew = upper - upper.T
    identity = np.eye(n, dtype=int)
    return _product(
        Matrix.from_rows((identity - skew).tolist()),
        inverse(Matrix.from_rows((identity + skew).tolist())),
    )


def generic_full_spark(
    m: int,
    n: int,
    seed: int = DEFAULT_SETTINGS.seed,
    orthonormal_tail: bool = False,
    retry_limit: int = DEFAULT_SETTINGS.retry_limit,
) -> Frame:
    """
    Sample an exact full spark frame of m vectors in R^n.

    Args:
        m (int): Number of vectors, at least n.
        n (int): Dimension.
        seed (int): Seed of the sampler.
        orthonormal_tail (bool): Return e_1, ..., e_n followed by m - n
                                 orthonormal vectors (rows of an exactly
                                 orthogonal rational matrix) instead of
                                 integer vectors.
        retry_limit (int): Samples before giving up.

    Raises:
        TooFewVectors: When m < n.
        RetryLimit: When no sample is full spark.
    """
    if m < n:
        raise TooFewVectors(f"full spark needs m >= n, got m={m}, n={n}")
    if orthonormal_tail and m - n > n:
        raise ValueError(f"at most {n} orthonormal vectors fit in R^{n}")
    rng = np.random.default_rng(seed)
    for attempt in range(retry_limit):
        if orthonormal_tail:
            head = Matrix.identity(n).rows
            frame = Frame(head + _orthogonal(n, rng).rows[: m - n])
        else:
            frame = Frame.from_rows(_integers(rng, (m, n)).tolist())
        if is_full_spark(frame):
            logger.info("full spark frame after {} attempts", attempt + 1)
            return frame
    raise RetryLimit(f"no full spark frame in {retry_limit} samples")


def _independent(vectors: Sequence[Vector]) -> bool:
    return rank(Matrix(tuple(vectors))) == len(vectors)


def projections_full_spark(frame: Frame) -> bool:
    """
    Exhaustive check that the restriction of the frame to every nonempty
    coordinate subset I is full spark in R^I
    """
    for size in range(1, frame.n + 1):
        k = min(size, frame.m)
        for coordinates in itertools.combinations(range(frame.n), size):
            restricted = [v.restrict(coordinates) for v in frame]
            for subset in itertools.combinations(restricted, k):
                if not _independent(subset):
                    return False
    return True


def _extends(accepted: list, candidate: Vector, n: int) -> bool:
    """
    The projected families through the new vector are all independent;
    families of earlier vectors were checked when those were accepted
    """
    for size in range(1, n + 1):
        k = min(size, len(accepted) + 1)
        for coordinates in itertools.combinations(range(n), size):
            new = candidate.restrict(coordinates)
            old = [v.restrict(coordinates) for v in accepted]
            for subset in itertools.combinations(old, k - 1):
                if not _independent(subset + (new,)):
                    return False
    return True


def projection_family(
    m: int,
    n: int,
    seed: int = DEFAULT_SETTINGS.seed,
    max_n: int = DEFAULT_SETTINGS.projection_max_n,
    max_m: int = DEFAULT_SETTINGS.projection_max_m,
    retry_limit: int = DEFAULT_SETTINGS.retry_limit,
) -> Frame:
    """
    Build m vectors in R^n whose restriction to every coordinate subset is
    full spark.

    The family starts from (1, 1, ..., 1) and grows one accepted candidate
    at a time. No vector of the result has a zero coordinate.

    Raises:
        SizeLimit: When n > max_n or m > max_m.
        RetryLimit: When a vector cannot be placed.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if n > max_n or m > max_m:
        raise SizeLimit(
            f"projection family capped at n <= {max_n}, m <= {max_m}"
        )
    rng = np.random.default_rng(seed)
    accepted = [Vector.of([1] * n)]
    while len(accepted) < m:
        for _ in range(retry_limit):
            candidate = Vector.of(_integers(rng, n).tolist())
            if _extends(accepted, candidate, n):
                accepted.append(candidate)
                break
        else:
            raise RetryLimit(
                f"vector {len(accepted) + 1} not placed after {retry_limit}"
            )
    frame = Frame(tuple(accepted))
    if not projections_full_spark(frame):
        raise RetryLimit("constructed family failed its verification")
    logger.info("projection family of {} vectors in R^{}", m, n)
    return frame


def _mixed_complement(
    vector: Vector, rng: np.random.Generator, retry_limit: int
) -> tuple:
    """
    n-1 vectors spanning vector^perp: the exact nullspace basis mixed by a
    random invertible integer matrix
    """
    basis = nullspace_basis(Matrix((vector,)))
    size = len(basis)
    for _ in range(retry_limit):
        mixing = _integers(rng, (size, size)).tolist()
        if determinant(Matrix.from_rows(mixing)) != 0:
            break
    else:
        raise RetryLimit("no invertible mixing matrix")
    mixed = []
    for row in mixing:
        total = Vector.zeros(len(vector))
        for b, c in zip(basis, row):
            total = total + b.scaled(c)
        mixed.append(total)
    return tuple(mixed)


def failing_frame_from_pair(
    x: Vector,
    y: Vector,
    seed: int = DEFAULT_SETTINGS.seed,
    retry_limit: int = DEFAULT_SETTINGS.retry_limit,
) -> Frame:
    """
    A frame of 2n-2 vectors that fails weak phase retrieval because of the
    pair (x + y, x - y).

    The first n-1 vectors span x^perp and the last n-1 span y^perp, so
    x + y and x - y have the same measurement magnitudes.

    Raises:
        PairNotBad: When x + y and x - y weakly have the same phase.
    """
    x, y = x.as_backend(EXACT_BACKEND), y.as_backend(EXACT_BACKEND)
    total, difference = x + y, x - y
    if weakly_same_phase(total, difference).related:
        raise PairNotBad("x + y and x - y weakly have the same phase")
    rng = np.random.default_rng(seed)
    frame = Frame(
        _mixed_complement(x, rng, retry_limit)
        + _mixed_complement(y, rng, retry_limit)
    )
    if not measurements_agree(frame, total, difference):
        raise RetryLimit("constructed frame does not confuse the pair")
    if decide_wpr(frame, seed=seed).outcome is not Outcome.NO:
        raise RetryLimit("constructed frame passed weak phase retrieval")
    return frame


@dataclass(frozen=True)
class Example:
    """
    A named exact frame with the decisions it is known to have

    Args:
        name (str): Registry key.
        description (str): One-line summary.
        frame (Frame): The frame.
        expected (dict): Check name ("spark", "pr", "wpr") to Outcome.
        projections (dict): Zero-based coordinate subset to the expected
                            weak phase retrieval outcome of the projection.
    """

    name: str
    description: str
    frame: Frame
    expected: dict
    projections: dict = field(default_factory=dict)


def example_registry() -> dict:
    """
    The worked example frames, keyed by name in a fixed order
    """
    yes, no = Outcome.YES, Outcome.NO
    examples = [
        Example(
            "sign-matrix",
            "4x3 sign matrix; weak phase retrieval without phase retrieval",
            Frame.from_rows(
                [[1, 1, 1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]]
            ),
            {"spark": yes, "pr": no, "wpr": yes},
        ),
        Example(
            "contains-e2",
            "full spark at m = 2n-2 but containing e_2",
            Frame.from_rows(
                [[1, 2, 3], [0, 1, 0], [0, -2, 3], [1, -2, -3]]
            ),
            {"spark": yes, "pr": no, "wpr": no},
            {(0, 1): yes, (0, 2): yes, (1, 2): yes},
        ),
        Example(
            "basis2",
            "canonical basis of R^2",
            Frame.from_rows([[1, 0], [0, 1]]),
            {"spark": yes, "pr": no, "wpr": no},
        ),
        Example(
            "rotated-basis2",
            "the canonical basis rotated by 45 degrees (up to scale)",
            Frame.from_rows([[1, 1], [1, -1]]),
            {"spark": yes, "pr": no, "wpr": yes},
        ),
        Example(
            "pr-triple",
            "e_1, e_2, e_1 + e_2 in R^2",
            Frame.from_rows([[1, 0], [0, 1], [1, 1]]),
            {"spark": yes, "pr": yes, "wpr": yes},
        ),
    ]
    return {example.name: example for example in examples}


def get_example(name: str) -> Optional[Example]:
    return example_registry().get(name)
