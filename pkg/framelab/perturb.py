"""
Subspace distances and the perturbation experiments: the hyperplane normal
estimate, the basis perturbation estimates and the non-density experiment
for weak phase retrievable frames.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger
from scipy import linalg as sla

from .config import DEFAULT_SETTINGS
from .errors import TooFewVectors, ZeroDimensional
from .frames import (
    Frame,
    coefficient_bound,
    equivalence_constants,
    unconditional_constant,
)
from .linalg import FLOAT_BACKEND
from .spark import Outcome
from .wpr import decide_wpr

DEFAULT_SWEEP = (0.5, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.001)


@dataclass(frozen=True, eq=False)
class Subspace:
    """
    A subspace of R^n stored by an orthonormal basis (the columns of
    `basis`, shape n x d)
    """

    basis: np.ndarray

    @classmethod
    def span(
        cls, vectors, tolerance: float = DEFAULT_SETTINGS.tolerance
    ) -> "Subspace":
        """
        Span of the given vectors (rows of an array or Vector objects)
        """
        rows = np.array(
            [
                v.to_numpy() if hasattr(v, "to_numpy") else v
                for v in vectors
            ],
            dtype=float,
        )
        return cls(sla.orth(rows.T, rcond=tolerance))

    @classmethod
    def hyperplane(cls, normal) -> "Subspace":
        normal = np.asarray(normal, dtype=float)
        return cls(sla.null_space(normal[None, :]))

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]


def _require_dimension(*subspaces: Subspace) -> None:
    for subspace in subspaces:
        if subspace.dim == 0:
            raise ZeroDimensional("the sphere of a zero subspace is empty")


def sphere_distance(first: Subspace, second: Subspace) -> float:
    """
    sup over unit x in `first` of the distance to the unit sphere of
    `second`.

    The nearest unit vector of `second` to a unit x is its normalized
    projection, at distance sqrt(2 - 2 ||P x||), so the supremum is
    sqrt(2 - 2 s) with s the smallest singular value of the cross-Gram
    matrix (zero when `first` has the larger dimension).

    Raises:
        ZeroDimensional: When either subspace is {0}.
    """
    _require_dimension(first, second)
    if first.dim > second.dim:
        smallest = 0.0
    else:
        cross = first.basis.T @ second.basis
        smallest = float(min(sla.svdvals(cross)))
    smallest = min(max(smallest, 0.0), 1.0)
    return math.sqrt(max(2.0 - 2.0 * smallest, 0.0))


def sampled_sphere_distance(
    first: Subspace,
    second: Subspace,
    samples: int = 10_000,
    seed: int = DEFAULT_SETTINGS.seed,
) -> float:
    """
    Sampling estimate of `sphere_distance` from below
    """
    _require_dimension(first, second)
    rng = np.random.default_rng(seed)
    coefficients = rng.standard_normal((samples, first.dim))
    coefficients /= np.linalg.norm(coefficients, axis=1, keepdims=True)
    points = coefficients @ first.basis.T
    projected = np.linalg.norm(points @ second.basis, axis=1)
    return float(np.max(np.sqrt(np.clip(2.0 - 2.0 * projected, 0.0, None))))


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Parameters of a randomized perturbation experiment

    Args:
        epsilon (float): Budget for the sum of per-vector perturbation norms.
        trials (int): Number of perturbed frames.
        seed (int): Seed of every random draw.
        max_denominator (int): Denominator cap when snapping to rationals.
    """

    epsilon: float
    trials: int = DEFAULT_SETTINGS.density_trials
    seed: int = DEFAULT_SETTINGS.seed
    max_denominator: int = DEFAULT_SETTINGS.rational_denominator

    def __post_init__(self):
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.trials <= 0:
            raise ValueError("trials must be positive")


@dataclass(frozen=True)
class NormalEstimateReport:
    """
    Outcome of the hyperplane normal estimate: min(||x-y||, ||x+y||) is
    below 6 d(X, Y)
    """

    trials: int
    violations: int
    max_ratio: float


@dataclass(frozen=True)
class PerturbationReport:
    """
    Outcome of the hyperplane and basis perturbation estimates
    """

    trials: int
    distance_violations: int
    equivalence_violations: int
    unconditional_violations: int
    max_distance_ratio: float
    max_unconditional_ratio: float


@dataclass(frozen=True)
class DensityReport:
    """
    Share of perturbed frames that fail weak phase retrieval

    Args:
        epsilon (float): Perturbation budget.
        trials (int): Frames drawn.
        failures (int): Frames deciding No.
        base_outcome (str): Decision on the (rationalized) base frame.
        coordinate (int): Coordinate where both x+y and x-y of the base
                          pair are bounded away from zero, if defined.
        delta (float): The margin at that coordinate.
    """

    epsilon: float
    trials: int
    failures: int
    base_outcome: str
    coordinate: Optional[int] = None
    delta: Optional[float] = None

    @property
    def fraction(self) -> float:
        return self.failures / self.trials


def _unit(vector: np.ndarray) -> np.ndarray:
    return vector / np.linalg.norm(vector)


def normal_gap(normal: np.ndarray, other: np.ndarray) -> tuple:
    """
    (d(X, Y), min(||x - y||, ||x + y||)) for the hyperplanes with the given
    normals
    """
    x, y = _unit(np.asarray(normal, float)), _unit(np.asarray(other, float))
    distance = sphere_distance(Subspace.hyperplane(x), Subspace.hyperplane(y))
    gap = min(np.linalg.norm(x - y), np.linalg.norm(x + y))
    return distance, float(gap)


def verify_normal_estimate(
    n: int,
    trials: int = 1000,
    seed: int = DEFAULT_SETTINGS.seed,
    slack: float = 1e-9,
) -> NormalEstimateReport:
    """
    Check on random hyperplane pairs that d(X, Y) < eps forces
    min(||x - y||, ||x + y||) < 6 eps for the unit normals.

    Each trial takes eps at its infimum d(X, Y), the strictest instance.
    """
    if n < 2:
        raise ValueError("hyperplanes need n >= 2")
    rng = np.random.default_rng(seed)
    violations, max_ratio = 0, 0.0
    for _ in range(trials):
        x = _unit(rng.standard_normal(n))
        size = 10 ** rng.uniform(-6, 0)
        y = _unit(x + size * _unit(rng.standard_normal(n)))
        if rng.random() < 0.5:
            y = -y
        distance, gap = normal_gap(x, y)
        if gap > 6 * distance + slack:
            violations += 1
        if distance > 0:
            max_ratio = max(max_ratio, gap / distance)
    logger.info(
        "normal estimate: {} violations in {} trials", violations, trials
    )
    return NormalEstimateReport(
        trials=trials, violations=violations, max_ratio=max_ratio
    )


def _perturb(
    rows: np.ndarray, epsilon: float, rng: np.random.Generator
) -> np.ndarray:
    """
    Move each row along a Gaussian direction; the norms of the moves sum to
    epsilon exactly
    """
    directions = rng.standard_normal(rows.shape)
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    weights = rng.dirichlet(np.ones(rows.shape[0]))
    return rows + (epsilon * weights)[:, None] * directions


def _unit_rows(rows: np.ndarray) -> np.ndarray:
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def verify_basis_perturbation(
    n: int,
    trials: int = 1000,
    seed: int = DEFAULT_SETTINGS.seed,
    slack: float = 1e-9,
) -> PerturbationReport:
    """
    Check the basis perturbation estimates on random instances.

    Hyperplanes: for a unit-norm basis {x_i} of a hyperplane X with
    coefficient bound B and a unit-norm family {y_i} spanning Y with
    sum ||x_i - y_i|| < eps, d(X, Y) < 2 eps B.

    Bases of R^n: with B bounding both the unconditional constant and the
    coefficient functionals of {x_i}, and eps B <= 1/10, the perturbed
    family {y_i} is (1 + eps B)-equivalent to {x_i} and has unconditional
    constant at most B (1 + eps B)^2.
    """
    if n < 2:
        raise ValueError("hyperplanes need n >= 2")
    rng = np.random.default_rng(seed)
    distance_bad = equivalence_bad = unconditional_bad = 0
    max_distance_ratio = max_unconditional_ratio = 0.0
    for _ in range(trials):
        normal = _unit(rng.standard_normal(n))
        hyperplane = Subspace.hyperplane(normal).basis
        x_rows = _unit_rows(
            rng.standard_normal((n - 1, n - 1)) @ hyperplane.T
        )
        bound = coefficient_bound(Frame.from_rows(x_rows, FLOAT_BACKEND))
        moved = _unit_rows(
            _perturb(x_rows, 10 ** rng.uniform(-4, -1) / bound, rng)
        )
        epsilon = float(np.sum(np.linalg.norm(x_rows - moved, axis=1)))
        distance = sphere_distance(
            Subspace(sla.orth(x_rows.T)), Subspace.span(moved)
        )
        if distance > 2 * epsilon * bound + slack:
            distance_bad += 1
        if epsilon > 0:
            max_distance_ratio = max(
                max_distance_ratio, distance / (2 * epsilon * bound)
            )

        base = Frame.from_rows(
            _unit_rows(rng.standard_normal((n, n))), FLOAT_BACKEND
        )
        bound = max(unconditional_constant(base), coefficient_bound(base))
        epsilon = 10 ** rng.uniform(-4, -1) / bound
        other = Frame.from_rows(
            _perturb(base.to_numpy(), epsilon * (1 - 1e-9), rng),
            FLOAT_BACKEND,
        )
        lower, upper = equivalence_constants(base, other)
        spread = epsilon * bound
        if upper > 1 + spread + slack or lower < 1 - spread - slack:
            equivalence_bad += 1
        limit = bound * (1 + spread) ** 2
        constant = unconditional_constant(other)
        if constant > limit + slack:
            unconditional_bad += 1
        max_unconditional_ratio = max(
            max_unconditional_ratio, constant / limit
        )
    logger.info(
        "basis perturbation: {} / {} / {} violations in {} trials",
        distance_bad,
        equivalence_bad,
        unconditional_bad,
        trials,
    )
    return PerturbationReport(
        trials=trials,
        distance_violations=distance_bad,
        equivalence_violations=equivalence_bad,
        unconditional_violations=unconditional_bad,
        max_distance_ratio=max_distance_ratio,
        max_unconditional_ratio=max_unconditional_ratio,
    )


def density_base_frame() -> Frame:
    """
    e_1, e_2, e_3 and (1, 1, 1)/sqrt(3): full spark at m = 2n-2 with a
    canonical member, so it fails weak phase retrieval robustly
    """
    rows = np.vstack([np.eye(3), np.full((1, 3), 1 / math.sqrt(3))])
    return Frame.from_rows(rows, FLOAT_BACKEND)


def repeat_to_size(frame: Frame, m: int) -> Frame:
    """
    Repeat the vectors of `frame` cyclically until there are m of them
    """
    return Frame(tuple(frame[i % frame.m] for i in range(m)))


def _base_margin(rows: np.ndarray, n: int) -> tuple:
    """
    Coordinate j and margin delta with |(x+y)(j)|, |(x-y)(j)| >= delta for
    unit x, y orthogonal to the first n-1 and the next n-1 vectors
    """
    first = sla.null_space(rows[: n - 1])
    second = sla.null_space(rows[n - 1 : 2 * n - 2])
    if first.shape[1] != 1 or second.shape[1] != 1:
        return None, None
    x, y = first[:, 0], second[:, 0]
    margins = np.minimum(np.abs(x + y), np.abs(x - y))
    coordinate = int(np.argmax(margins))
    return coordinate, float(margins[coordinate])


def _normalize_base(frame: Frame) -> Frame:
    target = 2 * frame.n - 2
    if frame.m < target:
        raise TooFewVectors(
            f"the experiment needs m >= 2n-2 = {target}, got {frame.m}"
        )
    if frame.m > target:
        logger.warning(
            "using the first {} vectors repeated to {} vectors",
            target,
            frame.m,
        )
        return repeat_to_size(Frame(frame.vectors[:target]), frame.m)
    return frame


def density_experiment(
    frame: Frame, config: ExperimentConfig
) -> DensityReport:
    """
    Perturb a frame within a sum-of-norms budget and count how many
    perturbed frames fail weak phase retrieval.

    Perturbed frames are snapped to rationals before the exact decision.
    """
    base = _normalize_base(frame)
    rows = base.to_numpy()
    rng = np.random.default_rng(config.seed)
    base_decision = decide_wpr(
        base.rationalized(config.max_denominator), seed=config.seed
    )
    failures = 0
    for _ in range(config.trials):
        moved = _perturb(rows, config.epsilon, rng)
        candidate = Frame.from_rows(moved, FLOAT_BACKEND).rationalized(
            config.max_denominator
        )
        if decide_wpr(candidate, seed=config.seed).outcome is Outcome.NO:
            failures += 1
    coordinate, delta = _base_margin(rows, base.n)
    logger.info(
        "density at eps={}: {}/{} fail",
        config.epsilon,
        failures,
        config.trials,
    )
    return DensityReport(
        epsilon=config.epsilon,
        trials=config.trials,
        failures=failures,
        base_outcome=base_decision.outcome.value,
        coordinate=coordinate,
        delta=delta,
    )


def density_sweep(
    frame: Frame,
    config: ExperimentConfig,
    epsilons: Sequence[float] = DEFAULT_SWEEP,
) -> tuple:
    """
    Run the density experiment for decreasing epsilon until every perturbed
    frame fails.

    Returns (tuple): (table, threshold) where `table` is a DataFrame with one
    row per epsilon tried and `threshold` the first epsilon with failure
    fraction 1.0 (None if never reached).
    """
    records, threshold = [], None
    for epsilon in sorted(epsilons, reverse=True):
        report = density_experiment(frame, replace(config, epsilon=epsilon))
        records.append(
            {
                "epsilon": epsilon,
                "trials": report.trials,
                "failures": report.failures,
                "fraction": report.fraction,
            }
        )
        if report.failures == report.trials:
            threshold = epsilon
            break
    return pd.DataFrame.from_records(records), threshold
