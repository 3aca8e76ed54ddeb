"""
Weak phase retrieval: the weak-phase relation between vectors, the decision
procedure with ambiguity-pair certificates, the five-set classification of
ambiguity pairs and the coordinate-projection equivalences.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from loguru import logger

from .config import DEFAULT_SETTINGS
from .errors import EmptyIndexSet, LengthMismatch, NotClassifiable
from .frames import Frame
from .linalg import Scalar, Vector, rationalize
from .spark import (
    Decision,
    Outcome,
    PartitionWitness,
    Rule,
    bad_partitions,
    does_phase_retrieval,
    is_full_spark,
    partition_sides,
)


@dataclass(frozen=True)
class WeakPhaseRelation:
    """
    Outcome of comparing the phases of two vectors

    Args:
        theta (int): +1 (same signs) or -1 (opposite signs) when related,
                     None otherwise.
        conflict (tuple): Zero-based coordinates (i, j) with
                          sgn(x_i x_j) != sgn(y_i y_j) when not related.
    """

    theta: Optional[int]
    conflict: Optional[tuple] = None

    @property
    def related(self) -> bool:
        return self.theta is not None


@dataclass(frozen=True)
class AmbiguityPair:
    """
    Vectors with |<x, x_i>| = |<y, x_i>| for every frame vector.

    Args:
        x (Vector): First vector.
        y (Vector): Second vector.
        signs (tuple): signs[i] with <x, x_i> = signs[i] * <y, x_i>.
        partition (tuple): Indices i with signs[i] = +1.
    """

    x: Vector
    y: Vector
    signs: tuple
    partition: tuple


@dataclass(frozen=True)
class Classification:
    """
    Five-set description of an ambiguity pair (x, y).

    Args:
        only_x (tuple): x(i) != 0, y(i) = 0.
        only_y (tuple): x(i) = 0, y(i) != 0.
        both_zero (tuple): x(i) = 0 = y(i).
        ratio (tuple): x(i) = a * y(i), both nonzero.
        inverse_ratio (tuple): x(i) = y(i) / a, both nonzero.
        a (Scalar): The nonzero constant.
        case (int): 1 when x = +-y, 2 when <x, y> = 0, 3 otherwise.
        exact_a (bool): False when `a` is an irrational value rounded to a
                        float.
    """

    only_x: tuple
    only_y: tuple
    both_zero: tuple
    ratio: tuple
    inverse_ratio: tuple
    a: Scalar
    case: int
    exact_a: bool = True

    @property
    def parts(self) -> tuple:
        return (
            self.only_x,
            self.only_y,
            self.both_zero,
            self.ratio,
            self.inverse_ratio,
        )

    def holds_for(self, x: Vector, y: Vector) -> bool:
        """
        Re-check every defining condition against the pair
        """
        covered = sorted(i for part in self.parts for i in part)
        if covered != list(range(len(x))) or self.a == 0:
            return False
        for i in self.only_x:
            if x.is_zero_at(i) or not y.is_zero_at(i):
                return False
        for i in self.only_y:
            if not x.is_zero_at(i) or y.is_zero_at(i):
                return False
        for i in self.both_zero:
            if not (x.is_zero_at(i) and y.is_zero_at(i)):
                return False
        scale = max(x.magnitude, y.magnitude)
        backend = x.backend
        for i in self.ratio:
            if not backend.is_zero(x[i] - self.a * y[i], scale):
                return False
        for i in self.inverse_ratio:
            if not backend.is_zero(self.a * x[i] - y[i], scale):
                return False
        return True


@dataclass(frozen=True)
class ProjectionReport:
    """
    The three coordinate-projection conditions and where they fail.

    Args:
        no_common_zero (bool): No pair of nonzero vectors orthogonal to the
                               two sides of a partition shares a zero
                               coordinate.
        hyperplanes_pr (bool): Every projection onto n-1 coordinates does
                               phase retrieval.
        all_projections_pr (bool): Every projection onto a proper nonempty
                                   coordinate subset does phase retrieval.
        common_zero (tuple): (subset, coordinate) of the first failure of
                             the first condition.
        failing_projections (tuple): Coordinate subsets whose projection
                                     fails phase retrieval.
        higher_dimensional (bool): Some partition has a complement of
                                   dimension >= 2.
    """

    no_common_zero: bool
    hyperplanes_pr: bool
    all_projections_pr: bool
    common_zero: Optional[tuple] = None
    failing_projections: tuple = field(default_factory=tuple)
    higher_dimensional: bool = False

    @property
    def agree(self) -> bool:
        return (
            self.no_common_zero == self.hyperplanes_pr
            and self.hyperplanes_pr == self.all_projections_pr
        )


def _require_same_length(x: Vector, y: Vector) -> None:
    if len(x) != len(y):
        raise LengthMismatch(f"vectors of length {len(x)} and {len(y)}")


def _same(x: Vector, y: Vector) -> bool:
    scale = max(x.magnitude, y.magnitude)
    return all(x.backend.is_zero(a - b, scale) for a, b in zip(x, y))


def weakly_same_phase(x: Vector, y: Vector) -> WeakPhaseRelation:
    """
    Compare phases on the coordinates where both vectors are nonzero.

    The vectors are related iff sgn(x_i x_j) = sgn(y_i y_j) for all i != j
    in that common support; otherwise the lexicographically first
    conflicting pair (i, j) is reported.

    Raises:
        LengthMismatch: When the lengths differ.
    """
    _require_same_length(x, y)
    products = [
        (i, x.sign_at(i) * y.sign_at(i))
        for i in range(len(x))
        if x.sign_at(i) and y.sign_at(i)
    ]
    if not products:
        return WeakPhaseRelation(theta=1)
    first, theta = products[0]
    for j, product in products[1:]:
        if product != theta:
            return WeakPhaseRelation(theta=None, conflict=(first, j))
    return WeakPhaseRelation(theta=theta)


def measurement_signs(frame: Frame, x: Vector, y: Vector) -> Optional[tuple]:
    """
    signs[i] with <x, x_i> = signs[i] <y, x_i>, or None if some magnitude
    differs
    """
    signs = []
    size = max(x.norm(), y.norm())
    for vector in frame:
        p, q = vector.dot(x), vector.dot(y)
        scale = vector.norm() * size
        if frame.backend.is_zero(p - q, scale):
            signs.append(1)
        elif frame.backend.is_zero(p + q, scale):
            signs.append(-1)
        else:
            return None
    return tuple(signs)


def measurements_agree(frame: Frame, x: Vector, y: Vector) -> bool:
    """
    True when |<x, x_i>| = |<y, x_i>| for every frame vector
    """
    if len(x) != frame.n or len(y) != frame.n:
        raise LengthMismatch(f"vectors must have length {frame.n}")
    return measurement_signs(frame, x, y) is not None


def _ratios(u: Vector, v: Vector) -> list:
    """
    |u_k| / |v_k| over the joint support; None stands for infinity
    """
    ratios = []
    for k in range(len(u)):
        u_zero, v_zero = u.is_zero_at(k), v.is_zero_at(k)
        if u_zero and v_zero:
            continue
        if v_zero:
            ratios.append(None)
        elif u_zero:
            ratios.append(u.backend.coerce(0))
        else:
            ratios.append(abs(u[k]) / abs(v[k]))
    return ratios


def _all_equal(ratios: list, backend) -> bool:
    finite = [r for r in ratios if r is not None]
    if len(finite) not in (0, len(ratios)):
        return False
    if not finite:
        return True
    return backend.is_zero(max(finite) - min(finite), max(finite))


def _conflict_scale(u: Vector, v: Vector) -> Optional[Scalar]:
    """
    A t > 0 for which u + t v and u - t v do not weakly have the same phase,
    or None when no such t exists.

    Coordinates with |u_k| > t |v_k| make (u + tv)_k (u - tv)_k positive and
    those with |u_k| < t |v_k| make it negative, so any t strictly between
    the smallest and largest ratio |u_k| / |v_k| gives a conflict. When all
    ratios agree, the normalized u and v satisfy u_k = +-v_k everywhere,
    i.e. their sum and difference are disjointly supported.
    """
    ratios = _ratios(u, v)
    if not ratios or _all_equal(ratios, u.backend):
        return None
    finite = [r for r in ratios if r is not None]
    low = min(finite)
    if None in ratios:
        return low + 1
    return (low + max(finite)) / 2


def _common_ratio(u: Vector, v: Vector) -> Optional[Scalar]:
    ratios = [r for r in _ratios(u, v) if r is not None]
    if not ratios or ratios[0] == 0:
        return None
    return ratios[0]


def _make_pair(frame: Frame, u: Vector, v: Vector, t: Scalar) -> AmbiguityPair:
    half = frame.backend.coerce(Fraction(1, 2))
    x = (u + v.scaled(t)).scaled(half)
    y = (u - v.scaled(t)).scaled(half)
    signs = measurement_signs(frame, x, y)
    return AmbiguityPair(
        x=x,
        y=y,
        signs=signs,
        partition=tuple(i for i, s in enumerate(signs) if s == 1),
    )


def _spread(basis: Sequence[Vector]) -> list:
    if len(basis) < 2:
        return list(basis)
    return list(basis) + [basis[0] + basis[1]]


def _random_member(basis: Sequence[Vector], rng, max_denominator: int):
    coefficients = rng.standard_normal(len(basis))
    backend = basis[0].backend
    total = Vector.zeros(len(basis[0]), backend)
    for vector, c in zip(basis, coefficients):
        if backend.exact:
            c = rationalize(c, max_denominator)
        total = total + vector.scaled(c)
    return total


def _partition_conflict(
    frame: Frame,
    sides: PartitionWitness,
    rng: np.random.Generator,
    trials: int,
) -> tuple:
    """
    Look for an ambiguity pair from one partition that is not weakly
    phase related.

    Returns (tuple): (pair or None, resolved). `resolved` is False only when
    a complement has dimension >= 2 and sampling found nothing.
    """
    first, second = sides.null_subset, sides.null_complement
    if len(first) == 1 and len(second) == 1:
        t = _conflict_scale(first[0], second[0])
        if t is None:
            return None, True
        return _make_pair(frame, first[0], second[0], t), True
    for u, v in itertools.product(_spread(first), _spread(second)):
        t = _conflict_scale(u, v)
        if t is not None:
            return _make_pair(frame, u, v, t), True
    for _ in range(trials):
        u = _random_member(first, rng, DEFAULT_SETTINGS.rational_denominator)
        v = _random_member(second, rng, DEFAULT_SETTINGS.rational_denominator)
        t = _conflict_scale(u, v)
        if t is not None:
            return _make_pair(frame, u, v, t), True
    return None, False


def _pencil_conflict(
    frame: Frame, sides: PartitionWitness
) -> Optional[AmbiguityPair]:
    """
    A conflicting pair from a partition whose complements have dimensions
    >= 1 and >= 2.

    With u fixed in one complement, the members v of the other, wider one
    with |v_k| proportional to |u_k| lie on at most 2^(n-1) lines, so one of
    the 2^(n-1) + 2 pairwise independent vectors b, a + k b of the wider
    complement gives a conflict.
    """
    first, second = sides.null_subset, sides.null_complement
    swap = len(second) < 2
    fixed, wide = (second, first) if swap else (first, second)
    if not fixed or len(wide) < 2:
        return None
    a, b = wide[0], wide[1]
    candidates = [b] + [a + b.scaled(k) for k in range(2 ** (frame.n - 1) + 1)]
    for w in candidates:
        u, v = (w, fixed[0]) if swap else (fixed[0], w)
        t = _conflict_scale(u, v)
        if t is not None:
            return _make_pair(frame, u, v, t)
    return None


def _forced_witness(
    frame: Frame,
    sides: PartitionWitness,
    rng: np.random.Generator,
    trials: int,
) -> Optional[AmbiguityPair]:
    pair, _ = _partition_conflict(frame, sides, rng, trials)
    if pair is None:
        pair = _pencil_conflict(frame, sides)
    if pair is None:
        logger.warning(
            "no certificate found for partition {}; check the tolerance",
            sides.subset,
        )
    return pair


def _canonical_member(frame: Frame) -> Optional[tuple]:
    """
    (i, j) when frame vector i is a nonzero multiple of e_j
    """
    for i, vector in enumerate(frame):
        support = vector.support()
        if len(support) == 1:
            return i, support[0]
    return None


def decide_wpr(
    frame: Frame,
    cap: int = DEFAULT_SETTINGS.enumeration_cap,
    trials: int = DEFAULT_SETTINGS.falsification_trials,
    seed: int = DEFAULT_SETTINGS.seed,
) -> Decision:
    """
    Decide weak phase retrieval.

    The pipeline short-circuits on the vector count (m < 2n-2 fails), on
    full spark at m = 2n-2, and on a canonical basis vector at m = 2n-2.
    Otherwise every partition with two non-spanning sides is examined: with
    one-dimensional complements spanned by a and b, the frame passes iff
    the unit-normalized a+b and a-b are disjointly supported; complements of
    dimension >= 2 are searched for a conflicting pair, deterministically
    first and then by seeded sampling.

    Args:
        frame (Frame): The family.
        cap (int): Largest m for partition enumeration.
        trials (int): Samples per high-dimensional partition.
        seed (int): Seed of the sampler.

    Returns (Decision): No carries an AmbiguityPair.
    """
    m, n = frame.m, frame.n
    rng = np.random.default_rng(seed)
    if m < 2 * n - 2:
        # n-1 vectors on one side leave at least a 2-dimensional complement
        # on the other side.
        sides = partition_sides(frame, tuple(range(min(n - 1, m))))
        pair = _forced_witness(frame, sides, rng, trials)
        return Decision(Outcome.NO, Rule.WPR_TOO_FEW, pair)
    forced = None
    if m == 2 * n - 2:
        spark = is_full_spark(frame)
        if not spark:
            # The dependent n vectors and the other n-2 both miss R^n.
            sides = partition_sides(frame, spark.witness.indices)
            pair = _forced_witness(frame, sides, rng, trials)
            return Decision(Outcome.NO, Rule.WPR_FULL_SPARK, pair)
        member = _canonical_member(frame)
        if member is not None:
            logger.debug("vector {} is a multiple of e_{}", *member)
            forced = Rule.CANONICAL_MEMBER

    unresolved = []
    for sides in bad_partitions(frame, cap):
        pair, resolved = _partition_conflict(frame, sides, rng, trials)
        if pair is not None:
            one_dimensional = (
                len(sides.null_subset) == 1
                and len(sides.null_complement) == 1
            )
            rule = forced or (
                Rule.DISJOINT_SUPPORT
                if one_dimensional
                else Rule.SAMPLED_CONFLICT
            )
            logger.debug("partition {} fails: {}", sides.subset, rule.value)
            return Decision(Outcome.NO, rule, pair)
        if not resolved:
            unresolved.append(sides.subset)
    if forced is not None:
        logger.warning(
            "canonical vector present but no conflicting pair was found; "
            "check the tolerance"
        )
    if unresolved:
        return Decision(
            Outcome.UNDECIDED,
            Rule.HIGH_DIMENSIONAL,
            detail=f"no conflict found for partitions {unresolved}",
        )
    return Decision(Outcome.YES, Rule.DISJOINT_SUPPORT)


def ambiguity_pairs(
    frame: Frame, cap: int = DEFAULT_SETTINGS.enumeration_cap
) -> list:
    """
    One ambiguity pair per partition with two one-dimensional complements.

    With a, b spanning the complements, the pair is x = (a + tb)/2,
    y = (a - tb)/2. When the partition violates the disjoint support test t
    is chosen so the pair conflicts; otherwise t = |a|/|b| and x, y come
    out disjointly supported.
    """
    pairs = []
    for sides in bad_partitions(frame, cap):
        if len(sides.null_subset) != 1 or len(sides.null_complement) != 1:
            continue
        a, b = sides.null_subset[0], sides.null_complement[0]
        t = _conflict_scale(a, b)
        if t is None:
            t = _common_ratio(a, b)
        pairs.append(_make_pair(frame, a, b, t))
    return pairs


def _exact_sqrt(value: Fraction) -> Optional[Fraction]:
    num, den = math.isqrt(value.numerator), math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def _split_by_zeros(x: Vector, y: Vector) -> tuple:
    only_x, only_y, both_zero, common = [], [], [], []
    for i in range(len(x)):
        x_zero, y_zero = x.is_zero_at(i), y.is_zero_at(i)
        if x_zero and y_zero:
            both_zero.append(i)
        elif y_zero:
            only_x.append(i)
        elif x_zero:
            only_y.append(i)
        else:
            common.append(i)
    return tuple(only_x), tuple(only_y), tuple(both_zero), common


def classify_pair(x: Vector, y: Vector) -> Classification:
    """
    Split the coordinates of an ambiguity pair into the five sets.

    Case 1 (x = +-y) takes a = +-1. Case 2 (<x, y> = 0) needs disjoint
    supports. Case 3 uses a = (p - q)/(p + q) with p = ||x + y||,
    q = ||x - y||, and puts each common coordinate in the set whose ratio
    matches.

    Raises:
        LengthMismatch: When the lengths differ.
        NotClassifiable: When a coordinate fits none of the sets.
    """
    _require_same_length(x, y)
    backend = x.backend
    only_x, only_y, both_zero, common = _split_by_zeros(x, y)
    one = backend.coerce(1)

    if _same(x, y) or _same(x, -y):
        a = one if _same(x, y) else -one
        return Classification(
            only_x=(),
            only_y=(),
            both_zero=both_zero,
            ratio=tuple(i for i in range(len(x)) if i not in both_zero),
            inverse_ratio=(),
            a=a,
            case=1,
        )

    if backend.is_zero(x.dot(y), x.norm() * y.norm()):
        if common:
            raise NotClassifiable(
                common[0],
                f"<x, y> = 0 but coordinate {common[0]} is nonzero in both",
            )
        return Classification(
            only_x=only_x,
            only_y=only_y,
            both_zero=both_zero,
            ratio=(),
            inverse_ratio=(),
            a=one,
            case=2,
        )

    plus, minus = (x + y).norm_squared(), (x - y).norm_squared()
    exact_a = True
    if backend.exact:
        root = _exact_sqrt(plus / minus)
        if root is None:
            exact_a = False
            r = math.sqrt(plus / minus)
            a = (r - 1) / (r + 1)
        else:
            a = (root - 1) / (root + 1)
    else:
        r = math.sqrt(plus / minus)
        a = (r - 1) / (r + 1)

    ratio, inverse_ratio = [], []
    scale = max(x.magnitude, y.magnitude)
    for i in common:
        if exact_a and backend.is_zero(x[i] - a * y[i], scale):
            ratio.append(i)
        elif exact_a and backend.is_zero(a * x[i] - y[i], scale):
            inverse_ratio.append(i)
        else:
            raise NotClassifiable(
                i, f"x({i}) / y({i}) is neither a = {a} nor 1/a"
            )
    return Classification(
        only_x=only_x,
        only_y=only_y,
        both_zero=both_zero,
        ratio=tuple(ratio),
        inverse_ratio=tuple(inverse_ratio),
        a=a,
        case=3,
        exact_a=exact_a,
    )


def phase_retrieval_from_classification(classification) -> bool:
    """
    True when the classification is of the phase retrieval kind:
    no one-sided coordinates and a = +-1
    """
    return (
        not classification.only_x
        and not classification.only_y
        and abs(classification.a) == 1
    )


def verify_orthogonal_conflict(x: Vector, y: Vector) -> bool:
    """
    Check, for one pair, that orthogonal vectors sharing a nonzero
    coordinate never weakly have the same phase
    """
    _require_same_length(x, y)
    orthogonal = x.backend.is_zero(x.dot(y), x.norm() * y.norm())
    shared = any(
        not x.is_zero_at(i) and not y.is_zero_at(i) for i in range(len(x))
    )
    if not (orthogonal and shared):
        return True
    return not weakly_same_phase(x, y).related


def project_frame(frame: Frame, coordinates: Sequence[int]) -> Frame:
    """
    Restrict every frame vector to the given zero-based coordinates

    Raises:
        EmptyIndexSet: When no coordinate is given.
    """
    coordinates = sorted(set(coordinates))
    if not coordinates:
        raise EmptyIndexSet("projection onto an empty coordinate set")
    if coordinates[0] < 0 or coordinates[-1] >= frame.n:
        raise IndexError(f"coordinates {coordinates} outside R^{frame.n}")
    return Frame(tuple(v.restrict(coordinates) for v in frame))


def _is_unit(vector: Vector) -> bool:
    return vector.backend.is_zero(vector.norm_squared() - 1, 1.0)


def projected_pr_equivalence(
    frame: Frame, cap: int = DEFAULT_SETTINGS.enumeration_cap
) -> ProjectionReport:
    """
    Evaluate the three equivalent conditions linking a frame to the phase
    retrieval of its coordinate projections.

    The conditions are stated for unit vectors; all three are invariant
    under rescaling the vectors, so other inputs are evaluated as given
    with a warning.
    """
    if not all(_is_unit(v) for v in frame):
        logger.warning(
            "frame vectors are not unit norm; the conditions are scale "
            "invariant, evaluating as given"
        )
    n = frame.n
    common_zero = None
    higher_dimensional = False
    for sides in bad_partitions(frame, cap):
        first, second = sides.null_subset, sides.null_complement
        if len(first) > 1 or len(second) > 1:
            higher_dimensional = True
        for j in range(n):
            # A complement of dimension >= 2 always meets e_j^perp.
            first_hits = len(first) > 1 or first[0].is_zero_at(j)
            second_hits = len(second) > 1 or second[0].is_zero_at(j)
            if first_hits and second_hits:
                common_zero = (sides.subset, j)
                break
        if common_zero is not None:
            break

    failing = []
    for size in range(1, n):
        for coordinates in itertools.combinations(range(n), size):
            projected = project_frame(frame, coordinates)
            if not does_phase_retrieval(projected, cap):
                failing.append(coordinates)
    return ProjectionReport(
        no_common_zero=common_zero is None,
        hyperplanes_pr=not any(len(c) == n - 1 for c in failing),
        all_projections_pr=not failing,
        common_zero=common_zero,
        failing_projections=tuple(failing),
        higher_dimensional=higher_dimensional,
    )
