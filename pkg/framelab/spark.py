"""
Full spark, complement property and phase retrieval decisions, each with a
certificate that can be re-checked independently
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

from loguru import logger

from .config import DEFAULT_SETTINGS
from .errors import SizeLimit, TooFewVectors
from .frames import Frame
from .linalg import orthogonal_complement, rank


class Outcome(str, Enum):
    YES = "yes"
    NO = "no"
    UNDECIDED = "undecided"


class Rule(str, Enum):
    """
    The result a decision rests on
    """

    FULL_SPARK = "full-spark-definition"
    COMPLEMENT_PROPERTY = "complement-property"
    PR_TOO_FEW = "pr-needs-2n-1-vectors"
    PR_FULL_SPARK = "pr-iff-full-spark-at-2n-1"
    WPR_TOO_FEW = "wpr-needs-2n-2-vectors"
    WPR_FULL_SPARK = "wpr-needs-full-spark-at-2n-2"
    CANONICAL_MEMBER = "canonical-vector-at-2n-2"
    DISJOINT_SUPPORT = "normalized-sum-and-difference-disjoint"
    SAMPLED_CONFLICT = "conflict-in-higher-dimensional-complement"
    HIGH_DIMENSIONAL = "high-dimensional-complement"

    @property
    def description(self) -> str:
        return _RULE_TEXT[self]


_RULE_TEXT = {
    Rule.FULL_SPARK: "every n-subset of the vectors is linearly independent",
    Rule.COMPLEMENT_PROPERTY: (
        "phase retrieval holds iff for every partition one side spans"
    ),
    Rule.PR_TOO_FEW: "phase retrieval needs m >= 2n-1",
    Rule.PR_FULL_SPARK: (
        "with m = 2n-1, phase retrieval holds iff the frame is full spark"
    ),
    Rule.WPR_TOO_FEW: "weak phase retrieval needs m >= 2n-2",
    Rule.WPR_FULL_SPARK: (
        "with m = 2n-2, weak phase retrieval forces full spark"
    ),
    Rule.CANONICAL_MEMBER: (
        "with m = 2n-2, a frame containing a canonical basis vector "
        "cannot do weak phase retrieval"
    ),
    Rule.DISJOINT_SUPPORT: (
        "for unit a, b orthogonal to the two sides of a partition, "
        "a+b and a-b must be disjointly supported"
    ),
    Rule.SAMPLED_CONFLICT: (
        "an ambiguity pair drawn from a complement of dimension >= 2 "
        "does not weakly have the same phase"
    ),
    Rule.HIGH_DIMENSIONAL: (
        "a partition has a complement of dimension >= 2 and no conflicting "
        "pair was found"
    ),
}


@dataclass(frozen=True)
class SubsetWitness:
    """
    An n-subset of the frame that is linearly dependent
    """

    indices: tuple
    rank: int


@dataclass(frozen=True)
class PartitionWitness:
    """
    A subset I of the frame such that neither side of (I, I^c) spans.

    Args:
        subset (tuple): Zero-based indices in I.
        complement (tuple): Zero-based indices in I^c.
        rank_subset (int): Rank of the vectors indexed by I.
        rank_complement (int): Rank of the vectors indexed by I^c.
        null_subset (tuple): Basis of the vectors orthogonal to side I.
        null_complement (tuple): Basis of the vectors orthogonal to side I^c.
    """

    subset: tuple
    complement: tuple
    rank_subset: int
    rank_complement: int
    null_subset: tuple
    null_complement: tuple


@dataclass(frozen=True)
class Decision:
    """
    Three-valued answer with the rule used and, for No, a certificate
    """

    outcome: Outcome
    rule: Rule
    witness: Optional[object] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.outcome is Outcome.YES


def check_enumeration_cap(
    frame: Frame, cap: int = DEFAULT_SETTINGS.enumeration_cap
) -> None:
    if frame.m > cap:
        raise SizeLimit(
            f"{frame.m} vectors exceed the enumeration cap of {cap}"
        )


def canonical_subsets(m: int) -> Iterator[tuple]:
    """
    One representative I of every unordered partition (I, I^c) of range(m),
    in increasing bitmask order; I is the side with the smaller mask
    """
    full = (1 << m) - 1
    for mask in range(1 << m):
        if mask > full ^ mask:
            continue
        yield tuple(i for i in range(m) if mask >> i & 1)


def partition_sides(frame: Frame, subset: tuple) -> PartitionWitness:
    """
    Ranks and orthogonal complements of both sides of a partition; the
    result is a witness only when both ranks are below n
    """
    members = set(subset)
    complement = tuple(i for i in range(frame.m) if i not in members)
    null_subset = orthogonal_complement(
        frame.subset(subset), frame.n, frame.backend
    )
    null_complement = orthogonal_complement(
        frame.subset(complement), frame.n, frame.backend
    )
    return PartitionWitness(
        subset=tuple(subset),
        complement=complement,
        rank_subset=frame.n - len(null_subset),
        rank_complement=frame.n - len(null_complement),
        null_subset=tuple(null_subset),
        null_complement=tuple(null_complement),
    )


def bad_partitions(
    frame: Frame, cap: int = DEFAULT_SETTINGS.enumeration_cap
) -> Iterator[PartitionWitness]:
    """
    Every partition whose two sides both fail to span, in canonical order
    """
    check_enumeration_cap(frame, cap)
    for subset in canonical_subsets(frame.m):
        sides = partition_sides(frame, subset)
        if sides.rank_subset < frame.n and sides.rank_complement < frame.n:
            yield sides


def is_full_spark(frame: Frame) -> Decision:
    """
    Decide whether every n-subset of the frame is linearly independent.

    Raises:
        TooFewVectors: When m < n.
    """
    if frame.m < frame.n:
        raise TooFewVectors(
            f"full spark needs m >= n, got m={frame.m}, n={frame.n}"
        )
    for indices in itertools.combinations(range(frame.m), frame.n):
        found = rank(frame.matrix.select(indices))
        if found < frame.n:
            logger.debug("dependent subset {} of rank {}", indices, found)
            return Decision(
                Outcome.NO, Rule.FULL_SPARK, SubsetWitness(indices, found)
            )
    return Decision(Outcome.YES, Rule.FULL_SPARK)


def complement_property(
    frame: Frame, cap: int = DEFAULT_SETTINGS.enumeration_cap
) -> Decision:
    """
    Decide the complement property by enumerating partitions.

    Returns (Decision): No carries the first violating PartitionWitness.

    Raises:
        SizeLimit: When m exceeds `cap`.
    """
    for witness in bad_partitions(frame, cap):
        return Decision(Outcome.NO, Rule.COMPLEMENT_PROPERTY, witness)
    return Decision(Outcome.YES, Rule.COMPLEMENT_PROPERTY)


def does_phase_retrieval(
    frame: Frame, cap: int = DEFAULT_SETTINGS.enumeration_cap
) -> Decision:
    """
    Decide phase retrieval.

    Short-circuits on the vector count (m < 2n-1 always fails) and on the
    full spark equivalence at m = 2n-1; otherwise decides the complement
    property.
    """
    m, n = frame.m, frame.n
    if m < 2 * n - 1:
        # n-1 vectors on one side, at most n-1 on the other: neither spans.
        witness = partition_sides(frame, tuple(range(min(n - 1, m))))
        return Decision(Outcome.NO, Rule.PR_TOO_FEW, witness)
    if m == 2 * n - 1:
        spark = is_full_spark(frame)
        if spark:
            return Decision(Outcome.YES, Rule.PR_FULL_SPARK)
        witness = partition_sides(frame, spark.witness.indices)
        return Decision(Outcome.NO, Rule.PR_FULL_SPARK, witness)
    return complement_property(frame, cap)
