"""
Test module for full spark, the complement property and phase retrieval
"""

import sys
import unittest

sys.path.append("..")

from framelab.errors import SizeLimit, TooFewVectors  # noqa: E402
from framelab.frames import Frame  # noqa: E402
from framelab.spark import (  # noqa: E402
    Outcome,
    PartitionWitness,
    Rule,
    SubsetWitness,
    bad_partitions,
    canonical_subsets,
    complement_property,
    does_phase_retrieval,
    is_full_spark,
)

SIGN_MATRIX = Frame.from_rows(
    [[1, 1, 1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]]
)


class TestCanonicalSubsets(unittest.TestCase):
    """
    Test case for the partition enumeration order
    """

    def test_three_vectors(self):
        """
        One representative per partition, smaller bitmask first
        """
        self.assertEqual(
            list(canonical_subsets(3)), [(), (0,), (1,), (0, 1)]
        )

    def test_count(self):
        self.assertEqual(len(list(canonical_subsets(5))), 16)


class TestFullSpark(unittest.TestCase):
    """
    Test case for is_full_spark
    """

    def test_sign_matrix(self):
        """
        All four 3x3 minors of the sign matrix are nonzero
        """
        decision = is_full_spark(SIGN_MATRIX)
        self.assertEqual(decision.outcome, Outcome.YES)
        self.assertEqual(decision.rule, Rule.FULL_SPARK)

    def test_dependent_subset(self):
        """
        The first dependent n-subset is reported with its rank
        """
        frame = Frame.from_rows([[1, 0], [0, 1], [2, 0]])
        decision = is_full_spark(frame)
        self.assertEqual(decision.outcome, Outcome.NO)
        self.assertEqual(decision.witness, SubsetWitness((0, 2), 1))

    def test_too_few_vectors(self):
        with self.assertRaises(TooFewVectors):
            is_full_spark(Frame.from_rows([[1, 0, 0], [0, 1, 0]]))


class TestPhaseRetrieval(unittest.TestCase):
    """
    Test case for the complement property and phase retrieval
    """

    def test_pr_triple(self):
        """
        e1, e2, e1+e2 is full spark at m = 2n-1
        """
        frame = Frame.from_rows([[1, 0], [0, 1], [1, 1]])
        decision = does_phase_retrieval(frame)
        self.assertEqual(decision.outcome, Outcome.YES)
        self.assertEqual(decision.rule, Rule.PR_FULL_SPARK)

    def test_too_few_vectors_fail(self):
        """
        The sign matrix has 4 < 2n-1 vectors
        """
        decision = does_phase_retrieval(SIGN_MATRIX)
        self.assertEqual(decision.outcome, Outcome.NO)
        self.assertEqual(decision.rule, Rule.PR_TOO_FEW)
        self.assertIsInstance(decision.witness, PartitionWitness)
        self.assertLess(decision.witness.rank_subset, 3)
        self.assertLess(decision.witness.rank_complement, 3)

    def test_very_few_vectors(self):
        """
        Fewer than n-1 vectors still produce a partition witness
        """
        frame = Frame.from_rows([[1, 0, 0, 0]])
        decision = does_phase_retrieval(frame)
        self.assertEqual(decision.outcome, Outcome.NO)
        self.assertEqual(decision.witness.subset, (0,))
        self.assertEqual(decision.witness.complement, ())

    def test_not_full_spark_at_2n_minus_1(self):
        """
        A repeated direction gives the partition of the dependent subset
        """
        frame = Frame.from_rows([[1, 0], [0, 1], [1, 0]])
        decision = does_phase_retrieval(frame)
        self.assertEqual(decision.outcome, Outcome.NO)
        self.assertEqual(decision.rule, Rule.PR_FULL_SPARK)
        self.assertEqual(decision.witness.subset, (0, 2))
        self.assertEqual(decision.witness.complement, (1,))
        self.assertEqual(decision.witness.rank_subset, 1)
        self.assertEqual(decision.witness.rank_complement, 1)

    def test_complement_property(self):
        frame = Frame.from_rows([[1, 0], [0, 1], [1, 1], [1, -1]])
        decision = does_phase_retrieval(frame)
        self.assertEqual(decision.outcome, Outcome.YES)
        self.assertEqual(decision.rule, Rule.COMPLEMENT_PROPERTY)

    def test_complement_property_failure(self):
        """
        Two pairs of parallel vectors split into two rank-one sides
        """
        frame = Frame.from_rows([[1, 0], [2, 0], [0, 1], [0, 3]])
        decision = complement_property(frame)
        self.assertEqual(decision.outcome, Outcome.NO)
        self.assertEqual(decision.witness.subset, (0, 1))

    def test_enumeration_cap(self):
        frame = Frame.from_rows([[1, 0], [0, 1], [1, 1], [1, -1]])
        with self.assertRaises(SizeLimit):
            complement_property(frame, cap=3)

    def test_bad_partitions_of_sign_matrix(self):
        """
        Exactly the three 2|2 splits of the sign matrix are bad
        """
        subsets = [p.subset for p in bad_partitions(SIGN_MATRIX)]
        self.assertEqual(subsets, [(0, 1), (0, 2), (1, 2)])


if __name__ == "__main__":
    unittest.main()
