"""
Test module for properties that hold across random frames
"""

import sys
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.append("..")

from framelab.errors import NotClassifiable  # noqa: E402
from framelab.frames import Frame  # noqa: E402
from framelab.linalg import FLOAT_BACKEND, Vector  # noqa: E402
from framelab.spark import (  # noqa: E402
    Outcome,
    bad_partitions,
    does_phase_retrieval,
    is_full_spark,
)
from framelab.wpr import (  # noqa: E402
    ambiguity_pairs,
    classify_pair,
    decide_wpr,
    measurements_agree,
    verify_orthogonal_conflict,
    weakly_same_phase,
)

SCALES = 10 ** np.linspace(-4, 4, 2001)


def random_frame(rng, n, m):
    return Frame.from_rows(rng.integers(-2, 3, size=(m, n)).tolist())


def normalized_disjoint(a, b):
    """
    True when a/|a| + b/|b| and a/|a| - b/|b| are disjointly supported,
    compared exactly through squared norms
    """
    na, nb = a.dot(a), b.dot(b)
    for k in range(len(a)):
        if a[k] == 0 and b[k] == 0:
            continue
        if a[k] ** 2 * nb != b[k] ** 2 * na:
            return False
    return True


def sampled_conflict(sides, rng, draws=20):
    """
    Search the partition for u, v with t u + v and t u - v of opposite
    phase at two coordinates; their products are (t u)^2 - v^2
    """
    first = np.array([b.to_numpy() for b in sides.null_subset])
    second = np.array([b.to_numpy() for b in sides.null_complement])
    for _ in range(draws):
        u = rng.standard_normal(len(first)) @ first
        v = rng.standard_normal(len(second)) @ second
        products = np.outer(SCALES**2, u**2) - v**2
        scale = np.maximum(SCALES**2 * np.max(u**2), np.max(v**2))
        tol = 1e-9 * scale
        positive = np.max(products, axis=1) > tol
        negative = np.min(products, axis=1) < -tol
        if np.any(positive & negative):
            return True
    return False


class TestRandomFrames(unittest.TestCase):
    """
    Test case comparing decisions with an independent sampler
    """

    def test_decisions_against_sampler(self):
        """
        A Yes survives sampling and a No carries a valid pair
        """
        rng = np.random.default_rng(2024)
        counts = {outcome: 0 for outcome in Outcome}
        for k in range(500):
            n = 2 + k % 2
            m = 2 * n - 2 + k % 3
            frame = random_frame(rng, n, m)
            decision = decide_wpr(frame, seed=k)
            counts[decision.outcome] += 1
            if decision.outcome is Outcome.NO:
                pair = decision.witness
                self.assertTrue(measurements_agree(frame, pair.x, pair.y))
                self.assertFalse(weakly_same_phase(pair.x, pair.y).related)
            elif decision.outcome is Outcome.YES:
                for sides in bad_partitions(frame):
                    self.assertFalse(sampled_conflict(sides, rng))
            else:
                dimensions = [
                    max(len(s.null_subset), len(s.null_complement))
                    for s in bad_partitions(frame)
                ]
                self.assertGreaterEqual(max(dimensions), 2)
        self.assertGreater(counts[Outcome.YES], 0)
        self.assertGreater(counts[Outcome.NO], 0)

    def test_phase_retrieval_implies_weak(self):
        rng = np.random.default_rng(5)
        for k in range(300):
            n = 2 + k % 2
            frame = random_frame(rng, n, 2 * n - 1 + k % 2)
            if does_phase_retrieval(frame):
                self.assertEqual(decide_wpr(frame).outcome, Outcome.YES)

    def test_phase_retrieval_at_2n_minus_1_is_full_spark(self):
        rng = np.random.default_rng(9)
        for k in range(1000):
            n = 2 + k % 2
            frame = random_frame(rng, n, 2 * n - 1)
            self.assertEqual(
                bool(does_phase_retrieval(frame)), bool(is_full_spark(frame))
            )

    def test_orthogonal_pairs_with_common_support(self):
        """
        Orthogonal vectors sharing a nonzero coordinate are never weakly
        related
        """
        rng = np.random.default_rng(10)
        checked = 0
        for _ in range(1000):
            x = Vector.of(rng.integers(-3, 4, size=3).tolist())
            y = Vector.of(rng.integers(-3, 4, size=3).tolist())
            y = y.scaled(x.dot(x)) - x.scaled(x.dot(y))
            self.assertEqual(x.dot(y), 0)
            shared = set(x.support()) & set(y.support())
            if shared:
                checked += 1
                self.assertFalse(weakly_same_phase(x, y).related)
            self.assertTrue(verify_orthogonal_conflict(x, y))
        self.assertGreater(checked, 0)

    def test_passing_frames_have_disjoint_sum_and_difference(self):
        """
        On a passing frame every partition with one-dimensional
        complements a, b has disjoint normalized a + b and a - b, and
        conversely
        """
        rng = np.random.default_rng(12)
        passing = 0
        for k in range(1000):
            n = 2 + k % 2
            frame = random_frame(rng, n, 2 * n - 2 + k % 2)
            partitions = list(bad_partitions(frame))
            one_dimensional = all(
                len(s.null_subset) == 1 and len(s.null_complement) == 1
                for s in partitions
            )
            disjoint = [
                normalized_disjoint(s.null_subset[0], s.null_complement[0])
                for s in partitions
                if len(s.null_subset) == 1 and len(s.null_complement) == 1
            ]
            decision = decide_wpr(frame, seed=k)
            if decision.outcome is Outcome.YES:
                passing += 1
                self.assertTrue(all(disjoint))
            if one_dimensional and all(disjoint):
                self.assertEqual(decision.outcome, Outcome.YES)
        self.assertGreater(passing, 0)

    def test_weak_phase_retrieval_needs_vectors(self):
        """
        Below 2n-2 vectors every frame fails
        """
        rng = np.random.default_rng(6)
        for k in range(200):
            n = 3 + k % 2
            m = 1 + k % (2 * n - 3)
            frame = random_frame(rng, n, m)
            self.assertEqual(decide_wpr(frame).outcome, Outcome.NO)

    def test_minimal_frames_are_full_spark(self):
        """
        At m = 2n-2 a passing frame is full spark without canonical vectors
        """
        rng = np.random.default_rng(7)
        for k in range(1000):
            n = 2 + k % 2
            frame = random_frame(rng, n, 2 * n - 2)
            if decide_wpr(frame).outcome is Outcome.YES:
                self.assertTrue(is_full_spark(frame))
                for vector in frame:
                    self.assertGreater(len(vector.support()), 1)

    def test_ambiguity_pairs_are_classified(self):
        """
        Whenever a pair classifies, its ratio identities hold
        """
        rng = np.random.default_rng(8)
        checked = 0
        for k in range(200):
            frame = random_frame(rng, 3, 4)
            for pair in ambiguity_pairs(frame):
                try:
                    found = classify_pair(pair.x, pair.y)
                except NotClassifiable:
                    continue
                checked += 1
                self.assertTrue(found.holds_for(pair.x, pair.y))
        self.assertGreater(checked, 0)


nonzero = st.integers(1, 4).flatmap(lambda k: st.sampled_from([k, -k]))


class TestScaleInvariance(unittest.TestCase):
    """
    Test case for invariance under rescaling the frame vectors
    """

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(
            st.lists(st.integers(-2, 2), min_size=3, max_size=3),
            min_size=4,
            max_size=5,
        ),
        st.lists(nonzero, min_size=5, max_size=5),
    )
    def test_rescaling_keeps_decisions(self, rows, factors):
        frame = Frame.from_rows(rows)
        scaled = frame.scaled(factors[: frame.m])
        self.assertEqual(
            decide_wpr(frame).outcome, decide_wpr(scaled).outcome
        )
        self.assertEqual(
            does_phase_retrieval(frame).outcome,
            does_phase_retrieval(scaled).outcome,
        )

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(
            st.lists(st.integers(-3, 3), min_size=3, max_size=3),
            min_size=4,
            max_size=5,
        ),
        st.integers(-40, 40),
    )
    def test_rescaling_float_frames(self, rows, power):
        """
        Float decisions do not change when the frame is scaled by 2^power
        """
        frame = Frame.from_rows(rows, FLOAT_BACKEND)
        scaled = Frame.from_rows(
            [[2.0**power * entry for entry in row] for row in rows],
            FLOAT_BACKEND,
        )
        first = decide_wpr(frame, trials=200)
        second = decide_wpr(scaled, trials=200)
        self.assertEqual(first.outcome, second.outcome)
        self.assertEqual(first.rule, second.rule)


if __name__ == "__main__":
    unittest.main()
