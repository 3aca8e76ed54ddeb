"""
Test module for the exact and floating-point linear algebra
"""

import sys
import unittest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

sys.path.append("..")

from framelab.errors import LengthMismatch, NotABasis  # noqa: E402
from framelab.linalg import (  # noqa: E402
    EXACT_BACKEND,
    FLOAT_BACKEND,
    Matrix,
    Vector,
    determinant,
    inverse,
    nullspace_basis,
    orthogonal_complement,
    rank,
    rationalize,
    singular_values,
    to_fraction,
)

small_ints = st.integers(min_value=-5, max_value=5)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_cols).flatmap(
        lambda cols: st.lists(
            st.lists(small_ints, min_size=cols, max_size=cols),
            min_size=1,
            max_size=max_rows,
        )
    )


class TestScalars(unittest.TestCase):
    """
    Test case for scalar conversion
    """

    def test_float_reads_as_decimal(self):
        """
        0.1 becomes exactly 1/10
        """
        self.assertEqual(to_fraction(0.1), Fraction(1, 10))

    def test_string_rational(self):
        """
        "p/q" strings parse exactly
        """
        self.assertEqual(to_fraction("-2/3"), Fraction(-2, 3))

    def test_boolean_rejected(self):
        """
        Booleans are not accepted as numbers
        """
        with self.assertRaises(TypeError):
            to_fraction(True)

    def test_rationalize(self):
        self.assertEqual(rationalize(1 / 3, 1000), Fraction(1, 3))


class TestVector(unittest.TestCase):
    """
    Test case for Vector
    """

    def test_exact_normalization(self):
        """
        The first nonzero entry becomes +1
        """
        v = Vector.of([0, 2, -4])
        self.assertEqual(v.normalized(), Vector.of([0, 1, -2]))

    def test_float_normalization(self):
        """
        Float vectors become unit with a positive lead
        """
        v = Vector.of([-3.0, 4.0], FLOAT_BACKEND).normalized()
        self.assertAlmostEqual(v[0], 0.6)
        self.assertAlmostEqual(v[1], -0.8)

    def test_support_and_restrict(self):
        v = Vector.of([0, 5, 0, -1])
        self.assertEqual(v.support(), (1, 3))
        self.assertEqual(v.restrict([3, 1]), Vector.of([-1, 5]))

    def test_dot_length_mismatch(self):
        """
        Inner products need equal lengths
        """
        with self.assertRaises(LengthMismatch):
            Vector.of([1, 2]).dot(Vector.of([1, 2, 3]))

    def test_float_zero_is_relative(self):
        """
        Entries tiny relative to the vector test as zero
        """
        v = Vector.of([1e6, 1e-6], FLOAT_BACKEND)
        self.assertTrue(v.is_zero_at(1))
        self.assertFalse(v.is_zero_at(0))

    def test_backend_conversion(self):
        v = Vector.of([0.5, 0.25], FLOAT_BACKEND).as_backend(EXACT_BACKEND)
        self.assertEqual(v.entries, (Fraction(1, 2), Fraction(1, 4)))


class TestRankAndDeterminant(unittest.TestCase):
    """
    Test case for rank and determinant
    """

    def test_rank(self):
        self.assertEqual(rank(Matrix.from_rows([[1, 2], [2, 4]])), 1)
        self.assertEqual(rank(Matrix.from_rows([[1, 2], [3, 4]])), 2)

    def test_float_rank_uses_tolerance(self):
        """
        A singular value below tolerance times the largest is dropped
        """
        matrix = Matrix.from_rows([[1.0, 0.0], [0.0, 1e-12]], FLOAT_BACKEND)
        self.assertEqual(rank(matrix), 1)

    def test_determinant(self):
        """
        Bareiss determinants including a row swap and fractions
        """
        self.assertEqual(determinant(Matrix.from_rows([[1, 2], [3, 4]])), -2)
        self.assertEqual(determinant(Matrix.from_rows([[0, 1], [1, 0]])), -1)
        self.assertEqual(
            determinant(Matrix.from_rows([["1/2", 1], [1, 3]])),
            Fraction(1, 2),
        )
        rows = [[1, 1, 1], [-1, 1, 1], [1, -1, 1]]
        self.assertEqual(determinant(Matrix.from_rows(rows)), 4)

    def test_singular_determinant(self):
        self.assertEqual(determinant(Matrix.from_rows([[1, 2], [2, 4]])), 0)

    def test_non_square_determinant(self):
        with self.assertRaises(LengthMismatch):
            determinant(Matrix.from_rows([[1, 2, 3]]))

    def test_inverse(self):
        """
        Exact inverse and the singular case
        """
        found = inverse(Matrix.from_rows([[2, 1], [1, 1]]))
        self.assertEqual(found, Matrix.from_rows([[1, -1], [-1, 2]]))
        with self.assertRaises(NotABasis):
            inverse(Matrix.from_rows([[1, 2], [2, 4]]))

    def test_singular_values_descending(self):
        values = singular_values(Matrix.from_rows([[3, 0], [0, 4]]))
        self.assertAlmostEqual(values[0], 4.0)
        self.assertAlmostEqual(values[1], 3.0)

    @settings(max_examples=200, deadline=None)
    @given(matrices())
    def test_rank_of_transpose(self, rows):
        """
        Row rank equals column rank
        """
        matrix = Matrix.from_rows(rows)
        self.assertEqual(rank(matrix), rank(matrix.transpose()))

    @settings(max_examples=200, deadline=None)
    @given(matrices())
    def test_exact_rank_matches_float(self, rows):
        """
        Small integer matrices have the same rank in both backends
        """
        exact = Matrix.from_rows(rows)
        approximate = Matrix.from_rows(rows, FLOAT_BACKEND)
        self.assertEqual(rank(exact), rank(approximate))


class TestNullspace(unittest.TestCase):
    """
    Test case for nullspace bases and orthogonal complements
    """

    def test_two_rows(self):
        """
        The vector orthogonal to (1,1,1) and (-1,1,1)
        """
        basis = nullspace_basis(Matrix.from_rows([[1, 1, 1], [-1, 1, 1]]))
        self.assertEqual(basis, [Vector.of([0, 1, -1])])

    def test_zero_row(self):
        """
        A zero row leaves the whole space, in free-column order
        """
        basis = nullspace_basis(Matrix.from_rows([[0, 0]]))
        self.assertEqual(basis, [Vector.of([1, 0]), Vector.of([0, 1])])

    def test_float_nullspace(self):
        """
        Float bases are unit with a positive lead
        """
        basis = nullspace_basis(Matrix.from_rows([[1.0, 1.0]], FLOAT_BACKEND))
        self.assertEqual(len(basis), 1)
        self.assertAlmostEqual(basis[0][0], 2**-0.5)
        self.assertAlmostEqual(basis[0][1], -(2**-0.5))

    def test_empty_family(self):
        """
        Nothing to be orthogonal to gives the canonical basis
        """
        basis = orthogonal_complement([], 2)
        self.assertEqual(basis, [Vector.basis(2, 0), Vector.basis(2, 1)])

    @settings(max_examples=200, deadline=None)
    @given(matrices())
    def test_rank_nullity(self, rows):
        """
        Basis vectors are annihilated and rank + nullity = n
        """
        matrix = Matrix.from_rows(rows)
        basis = nullspace_basis(matrix)
        self.assertEqual(rank(matrix) + len(basis), matrix.ncols)
        for vector in basis:
            self.assertTrue(matrix.apply(vector).is_zero())


if __name__ == "__main__":
    unittest.main()
