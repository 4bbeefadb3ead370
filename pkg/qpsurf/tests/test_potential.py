"""
Potential tests for qpsurf.

Tests cover:
- Rational coercion
- Canonical rotation and merging of cyclic words
- Arithmetic, truncation and restriction
- Compatibility checks between operands
"""

from fractions import Fraction

from django.test import SimpleTestCase
from sympy.polys.domains import QQ

from qpsurf.exceptions import NotComposableError, TruncationMismatchError
from qpsurf.potential import PathVector, Potential, canonical_cycle, primitive_part, to_rational
from qpsurf.verify import fixture


class ToRationalTests(SimpleTestCase):
    """Tests for to_rational."""

    def test_int_and_string(self):
        """Test ints and p/q strings become exact rationals."""
        self.assertEqual(to_rational(3), QQ(3))
        self.assertEqual(to_rational('-3/4'), QQ(-3, 4))
        self.assertEqual(to_rational('5'), QQ(5))

    def test_fraction(self):
        """Test Fraction values are accepted."""
        self.assertEqual(to_rational(Fraction(2, 6)), QQ(1, 3))


class PotentialTests(SimpleTestCase):
    """Tests for Potential on Q_{T,2} of the tetrahedron."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        self.triangle = self.sq.black_regions[0]

    def rotated(self, word, shift=1):
        return word[shift:] + word[:shift]

    def test_rotations_merge(self):
        """Test rotations of one cycle add up in a single term."""
        w = Potential.from_terms(self.sq, 6, [(self.triangle, 2), (self.rotated(self.triangle), 3)])

        self.assertEqual(len(w), 1)
        self.assertEqual(w.coefficient(self.rotated(self.triangle, 2)), QQ(5))

    def test_canonical_cycle_is_least_rotation(self):
        """Test canonical_cycle returns the least rotation."""
        word = self.rotated(self.triangle)

        self.assertEqual(canonical_cycle(self.sq, word), min(
            word[i:] + word[:i] for i in range(len(word))
        ))

    def test_cancellation(self):
        """Test w - w is zero."""
        w = Potential.from_terms(self.sq, 6, [(self.triangle, 2)])

        self.assertTrue((w - w).is_zero())
        self.assertTrue((w * 0).is_zero())

    def test_scalar_multiplication(self):
        """Test scalar multiplication from both sides."""
        w = Potential.from_terms(self.sq, 6, [(self.triangle, '1/2')])

        self.assertEqual((3 * w).coefficient(self.triangle), QQ(3, 2))
        self.assertEqual((w * 4), Potential.from_terms(self.sq, 6, [(self.triangle, 2)]))

    def test_non_cycle_rejected(self):
        """Test a word that does not close up is rejected."""
        with self.assertRaises(NotComposableError):
            Potential.from_terms(self.sq, 6, [(self.triangle[:2], 1)])

    def test_truncation_drops_long_words(self):
        """Test words longer than N are dropped."""
        ring = self.sq.lp[(self.sq.triangulation.punctures[0], 2)]
        w = Potential.from_terms(self.sq, 5, [(ring, 1), (self.triangle, 1)])

        self.assertEqual(w.support(), (self.triangle,))
        self.assertEqual(w.max_degree(), 3)

    def test_mismatched_truncation(self):
        """Test adding potentials with different N fails."""
        w1 = Potential.from_terms(self.sq, 6, [(self.triangle, 1)])
        w2 = Potential.from_terms(self.sq, 7, [(self.triangle, 1)])

        with self.assertRaises(TruncationMismatchError):
            w1 + w2

    def test_truncated_copy(self):
        """Test truncated keeps only terms up to the new degree."""
        ring = self.sq.lp[(self.sq.triangulation.punctures[0], 2)]
        w = Potential.from_terms(self.sq, 12, [(ring, 1), (self.triangle, 1)])

        self.assertEqual(w.truncated(3).support(), (self.triangle,))
        self.assertEqual(w.degree_part(6).support(), (ring,))

    def test_primitive_part(self):
        """Test primitive_part keeps only chordless cycles."""
        square = self.sq.lp[(self.sq.triangulation.punctures[0], 1)] * 2
        w = Potential.from_terms(self.sq, 12, [(self.triangle, 1), (square, 1)])

        self.assertEqual(primitive_part(w).support(), (self.triangle,))

    def test_local_and_nonlocal_parts(self):
        """Test the local and nonlocal parts split the potential."""
        ring = self.sq.lp[(self.sq.triangulation.punctures[0], 2)]
        w = Potential.from_terms(self.sq, 12, [(ring, 1), (self.triangle, 1)])

        self.assertIn(ring, w.local_part().terms)
        self.assertEqual(w.local_part() + w.nonlocal_part(), w)


class PathVectorTests(SimpleTestCase):
    """Tests for PathVector."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)

    def test_arrow(self):
        """Test the unit vector of an arrow."""
        v = PathVector.arrow(self.sq, 4, 0, 3)

        self.assertEqual(v.linear_coefficient(0), QQ(3))
        self.assertEqual(v.endpoints(), (self.sq.quiver.src[0], self.sq.quiver.tgt[0]))
        self.assertTrue(v.tail().is_zero())

    def test_non_path_rejected(self):
        """Test a word that is not composable is rejected."""
        a = 0
        bad = next(b for b in range(self.sq.arrow_count) if self.sq.quiver.src[b] != self.sq.quiver.tgt[a])

        with self.assertRaises(NotComposableError):
            PathVector(self.sq, 4, {(a, bad): QQ.one})
