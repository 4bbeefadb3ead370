"""
Primitive-class tests for qpsurf.

Tests cover:
- Genericity and the h, h_p coordinates
- Strong genericity and its defects
- Standardization by arrow rescaling
- Invariance of the coordinates under rescaling
"""

from django.test import SimpleTestCase
from sympy.polys.domains import QQ

from qpsurf.exceptions import NotGenericError, UnsupportedRankError
from qpsurf.primitive import (
    h_invariant,
    hp_invariant,
    is_generic,
    is_standard,
    is_strongly_generic,
    primitive_class,
    primitive_potential,
    standard_coefficients,
    standardize_primitive,
    strong_genericity_defects,
)
from qpsurf.requiv import apply, diagonal
from qpsurf.verify import fixture


class GenericityTests(SimpleTestCase):
    """Tests for genericity and the coordinates."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        self.punctures = self.sq.triangulation.punctures

    def test_all_ones_potential(self):
        """Test the all-ones potential is generic with h = 1."""
        w = primitive_potential(self.sq, 12, {})

        self.assertTrue(is_generic(w))
        self.assertEqual(h_invariant(w), QQ.one)

    def test_missing_chordless_term(self):
        """Test dropping a chordless cycle breaks genericity."""
        w = primitive_potential(self.sq, 12, {})
        w = w.restrict(lambda c: c != self.sq.black_regions[0])

        self.assertFalse(is_generic(w))
        with self.assertRaises(NotGenericError):
            h_invariant(w)

    def test_strong_genericity_defect(self):
        """Test v1 = v2 at valence 3 makes h - h_p vanish at every puncture."""
        w = primitive_potential(self.sq, 12, {})

        self.assertEqual(strong_genericity_defects(w), list(self.punctures))
        self.assertFalse(is_strongly_generic(w))

    def test_strongly_generic(self):
        """Test v1 = 2, v2 = 1 is strongly generic."""
        v = {1: {p: 2 for p in self.punctures}, 2: {p: 1 for p in self.punctures}}
        w = primitive_potential(self.sq, 12, v)

        self.assertTrue(is_strongly_generic(w))
        self.assertEqual(primitive_class(w).k, {p: QQ.one for p in self.punctures})

    def test_standard_coefficients(self):
        """Test v1 and v2 are read back from the L cycles."""
        v = {1: {p: 3 for p in self.punctures}, 2: {p: -2 for p in self.punctures}}
        w = primitive_potential(self.sq, 12, v)
        v1, v2 = standard_coefficients(w)

        self.assertEqual(set(v1.values()), {QQ(3)})
        self.assertEqual(set(v2.values()), {QQ(-2)})

    def test_hp_needs_rank_two(self):
        """Test h_p is rejected at m = 1."""
        sq = fixture(0, 4, 1)
        w = primitive_potential(sq, 6, {})

        with self.assertRaises(UnsupportedRankError):
            hp_invariant(w, sq.triangulation.punctures[0])


class StandardizeTests(SimpleTestCase):
    """Tests for standardize_primitive."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        punctures = self.sq.triangulation.punctures
        self.w = primitive_potential(
            self.sq, 12, {1: {p: 2 for p in punctures}, 2: {p: 1 for p in punctures}}
        )
        self.scaled = apply(diagonal(self.sq, 12, {0: 2, 4: -3, 9: '1/5'}), self.w)

    def test_rescaled_is_not_standard(self):
        """Test the rescaled potential leaves standard form."""
        self.assertTrue(is_standard(self.w))
        self.assertFalse(is_standard(self.scaled))

    def test_standardize(self):
        """Test standardization returns a standard potential and its diagonal map."""
        phi, standardized = standardize_primitive(self.scaled)

        self.assertTrue(phi.is_diagonal())
        self.assertTrue(is_standard(standardized))
        self.assertEqual(apply(phi, self.scaled), standardized)

    def test_coordinates_invariant(self):
        """Test h and h_p are unchanged by rescaling arrows."""
        self.assertEqual(
            primitive_class(self.scaled).coordinates(),
            primitive_class(self.w).coordinates(),
        )

    def test_standardize_requires_generic(self):
        """Test a non-generic potential cannot be standardized."""
        w = self.w.restrict(lambda c: c != self.sq.black_regions[0])

        with self.assertRaises(NotGenericError):
            standardize_primitive(w)
