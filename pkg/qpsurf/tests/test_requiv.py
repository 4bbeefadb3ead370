"""
Right-equivalence tests for qpsurf.

Tests cover:
- Constructors and their validation
- Group laws: composition, inversion, diagonal/unitriangular factoring
- Chords, cuts and nonintersecting collections
- The cut formula against direct substitution
"""

from django.test import SimpleTestCase

from qpsurf.exceptions import (
    CompositionTypeError,
    IntersectingChordsError,
    PreconditionError,
    ZeroScaleError,
)
from qpsurf.primitive import primitive_potential
from qpsurf.quiver import Chord
from qpsurf.reduced import generator_paths
from qpsurf.requiv import (
    apply,
    compose,
    cut,
    cut_formula_coefficient,
    diagonal,
    elementary,
    factor,
    find_chords,
    identity,
    invert,
    nonintersecting_collections,
    rotational_symmetry,
)
from qpsurf.verify import fixture

N = 8


class RightEquivalenceTests(SimpleTestCase):
    """Tests for constructing and combining right-equivalences."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        punctures = self.sq.triangulation.punctures
        self.w = primitive_potential(self.sq, N, {1: {p: 2 for p in punctures}, 2: {p: 1 for p in punctures}})
        generators = generator_paths(self.sq)
        beta1, path1 = generators[0]
        beta2, path2 = generators[1]
        self.phi1 = elementary(self.sq, N, beta1, [(path1, 1)])
        self.phi2 = elementary(self.sq, N, beta2, [(path2, '2/3')])
        self.delta = diagonal(self.sq, N, {0: 2, 5: -1})

    def test_identity_fixes_potential(self):
        """Test the identity leaves every potential unchanged."""
        self.assertEqual(apply(identity(self.sq, N), self.w), self.w)

    def test_compose_matches_sequential_application(self):
        """Test apply(compose(phi2, phi1), w) == apply(phi2, apply(phi1, w))."""
        composed = compose(self.phi2, self.phi1)

        self.assertEqual(apply(composed, self.w), apply(self.phi2, apply(self.phi1, self.w)))

    def test_compose_is_associative(self):
        """Test (a b) c == a (b c)."""
        left = compose(compose(self.phi2, self.phi1), self.delta)
        right = compose(self.phi2, compose(self.phi1, self.delta))

        self.assertEqual(left, right)

    def test_invert(self):
        """Test invert is a two-sided inverse."""
        phi = compose(self.phi2, compose(self.phi1, self.delta))
        inverse = invert(phi)

        self.assertTrue(compose(inverse, phi).is_identity())
        self.assertTrue(compose(phi, inverse).is_identity())

    def test_factor_reconstructs(self):
        """Test phi == compose(unitriangular, diagonal) with recoverable parts."""
        phi = compose(self.phi1, self.delta)
        u, d = factor(phi)

        self.assertTrue(u.is_unitriangular())
        self.assertTrue(d.is_diagonal())
        self.assertEqual(compose(u, d), phi)

    def test_zero_scale_rejected(self):
        """Test a zero scale is rejected."""
        with self.assertRaises(ZeroScaleError):
            diagonal(self.sq, N, {3: 0})

    def test_linear_tail_rejected(self):
        """Test an elementary move needs tail terms of degree >= 2."""
        with self.assertRaises(CompositionTypeError):
            elementary(self.sq, N, 0, [((0,), 1)])

    def test_wrong_endpoints_rejected(self):
        """Test a tail path between other vertices is rejected."""
        beta, path = generator_paths(self.sq)[0]
        other = next(a for a in range(self.sq.arrow_count)
                     if (self.sq.quiver.src[a], self.sq.quiver.tgt[a])
                     != (self.sq.quiver.src[beta], self.sq.quiver.tgt[beta]))

        with self.assertRaises(CompositionTypeError):
            elementary(self.sq, N, other, [(path, 1)])

    def test_diagonal_preserves_support(self):
        """Test rescaling arrows keeps the support of a potential."""
        self.assertEqual(set(apply(self.delta, self.w).terms), set(self.w.terms))


class ChordAndCutTests(SimpleTestCase):
    """Tests for chords, cuts and rotational symmetry."""

    def test_rotational_symmetry(self):
        """Test the number of rotations fixing a word."""
        self.assertEqual(rotational_symmetry((1, 2, 1, 2)), 2)
        self.assertEqual(rotational_symmetry((1, 1, 1)), 3)
        self.assertEqual(rotational_symmetry((1, 2, 3)), 1)

    def test_cut_single_chord(self):
        """Test a chord replaces its fragment by the chord arrow."""
        self.assertEqual(cut((10, 11, 12, 13), [Chord(20, 0, 1)]), (12, 13, 20))

    def test_cut_wrapping_chord(self):
        """Test a chord whose fragment wraps around the end of the word."""
        self.assertEqual(cut((10, 11, 12, 13), [Chord(20, 3, 0)]), (11, 12, 20))

    def test_intersecting_chords(self):
        """Test overlapping fragments are rejected."""
        with self.assertRaises(IntersectingChordsError):
            cut((10, 11, 12, 13), [Chord(20, 0, 1), Chord(21, 1, 2)])

    def test_nonintersecting_collections(self):
        """Test every disjoint subset is listed, the empty one included."""
        chords = [Chord(20, 0, 1), Chord(21, 2, 3), Chord(22, 1, 2)]
        collections = nonintersecting_collections((10, 11, 12, 13), chords)

        self.assertEqual(len(collections), 5)
        self.assertIn((), collections)

    def test_chordless_cycle_has_no_chords(self):
        """Test chordless cycles of Q_{T,2} have no chords."""
        sq = fixture(0, 4, 2)

        for word in sq.chordless_set:
            self.assertEqual(find_chords(word, sq), [])


class CutFormulaTests(SimpleTestCase):
    """Tests for cut_formula_coefficient."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        punctures = self.sq.triangulation.punctures
        self.w = primitive_potential(self.sq, N, {1: {p: 2 for p in punctures}, 2: {p: 1 for p in punctures}})

    def test_identity(self):
        """Test the identity gives back the coefficient of the cycle."""
        for word in self.w.support():
            self.assertEqual(cut_formula_coefficient(self.w, identity(self.sq, N), word), self.w.terms[word])

    def test_matches_substitution(self):
        """Test the cut formula reproduces every coefficient of apply(phi, w)."""
        beta, path = generator_paths(self.sq)[0]
        phi = elementary(self.sq, N, beta, [(path, 3)])
        image = apply(phi, self.w)

        for word in image.support():
            self.assertEqual(cut_formula_coefficient(self.w, phi, word), image.terms[word])

    def test_requires_unitriangular(self):
        """Test a rescaling is rejected."""
        with self.assertRaises(PreconditionError):
            cut_formula_coefficient(self.w, diagonal(self.sq, N, {0: 2}), self.w.support()[0])

    def test_chordless_cycle_keeps_coefficient(self):
        """Test a chordless coefficient only depends on the diagonal part."""
        beta, path = generator_paths(self.sq)[0]
        phi = elementary(self.sq, N, beta, [(path, 5)])

        for word in self.sq.chordless_set:
            self.assertEqual(cut_formula_coefficient(self.w, phi, word), self.w.terms[word])
