"""
Random fixture tests for qpsurf.

Tests cover:
- Per-case streams are reproducible and independent
- Random seeds, quivers and potentials satisfy their contracts
"""

from django.test import SimpleTestCase

from qpsurf.primitive import is_generic, is_standard, is_strongly_generic
from qpsurf.prng import (
    case_rng,
    random_epsilon,
    random_generic_potential,
    random_path,
    random_quiver,
    random_rational,
    random_standard_potential,
    sample,
)
from qpsurf.verify import fixture


class CaseStreamTests(SimpleTestCase):
    """Tests for case_rng."""

    def test_replays(self):
        """Test the same (seed, suite, index) gives the same draws."""
        first = case_rng(7, 'theta', 3).integers(0, 1000, size=8).tolist()
        second = case_rng(7, 'theta', 3).integers(0, 1000, size=8).tolist()

        self.assertEqual(first, second)

    def test_cases_differ(self):
        """Test neighbouring cases and suites draw different streams."""
        base = case_rng(7, 'theta', 3).integers(0, 10 ** 9, size=4).tolist()

        self.assertNotEqual(base, case_rng(7, 'theta', 4).integers(0, 10 ** 9, size=4).tolist())
        self.assertNotEqual(base, case_rng(7, 'mutation', 3).integers(0, 10 ** 9, size=4).tolist())
        self.assertNotEqual(base, case_rng(8, 'theta', 3).integers(0, 10 ** 9, size=4).tolist())

    def test_unknown_suite(self):
        """Test an unknown suite name is rejected."""
        with self.assertRaises(ValueError):
            case_rng(7, 'nope', 0)


class RandomObjectTests(SimpleTestCase):
    """Tests for the random generators."""

    def setUp(self):
        self.rng = case_rng(11, 'reduction', 0)
        self.sq = fixture(0, 4, 2)

    def test_rational_bounds(self):
        """Test numerators and denominators stay within the bound."""
        for _ in range(50):
            value = random_rational(self.rng, bound=3)

            self.assertNotEqual(value, 0)
            self.assertLessEqual(abs(value.numerator), 3)
            self.assertLessEqual(value.denominator, 3)

    def test_epsilon_is_skew(self):
        """Test random exchange matrices are skew-symmetric."""
        epsilon = random_epsilon(self.rng, 5)

        self.assertTrue((epsilon == -epsilon.T).all())
        self.assertTrue((epsilon.diagonal() == 0).all())

    def test_quiver_is_reduced(self):
        """Test random quivers have no loops and no 2-cycles."""
        q = random_quiver(self.rng)

        pairs = {(q.src[a], q.tgt[a]) for a in range(len(q.src))}
        self.assertFalse(any(u == v for u, v in pairs))
        self.assertFalse(any((v, u) in pairs for u, v in pairs))

    def test_path_endpoints(self):
        """Test random paths join the requested vertices."""
        q = self.sq.quiver
        a = 0

        path = random_path(self.rng, self.sq, q.src[a], q.tgt[a])

        if path is not None:
            self.assertEqual((q.src[path[0]], q.tgt[path[-1]]), (q.src[a], q.tgt[a]))
            self.assertTrue(2 <= len(path) <= 6)

    def test_generic_potential(self):
        """Test random generic potentials cover every chordless cycle."""
        w = random_generic_potential(self.rng, self.sq, 10)

        self.assertTrue(is_generic(w))

    def test_standard_potential(self):
        """Test random standard potentials are standard and strongly generic."""
        w = random_standard_potential(self.rng, self.sq, 12, extra_terms=3)

        self.assertTrue(is_standard(w))
        self.assertTrue(is_strongly_generic(w))

    def test_sample_distinct(self):
        """Test sample returns distinct items, capped by the population."""
        items = list(range(10))

        picked = sample(self.rng, items, 4)

        self.assertEqual(len(set(picked)), 4)
        self.assertEqual(sorted(sample(self.rng, items, 50)), items)
