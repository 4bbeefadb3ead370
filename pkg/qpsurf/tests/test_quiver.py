"""
Quiver and seed tests for qpsurf.

Tests cover:
- Loop and 2-cycle rejection
- Chords of a cycle
- Seed mutation formula, involution and skew-symmetry
- Agreement of quiver mutation with seed mutation
- The v/a text format
"""

import numpy as np
from django.test import SimpleTestCase

from qpsurf.exceptions import InvalidQuiverError, QuiverSyntaxError
from qpsurf.quiver import (
    Quiver,
    Seed,
    chords_in,
    dump_quiver,
    epsilon,
    mutate_quiver,
    mutate_seed,
    parse_quiver,
    quiver_from_epsilon,
    seed_of,
)


def oriented_triangle() -> Quiver:
    return Quiver([1, 2, 3], [('x', 1, 2), ('y', 2, 3), ('z', 3, 1)])


class QuiverTests(SimpleTestCase):
    """Tests for the Quiver container."""

    def test_loop_rejected(self):
        """Test a loop is rejected."""
        with self.assertRaises(InvalidQuiverError):
            Quiver([1], [('a', 1, 1)])

    def test_two_cycle_rejected(self):
        """Test an oriented 2-cycle is rejected."""
        with self.assertRaises(InvalidQuiverError):
            Quiver([1, 2], [('a', 1, 2), ('b', 2, 1)])

    def test_unknown_endpoint_rejected(self):
        """Test an arrow into an undeclared vertex is rejected."""
        with self.assertRaises(InvalidQuiverError):
            Quiver([1, 2], [('a', 1, 3)])

    def test_arrows_sorted_by_identifier(self):
        """Test arrows are stored in identifier order."""
        q = Quiver([1, 2, 3], [('z', 3, 1), ('x', 1, 2), ('y', 2, 3)])

        self.assertEqual(q.arrows, ('x', 'y', 'z'))
        self.assertTrue(q.is_cycle((0, 1, 2)))
        self.assertFalse(q.is_cycle((0, 2)))

    def test_epsilon(self):
        """Test the exchange matrix of the oriented triangle."""
        eps = epsilon(oriented_triangle())

        np.testing.assert_array_equal(eps, [[0, 1, -1], [-1, 0, 1], [1, -1, 0]])


class ChordTests(SimpleTestCase):
    """Tests for chords_in."""

    def test_triangle_with_chord(self):
        """Test an arrow parallel to a two-arrow fragment is a chord."""
        q = Quiver(
            [1, 2, 3, 4],
            [('a', 1, 2), ('b', 2, 3), ('c', 3, 4), ('d', 4, 1), ('e', 1, 3)],
        )
        chords = chords_in(q, (0, 1, 2, 3))

        self.assertEqual(len(chords), 1)
        self.assertEqual((chords[0].beta, chords[0].i, chords[0].j), (4, 0, 1))
        self.assertEqual(chords[0].positions(4), (0, 1))

    def test_three_cycle_is_chordless(self):
        """Test the oriented triangle has no chords."""
        self.assertEqual(chords_in(oriented_triangle(), (0, 1, 2)), [])


class SeedMutationTests(SimpleTestCase):
    """Tests for mutate_seed."""

    def test_rank_two_mutation(self):
        """Test mutation at either index negates the A2 matrix."""
        seed = Seed.from_matrix([[0, 1], [-1, 0]])
        mutated = mutate_seed(seed, 1)

        np.testing.assert_array_equal(mutated.epsilon, [[0, -1], [1, 0]])

    def test_mutation_formula(self):
        """Test the composite-arrow term on the oriented triangle."""
        seed = seed_of(oriented_triangle())
        mutated = mutate_seed(seed, 2)

        # 1 -> 2 -> 3 adds 1 -> 3, cancelling 3 -> 1
        np.testing.assert_array_equal(mutated.epsilon, [[0, -1, 0], [1, 0, -1], [0, 1, 0]])

    def test_involution(self):
        """Test mutating twice at the same index is the identity."""
        seed = Seed.from_matrix([[0, 2, -3], [-2, 0, 4], [3, -4, 0]])

        for k in seed.index:
            self.assertEqual(mutate_seed(mutate_seed(seed, k), k), seed)

    def test_skew_symmetry_preserved(self):
        """Test the mutated matrix stays skew-symmetric."""
        seed = Seed.from_matrix([[0, 2, -3], [-2, 0, 4], [3, -4, 0]])
        eps = mutate_seed(seed, 2).epsilon

        np.testing.assert_array_equal(eps, -eps.T)

    def test_non_skew_matrix_rejected(self):
        """Test Seed rejects a matrix that is not skew-symmetric."""
        with self.assertRaises(InvalidQuiverError):
            Seed.from_matrix([[0, 1], [1, 0]])

    def test_unknown_index(self):
        """Test mutation at an unknown index raises IndexError."""
        with self.assertRaises(IndexError):
            mutate_seed(Seed.from_matrix([[0, 1], [-1, 0]]), 5)


class QuiverMutationTests(SimpleTestCase):
    """Tests for mutate_quiver."""

    def test_matches_seed_mutation(self):
        """Test quiver mutation agrees with seed mutation."""
        q = quiver_from_epsilon([[0, 2, -1, 0], [-2, 0, 1, 3], [1, -1, 0, -2], [0, -3, 2, 0]])

        for k in q.vertices:
            self.assertEqual(seed_of(mutate_quiver(q, k)), mutate_seed(seed_of(q), k))

    def test_arrows_at_vertex_reversed(self):
        """Test arrows at the mutation vertex are reversed and renamed."""
        q = Quiver([1, 2], [('a', 1, 2)])
        mutated = mutate_quiver(q, 2)

        self.assertEqual(mutated.triples(), (('~a', 2, 1),))

    def test_triangle_cancels_two_cycle(self):
        """Test the composite arrow cancels against the opposite arrow."""
        mutated = mutate_quiver(oriented_triangle(), 2)

        self.assertEqual(len(mutated.arrows), 2)
        np.testing.assert_array_equal(epsilon(mutated), [[0, -1, 0], [1, 0, -1], [0, 1, 0]])


class QuiverFormatTests(SimpleTestCase):
    """Tests for dump_quiver and parse_quiver."""

    def test_dump_then_parse(self):
        """Test a dumped quiver parses back to an equal quiver."""
        q = Quiver(['1', '2', '3'], [('x', '1', '2'), ('y', '2', '3'), ('z', '3', '1')])

        self.assertEqual(parse_quiver(dump_quiver(q)), q)

    def test_undeclared_vertex(self):
        """Test an arrow to an undeclared vertex is a syntax error with its line."""
        with self.assertRaises(QuiverSyntaxError) as ctx:
            parse_quiver('v 1\nv 2\na x 1 3\n')

        self.assertEqual(ctx.exception.line, 3)

    def test_garbage_line(self):
        """Test an unknown line is rejected."""
        with self.assertRaises(QuiverSyntaxError):
            parse_quiver('vertex 1\n')
