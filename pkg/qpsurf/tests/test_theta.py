"""
Theta tests for qpsurf.

Tests cover:
- The reduced collection and generator paths on the tetrahedron
- Solving for theta: normalization, uniqueness and invariance under generator moves
- First-order changes of parallel-path moves
- Closed forms and their symbolic identities
- Rejection of degenerate standard coefficients
"""

from django.test import SimpleTestCase
from sympy.polys.domains import QQ

from qpsurf.exceptions import NotStronglyGenericError, UnsupportedRankError
from qpsurf.potential import Potential
from qpsurf.primitive import primitive_potential
from qpsurf.reduced import (
    ReducedCycle,
    collection_index,
    collection_target,
    generator_paths,
    max_reduced_degree,
    reduced_collection,
)
from qpsurf.requiv import apply, elementary
from qpsurf.theta import (
    PROJECTED,
    check_symbolic_identities,
    closed_form,
    first_order_delta,
    first_order_rows,
    k_values,
    solve_theta,
    theta_of_potential,
)
from qpsurf.verify import fixture


class ReducedCollectionTests(SimpleTestCase):
    """Tests for the reduced collection."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)

    def test_collection_is_sorted_and_canonical(self):
        """Test cycles are sorted by (degree, word) and stored as least rotations."""
        cycles = reduced_collection(self.sq)
        keys = [(c.degree, c.word) for c in cycles]

        self.assertEqual(keys, sorted(keys))
        for cycle in cycles:
            self.assertEqual(cycle.word, min(cycle.word[i:] + cycle.word[:i] for i in range(cycle.degree)))
            self.assertTrue(self.sq.quiver.is_cycle(cycle.word))

    def test_largest_degree(self):
        """Test the largest reduced cycle is (L_p^(2))^2 at valence 3."""
        self.assertEqual(max_reduced_degree(self.sq), 12)

    def test_target_is_type_ti(self):
        """Test the collection target is a TI cycle."""
        self.assertEqual(collection_index(self.sq)[collection_target(self.sq)].type, 'TI')

    def test_generator_paths_are_parallel(self):
        """Test every generator path runs parallel to its arrow."""
        q = self.sq.quiver
        for beta, path in generator_paths(self.sq):
            self.assertGreaterEqual(len(path), 2)
            self.assertEqual((q.src[path[0]], q.tgt[path[-1]]), (q.src[beta], q.tgt[beta]))

    def test_rank_one_unsupported(self):
        """Test the collection is only defined at m = 2."""
        with self.assertRaises(UnsupportedRankError):
            reduced_collection(fixture(0, 4, 1))


class SolveThetaTests(SimpleTestCase):
    """Tests for solve_theta on the tetrahedron."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        punctures = self.sq.triangulation.punctures
        self.v1 = {p: QQ(2) for p in punctures}
        self.v2 = {p: QQ(1) for p in punctures}
        self.table = solve_theta(self.sq, self.v1, self.v2)

    def test_pinned_on_target(self):
        """Test theta(C0) = -1."""
        self.assertEqual(self.table[collection_target(self.sq)], -QQ.one)
        self.assertEqual(self.table.k, {p: QQ.one for p in self.v1})

    def test_invariant_under_generators(self):
        """Test theta is unchanged by every generator move on the standard potential."""
        N = max_reduced_degree(self.sq)
        w = primitive_potential(self.sq, N, {1: self.v1, 2: self.v2})
        before = self.table.evaluate(w.terms)

        for beta, path in generator_paths(self.sq)[:25]:
            moved = apply(elementary(self.sq, N, beta, [(path, 1)]), w)
            self.assertEqual(self.table.evaluate(moved.terms), before)

    def test_theta_of_potential(self):
        """Test theta reads the target coefficient with weight -1."""
        N = max_reduced_degree(self.sq)
        w = primitive_potential(self.sq, N, {1: self.v1, 2: self.v2})
        shifted = w + Potential.from_terms(self.sq, N, [(collection_target(self.sq), 3)])

        self.assertEqual(theta_of_potential(shifted, self.table) - theta_of_potential(w, self.table), QQ(-3))

    def test_by_label_groups_values(self):
        """Test by_label lists one value per reduced cycle."""
        grouped = self.table.by_label()

        self.assertEqual(sum(len(values) for values in grouped.values()), len(reduced_collection(self.sq)))

    def test_degenerate_coefficients(self):
        """Test k_p = 0 is rejected."""
        with self.assertRaises(NotStronglyGenericError):
            solve_theta(self.sq, self.v2, self.v2)

    def test_unique_solution_on_tetrahedron(self):
        """Test the first-order system has a one-dimensional kernel for several coefficient choices."""
        for a, b in ((2, 1), (3, 1), (QQ(1, 2), 5)):
            v1 = {p: QQ(a) for p in self.v1}
            v2 = {p: QQ(b) for p in self.v1}

            table = solve_theta(self.sq, v1, v2)

            self.assertEqual(table.method, PROJECTED)
            self.assertEqual(table[collection_target(self.sq)], -QQ.one)
            self.assertGreater(table.generators, 0)

    def test_kills_every_first_order_row(self):
        """Test theta vanishes on the first-order change of every parallel path."""
        rows = first_order_rows(self.sq, self.v1, self.v2, max_reduced_degree(self.sq))

        self.assertIsNotNone(rows)
        for beta, path, delta in rows:
            self.assertEqual(self.table.evaluate(delta), QQ.zero, msg=f'arrow {beta} path {path}')

    def test_first_order_delta_matches_move(self):
        """Test the first-order change equals the exact change on a chordless potential."""
        N = max_reduced_degree(self.sq)
        w = primitive_potential(self.sq, N, {1: self.v1, 2: self.v2})

        for beta, path in generator_paths(self.sq)[:10]:
            exact = apply(elementary(self.sq, N, beta, [(path, 1)]), w) - w
            self.assertEqual(dict(exact.terms), first_order_delta(w, beta, path, N))


class ClosedFormTests(SimpleTestCase):
    """Tests for closed_form and the symbolic identities."""

    def test_symbolic_identities_hold(self):
        """Test every identity simplifies to zero."""
        results = check_symbolic_identities()

        self.assertTrue(results)
        self.assertTrue(all(results.values()), results)

    def test_k_values(self):
        """Test k_p = v1_p + (-1)^val(p) v2_p."""
        k = k_values({1: QQ(2), 2: QQ(2)}, {1: QQ(1), 2: QQ(1)}, {1: 3, 2: 4})

        self.assertEqual(k, {1: QQ(1), 2: QQ(3)})

    def test_known_families(self):
        """Test the closed forms of a few families."""
        v1, v2, valences = {1: QQ(2)}, {1: QQ(1)}, {1: 3}

        self.assertEqual(closed_form(ReducedCycle((0, 1, 2), 'TI'), v1, v2, valences), -QQ.one)
        self.assertEqual(closed_form(ReducedCycle((0, 1, 2), 'TII'), v1, v2, valences), QQ.one)
        self.assertEqual(closed_form(ReducedCycle((0, 1, 2), 'VII', puncture=1), v1, v2, valences), QQ(2))
        self.assertEqual(closed_form(ReducedCycle((0, 1, 2), 'VIII', puncture=1), v1, v2, valences), -QQ.one)

    def test_unknown_family(self):
        """Test families without a closed form return None."""
        self.assertIsNone(closed_form(ReducedCycle((0, 1, 2), 'IV'), {1: QQ(2)}, {1: QQ(1)}, {1: 3}))
