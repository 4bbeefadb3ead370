"""
Reduction tests for qpsurf.

Tests cover:
- reduce on standard, seeded random and perturbed potentials
- Postconditions and preconditions of the individual stages
- decide_equivalence and compare_potentials verdicts, including the
  undecided and coordinates-only branches
"""

from unittest import mock

from django.test import SimpleTestCase
from sympy.polys.domains import QQ

from qpsurf.exceptions import (
    NotNormalizableError,
    NotStronglyGenericError,
    PreconditionError,
    UnsupportedRankError,
)
from qpsurf.potential import Potential
from qpsurf.primitive import primitive_potential
from qpsurf.prng import case_rng, random_cycle, random_standard_potential, random_unitriangular
from qpsurf.reduced import collection_target, max_reduced_degree
from qpsurf.reduction import (
    EQUIVALENT,
    INEQUIVALENT,
    PIPELINE,
    UNDECIDED,
    bound_nonlocal,
    compare_potentials,
    decide_equivalence,
    good_cycles,
    localize,
    minimum_truncation,
    reduce,
    remove_l_powers,
    straighten,
    unreduced,
)
from qpsurf.requiv import apply, diagonal
from qpsurf.surface_quiver import least_rotation
from qpsurf.theta import theta, theta_table_for
from qpsurf.verify import fixture


def standard(sq, N, v1=2, v2=1):
    punctures = sq.triangulation.punctures
    return primitive_potential(sq, N, {1: {p: v1 for p in punctures}, 2: {p: v2 for p in punctures}})


class ReduceTests(SimpleTestCase):
    """Tests for reduce on the tetrahedron."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        self.N = max_reduced_degree(self.sq)

    def test_standard_potential_has_empty_tail(self):
        """Test a standard primitive potential reduces to itself with no tail."""
        w = standard(self.sq, self.N)

        result = reduce(w)

        self.assertEqual(result.tail, {})
        self.assertEqual(result.guaranteed_degree, self.N)
        self.assertEqual(result.v1, {p: QQ(2) for p in self.sq.triangulation.punctures})

    def test_stages_are_reported(self):
        """Test every pipeline stage appears in order after standardization."""
        result = reduce(standard(self.sq, self.N))

        names = [name for name, _, _ in result.stages]
        self.assertEqual(names, ['standardize'] + [name for name, _ in PIPELINE])

    def test_equivalence_reproduces_result(self):
        """Test the returned equivalence maps the input onto the reduced potential."""
        target = collection_target(self.sq)
        w = standard(self.sq, self.N) + Potential.from_terms(self.sq, self.N, [(target, 5)])

        result = reduce(w)

        self.assertEqual(apply(result.equivalence, w).truncated(result.guaranteed_degree),
                         result.potential.truncated(result.guaranteed_degree))
        self.assertEqual(result.coefficient(target), QQ(5))

    def test_rank_one_unsupported(self):
        """Test reduce refuses m = 1."""
        sq = fixture(0, 4, 1)

        with self.assertRaises(UnsupportedRankError):
            reduce(primitive_potential(sq, 8, {}))

    def test_not_strongly_generic(self):
        """Test all-ones standard coefficients give k_p = 0 at valence 3."""
        with self.assertRaises(NotStronglyGenericError):
            reduce(primitive_potential(self.sq, self.N, {}))

    def test_remove_l_powers_needs_nonzero_k(self):
        """Test (L_p^(2))^2 cannot be handled where k_p = 0."""
        p = self.sq.triangulation.punctures[0]
        square = self.sq.lp[(p, 2)] * 2
        w = primitive_potential(self.sq, self.N, {}) + Potential.from_terms(self.sq, self.N, [(square, 1)])

        with self.assertRaises(NotStronglyGenericError):
            remove_l_powers(w)

    def test_minimum_truncation(self):
        """Test the advisory truncation adds twice the largest valence."""
        self.assertEqual(minimum_truncation(self.sq), 12 + 2 * 3)


class DecideEquivalenceTests(SimpleTestCase):
    """Tests for decide_equivalence and compare_potentials."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        self.N = minimum_truncation(self.sq)
        self.w = standard(self.sq, self.N)

    def test_identical(self):
        """Test a potential is equivalent to itself."""
        self.assertEqual(decide_equivalence(self.w, self.w), EQUIVALENT)

    def test_rescaled(self):
        """Test rescaling arrows gives an equivalent potential."""
        rescaled = apply(diagonal(self.sq, self.N, {0: 2, 5: QQ(1, 3)}), self.w)

        report = compare_potentials(self.w, rescaled)

        self.assertEqual(report.verdict, EQUIVALENT)
        self.assertEqual(report.coordinates[0], report.coordinates[1])

    def test_target_shift(self):
        """Test adding the collection target changes theta by -1."""
        target = collection_target(self.sq)
        shifted = self.w + Potential.from_terms(self.sq, self.N, [(target, 1)])

        report = compare_potentials(self.w, shifted)

        self.assertEqual(report.verdict, INEQUIVALENT)
        self.assertEqual(report.theta[1] - report.theta[0], -QQ.one)

    def test_coordinates_differ(self):
        """Test different h_p coordinates are inequivalent without reducing."""
        other = standard(self.sq, self.N, v1=2, v2=3)

        report = compare_potentials(self.w, other)

        self.assertEqual(report.verdict, INEQUIVALENT)
        self.assertEqual(report.theta, (None, None))

    def test_truncation_too_low(self):
        """Test truncation one below the minimum truncation is undecided."""
        w = standard(self.sq, self.N - 1)

        self.assertEqual(decide_equivalence(w, w), UNDECIDED)

    def test_different_quivers(self):
        """Test potentials on different quivers are rejected."""
        torus = fixture(1, 3, 2)

        with self.assertRaises(PreconditionError):
            compare_potentials(self.w, standard(torus, self.N))

    def test_not_strongly_generic(self):
        """Test k_p = 0 is rejected."""
        degenerate = primitive_potential(self.sq, self.N, {})

        with self.assertRaises(NotStronglyGenericError):
            decide_equivalence(self.w, degenerate)

    def test_truncation_at_minimum_decides(self):
        """Test the minimum truncation itself is enough for a verdict."""
        report = compare_potentials(self.w, self.w)

        self.assertNotEqual(report.verdict, UNDECIDED)
        self.assertEqual(self.w.N, minimum_truncation(self.sq))

    def test_not_normalizable_decided_by_coordinates(self):
        """Test a primitive part without a rational standard form falls back to the coordinates."""
        shifted = self.w + Potential.from_terms(self.sq, self.N, [(collection_target(self.sq), 1)])
        failure = NotNormalizableError('no integral exponents for prime 2')

        with mock.patch('qpsurf.reduction.standardize_primitive', side_effect=failure):
            report = compare_potentials(self.w, shifted)

        self.assertEqual(report.verdict, EQUIVALENT)
        self.assertEqual(report.theta, (None, None))
        self.assertIn('coordinates agree', report.reason)

    def test_reduced_through_largest_reduced_cycle(self):
        """Test theta is compared on reductions certified through the largest reduced cycle."""
        shifted = self.w + Potential.from_terms(self.sq, self.N, [(collection_target(self.sq), 2)])

        report = compare_potentials(self.w, shifted)

        self.assertEqual(report.verdict, INEQUIVALENT)
        self.assertEqual(report.guaranteed_degree, max_reduced_degree(self.sq))
        self.assertEqual(report.theta, (QQ.zero, QQ(-2)))


def local_cycles(sq, p, max_length):
    """Cycles of at most ``max_length`` arrows inside the patch of puncture ``p``."""
    q = sq.quiver
    patch = sq.patch(p)
    inside = {a for a in range(sq.arrow_count) if q.src[a] in patch and q.tgt[a] in patch}
    found = set()
    for a in sorted(inside):
        stack = [(a,)]
        while stack:
            path = stack.pop()
            end = q.tgt[path[-1]]
            if end == q.src[path[0]]:
                found.add(least_rotation(path))
            if len(path) < max_length:
                stack.extend(path + (b,) for b in q.out_arrows[end] if b in inside)
    return sorted(found, key=lambda word: (len(word), word))


def first_cycle(rng, sq, accept, max_length, draws=500):
    for _ in range(draws):
        word = random_cycle(rng, sq, min_length=4, max_length=max_length)
        if word is not None and accept(least_rotation(word)):
            return least_rotation(word)
    return None


class StageTests(SimpleTestCase):
    """Postconditions of the individual stages on the tetrahedron."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        self.N = max_reduced_degree(self.sq)
        self.w = standard(self.sq, self.N)
        self.good = good_cycles(self.sq)

    def assertReproduces(self, phi, w, out, through):
        self.assertEqual(apply(phi, w).truncated(through), out.truncated(through))

    def test_straighten(self):
        """Test straighten removes a non-straight cycle and keeps the L_p^(1) powers."""
        sq = self.sq
        rng = case_rng(7, 'reduction', 100)
        bent = first_cycle(rng, sq, lambda c: c not in self.good and not sq.is_straight(c), 8)
        self.assertIsNotNone(bent)
        p = sq.triangulation.punctures[0]
        square = least_rotation(sq.lp[(p, 1)] * 2)
        w = self.w + Potential.from_terms(sq, self.N, [(bent, 3), (square, 5)])

        phi, out = straighten(w)

        self.assertReproduces(phi, w, out, self.N)
        self.assertEqual(
            [c for c in out.terms if c not in self.good and not sq.is_straight(c)], [],
        )
        self.assertEqual(out.coefficient(square), QQ(5))

    def test_localize(self):
        """Test localize leaves only L_p powers among the local cycles."""
        sq = self.sq
        p = sq.triangulation.punctures[0]
        candidates = [
            c for c in local_cycles(sq, p, 8)
            if c not in self.good and sq.is_lp_power(c) is None
        ]
        self.assertTrue(candidates)
        cycle = candidates[0]
        w = self.w + Potential.from_terms(sq, self.N, [(cycle, 2)])

        phi, out = localize(w)

        self.assertReproduces(phi, w, out, self.N)
        self.assertNotIn(cycle, out.terms)
        self.assertEqual(
            [c for c in out.terms if c not in self.good and sq.is_local(c) and sq.is_lp_power(c) is None],
            [],
        )

    def test_remove_l_powers_cascade(self):
        """Test removing (L_p^(1))^2 leaves no L_p power outside the reduced collection."""
        sq = self.sq
        p = sq.triangulation.punctures[0]
        powers = [least_rotation(sq.lp[(p, 1)] * n) for n in (2, 3)]
        w = self.w + Potential.from_terms(sq, self.N, [(powers[0], 1), (powers[1], -2)])

        phi, out = remove_l_powers(w)

        self.assertReproduces(phi, w, out, self.N)
        left = [c for c in out.terms if c not in self.good and sq.is_lp_power(c) is not None]
        self.assertEqual([c for c in left if sq.is_lp_power(c)[2] >= 2], [])
        for power in powers:
            if power not in self.good:
                self.assertNotIn(power, out.terms)

    def test_bound_nonlocal_needs_local_part_reduced(self):
        """Test bound_nonlocal refuses local cycles outside the reduced collection."""
        sq = self.sq
        p = sq.triangulation.punctures[0]
        cycle = next(
            c for c in local_cycles(sq, p, 8)
            if c not in self.good and sq.is_lp_power(c) is None
        )
        w = self.w + Potential.from_terms(sq, self.N, [(cycle, 1)])

        with self.assertRaises(PreconditionError):
            bound_nonlocal(w)

class SeededReduceTests(SimpleTestCase):
    """reduce on seeded random inputs at the minimum truncation."""

    def setUp(self):
        self.sq = fixture(0, 4, 2)
        self.N = minimum_truncation(self.sq)
        self.certified = max_reduced_degree(self.sq)

    def reduce_case(self, index):
        rng = case_rng(7, 'reduction', index)
        w = random_standard_potential(rng, self.sq, self.N, extra_terms=3)
        return rng, w, reduce(w, through=self.certified)

    def test_random_inputs_reach_certified_degree(self):
        """Test random standard potentials reduce through the largest reduced cycle."""
        for index in range(3):
            _, w, result = self.reduce_case(index)

            self.assertEqual(result.guaranteed_degree, self.certified, msg=f'case {index}')
            self.assertEqual(unreduced(result.potential, self.certified), [], msg=f'case {index}')
            self.assertEqual(apply(result.equivalence, w).truncated(self.certified),
                             result.potential.truncated(self.certified))

    def test_perturbed_inputs_keep_theta(self):
        """Test theta of the reduced form survives a random unitriangular change of variables."""
        for index in range(3):
            rng, w, first = self.reduce_case(index)
            moved = apply(random_unitriangular(rng, self.sq, self.N), w)

            second = reduce(moved, through=self.certified)

            self.assertEqual(second.guaranteed_degree, self.certified, msg=f'case {index}')
            self.assertEqual(
                theta(first, theta_table_for(first.potential)),
                theta(second, theta_table_for(second.potential)),
                msg=f'case {index}',
            )

    def test_tail_sits_on_target(self):
        """Test the reduced tail through the certified degree lives on C0 only."""
        target = collection_target(self.sq)
        for index in range(3):
            _, _, result = self.reduce_case(index)

            self.assertLessEqual(set(result.tail), {target}, msg=f'case {index}')

    def test_stage_moves_are_aggregated(self):
        """Test every stage is reported once even when the pipeline runs several rounds."""
        _, _, result = self.reduce_case(0)

        names = [name for name, _, _ in result.stages]
        self.assertEqual(names, ['standardize'] + [name for name, _ in PIPELINE])
        self.assertTrue(all(moves >= 0 for _, moves, _ in result.stages))
