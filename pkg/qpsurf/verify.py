"""
Verification suites run by the ``verify`` command.

Each suite checks one family of exact identities on the bundled
fixtures, either once per fixture or on seeded random cases (see
``prng``). Cases are independent: a failure records the case index and
message and the suite moves on.
"""

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .catalog import by_signature
from .conf import get_setting
from .exceptions import QPSurfError
from .homology import build_complex, euler_check, h1_rank, h2_rank, topology_report
from .potential import Potential, primitive_part
from .primitive import primitive_class, primitive_potential
from .prng import (
    SUITES,
    case_rng,
    random_cycle,
    random_equivalence,
    random_generic_potential,
    random_quiver,
    random_seed,
    random_standard_coefficients,
    random_standard_potential,
    random_unitriangular,
    sample,
)
from .quiver import mutate_quiver, mutate_seed, seed_of
from .reduced import collection_target, generator_paths, max_reduced_degree
from .reduction import EQUIVALENT, INEQUIVALENT, decide_equivalence, minimum_truncation, reduce, unreduced
from .requiv import apply, cut_formula_coefficient, elementary
from .surface_quiver import SurfaceQuiver, brute_force_chordless, build_surface_quiver, enumerate_chordless
from .theta import check_symbolic_identities, closed_form, solve_theta

logger = logging.getLogger('qpsurf')

CHORDLESS_FIXTURES = ((0, 4, 1), (0, 4, 2), (0, 5, 2), (1, 3, 2), (1, 3, 3))
THETA_FIXTURES = ((0, 4, 2), (1, 3, 2))

DEFAULT_CASES = {
    'cutlemma': None,
    'equivariance': 100,
    'theta': 200,
    'reduction': 50,
    'mutation': 1000,
}


@dataclass
class SuiteResult:
    """Outcome of one suite."""
    name: str
    passed: int = 0
    total: int = 0
    failures: List[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def record(self, label: str, ok: bool, detail: str = ''):
        self.total += 1
        if ok:
            self.passed += 1
        else:
            self.failures.append(f'{label}: {detail}' if detail else label)

    def summary(self) -> str:
        return f'{self.name}: {self.passed}/{self.total} pass'


@lru_cache(maxsize=16)
def fixture(genus: int, punctures: int, m: int) -> SurfaceQuiver:
    return build_surface_quiver(by_signature(genus, punctures), m)


def _check(result: SuiteResult, label: str, check: Callable[[], Tuple[bool, str]]):
    try:
        ok, detail = check()
    except QPSurfError as exc:
        ok, detail = False, f'{type(exc).__name__}: {exc}'
    result.record(label, ok, detail)


# =============================================================================
# FIXTURE SUITES
# =============================================================================

def census(sq: SurfaceQuiver) -> Dict[str, int]:
    kinds = {'black': 0, 'white': 0, 'L': 0}
    for cell in sq.chordless_cells:
        kinds[cell.kind] += 1
    return kinds


def expected_census(sq: SurfaceQuiver) -> Dict[str, int]:
    t, m = sq.triangulation, sq.m
    faces, arcs = len(t.face_labels), len(t.arcs)
    return {
        'black': faces * m * (m + 1) // 2,
        'white': faces * (m - 1) * (m - 2) // 2 + arcs * (m - 1),
        'L': t.num_punctures * m,
    }


def suite_chordless(result: SuiteResult, seed: int, cases: int):
    for g, d, m in CHORDLESS_FIXTURES:
        sq = fixture(g, d, m)

        def check():
            listed = sorted(enumerate_chordless(sq), key=lambda w: (len(w), w))
            if listed != brute_force_chordless(sq):
                return False, 'enumeration differs from graph search'
            found, expected = census(sq), expected_census(sq)
            return found == expected, f'census {found} != {expected}'

        _check(result, f'({g},{d},{m})', check)


def suite_cohomology(result: SuiteResult, seed: int, cases: int):
    for g, d, m in CHORDLESS_FIXTURES:
        sq = fixture(g, d, m)

        def check():
            complex2 = build_complex(sq)
            free, torsion = h2_rank(complex2)
            h1 = h1_rank(complex2)
            ok = (
                complex2.is_chain_complex()
                and free == d * (m - 1) + 1
                and h1 == 2 * g
                and euler_check(complex2, g, d, m)
            )
            return ok, f'h2 free {free} torsion {torsion}, h1 {h1}'

        _check(result, f'({g},{d},{m})', check)


def suite_topology(result: SuiteResult, seed: int, cases: int):
    for g, d, m in CHORDLESS_FIXTURES:
        sq = fixture(g, d, m)

        def check():
            report = topology_report(g, d, m, len(sq.quiver.vertices))
            failed = [name for name, ok in report.checks.items() if not ok]
            return not failed, f'failed checks {failed}'

        _check(result, f'({g},{d},{m})', check)
    for (g, d, m), genus in (((0, 4, 1), 1), ((1, 3, 2), 10)):
        _check(result, f'spectral genus ({g},{d},{m})',
               lambda: (topology_report(g, d, m).spectral_genus == genus, f'expected {genus}'))


# =============================================================================
# RANDOM SUITES
# =============================================================================

def suite_cutlemma(result: SuiteResult, seed: int, cases: int):
    sq, N = fixture(0, 4, 2), 10
    for index in range(cases):
        rng = case_rng(seed, 'cutlemma', index)

        def check():
            w = random_generic_potential(rng, sq, N)
            phi = random_unitriangular(rng, sq, N)
            image = apply(phi, w)
            if image.terms and rng.random() < 0.5:
                word = sample(rng, image.support(), 1)[0]
            else:
                word = random_cycle(rng, sq, max_length=N)
                if word is None:
                    return True, ''
            expected = image.coefficient(word)
            found = cut_formula_coefficient(w, phi, word)
            return found == expected, f'cut formula {found} != {expected}'

        _check(result, f'case {index}', check)


def suite_equivariance(result: SuiteResult, seed: int, cases: int):
    sq, N = fixture(0, 4, 2), 10
    for index in range(cases):
        rng = case_rng(seed, 'equivariance', index)

        def check():
            w = random_generic_potential(rng, sq, N)
            phi = random_unitriangular(rng, sq, N)
            left = primitive_part(apply(phi, w))
            right = primitive_part(apply(phi, primitive_part(w)))
            if left != right:
                return False, 'primitive parts differ'
            psi = random_equivalence(rng, sq, N)
            before = primitive_class(w).coordinates()
            after = primitive_class(apply(psi, w)).coordinates()
            return before == after, 'invariant coordinates changed'

        _check(result, f'case {index}', check)


def suite_theta(result: SuiteResult, seed: int, cases: int):
    identities = check_symbolic_identities()
    for name, holds in identities.items():
        result.record(f'identity {name}', holds)

    tables = {}
    for position, (g, d, m) in enumerate(THETA_FIXTURES):
        sq = fixture(g, d, m)
        # one coefficient draw per fixture, from a stream outside the case range
        rng = case_rng(seed, 'theta', 1_000_000 + position)
        v = random_standard_coefficients(rng, sq)
        try:
            table = solve_theta(sq, v[1], v[2])
        except QPSurfError as exc:
            result.record(f'solve ({g},{d},{m})', False, str(exc))
            continue
        tables[(g, d, m)] = (table, v)
        valences = sq.triangulation.valences
        mismatched = [
            cycle.label() for cycle in table.cycles
            if closed_form(cycle, table.v1, table.v2, valences) not in (None, table[cycle.word])
        ]
        result.record(f'closed forms ({g},{d},{m})', not mismatched, f'mismatched {mismatched[:5]}')

    for index in range(cases):
        key = THETA_FIXTURES[index % len(THETA_FIXTURES)]
        if key not in tables:
            continue
        table, v = tables[key]
        sq = fixture(*key)
        rng = case_rng(seed, 'theta', index)

        def check():
            N = max_reduced_degree(sq)
            w = primitive_potential(sq, N, v)
            beta, path = sample(rng, generator_paths(sq), 1)[0]
            moved = apply(elementary(sq, N, beta, [(path, 1)]), w)
            value = table.evaluate(moved.terms)
            return value == table.evaluate(w.terms), f'theta moved to {value}'

        _check(result, f'case {index} {key}', check)


def suite_reduction(result: SuiteResult, seed: int, cases: int):
    sq = fixture(0, 4, 2)
    N = max(get_setting('QPSURF_DEFAULT_TRUNCATION'), minimum_truncation(sq))
    needed = max_reduced_degree(sq)
    target = collection_target(sq)
    for index in range(cases):
        rng = case_rng(seed, 'reduction', index)

        def check():
            w = random_standard_potential(rng, sq, N, extra_terms=3)
            reduced = reduce(w)
            out = reduced.potential
            through = reduced.guaranteed_degree
            if apply(reduced.equivalence, w).truncated(through) != out.truncated(through):
                return False, 'composed equivalence does not reproduce the output'
            if unreduced(out, through):
                return False, 'unreduced cycles below the certified degree'
            if through < needed:
                return False, f'certified only through degree {through}'
            phi = random_unitriangular(rng, sq, N)
            verdict = decide_equivalence(w, apply(phi, w))
            if verdict != EQUIVALENT:
                return False, f'w vs phi(w): {verdict}'
            shifted = w + Potential.from_terms(sq, N, [(target, 1)])
            verdict = decide_equivalence(w, shifted)
            return verdict == INEQUIVALENT, f'w vs w + C0: {verdict}'

        _check(result, f'case {index}', check)


def suite_mutation(result: SuiteResult, seed: int, cases: int):
    for index in range(cases):
        rng = case_rng(seed, 'mutation', index)

        def check():
            seed_value = random_seed(rng)
            k = seed_value.index[int(rng.integers(len(seed_value.index)))]
            once = mutate_seed(seed_value, k)
            if (once.epsilon != -once.epsilon.T).any():
                return False, 'mutation broke skew-symmetry'
            if mutate_seed(once, k) != seed_value:
                return False, 'mutation is not an involution'
            if index % 5:
                return True, ''
            q = random_quiver(rng)
            vertex = q.vertices[int(rng.integers(len(q.vertices)))]
            agree = seed_of(mutate_quiver(q, vertex)) == mutate_seed(seed_of(q), vertex)
            return agree, 'quiver and seed mutation disagree'

        _check(result, f'case {index}', check)


SUITE_FUNCTIONS = {
    'chordless': suite_chordless,
    'cohomology': suite_cohomology,
    'topology': suite_topology,
    'cutlemma': suite_cutlemma,
    'equivariance': suite_equivariance,
    'theta': suite_theta,
    'reduction': suite_reduction,
    'mutation': suite_mutation,
}


def suite_names(name: str) -> Sequence[str]:
    if name == 'all':
        return SUITES
    if name not in SUITE_FUNCTIONS:
        raise KeyError(f'unknown suite {name!r}')
    return (name,)


def run_suite(name: str, seed: int, cases: Optional[int] = None) -> SuiteResult:
    """
    Run one suite.

    Args:
        name: suite name (see SUITES)
        seed: run seed
        cases: case count for random suites; defaults per suite

    Returns:
        SuiteResult with per-case failures
    """
    if cases is None:
        cases = DEFAULT_CASES.get(name) or get_setting('QPSURF_VERIFY_CASES')
    result = SuiteResult(name)
    started = time.perf_counter()
    SUITE_FUNCTIONS[name](result, seed, cases)
    result.seconds = time.perf_counter() - started
    logger.info(f'{result.summary()} in {result.seconds:.1f}s')
    return result


def run(name: str, seed: int, cases: Optional[int] = None) -> List[SuiteResult]:
    return [run_suite(suite, seed, cases) for suite in suite_names(name)]
