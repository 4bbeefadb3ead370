"""
The m = 2 reduction pipeline and the right-equivalence decision.

Each stage removes one class of unwanted cycles. All unwanted cycles of
one degree are first attacked together: the moves beta -> beta + t P
whose chord cuts a 3-cycle change that degree linearly in the t and
leave every lower degree alone, so one sparse solve clears the degree
when the system is consistent. What is left is removed cycle by cycle
with elementary moves beta -> beta + t P, beta a chord of the cycle, P
its chord path and the cut cycle carrying a nonzero coefficient.

A single move is kept only when it leaves no unwanted cycle at or below
the one it removes; when none qualifies, pairs are tried, and when that
fails as well the cycle is left for the next round. reduce repeats the
whole pipeline while the unreduced cycles keep retreating to higher
degree, and lowers the certified degree only when a round makes no
progress.
"""

import logging
import time
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .conf import get_setting
from .exceptions import (
    NotGenericError,
    NotNormalizableError,
    NotStronglyGenericError,
    PreconditionError,
    ReductionError,
    UnsupportedRankError,
)
from .potential import Potential, Rational, _least, primitive_part
from .primitive import (
    is_generic,
    primitive_class,
    standard_coefficients,
    standardize_primitive,
    strong_genericity_defects,
)
from .reduced import ReducedPotential, collection_index, collection_target, max_reduced_degree
from .requiv import (
    RightEquivalence,
    apply,
    chord_path,
    compose,
    cut,
    elementary,
    find_chords,
    identity,
    simultaneous,
)
from .surface_quiver import SurfaceQuiver, Word
from .theta import Row, first_order_delta, first_order_rows, invariance_rows, k_values, theta, theta_table_for

logger = logging.getLogger('qpsurf')

Predicate = Callable[[Word], bool]

# candidate first moves explored when no single move clears a cycle
LOOKAHEAD = 8
# nonlocal cycles of degree <= 7 are never removed, so certification stops here
LOWEST_CERTIFIED = 7
# cycles one degree-wide solve may constrain
CLEAR_LIMIT = 4000

EQUIVALENT = 'equivalent'
INEQUIVALENT = 'inequivalent'
UNDECIDED = 'undecided'


def _key(word: Word) -> Tuple[int, Word]:
    return len(word), word


def _render(sq: SurfaceQuiver, word: Sequence[int]) -> str:
    return ' '.join(sq.quiver.arrow_tokens[a] for a in word)


@lru_cache(maxsize=16)
def good_cycles(sq: SurfaceQuiver) -> FrozenSet[Word]:
    """Chordless cycles together with the reduced collection (m = 2)."""
    good = set(sq.chordless_set)
    if sq.m == 2:
        good.update(collection_index(sq))
    return frozenset(good)


def minimum_truncation(sq: SurfaceQuiver) -> int:
    """N_min: largest reduced cycle plus twice the largest valence."""
    return max_reduced_degree(sq) + 2 * sq.max_valence


def _through(w: Potential, through: Optional[int]) -> int:
    return w.N if through is None else min(through, w.N)


def _require_rank_two(sq: SurfaceQuiver):
    if sq.m != 2:
        raise UnsupportedRankError(f'the reduction is only available for m=2 (got m={sq.m})')


def _require_generic(w: Potential):
    if not is_generic(w):
        raise NotGenericError('some chordless cycle has coefficient 0')


def _require_strongly_generic(w: Potential):
    if not is_generic(w):
        raise NotStronglyGenericError('some chordless cycle has coefficient 0')
    defects = strong_genericity_defects(w)
    if defects:
        raise NotStronglyGenericError(f'h + (-1)^val(p) h_p vanishes at punctures {defects}')


def _l_power(sq: SurfaceQuiver, word: Word, level: Optional[int] = None) -> Optional[Tuple[int, int, int]]:
    """(p, k, n) when the cycle is (L_p^(k))^n with n >= 2."""
    found = sq.is_lp_power(word)
    if found is None or found[2] < 2:
        return None
    if level is not None and found[1] != level:
        return None
    return found


def _solve_sparse(equations: Sequence[Dict[int, Rational]], rhs: Sequence[Rational],
                  unknowns: int) -> Optional[Dict[int, Rational]]:
    """A solution of sum_j A[i][j] x_j = b_i with free unknowns zero, or None when inconsistent."""
    entries = {}
    for i, (row, b) in enumerate(zip(equations, rhs)):
        entry = {j: value for j, value in row.items() if value != 0}
        if b != 0:
            entry[unknowns] = b
        if entry:
            entries[i] = entry
    if not entries:
        return {}
    reduced, pivots = DomainMatrix(entries, (len(equations), unknowns + 1), QQ).rref()
    if unknowns in pivots:
        return None
    table = reduced.to_dod()
    return {col: table.get(i, {}).get(unknowns, QQ.zero) for i, col in enumerate(pivots)}


def _tails(moves: Sequence[Tuple[int, Word]], solution: Dict[int, Rational]) -> Dict[int, List[Tuple[Word, Rational]]]:
    tails: Dict[int, List[Tuple[Word, Rational]]] = {}
    for j, t in sorted(solution.items()):
        if t != 0:
            beta, path = moves[j]
            tails.setdefault(beta, []).append((path, t))
    return tails


# =============================================================================
# ELIMINATION ENGINE
# =============================================================================

@dataclass
class StageOutcome:
    """Result of one reduction stage; ``remaining`` lists what it could not remove."""
    name: str
    equivalence: RightEquivalence
    potential: Potential
    guaranteed_degree: int
    moves: int = 0
    seconds: float = 0.0
    remaining: Tuple[Word, ...] = field(default_factory=tuple)

    def pair(self) -> Tuple[RightEquivalence, Potential]:
        return self.equivalence, self.potential


class _Eliminator:
    """
    Removes the cycles selected by a predicate, outside chordless cycles
    and the reduced collection.

    Args:
        w: potential to clean
        through: degree up to which the result is certified
        frozen: cycles whose coefficients no move may change
    """

    def __init__(self, w: Potential, through: int, frozen: Optional[Predicate] = None):
        self.sq = w.sq
        self.w = w
        self.phi = identity(w.sq, w.N)
        self.through = through
        self.frozen = frozen
        self.moves = 0
        self.budget = get_setting('QPSURF_REDUCTION_MAX_MOVES')
        self.good = good_cycles(w.sq)
        self.black = frozenset(w.sq.black_regions)
        self.snapshot = self._frozen_part(w) if frozen else None
        self.stuck: Set[Word] = set()
        self.cleared: Set[int] = set()

    def _frozen_part(self, w: Potential) -> Dict[Word, Rational]:
        return {c: v for c, v in w.terms.items() if len(c) <= self.through and self.frozen(c)}

    def _frozen_ok(self, w: Potential) -> bool:
        if self.snapshot is None:
            return True
        return self._frozen_part(w) == self.snapshot

    def unwanted(self, w: Potential, is_bad: Predicate) -> List[Word]:
        return sorted(
            (c for c in w.terms if len(c) <= self.through and c not in self.good and is_bad(c)),
            key=_key,
        )

    def candidates(self, w: Potential, target: Word) -> List[Tuple[int, Word]]:
        """(beta, P) over the chords of ``target`` whose cut cycle is present; black cuts first."""
        ranked = set()
        for chord in find_chords(target, self.sq):
            cut_cycle = _least(cut(target, [chord]))
            if cut_cycle not in w.terms:
                continue
            if cut_cycle in self.black:
                tier = 0
            elif cut_cycle in self.sq.chordless_set:
                tier = 1
            else:
                tier = 2
            ranked.add((tier, _key(cut_cycle), chord.beta, chord_path(target, chord)))
        return [(beta, path) for _, _, beta, path in sorted(ranked)]

    def solve(self, w: Potential, target: Word, beta: int,
              path: Word) -> Optional[Tuple[RightEquivalence, Potential]]:
        """The move beta -> beta + t P that zeroes ``target``, if one exists."""
        sq, N = self.sq, w.N
        before = w.terms.get(target, QQ.zero)
        trial = apply(elementary(sq, N, beta, [(path, 1)]), w)
        after = trial.terms.get(target, QQ.zero)
        if after == before:
            return None
        t = -before / (after - before)
        move = elementary(sq, N, beta, [(path, t)])
        moved = trial if t == 1 else apply(move, w)
        if target in moved.terms:
            return None
        return move, moved

    def attempts(self, w: Potential, target: Word, limit: Tuple[int, Word], is_bad: Predicate):
        """Single moves removing ``target``, best first; score[0] counts unwanted cycles up to ``limit``."""
        scored = []
        for beta, path in self.candidates(w, target):
            result = self.solve(w, target, beta, path)
            if result is None:
                continue
            move, moved = result
            if not self._frozen_ok(moved):
                continue
            remaining = self.unwanted(moved, is_bad)
            blockers = sum(1 for c in remaining if _key(c) <= limit and c not in self.stuck)
            scored.append(((blockers, len(remaining), len(moved.terms)), move, moved))
        scored.sort(key=lambda entry: entry[0])
        return scored

    def eliminate(self, target: Word, is_bad: Predicate) -> bool:
        limit = _key(target)
        scored = self.attempts(self.w, target, limit, is_bad)
        if scored and scored[0][0][0] == 0:
            _, move, moved = scored[0]
            self._accept([move], moved, target)
            return True
        for _, first, w1 in scored[:LOOKAHEAD]:
            blocker = next(c for c in self.unwanted(w1, is_bad) if _key(c) <= limit and c not in self.stuck)
            follow = self.attempts(w1, blocker, limit, is_bad)
            if follow and follow[0][0][0] == 0:
                _, second, w2 = follow[0]
                self._accept([first, second], w2, target)
                return True
        return False

    def _targeted(self, word: Word, is_bad: Predicate) -> bool:
        return word not in self.good and is_bad(word)

    def _constrained(self, word: Word, is_bad: Predicate) -> bool:
        return self._targeted(word, is_bad) or (self.frozen is not None and self.frozen(word))

    def clear_degree(self, degree: int, is_bad: Predicate) -> bool:
        """
        Remove every unwanted cycle of one degree with one simultaneous move.

        Uses only paths of degree - 2 arrows, so the change at this degree
        is exactly the first-order one and lower degrees stay untouched.
        Unwanted and frozen cycles of the degree are constrained; the rest
        may change freely.
        """
        sq, w = self.sq, self.w
        queue = [c for c in self.unwanted(w, is_bad) if len(c) == degree and c not in self.stuck]
        if not queue or degree < 4:
            return False
        prim = primitive_part(w)
        deltas: Dict[Tuple[int, Word], Dict[Word, Rational]] = {}
        seen: Set[Word] = set()
        while queue:
            c = queue.pop()
            if c in seen:
                continue
            seen.add(c)
            if len(seen) > CLEAR_LIMIT:
                return False
            for chord in find_chords(c, sq):
                path = chord_path(c, chord)
                key = (chord.beta, path)
                if len(path) != degree - 2 or key in deltas:
                    continue
                delta = first_order_delta(prim, chord.beta, path, degree)
                deltas[key] = delta
                queue.extend(x for x in delta if x not in seen and self._constrained(x, is_bad))

        moves = list(deltas)
        columns = sorted(seen, key=_key)
        row_of = {c: i for i, c in enumerate(columns)}
        equations: List[Dict[int, Rational]] = [{} for _ in columns]
        for j, key in enumerate(moves):
            for x, value in deltas[key].items():
                if x in row_of:
                    equations[row_of[x]][j] = value
        rhs = [-w.terms.get(c, QQ.zero) if self._targeted(c, is_bad) else QQ.zero for c in columns]
        solution = _solve_sparse(equations, rhs, len(moves))
        if not solution:
            return False

        move = simultaneous(sq, w.N, _tails(moves, solution))
        moved = apply(move, w)
        left = [c for c in self.unwanted(moved, is_bad) if len(c) == degree]
        if left or not self._frozen_ok(moved):
            logger.debug(f'Degree {degree} solve left {len(left)} unwanted cycles; falling back to single moves')
            return False
        self._accept([move], moved, columns[0])
        logger.debug(f'Cleared degree {degree}: {len(columns)} cycles constrained, {len(moves)} paths')
        return True

    def _accept(self, moves: List[RightEquivalence], moved: Potential, target: Word):
        for move in moves:
            self.phi = compose(move, self.phi)
            self.moves += 1
        self.w = moved
        logger.debug(f'Removed [{_render(self.sq, target)}] with {len(moves)} move(s)')
        if self.moves > self.budget:
            raise ReductionError(f'more than {self.budget} moves without finishing')

    def run(self, is_bad: Predicate):
        while True:
            pending = [c for c in self.unwanted(self.w, is_bad) if c not in self.stuck]
            if not pending:
                return
            target = pending[0]
            degree = len(target)
            if degree not in self.cleared:
                self.cleared.add(degree)
                if self.clear_degree(degree, is_bad):
                    continue
            if not self.eliminate(target, is_bad):
                logger.debug(f'No move removes [{_render(self.sq, target)}]; left for the next round')
                self.stuck.add(target)


def _run_stage(name: str, w: Potential, through: int, is_bad: Predicate,
               frozen: Optional[Predicate] = None) -> StageOutcome:
    started = time.perf_counter()
    eliminator = _Eliminator(w, through, frozen)
    eliminator.run(is_bad)
    remaining = tuple(eliminator.unwanted(eliminator.w, is_bad))
    outcome = StageOutcome(
        name, eliminator.phi, eliminator.w, through,
        eliminator.moves, time.perf_counter() - started, remaining,
    )
    logger.info(
        f'Stage {name}: {outcome.moves} moves, {len(outcome.potential)} terms, '
        f'{len(remaining)} unwanted cycles left through degree {through}'
    )
    return outcome


def _finish(outcome: StageOutcome) -> Tuple[RightEquivalence, Potential]:
    if outcome.remaining:
        first = min(outcome.remaining, key=_key)
        raise ReductionError(
            f'no move removes [{_render(outcome.potential.sq, first)}] (degree {len(first)}) '
            f'in stage {outcome.name}'
        )
    return outcome.pair()


# =============================================================================
# STAGES
# =============================================================================

def _straighten(w: Potential, through: int) -> StageOutcome:
    _require_generic(w)
    sq = w.sq
    return _run_stage(
        'straighten', w, through,
        is_bad=lambda c: not sq.is_straight(c),
        frozen=lambda c: _l_power(sq, c, level=1) is not None,
    )


def _straighten_nonlocal(w: Potential, through: int) -> StageOutcome:
    sq = w.sq
    _require_rank_two(sq)
    _require_generic(w)
    return _run_stage(
        'straighten_nonlocal', w, through,
        is_bad=lambda c: len(c) >= 8 and not sq.is_local(c) and not sq.is_straight(c),
        frozen=sq.is_local,
    )


def _localize(w: Potential, through: int) -> StageOutcome:
    sq = w.sq
    _require_rank_two(sq)
    _require_generic(w)
    return _run_stage(
        'localize', w, through,
        is_bad=lambda c: sq.is_local(c) and _l_power(sq, c) is None,
    )


def _remove_l_powers(w: Potential, through: int) -> StageOutcome:
    sq = w.sq
    _require_rank_two(sq)
    _require_generic(w)
    v1, v2 = standard_coefficients(w)
    k = k_values(v1, v2, sq.triangulation.valences)
    for c in w.terms:
        found = _l_power(sq, c, level=2)
        if found and len(c) <= through and k[found[0]] == 0:
            p, _, n = found
            raise NotStronglyGenericError(f'k_p = 0 at puncture {p} blocks removing (L_p^(2))^{n}')
    return _run_stage(
        'remove_l_powers', w, through,
        is_bad=lambda c: _l_power(sq, c) is not None,
    )


def _bound_nonlocal(w: Potential, through: int, check: bool = True) -> StageOutcome:
    sq = w.sq
    _require_rank_two(sq)
    if check:
        good = good_cycles(sq)
        local = [c for c in w.terms if len(c) <= through and c not in good and sq.is_local(c)]
        if local:
            raise PreconditionError(f'{len(local)} local cycles remain, e.g. [{_render(sq, min(local, key=_key))}]')
    return _run_stage(
        'bound_nonlocal', w, through,
        is_bad=lambda c: len(c) >= 8 and not sq.is_local(c),
    )


def _stray_tail(w: Potential, index, target: Word, through: int) -> Dict[Word, Rational]:
    return {c: v for c, v in w.terms.items() if c in index and c != target and len(c) <= through}


def _transport_rows(w: Potential, through: int) -> List[Row]:
    sq = w.sq
    v1, v2 = standard_coefficients(w)
    k = k_values(v1, v2, sq.triangulation.valences)
    if any(value == 0 for value in k.values()):
        raise NotStronglyGenericError('k_p = 0 at some puncture')
    rows = first_order_rows(sq, v1, v2, min(through, max_reduced_degree(sq)))
    if rows is None:
        rows = invariance_rows(sq, v1, v2)
    return rows


def _transport(rows: List[Row], target: Word, w: Potential, through: int) -> Optional[RightEquivalence]:
    """
    Generator moves carrying the tail onto the target cycle.

    Solves w[c] + sum_P t_P delta_P[c] = 0 for every cycle c other than
    the target that the rows touch through ``through``, with free
    unknowns set to zero. Returns None when no such moves exist.
    """
    equations: Dict[Word, Dict[int, Rational]] = {}
    for j, (_, _, delta) in enumerate(rows):
        for c, value in delta.items():
            if len(c) <= through and c != target:
                equations.setdefault(c, {})[j] = value
    columns = sorted(equations, key=_key)
    rhs = [-w.terms.get(c, QQ.zero) for c in columns]
    solution = _solve_sparse([equations[c] for c in columns], rhs, len(rows))
    if solution is None:
        logger.warning('The reduced tail cannot be moved onto the collection target in one step')
        return None
    tails = _tails([(beta, path) for beta, path, _ in rows], solution)
    if not tails:
        return None
    return simultaneous(w.sq, w.N, tails)


def _collect(w: Potential, through: int) -> StageOutcome:
    sq = w.sq
    _require_rank_two(sq)
    started = time.perf_counter()
    index = collection_index(sq)
    target = collection_target(sq)
    phi = identity(sq, w.N)
    current, moves, rows = w, 0, None
    if len(target) > through:
        return StageOutcome('collect', phi, current, through)

    left: Tuple[Word, ...] = ()
    for round_number in range(get_setting('QPSURF_REDUCTION_ROUNDS')):
        stray = _stray_tail(current, index, target, through)
        if stray:
            if rows is None:
                rows = _transport_rows(current, through)
            move = _transport(rows, target, current, through)
            if move is not None:
                current = apply(move, current)
                phi = compose(move, phi)
                moves += 1
        cleanup = _run_stage(f'collect.{round_number + 1}', current, through, is_bad=lambda c: True)
        current = cleanup.potential
        phi = compose(cleanup.equivalence, phi)
        moves += cleanup.moves
        left = cleanup.remaining
        if not stray and not cleanup.moves:
            break

    stray = _stray_tail(current, index, target, through)
    remaining = tuple(sorted(set(left) | set(stray), key=_key))
    outcome = StageOutcome('collect', phi, current, through, moves, time.perf_counter() - started, remaining)
    logger.info(
        f'Stage collect: {moves} moves, target coefficient {current.terms.get(target, QQ.zero)}, '
        f'{len(stray)} stray tail terms'
    )
    return outcome


def straighten(w: Potential, through: Optional[int] = None) -> Tuple[RightEquivalence, Potential]:
    """
    Remove every non-straight cycle outside the reduced collection.

    Coefficients of the powers (L_p^(1))^n, n > 1, are left unchanged.

    Args:
        w: generic potential
        through: certification degree, defaults to w.N

    Returns:
        (equivalence, straightened potential) with apply(equivalence, w) == potential

    Raises:
        NotGenericError: a chordless coefficient vanishes
        ReductionError: some cycle cannot be removed
    """
    return _finish(_straighten(w, _through(w, through)))


def straighten_nonlocal(w: Potential, through: Optional[int] = None) -> Tuple[RightEquivalence, Potential]:
    """Straighten nonlocal cycles of degree >= 8 without touching the local part."""
    return _finish(_straighten_nonlocal(w, _through(w, through)))


def localize(w: Potential, through: Optional[int] = None) -> Tuple[RightEquivalence, Potential]:
    """Leave only powers (L_p^(k))^n among the local non-chordless cycles."""
    return _finish(_localize(w, _through(w, through)))


def remove_l_powers(w: Potential, through: Optional[int] = None) -> Tuple[RightEquivalence, Potential]:
    """
    Remove the powers (L_p^(k))^n outside the reduced collection.

    Raises:
        NotStronglyGenericError: some (L_p^(2))^n is present where k_p = 0
    """
    return _finish(_remove_l_powers(w, _through(w, through)))


def bound_nonlocal(w: Potential, through: Optional[int] = None) -> Tuple[RightEquivalence, Potential]:
    """
    Remove nonlocal cycles of degree >= 8 outside the reduced collection.

    Raises:
        PreconditionError: local cycles outside the reduced collection remain
    """
    return _finish(_bound_nonlocal(w, _through(w, through)))


def collect(w: Potential, through: Optional[int] = None) -> Tuple[RightEquivalence, Potential]:
    """Move the whole reduced tail onto the collection target C0."""
    return _finish(_collect(w, _through(w, through)))


PIPELINE = (
    ('straighten', _straighten),
    ('straighten_nonlocal', _straighten_nonlocal),
    ('localize', _localize),
    ('remove_l_powers', _remove_l_powers),
    ('bound_nonlocal', partial(_bound_nonlocal, check=False)),
    ('collect', _collect),
)


# =============================================================================
# REDUCE AND DECIDE
# =============================================================================

def unreduced(w: Potential, through: int) -> List[Word]:
    """
    Cycles through ``through`` that keep w from being reduced: those
    outside chordless cycles and the collection, and collection cycles
    other than C0. Sorted by (degree, word).
    """
    sq = w.sq
    good = good_cycles(sq)
    index = collection_index(sq)
    target = collection_target(sq)
    return sorted(
        (c for c in w.terms if len(c) <= through and (c not in good or (c in index and c != target))),
        key=_key,
    )


def _progress(remaining: Sequence[Word]) -> Tuple[int, int, int]:
    """Larger is better: the lowest unreduced degree, then fewer cycles there, then fewer overall."""
    if not remaining:
        return 10 ** 9, 0, 0
    lowest = len(remaining[0])
    return lowest, -sum(1 for c in remaining if len(c) == lowest), -len(remaining)


def reduce(w: Potential, through: Optional[int] = None) -> ReducedPotential:
    """
    Bring a strongly generic potential to reduced form.

    Standardizes the primitive part, then repeats PIPELINE while the
    unreduced cycles keep retreating (lowest unreduced degree up, or
    fewer cycles there, or fewer in total). When a round makes no
    progress the certified degree drops to just below the lowest
    unreduced cycle. Finally checks that the composed equivalence maps w
    onto the result through the certified degree.

    Args:
        w: strongly generic potential on Q_{T,2}
        through: degree to certify, defaults to w.N

    Returns:
        ReducedPotential with the composed equivalence and per-stage timings

    Raises:
        NotStronglyGenericError: w is not strongly generic
        UnsupportedRankError: m != 2
        ReductionError: the pipeline cannot certify degree 7
    """
    sq = w.sq
    _require_rank_two(sq)
    _require_strongly_generic(w)
    advisory = minimum_truncation(sq)
    if w.N < advisory:
        logger.info(f'Truncation {w.N} is below the advisory degree {advisory}')
    through = _through(w, through)
    floor = min(LOWEST_CERTIFIED, through)

    started = time.perf_counter()
    phi, current = standardize_primitive(w)
    totals: Dict[str, List[float]] = {'standardize': [0, time.perf_counter() - started]}
    for name, _ in PIPELINE:
        totals[name] = [0, 0.0]

    remaining = unreduced(current, through)
    rounds = get_setting('QPSURF_REDUCTION_ROUNDS')
    for round_number in range(1, rounds + 1):
        if not remaining:
            break
        for name, stage in PIPELINE:
            outcome = stage(current, through)
            phi = compose(outcome.equivalence, phi)
            current = outcome.potential
            totals[name][0] += outcome.moves
            totals[name][1] += outcome.seconds
        left = unreduced(current, through)
        logger.info(f'Round {round_number}: {len(left)} unreduced cycles through degree {through}')
        improved = _progress(left) > _progress(remaining)
        remaining = left
        if not improved:
            break

    if remaining:
        lowered = len(remaining[0]) - 1
        if lowered < floor:
            raise ReductionError(
                f'no move removes [{_render(sq, remaining[0])}] (degree {len(remaining[0])})'
            )
        logger.warning(f'Certified degree lowered to {lowered}: stuck at [{_render(sq, remaining[0])}]')
        through = lowered

    if apply(phi, w).truncated(through) != current.truncated(through):
        raise ReductionError('composed equivalence does not reproduce the reduced potential')

    index = collection_index(sq)
    v1, v2 = standard_coefficients(current)
    tail = {c: v for c, v in current.terms.items() if c in index and len(c) <= through}
    stages = tuple((name, int(moves), seconds) for name, (moves, seconds) in totals.items())
    logger.info(f'Reduced to {len(tail)} tail terms, certified through degree {through}')
    return ReducedPotential(v1, v2, tail, through, current, phi, stages)
@dataclass(frozen=True)
class EquivalenceReport:
    """Verdict of decide_equivalence with the values it was based on."""
    verdict: str
    coordinates: Tuple[Tuple[Rational, ...], Tuple[Rational, ...]]
    theta: Tuple[Optional[Rational], Optional[Rational]] = (None, None)
    guaranteed_degree: Optional[int] = None
    reason: str = ''


def compare_potentials(w1: Potential, w2: Potential) -> EquivalenceReport:
    """
    Decide right-equivalence of two strongly generic potentials on Q_{T,2}.

    Equivalent exactly when the invariant coordinates (h, h_p) agree and
    Theta of the reduced forms agrees. Undecided only when a truncation
    is below minimum_truncation. A primitive part without a rational
    standard form is judged by its coordinates alone.

    Raises:
        NotStronglyGenericError: either potential is not strongly generic
        PreconditionError: the potentials live on different quivers
        ReductionError: the reduction could not certify the reduced cycles
    """
    if w1.sq is not w2.sq:
        raise PreconditionError('potentials belong to different quivers')
    sq = w1.sq
    _require_rank_two(sq)
    _require_strongly_generic(w1)
    _require_strongly_generic(w2)

    coordinates = (primitive_class(w1).coordinates(), primitive_class(w2).coordinates())
    if coordinates[0] != coordinates[1]:
        return EquivalenceReport(INEQUIVALENT, coordinates, reason='invariant coordinates differ')

    needed = minimum_truncation(sq)
    if min(w1.N, w2.N) < needed:
        return EquivalenceReport(UNDECIDED, coordinates, reason=f'truncation below degree {needed}')
    certified = max_reduced_degree(sq)
    try:
        _, s1 = standardize_primitive(w1)
        _, s2 = standardize_primitive(w2)
    except NotNormalizableError as exc:
        logger.info(f'Deciding by coordinates alone: {exc}')
        return EquivalenceReport(EQUIVALENT, coordinates, reason=f'coordinates agree; {exc}')
    if s1.truncated(certified) == s2.truncated(certified):
        return EquivalenceReport(EQUIVALENT, coordinates, guaranteed_degree=certified,
                                 reason='standard forms agree')

    r1 = reduce(w1, through=certified)
    r2 = reduce(w2, through=certified)
    guaranteed = min(r1.guaranteed_degree, r2.guaranteed_degree)
    if guaranteed < certified:
        raise ReductionError(f'reduction certified only through degree {guaranteed}, need {certified}')

    values = (
        theta(r1, theta_table_for(r1.potential)),
        theta(r2, theta_table_for(r2.potential)),
    )
    verdict = EQUIVALENT if values[0] == values[1] else INEQUIVALENT
    return EquivalenceReport(verdict, coordinates, values, guaranteed, reason='theta compared')


def decide_equivalence(w1: Potential, w2: Potential) -> str:
    """'equivalent', 'inequivalent' or 'undecided'; see compare_potentials."""
    return compare_potentials(w1, w2).verdict
