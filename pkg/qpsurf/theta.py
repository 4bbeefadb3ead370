"""
The invariant Theta on reduced potentials (m = 2).

Theta is the linear functional sum theta_C * W[C] that vanishes on the
first-order change produced by every generator move beta -> beta + P on
the standard primitive potential. The change is taken over every cycle
it touches, not only over the reduced collection, so the unknowns cover
the cycles a reduction would still have to remove; the kernel is pinned
by theta(C0) = -1 on the collection target C0. When the path space is
too large the system falls back to the reduced-collection part of each
change. Closed forms for several types are available for cross-checking.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .conf import get_setting
from .exceptions import NotStronglyGenericError, RankError
from .potential import Potential, Rational, _least, to_rational
from .primitive import primitive_potential, standard_coefficients
from .reduced import (
    ReducedCycle,
    ReducedPotential,
    collection_target,
    generator_paths,
    max_reduced_degree,
    reduced_collection,
)
from .requiv import apply, elementary
from .surface_quiver import SurfaceQuiver, Word

logger = logging.getLogger('qpsurf')

Row = Tuple[int, Word, Dict[Word, Rational]]

PROJECTED = 'projected'
RAW = 'raw'


@dataclass(frozen=True)
class ThetaTable:
    """
    theta_C for fixed standard coefficients.

    ``values`` holds every cycle with a nonzero weight; for a reduced
    potential only reduced-collection cycles carry coefficients.
    """
    values: Dict[Word, Rational]
    cycles: Tuple[ReducedCycle, ...]
    v1: Dict[int, Rational]
    v2: Dict[int, Rational]
    k: Dict[int, Rational]
    target: Word
    generators: int = 0
    method: str = PROJECTED
    outside: Tuple[Word, ...] = field(default_factory=tuple)

    def __getitem__(self, word: Word) -> Rational:
        return self.values.get(word, QQ.zero)

    def by_label(self) -> Dict[str, List[Rational]]:
        grouped: Dict[str, List[Rational]] = {}
        for cycle in self.cycles:
            grouped.setdefault(cycle.label(), []).append(self[cycle.word])
        return grouped

    def evaluate(self, coefficients: Mapping[Word, Rational]) -> Rational:
        total = QQ.zero
        for word, value in coefficients.items():
            theta_c = self.values.get(word)
            if theta_c:
                total += theta_c * value
        return total


def k_values(v1: Mapping[int, Rational], v2: Mapping[int, Rational],
             valences: Mapping[int, int]) -> Dict[int, Rational]:
    """k_p = v1_p + (-1)^val(p) v2_p."""
    return {p: v1[p] + (-1) ** valences[p] * v2[p] for p in v1}


# =============================================================================
# GENERATOR MOVES
# =============================================================================

@lru_cache(maxsize=16)
def parallel_paths(sq: SurfaceQuiver, max_length: int, limit: int) -> Optional[Tuple[Tuple[int, Word], ...]]:
    """
    (beta, P) for every path P of 2..max_length arrows parallel to an arrow beta.

    Returns None once more than ``limit`` paths have been walked.
    """
    quiver = sq.quiver
    between = {(quiver.src[a], quiver.tgt[a]): a for a in range(sq.arrow_count)}
    found = []
    walked = 0
    for start in range(len(quiver.vertices)):
        stack = [(a,) for a in quiver.out_arrows[start]]
        while stack:
            path = stack.pop()
            walked += 1
            if walked > limit:
                return None
            end = quiver.tgt[path[-1]]
            if len(path) >= 2 and (start, end) in between:
                found.append((between[(start, end)], path))
            if len(path) < max_length:
                stack.extend(path + (a,) for a in quiver.out_arrows[end])
    return tuple(sorted(found, key=lambda bp: (len(bp[1]), bp)))


def first_order_delta(w_prim: Potential, beta: int, path: Word, N: int) -> Dict[Word, Rational]:
    """
    Linear part of apply(beta -> beta + P, W) - W for a potential W of
    chordless cycles: every occurrence of beta replaced by P once.
    """
    out: Dict[Word, Rational] = defaultdict(lambda: QQ.zero)
    room = N - len(path) + 1
    for word, coeff in w_prim.terms.items():
        if len(word) > room:
            continue
        for i, a in enumerate(word):
            if a == beta:
                out[_least(tuple(path) + word[i + 1:] + word[:i])] += coeff
    return {word: c for word, c in out.items() if c != 0}


def first_order_rows(sq: SurfaceQuiver, v1: Mapping[int, Rational], v2: Mapping[int, Rational],
                     N: int) -> Optional[List[Row]]:
    """
    (beta, P, delta) for every parallel path P with a nonzero first-order
    change through degree N, or None when the path space exceeds
    QPSURF_THETA_MAX_PATHS.
    """
    paths = parallel_paths(sq, N - 2, get_setting('QPSURF_THETA_MAX_PATHS'))
    if paths is None:
        return None
    w_prim = primitive_potential(sq, N, {1: v1, 2: v2})
    rows = []
    for beta, path in paths:
        delta = first_order_delta(w_prim, beta, path, N)
        if delta:
            rows.append((beta, path, delta))
    return rows


def generator_delta(w_prim: Potential, beta: int, path: Word) -> Dict[Word, Rational]:
    """
    Reduced-collection part of apply(beta -> beta + P, W_prim) - W_prim.
    """
    sq = w_prim.sq
    reduced = {c.word for c in reduced_collection(sq)}
    move = elementary(sq, w_prim.N, beta, [(path, 1)])
    change = apply(move, w_prim) - w_prim
    return {word: c for word, c in change.items() if word in reduced}


def invariance_rows(sq: SurfaceQuiver, v1: Mapping[int, Rational],
                    v2: Mapping[int, Rational]) -> List[Row]:
    """(beta, P, delta) for every generator whose reduced-collection delta on the standard primitive potential is nonzero."""
    N = max_reduced_degree(sq)
    w_prim = primitive_potential(sq, N, {1: v1, 2: v2})
    rows = []
    for beta, path in generator_paths(sq):
        delta = generator_delta(w_prim, beta, path)
        if delta:
            rows.append((beta, path, delta))
    return rows


# =============================================================================
# SOLVING
# =============================================================================

def _kernel(rows: List[Row], columns: List[Word]) -> List[List[Rational]]:
    position = {c: i for i, c in enumerate(columns)}
    entries = {}
    for i, (_, _, delta) in enumerate(rows):
        entries[i] = {position[word]: value for word, value in delta.items()}
    system = DomainMatrix(entries, (len(rows), len(columns)), QQ)
    return system.nullspace().to_list()


def solve_theta(sq: SurfaceQuiver, v1: Mapping[int, object], v2: Mapping[int, object]) -> ThetaTable:
    """
    Solve for theta.

    Args:
        sq: Q_{T,2}
        v1, v2: standard coefficients of L_p^(1) and L_p^(2)

    Returns:
        ThetaTable pinned at theta(C0) = -1

    Raises:
        NotStronglyGenericError: some k_p vanishes
        RankError: the invariance system does not determine theta up to scale
    """
    valences = sq.triangulation.valences
    v1 = {p: to_rational(v1[p]) for p in sq.triangulation.punctures}
    v2 = {p: to_rational(v2[p]) for p in sq.triangulation.punctures}
    k = k_values(v1, v2, valences)
    degenerate = [p for p, value in k.items() if value == 0]
    if degenerate:
        raise NotStronglyGenericError(f'k_p = 0 at punctures {degenerate}')
    return _solve(sq, tuple(sorted(v1.items())), tuple(sorted(v2.items())))


@lru_cache(maxsize=32)
def _solve(sq: SurfaceQuiver, v1_items, v2_items) -> ThetaTable:
    v1, v2 = dict(v1_items), dict(v2_items)
    k = k_values(v1, v2, sq.triangulation.valences)
    cycles = reduced_collection(sq)
    target = collection_target(sq)

    rows = first_order_rows(sq, v1, v2, max_reduced_degree(sq))
    if rows is not None:
        method = PROJECTED
        columns = sorted({word for _, _, delta in rows for word in delta}, key=lambda w: (len(w), w))
    else:
        logger.info('Path space too large; solving theta on the reduced collection alone')
        method = RAW
        rows = invariance_rows(sq, v1, v2)
        columns = [c.word for c in cycles]
    if target not in columns:
        raise RankError('no generator move reaches the collection target')

    kernel = _kernel(rows, columns)
    if len(kernel) != 1:
        raise RankError(f'invariance system has a {len(kernel)}-dimensional kernel')
    basis = kernel[0]
    pivot = basis[columns.index(target)]
    if pivot == 0:
        raise RankError('kernel vanishes on the collection target')
    scale = -QQ.one / pivot
    values = {word: basis[i] * scale for i, word in enumerate(columns) if basis[i] != 0}

    members = {c.word for c in cycles}
    outside = tuple(word for word in values if word not in members)
    if outside:
        logger.warning(f'Theta is nonzero on {len(outside)} cycles outside the reduced collection')
    logger.info(f'Solved theta ({method}) over {len(rows)} generator rows and {len(columns)} cycles')
    return ThetaTable(values, cycles, v1, v2, k, target, len(rows), method, outside)


def theta_table_for(w: Potential) -> ThetaTable:
    """ThetaTable for the standard coefficients of a standard-form potential."""
    v1, v2 = standard_coefficients(w)
    return solve_theta(w.sq, v1, v2)


def theta(reduced: ReducedPotential, table: ThetaTable) -> Rational:
    """Sum of theta_C u_C over the tail of a reduced potential."""
    return table.evaluate(reduced.tail)


def theta_of_potential(w: Potential, table: Optional[ThetaTable] = None) -> Rational:
    """
    Theta of the reduced-collection part of a standard-form potential.

    Args:
        w: potential whose primitive part is in standard form
        table: precomputed table for its standard coefficients
    """
    table = table or theta_table_for(w)
    return table.evaluate(w.terms)


# =============================================================================
# CLOSED FORMS
# =============================================================================

def closed_form(cycle: ReducedCycle, v1: Mapping[int, Rational], v2: Mapping[int, Rational],
                valences: Mapping[int, int]) -> Optional[Rational]:
    """Known theta value of a reduced cycle, or None when no closed form is known."""
    k = k_values(v1, v2, valences)
    family = cycle.family
    p = cycle.puncture
    if family == 'TI':
        return -QQ.one
    if family == 'TII':
        return QQ.one
    if family == 'VII':
        return v1[p] / k[p]
    if family == 'V':
        return -v1[p] / k[p]
    if family == 'XI':
        return QQ((-1) ** valences[p]) / k[p]
    if family == 'X':
        return -QQ((-1) ** valences[p]) / k[p]
    if family == 'VIII':
        return -QQ.one / k[p]
    if family == 'E':
        p, q = cycle.arc
        return v1[p] / k[p] - (-1) ** valences[q] * v2[q] / k[q]
    return None


def symbolic_identities() -> Dict[str, sympy.Expr]:
    """
    Relations the closed forms must satisfy, as sympy expressions that
    simplify to zero.

    Symbols: v1, v2, s (= (-1)^val) at a puncture p, and the same with
    suffix q at a second puncture.
    """
    v1p, v2p, sp = sympy.symbols('v1_p v2_p s_p', nonzero=True)
    v1q, v2q, sq_ = sympy.symbols('v1_q v2_q s_q', nonzero=True)
    kp = v1p + sp * v2p
    kq = v1q + sq_ * v2q
    theta_e = v1p / kp - sq_ * v2q / kq
    return {
        'black-edge-ring': -1 + v1p / kp + v2p * sp / kp,
        'edge-square': theta_e - v1q / kq + v2p * sp / kp,
        'edge-square-symmetric': theta_e - (1 - sp * v2p / kp - sq_ * v2q / kq),
        'ring-pair': v1p / kp + v1p * (-1 / kp),
    }


def check_symbolic_identities() -> Dict[str, bool]:
    """Simplify every identity; True means it holds identically."""
    return {
        name: sympy.simplify(expr) == 0
        for name, expr in symbolic_identities().items()
    }
