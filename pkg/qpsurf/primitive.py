"""
Primitive potentials and their invariant coordinates.

Handles genericity tests, the coordinates h and h_p, the standard form
of a primitive part (all black and white coefficients 1 except on the
L_p^(k) cycles), and a builder for standard-form potentials.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import networkx as nx
from sympy import factorint
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

from .exceptions import NotGenericError, NotNormalizableError, UnsupportedRankError
from .potential import Potential, Rational, primitive_part, to_rational
from .surface_quiver import SurfaceQuiver, Word

logger = logging.getLogger('qpsurf')


@dataclass(frozen=True)
class PrimitiveClass:
    """
    Invariant coordinates of a generic potential.

    Attributes:
        h: product of white over black chordless coefficients
        hp: the puncture coordinates h_p (m = 2)
        v1, v2: L_p^(1), L_p^(2) coefficients when read off a standard form
    """
    h: Rational
    hp: Dict[int, Rational]
    v1: Dict[int, Rational] = field(default_factory=dict)
    v2: Dict[int, Rational] = field(default_factory=dict)
    valences: Dict[int, int] = field(default_factory=dict)

    @property
    def k(self) -> Dict[int, Rational]:
        """k_p = v1_p + (-1)^val(p) v2_p, in standard form."""
        return {
            p: self.v1[p] + (-1) ** self.valences[p] * self.v2[p]
            for p in self.v1
        }

    def coordinates(self) -> Tuple[Rational, ...]:
        return (self.h,) + tuple(self.hp[p] for p in sorted(self.hp))


# =============================================================================
# GENERICITY AND COORDINATES
# =============================================================================

def is_generic(w: Potential) -> bool:
    """Every chordless cycle present with a nonzero coefficient."""
    return all(word in w.terms for word in w.sq.chordless_set)


def _require_generic(w: Potential):
    missing = [word for word in w.sq.chordless_set if word not in w.terms]
    if missing:
        raise NotGenericError(f'{len(missing)} chordless cycles have coefficient 0')


def h_invariant(w: Potential) -> Rational:
    """
    Product of white-region coefficients over black-region coefficients.

    Raises:
        NotGenericError: some chordless coefficient vanishes
    """
    _require_generic(w)
    value = QQ.one
    for word in w.sq.white_regions:
        value *= w.terms[word]
    for word in w.sq.black_regions:
        value /= w.terms[word]
    return value


def disk_cells(sq: SurfaceQuiver, p: int) -> Tuple[frozenset, frozenset]:
    """
    Black and white regions inside the disk bounded by L_p^(2).

    Regions are joined across every arrow not on L_p^(2); the disk is
    the component of the white region L_p^(1).
    """
    if sq.m != 2:
        raise UnsupportedRankError(f'h_p is only defined for m=2 (got m={sq.m})')
    boundary = set(sq.lp[(p, 2)])
    graph = nx.Graph()
    for a in range(sq.arrow_count):
        black, white = ('b', sq.black_of[a]), ('w', sq.white_of[a])
        graph.add_node(black)
        graph.add_node(white)
        if a not in boundary:
            graph.add_edge(black, white)
    inside = nx.node_connected_component(graph, ('w', sq.lp[(p, 1)]))
    blacks = frozenset(word for color, word in inside if color == 'b')
    whites = frozenset(word for color, word in inside if color == 'w')
    return blacks, whites


def hp_invariant(w: Potential, p: int) -> Rational:
    """
    The coordinate h_p: W[L_p^(2)] times the white coefficients outside
    the disk bounded by L_p^(2), divided by the black ones outside.

    Raises:
        NotGenericError: some chordless coefficient vanishes
        UnsupportedRankError: m != 2
    """
    sq = w.sq
    blacks_in, whites_in = disk_cells(sq, p)
    _require_generic(w)
    value = w.terms[sq.lp[(p, 2)]]
    for word in sq.white_regions:
        if word not in whites_in:
            value *= w.terms[word]
    for word in sq.black_regions:
        if word not in blacks_in:
            value /= w.terms[word]
    return value


def primitive_class(w: Potential) -> PrimitiveClass:
    sq = w.sq
    hp = {p: hp_invariant(w, p) for p in sq.triangulation.punctures}
    return PrimitiveClass(
        h=h_invariant(w),
        hp=hp,
        v1={p: w.terms[sq.lp[(p, 1)]] for p in sq.triangulation.punctures},
        v2={p: w.terms[sq.lp[(p, 2)]] for p in sq.triangulation.punctures},
        valences=dict(sq.triangulation.valences),
    )


def strong_genericity_defects(w: Potential) -> List[int]:
    """Punctures where h + (-1)^val(p) h_p vanishes."""
    h = h_invariant(w)
    valences = w.sq.triangulation.valences
    return [
        p for p in w.sq.triangulation.punctures
        if h + (-1) ** valences[p] * hp_invariant(w, p) == 0
    ]


def is_strongly_generic(w: Potential) -> bool:
    """Generic and h + (-1)^val(p) h_p != 0 at every puncture."""
    if not is_generic(w):
        return False
    return not strong_genericity_defects(w)


# =============================================================================
# STANDARD FORM
# =============================================================================

def standard_targets(sq: SurfaceQuiver) -> List[Word]:
    """Chordless cycles normalized to coefficient 1."""
    return [cell.word for cell in sq.chordless_cells if cell.kind != 'L']


def is_standard(w: Potential) -> bool:
    return all(w.terms.get(word) == 1 for word in standard_targets(w.sq))


def _solve_integral(rows: List[List[int]], rhs: List[int], ncols: int) -> Optional[List[int]]:
    """Integer solution of A x = b via Smith normal form, or None."""
    A = DomainMatrix([[ZZ(x) for x in row] for row in rows], (len(rows), ncols), ZZ)
    D, S, T = smith_normal_decomp(A)
    b = DomainMatrix([[ZZ(x)] for x in rhs], (len(rhs), 1), ZZ)
    c = [int(x[0]) for x in (S * b).to_list()]
    d = D.to_list()
    y = [0] * ncols
    for i, ci in enumerate(c):
        di = int(d[i][i]) if i < min(len(rows), ncols) else 0
        if di == 0:
            if ci != 0:
                return None
            continue
        if ci % di:
            return None
        y[i] = ci // di
    t = T.to_list()
    return [sum(int(t[r][k]) * y[k] for k in range(ncols)) for r in range(ncols)]


def _solve_mod2(rows: List[List[int]], rhs: List[int], ncols: int) -> Optional[List[int]]:
    F = GF(2, symmetric=False)
    augmented = DomainMatrix(
        [[F(x % 2) for x in row] + [F(r % 2)] for row, r in zip(rows, rhs)],
        (len(rows), ncols + 1), F,
    )
    reduced, pivots = augmented.rref()
    if ncols in pivots:
        return None
    table = reduced.to_list()
    x = [0] * ncols
    for i, col in enumerate(pivots):
        x[col] = int(table[i][ncols]) % 2
    return x


def standardize_primitive(w: Potential):
    """
    Rescale arrows so the primitive part is in standard form.

    Solves, per prime and for the sign, the multiplicative system
    prod_{a in C} lambda_a = 1 / W[C] over every black and white target.

    Args:
        w: generic potential

    Returns:
        (diagonal RightEquivalence, transformed potential)

    Raises:
        NotGenericError: a chordless coefficient vanishes
        NotNormalizableError: no rational scaling exists
    """
    from .requiv import apply, diagonal

    sq = w.sq
    _require_generic(w)
    targets = standard_targets(sq)
    n = sq.arrow_count
    rows = [[0] * n for _ in targets]
    for i, word in enumerate(targets):
        for a in word:
            rows[i][a] += 1

    exponents: Dict[int, List[int]] = defaultdict(lambda: [0] * len(targets))
    signs = [0] * len(targets)
    for i, word in enumerate(targets):
        value = w.terms[word]
        if value < 0:
            signs[i] = 1
        for prime, e in factorint(abs(int(value.numerator))).items():
            exponents[prime][i] -= e
        for prime, e in factorint(abs(int(value.denominator))).items():
            exponents[prime][i] += e

    scales = [QQ.one] * n
    for prime in sorted(exponents):
        solution = _solve_integral(rows, exponents[prime], n)
        if solution is None:
            raise NotNormalizableError(f'no integral exponents for prime {prime}')
        for a, e in enumerate(solution):
            if e > 0:
                scales[a] *= QQ(prime ** e)
            elif e < 0:
                scales[a] /= QQ(prime ** -e)
    sign_solution = _solve_mod2(rows, signs, n)
    if sign_solution is None:
        raise NotNormalizableError('sign system has no solution')
    for a, s in enumerate(sign_solution):
        if s:
            scales[a] = -scales[a]

    phi = diagonal(sq, w.N, dict(enumerate(scales)))
    standardized = apply(phi, w)
    logger.debug(f'Standardized primitive part over {len(exponents)} primes')
    return phi, standardized


def primitive_potential(sq: SurfaceQuiver, N: int,
                        v: Mapping[int, Mapping[int, object]],
                        default: object = 1) -> Potential:
    """
    Standard-form primitive potential.

    Args:
        sq: the surface quiver
        N: truncation degree
        v: v[k][p] is the coefficient of L_p^(k); missing entries use ``default``
        default: coefficient for unspecified L_p^(k)

    Returns:
        Potential with every other chordless coefficient equal to 1
    """
    terms = []
    for cell in sq.chordless_cells:
        if cell.kind == 'L':
            coeff = v.get(cell.level, {}).get(cell.puncture, default)
        else:
            coeff = 1
        terms.append((cell.word, to_rational(coeff)))
    return Potential.from_terms(sq, N, terms)


def standard_coefficients(w: Potential) -> Tuple[Dict[int, Rational], Dict[int, Rational]]:
    """(v1, v2) read off a standard-form potential at m = 2."""
    sq = w.sq
    punctures = sq.triangulation.punctures
    prim = primitive_part(w)
    return (
        {p: prim.terms.get(sq.lp[(p, 1)], QQ.zero) for p in punctures},
        {p: prim.terms.get(sq.lp[(p, 2)], QQ.zero) for p in punctures},
    )
