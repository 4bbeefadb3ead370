"""
The collection of reduced cycles for m = 2 and the generator paths.

Each reduced cycle is produced by a walk: starting from an arrow, the
letters of a word in l, r, f are applied right to left, each letter
stepping to the successor of the current arrow in its black region
(l), white region (r) or L_p^(k) cycle (f). Walks that close up give
the cycle, kept in its least rotation.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from .exceptions import UnsupportedRankError
from .potential import Rational
from .quiver import chords_in
from .surface_quiver import SurfaceQuiver, Word, least_rotation

logger = logging.getLogger('qpsurf')


@dataclass(frozen=True)
class ReducedCycle:
    """
    A member of the reduced collection.

    Attributes:
        word: canonical cyclic word
        type: cycle type ('TI', 'E', 'IX.3', ...)
        puncture: puncture parameter of the type, when it has one
        arc: endpoint punctures for edge-cycle squares
    """
    word: Word
    type: str
    puncture: Optional[int] = None
    arc: Optional[Tuple[int, int]] = None

    @property
    def degree(self) -> int:
        return len(self.word)

    @property
    def family(self) -> str:
        return self.type.split('.')[0]

    def label(self) -> str:
        if self.arc is not None:
            return f'{self.type}@{self.arc[0]}-{self.arc[1]}'
        if self.puncture is not None:
            return f'{self.type}@{self.puncture}'
        return self.type


@dataclass(frozen=True)
class ReducedPotential:
    """
    Output of the reduction: standard primitive part plus a tail on the
    reduced collection, certified through ``guaranteed_degree``.
    """
    v1: Dict[int, Rational]
    v2: Dict[int, Rational]
    tail: Dict[Word, Rational]
    guaranteed_degree: int
    potential: object = None
    equivalence: object = None
    stages: Tuple[Tuple[str, int, float], ...] = field(default_factory=tuple)

    def coefficient(self, word: Word) -> Rational:
        return self.tail.get(word, QQ.zero)


def walk(sq: SurfaceQuiver, a: int, letters: str) -> Optional[Word]:
    """Traversal [a, w_n(a), w_{n-1} w_n(a), ...], or None when it does not close."""
    steps = {'l': sq.l, 'r': sq.r, 'f': sq.f}
    word = [a]
    current = a
    for letter in reversed(letters):
        current = steps[letter][current]
        word.append(current)
    if sq.quiver.tgt[word[-1]] != sq.quiver.src[word[0]]:
        return None
    return tuple(word)


def rotate_to(sq: SurfaceQuiver, word: Sequence[int], vertex: int) -> Word:
    """Rotation of a cycle starting at the given vertex."""
    for i, a in enumerate(word):
        if sq.quiver.src[a] == vertex:
            return tuple(word[i:]) + tuple(word[:i])
    raise ValueError(f'cycle does not pass through vertex {vertex}')


def _traversal(word: Word, a: int) -> Word:
    i = word.index(a)
    return word[i:] + word[:i]


def _quad_at(sq: SurfaceQuiver, p: int) -> List[Word]:
    patch = sq.patch(p)
    return [q for q in sq.edge_cycles if sq.cycle_vertices(q) <= patch]


def _arc_of_quad(sq: SurfaceQuiver, quad: Word) -> Tuple[int, int]:
    location = sq.location(quad)
    if len(location) != 2:
        raise ValueError('edge cycle does not span two patches')
    return location[0], location[1]


@lru_cache(maxsize=16)
def _collection(sq: SurfaceQuiver) -> Tuple[ReducedCycle, ...]:
    if sq.m != 2:
        raise UnsupportedRankError(f'the reduced collection is only defined for m=2 (got m={sq.m})')
    t = sq.triangulation
    found: Dict[Word, ReducedCycle] = {}

    def add(word: Optional[Sequence[int]], kind: str, puncture=None, arc=None):
        if word is None:
            return
        # first construction to reach a cycle names its type
        key = least_rotation(word)
        if key not in found:
            found[key] = ReducedCycle(key, kind, puncture, arc)

    a_arrows = sq.arrows_of_kind('a')
    b_arrows = sq.arrows_of_kind('b')
    d_arrows = sq.arrows_of_kind('d')
    ad_arrows = tuple(sorted(a_arrows + d_arrows))

    def lp_puncture(a: int) -> int:
        return sq.lp_index[a][0]

    def black_corner(a: int) -> int:
        return t.corner_puncture(sq.face_of(a), sq.apex_of(a))

    for a in a_arrows:
        add(walk(sq, a, 'llfrrr'), 'TI')
    for a in a_arrows:
        add(walk(sq, a, 'llfll'), 'TII')
    for a in ad_arrows:
        word = walk(sq, a, 'rrrrrrr')
        if word is not None:
            add(word, 'E', arc=_arc_of_quad(sq, sq.white_of[a]))
    for p in t.punctures:
        add(sq.lp[(p, 1)] * 2, 'I', puncture=p)
    for b in b_arrows:
        black = _traversal(sq.black_of[b], b)
        ring = _traversal(sq.lp[sq.lp_index[b]], b)
        add(black + ring, 'II', puncture=lp_puncture(b))
    for p in t.punctures:
        ring = sq.lp[(p, 1)]
        for a in ring:
            u = sq.quiver.src[a]
            for quad in _quad_at(sq, p):
                if u in sq.cycle_vertices(quad):
                    add(rotate_to(sq, ring, u) + rotate_to(sq, quad, u), 'III', puncture=p)
    for b in b_arrows:
        add(walk(sq, b, 'llrll'), 'IV')
    for a in ad_arrows:
        add(walk(sq, a, 'rrrlll'), 'V', puncture=black_corner(a))
    for a in range(sq.arrow_count):
        add(walk(sq, a, 'lllll'), 'VI')
    for a in d_arrows:
        add(walk(sq, a, 'rrlrrrf'), 'VII', puncture=lp_puncture(a))
    for a in ad_arrows:
        p = lp_puncture(sq.r[a])
        v = t.valence(p)
        add(walk(sq, a, 'r' * (v - 2) + 'lrfffr'), 'VIII', puncture=p)
    for a in ad_arrows:
        p = lp_puncture(sq.r[a])
        v = t.valence(p)
        for k in range(2, v - 1):
            add(walk(sq, a, 'r' * (v - k - 1) + 'lr' + 'f' * (2 * k + 1) + 'r'), f'IX.{k}', puncture=p)
    for p in t.punctures:
        ring = sq.lp[(p, 2)]
        ring_vertices = sq.cycle_vertices(ring)
        for black in sq.black_regions:
            if black_corner(black[0]) != p:
                continue
            center = sq.center(sq.face_of(black[0]))
            if center in ring_vertices:
                add(rotate_to(sq, ring, center) + rotate_to(sq, black, center), 'X', puncture=p)
    for p in t.punctures:
        ring = sq.lp[(p, 2)]
        ring_vertices = sq.cycle_vertices(ring)
        for quad in _quad_at(sq, p):
            for u in sorted(ring_vertices & sq.cycle_vertices(quad)):
                add(rotate_to(sq, ring, u) + rotate_to(sq, quad, u), 'XI', puncture=p)
    for p in t.punctures:
        add(sq.lp[(p, 2)] * 2, 'XII', puncture=p)

    cycles = tuple(sorted(found.values(), key=lambda c: (c.degree, c.word)))
    logger.info(f'Reduced collection: {len(cycles)} cycles, max degree {max(c.degree for c in cycles)}')
    return cycles


def reduced_collection(sq: SurfaceQuiver) -> Tuple[ReducedCycle, ...]:
    """
    All reduced cycles of Q_{T,2}, sorted by (degree, word).

    Raises:
        UnsupportedRankError: m != 2
    """
    return _collection(sq)


def collection_index(sq: SurfaceQuiver) -> Dict[Word, ReducedCycle]:
    return {c.word: c for c in reduced_collection(sq)}


def max_reduced_degree(sq: SurfaceQuiver) -> int:
    return max(c.degree for c in reduced_collection(sq))


def collection_target(sq: SurfaceQuiver) -> Word:
    """The least type TI cycle; the collect stage moves every tail coefficient onto it."""
    return min(c.word for c in reduced_collection(sq) if c.type == 'TI')


@lru_cache(maxsize=16)
def _generator_paths(sq: SurfaceQuiver) -> Tuple[Tuple[int, Word], ...]:
    paths = set()
    for cycle in reduced_collection(sq):
        word = cycle.word
        for chord in chords_in(sq.quiver, word):
            n = len(word)
            paths.add((chord.beta, tuple(word[p] for p in chord.positions(n))))
    return tuple(sorted(paths, key=lambda bp: (len(bp[1]), bp)))


def generator_paths(sq: SurfaceQuiver) -> Tuple[Tuple[int, Word], ...]:
    """(beta, P) for every chord beta of a reduced cycle with chord path P."""
    return _generator_paths(sq)
