"""
Right-equivalences as truncated arrow substitutions.

A RightEquivalence stores, for every arrow a, its image
lambda_a * a + (terms of degree >= 2 from s(a) to t(a)). Applying it
substitutes the images into every cycle, expands, truncates at N and
re-canonicalizes. Chords and cutting operations live here as well,
together with the cut-formula evaluation of a single coefficient.
"""

import logging
from collections import defaultdict
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Mapping, Sequence, Tuple

from sympy.polys.domains import QQ

from .exceptions import (
    CompositionTypeError,
    IntersectingChordsError,
    NotComposableError,
    PreconditionError,
    TruncationMismatchError,
    ZeroScaleError,
)
from .potential import PathVector, Potential, Rational, _least, to_rational
from .quiver import Chord, chords_in
from .surface_quiver import SurfaceQuiver, Word

logger = logging.getLogger('qpsurf')

Terms = Dict[Word, Rational]


class RightEquivalence:
    """
    Arrow images of a vertex-fixing automorphism, truncated at degree N.

    Args:
        sq: the surface quiver
        N: truncation degree
        images: one PathVector per arrow, in arrow order
    """

    def __init__(self, sq: SurfaceQuiver, N: int, images: Sequence[PathVector]):
        if len(images) != sq.arrow_count:
            raise CompositionTypeError('one image per arrow is required')
        quiver = sq.quiver
        for a, image in enumerate(images):
            if image.N != N:
                raise TruncationMismatchError(f'image of arrow {a} has truncation {image.N}')
            for path in image.terms:
                if quiver.src[path[0]] != quiver.src[a] or quiver.tgt[path[-1]] != quiver.tgt[a]:
                    raise CompositionTypeError(
                        f'image of {quiver.arrow_tokens[a]} contains a path with other endpoints'
                    )
                if len(path) == 1 and path[0] != a:
                    raise CompositionTypeError(f'image of {quiver.arrow_tokens[a]} mixes parallel arrows')
            if image.linear_coefficient(a) == 0:
                raise ZeroScaleError(f'image of {quiver.arrow_tokens[a]} has no linear term')
        self.sq = sq
        self.N = N
        self.images = tuple(images)

    def __repr__(self):
        return f'<RightEquivalence N={self.N} moved={len(self.moved)}>'

    def __eq__(self, other):
        if not isinstance(other, RightEquivalence):
            return NotImplemented
        return self.sq is other.sq and self.N == other.N and self.images == other.images

    __hash__ = None

    def image(self, a: int) -> PathVector:
        return self.images[a]

    def scale(self, a: int) -> Rational:
        return self.images[a].linear_coefficient(a)

    def tail(self, a: int) -> PathVector:
        return self.images[a].tail()

    @cached_property
    def moved(self) -> frozenset:
        """Arrows whose image is not the arrow itself."""
        return frozenset(
            a for a, image in enumerate(self.images)
            if image.terms != {(a,): QQ.one}
        )

    def is_identity(self) -> bool:
        return not self.moved

    def is_unitriangular(self) -> bool:
        return all(self.scale(a) == 1 for a in self.moved)

    def is_diagonal(self) -> bool:
        return all(len(image.terms) == 1 for image in self.images)

    def max_tail_degree(self) -> int:
        return max((len(w) for image in self.images for w in image.terms), default=1)


# =============================================================================
# CONSTRUCTORS
# =============================================================================

def identity(sq: SurfaceQuiver, N: int) -> RightEquivalence:
    return RightEquivalence(sq, N, [PathVector.arrow(sq, N, a) for a in range(sq.arrow_count)])


def elementary(sq: SurfaceQuiver, N: int, a: int, tail) -> RightEquivalence:
    """
    The move a -> a + tail fixing every other arrow.

    Args:
        tail: PathVector or iterable of (path, coefficient) with paths
            from s(a) to t(a) of degree >= 2

    Raises:
        CompositionTypeError: a tail path has the wrong endpoints or degree
    """
    if not isinstance(tail, PathVector):
        vector = PathVector(sq, N)
        try:
            vector._merge(tail)
        except NotComposableError as exc:
            raise CompositionTypeError(str(exc)) from None
        tail = vector
    if tail.N != N:
        raise TruncationMismatchError('tail truncation differs')
    if any(len(path) < 2 for path in tail.terms):
        raise CompositionTypeError('tail terms must have degree at least 2')
    images = [PathVector.arrow(sq, N, b) for b in range(sq.arrow_count)]
    images[a] = images[a] + tail
    return RightEquivalence(sq, N, images)


def simultaneous(sq: SurfaceQuiver, N: int,
                 tails: Mapping[int, Sequence[Tuple[Word, object]]]) -> RightEquivalence:
    """
    The moves a -> a + tails[a] applied to several arrows at once.

    Raises:
        CompositionTypeError: a tail path has the wrong endpoints or degree
    """
    images = [PathVector.arrow(sq, N, a) for a in range(sq.arrow_count)]
    for a, tail in tails.items():
        if any(len(path) < 2 for path, _ in tail):
            raise CompositionTypeError('tail terms must have degree at least 2')
        vector = PathVector(sq, N)
        try:
            vector._merge(tail)
        except NotComposableError as exc:
            raise CompositionTypeError(str(exc)) from None
        images[a] = images[a] + vector
    return RightEquivalence(sq, N, images)


def diagonal(sq: SurfaceQuiver, N: int, scales: Mapping[int, object]) -> RightEquivalence:
    """
    Rescale arrows; missing arrows keep scale 1.

    Raises:
        ZeroScaleError: some scale is zero
    """
    images = []
    for a in range(sq.arrow_count):
        value = to_rational(scales.get(a, 1))
        if value == 0:
            raise ZeroScaleError(f'arrow {sq.quiver.arrow_tokens[a]} scaled by 0')
        images.append(PathVector.arrow(sq, N, a, value))
    return RightEquivalence(sq, N, images)


# =============================================================================
# SUBSTITUTION
# =============================================================================

def _expand(images: Sequence[Terms], word: Sequence[int], N: int) -> Terms:
    """Product of the images of the letters of ``word``, cut at degree N."""
    current: Terms = {(): QQ.one}
    remaining = len(word)
    for a in word:
        remaining -= 1
        image = images[a]
        nxt: Terms = defaultdict(lambda: QQ.zero)
        for prefix, c in current.items():
            room = N - len(prefix) - remaining
            for path, d in image.items():
                if len(path) <= room:
                    nxt[prefix + path] += c * d
        current = {p: c for p, c in nxt.items() if c != 0}
        if not current:
            break
    return current


def _image_terms(phi: RightEquivalence) -> List[Terms]:
    return [image.terms for image in phi.images]


def _check_pair(phi: RightEquivalence, other):
    if phi.sq is not other.sq:
        raise PreconditionError('operands belong to different quivers')
    if phi.N != other.N:
        raise TruncationMismatchError(f'truncation degrees differ ({phi.N} != {other.N})')


def apply(phi: RightEquivalence, w: Potential) -> Potential:
    """
    Substitute the images of phi into every cycle of w.

    Raises:
        TruncationMismatchError: phi and w have different N
    """
    _check_pair(phi, w)
    moved = phi.moved
    images = _image_terms(phi)
    out: Terms = defaultdict(lambda: QQ.zero)
    for word, coeff in w.terms.items():
        if moved.isdisjoint(word):
            out[word] += coeff
            continue
        for path, c in _expand(images, word, w.N).items():
            out[_least(path)] += coeff * c
    return Potential._raw(w.sq, w.N, {k: v for k, v in out.items() if v != 0})


def substitute(phi: RightEquivalence, vector: PathVector) -> PathVector:
    """Substitute the images of phi into every path of a PathVector."""
    _check_pair(phi, vector)
    images = _image_terms(phi)
    out: Terms = defaultdict(lambda: QQ.zero)
    for path, coeff in vector.terms.items():
        for expanded, c in _expand(images, path, vector.N).items():
            out[expanded] += coeff * c
    return PathVector._raw(vector.sq, vector.N, {k: v for k, v in out.items() if v != 0})


def compose(phi2: RightEquivalence, phi1: RightEquivalence) -> RightEquivalence:
    """
    phi2 after phi1: apply(compose(phi2, phi1), w) == apply(phi2, apply(phi1, w)).

    Raises:
        TruncationMismatchError: different N
    """
    _check_pair(phi2, phi1)
    if phi2.is_identity():
        return phi1
    if phi1.is_identity():
        return phi2
    images = [
        substitute(phi2, phi1.images[a]) if (phi1.images[a].terms.keys() - {(a,)}) or a in phi2.moved
        else phi1.images[a]
        for a in range(phi1.sq.arrow_count)
    ]
    return RightEquivalence(phi1.sq, phi1.N, images)


def factor(phi: RightEquivalence) -> Tuple[RightEquivalence, RightEquivalence]:
    """
    Split phi into (unitriangular, diagonal) with phi == compose(u, delta).

    u(a) = a + tail(a) / lambda_a and delta(a) = lambda_a * a.
    """
    sq, N = phi.sq, phi.N
    scales = {a: phi.scale(a) for a in range(sq.arrow_count)}
    delta = diagonal(sq, N, scales)
    images = [
        PathVector.arrow(sq, N, a) + phi.tail(a) * (QQ.one / scales[a])
        for a in range(sq.arrow_count)
    ]
    return RightEquivalence(sq, N, images), delta


def invert(phi: RightEquivalence) -> RightEquivalence:
    """
    Two-sided inverse through degree N.

    The unitriangular factor is inverted degree by degree with
    v(a) = a - tail_u(a)[b -> v(b)], which gains one degree per round.
    """
    u, delta = factor(phi)
    sq, N = phi.sq, phi.N
    delta_inverse = diagonal(sq, N, {a: QQ.one / phi.scale(a) for a in range(sq.arrow_count)})
    if u.is_identity():
        return delta_inverse

    tails = [u.tail(a) for a in range(sq.arrow_count)]
    v = identity(sq, N)
    for _ in range(N):
        images = [
            PathVector.arrow(sq, N, a) - substitute(v, tails[a]) if tails[a] else PathVector.arrow(sq, N, a)
            for a in range(sq.arrow_count)
        ]
        nxt = RightEquivalence(sq, N, images)
        if nxt == v:
            break
        v = nxt
    return compose(delta_inverse, v)


# =============================================================================
# CHORDS AND CUTS
# =============================================================================

def find_chords(word: Sequence[int], sq: SurfaceQuiver) -> List[Chord]:
    """All (beta, i, j) with s(beta) = s(word[i]), t(beta) = t(word[j])."""
    return chords_in(sq.quiver, word)


def chord_path(word: Sequence[int], chord: Chord) -> Word:
    """The fragment of the cycle short-cut by the chord."""
    n = len(word)
    return tuple(word[p] for p in chord.positions(n))


def _intersect(word_length: int, first: Chord, second: Chord) -> bool:
    return not set(first.positions(word_length)).isdisjoint(second.positions(word_length))


def cut(word: Sequence[int], chords: Sequence[Chord]) -> Word:
    """
    Replace the fragment of every chord by the chord arrow.

    Raises:
        IntersectingChordsError: two fragments overlap
    """
    n = len(word)
    if not chords:
        return tuple(word)
    for first, second in combinations(chords, 2):
        if _intersect(n, first, second):
            raise IntersectingChordsError(f'chords at {first.i} and {second.i} overlap')
    starts = {c.i: c for c in chords}
    covered = {p for c in chords for p in c.positions(n)}
    begin = next((p for p in range(n) if p not in covered), chords[0].i)
    result = []
    p, steps = begin, 0
    while steps < n:
        if p in starts:
            chord = starts[p]
            result.append(chord.beta)
            span = chord.span(n)
        else:
            result.append(word[p])
            span = 1
        p = (p + span) % n
        steps += span
    return tuple(result)


def nonintersecting_collections(word: Sequence[int], chords: Sequence[Chord]) -> List[Tuple[Chord, ...]]:
    """Every set of pairwise disjoint chords, the empty set included."""
    n = len(word)
    ordered = sorted(chords, key=lambda c: (c.i, c.j, c.beta))
    positions = [frozenset(c.positions(n)) for c in ordered]
    collections: List[Tuple[Chord, ...]] = []

    def extend(start: int, chosen: List[int], used: frozenset):
        collections.append(tuple(ordered[k] for k in chosen))
        for k in range(start, len(ordered)):
            if used.isdisjoint(positions[k]):
                extend(k + 1, chosen + [k], used | positions[k])

    extend(0, [], frozenset())
    return collections


def rotational_symmetry(word: Sequence[int]) -> int:
    """Number of rotations fixing the cyclic word."""
    n = len(word)
    word = tuple(word)
    for period in range(1, n + 1):
        if n % period == 0 and word[period:] + word[:period] == word:
            return n // period
    return 1


def cut_formula_coefficient(w: Potential, phi: RightEquivalence, word: Sequence[int]) -> Rational:
    """
    Coefficient of a cycle in apply(phi, w) by the cut formula.

    Sums, over every collection of nonintersecting chords, the
    coefficient of the cut cycle times the coefficients of the chord
    paths in the chord images, weighted by the ratio of rotational
    symmetries.

    Raises:
        PreconditionError: phi is not unitriangular
    """
    if not phi.is_unitriangular():
        raise PreconditionError('cut formula needs a unitriangular equivalence')
    word = tuple(word)
    own_symmetry = rotational_symmetry(word)
    total = QQ.zero
    chords = find_chords(word, w.sq)
    for collection in nonintersecting_collections(word, chords):
        weight = QQ.one
        for chord in collection:
            weight *= phi.images[chord.beta].terms.get(chord_path(word, chord), QQ.zero)
            if weight == 0:
                break
        if weight == 0:
            continue
        cycle = cut(word, collection)
        coeff = w.terms.get(_least(cycle), QQ.zero)
        if coeff == 0:
            continue
        total += coeff * weight * QQ(rotational_symmetry(cycle), own_symmetry)
    return total
