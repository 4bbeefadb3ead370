"""
Truncated path-algebra elements and potentials.

Coefficients live in sympy's exact rational domain ``QQ``. Paths and
cycles are tuples of arrow positions (indices into ``Quiver.arrows``);
cyclic words are stored in their least rotation.
"""

from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from .exceptions import NotComposableError, PreconditionError, TruncationMismatchError
from .surface_quiver import SurfaceQuiver, Word, least_rotation

Rational = type(QQ.one)


def to_rational(value) -> Rational:
    """Coerce int, str ('p/q'), Fraction or QQ element into QQ."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, int):
        return QQ(value)
    if isinstance(value, str):
        num, _, den = value.partition('/')
        return QQ(int(num), int(den or 1))
    return QQ(value.numerator, value.denominator)


@lru_cache(maxsize=1 << 18)
def _least(word: Word) -> Word:
    return least_rotation(word)


def canonical_cycle(sq: SurfaceQuiver, word: Sequence[int]) -> Word:
    """
    Least rotation of a cyclic word under the fixed arrow order.

    Raises:
        NotComposableError: the word is not a cycle of the quiver
    """
    word = tuple(word)
    if not sq.quiver.is_cycle(word):
        raise NotComposableError(f'{word} is not a cycle')
    return _least(word)


def _check_compatible(x, y):
    if x.sq is not y.sq:
        raise PreconditionError('operands belong to different quivers')
    if x.N != y.N:
        raise TruncationMismatchError(f'truncation degrees differ ({x.N} != {y.N})')


class _Terms:
    """Shared container behaviour for PathVector and Potential."""

    __slots__ = ('sq', 'N', 'terms')

    def __init__(self, sq: SurfaceQuiver, N: int, terms: Optional[Mapping[Word, Rational]] = None):
        if N < 1:
            raise ValueError('truncation degree must be at least 1')
        self.sq = sq
        self.N = N
        self.terms: Dict[Word, Rational] = {}
        if terms:
            self._merge(terms.items())

    def _normalize(self, word: Sequence[int]) -> Word:
        raise NotImplementedError

    def _merge(self, items: Iterable[Tuple[Sequence[int], object]]):
        terms = self.terms
        for word, coeff in items:
            if len(word) > self.N:
                continue
            key = self._normalize(word)
            value = terms.get(key, QQ.zero) + to_rational(coeff)
            if value == 0:
                terms.pop(key, None)
            else:
                terms[key] = value

    @classmethod
    def _raw(cls, sq, N, terms):
        obj = cls.__new__(cls)
        obj.sq = sq
        obj.N = N
        obj.terms = terms
        return obj

    def __iter__(self) -> Iterator[Word]:
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def items(self):
        return self.terms.items()

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> Tuple[Word, ...]:
        return tuple(sorted(self.terms, key=lambda w: (len(w), w)))

    def max_degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def min_degree(self) -> int:
        return min((len(w) for w in self.terms), default=0)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.sq is other.sq and self.N == other.N and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        _check_compatible(self, other)
        terms = dict(self.terms)
        for word, coeff in other.terms.items():
            value = terms.get(word, QQ.zero) + coeff
            if value == 0:
                terms.pop(word, None)
            else:
                terms[word] = value
        return self._raw(self.sq, self.N, terms)

    def __neg__(self):
        return self._raw(self.sq, self.N, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = to_rational(scalar)
        if scalar == 0:
            return self._raw(self.sq, self.N, {})
        return self._raw(self.sq, self.N, {w: c * scalar for w, c in self.terms.items()})

    __rmul__ = __mul__

    def restrict(self, keep: Callable[[Word], bool]):
        return self._raw(self.sq, self.N, {w: c for w, c in self.terms.items() if keep(w)})

    def degree_part(self, degree: int):
        return self.restrict(lambda w: len(w) == degree)

    def truncated(self, N: int):
        """Copy with a smaller truncation degree."""
        return self._raw(self.sq, N, {w: c for w, c in self.terms.items() if len(w) <= N})

    def __repr__(self):
        names = self.sq.quiver.arrow_tokens
        shown = ' + '.join(
            f'{c}*[{" ".join(names[a] for a in w)}]' for w, c in list(self.terms.items())[:4]
        )
        more = ' + ...' if len(self.terms) > 4 else ''
        return f'<{type(self).__name__} N={self.N} {shown or "0"}{more}>'


class PathVector(_Terms):
    """
    Element of the truncated path algebra.

    Every stored path is composable and has at most N arrows.
    """

    __slots__ = ()

    def _normalize(self, word):
        word = tuple(word)
        if not word or not self.sq.quiver.is_composable(word):
            raise NotComposableError(f'{word} is not a path')
        return word

    @classmethod
    def arrow(cls, sq: SurfaceQuiver, N: int, a: int, coeff=1) -> 'PathVector':
        return cls._raw(sq, N, {(a,): to_rational(coeff)})

    def endpoints(self) -> Optional[Tuple[int, int]]:
        """Common (source, target) of all terms, or None for zero."""
        quiver = self.sq.quiver
        ends = {(quiver.src[w[0]], quiver.tgt[w[-1]]) for w in self.terms}
        if not ends:
            return None
        if len(ends) > 1:
            raise NotComposableError('terms run between different vertices')
        return ends.pop()

    def coefficient(self, path: Sequence[int]) -> Rational:
        return self.terms.get(tuple(path), QQ.zero)

    def __getitem__(self, path):
        return self.coefficient(path)

    def linear_coefficient(self, a: int) -> Rational:
        return self.terms.get((a,), QQ.zero)

    def tail(self) -> 'PathVector':
        return self.restrict(lambda w: len(w) >= 2)


class Potential(_Terms):
    """
    Finite combination of cyclic words with exact rational coefficients,
    truncated at degree N.
    """

    __slots__ = ()

    def _normalize(self, word):
        return canonical_cycle(self.sq, word)

    def coefficient(self, word: Sequence[int]) -> Rational:
        return self.terms.get(canonical_cycle(self.sq, word), QQ.zero)

    def __getitem__(self, word):
        return self.coefficient(word)

    @classmethod
    def zero(cls, sq: SurfaceQuiver, N: int) -> 'Potential':
        return cls._raw(sq, N, {})

    @classmethod
    def from_terms(cls, sq: SurfaceQuiver, N: int,
                   terms: Iterable[Tuple[Sequence[int], object]]) -> 'Potential':
        w = cls._raw(sq, N, {})
        w._merge(terms)
        return w

    def local_part(self) -> 'Potential':
        return self.restrict(self.sq.is_local)

    def nonlocal_part(self) -> 'Potential':
        return self.restrict(lambda w: not self.sq.is_local(w))


def primitive_part(w: Potential) -> Potential:
    """Restriction to the chordless cycles."""
    chordless = w.sq.chordless_set
    return w.restrict(chordless.__contains__)
