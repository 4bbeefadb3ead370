"""
Text formats for potentials and right-equivalences.

Potential files hold one ``term <num>/<den> <arrow> ...`` line per cyclic
word; equivalence files hold ``scale <arrow> <num>/<den>`` and
``add <arrow> <num>/<den> <arrow> ...`` lines. Arrows are written with
their quiver tokens, ``#`` starts a comment.
"""

from typing import Iterator, List, Tuple

from sympy.polys.domains import QQ

from .exceptions import EquivalenceSyntaxError, NotComposableError, PotentialSyntaxError
from .potential import PathVector, Potential, Rational, to_rational
from .requiv import RightEquivalence
from .surface_quiver import SurfaceQuiver, Word


def _lines(text: str) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if line:
            yield number, line.split()


def _coefficient(value: str, number: int, error) -> Rational:
    try:
        return to_rational(value)
    except (ValueError, ZeroDivisionError):
        raise error(f'bad coefficient {value!r}', number) from None


def _arrows(sq: SurfaceQuiver, names: List[str], number: int, error) -> Word:
    index = sq.quiver.token_index
    try:
        return tuple(index[name] for name in names)
    except KeyError as exc:
        raise error(f'unknown arrow {exc.args[0]!r}', number) from None


def format_rational(value: Rational) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def _render(sq: SurfaceQuiver, word: Word) -> str:
    return ' '.join(sq.quiver.arrow_tokens[a] for a in word)


def parse_potential(text: str, sq: SurfaceQuiver, N: int) -> Potential:
    """
    Read a potential; rotations are canonicalized and duplicates merged.

    Raises:
        PotentialSyntaxError: malformed line, unknown arrow or a word that is not a cycle
    """
    w = Potential.zero(sq, N)
    for number, tokens in _lines(text):
        if tokens[0] != 'term' or len(tokens) < 3:
            raise PotentialSyntaxError('expected "term <coefficient> <arrows>"', number)
        coeff = _coefficient(tokens[1], number, PotentialSyntaxError)
        word = _arrows(sq, tokens[2:], number, PotentialSyntaxError)
        try:
            w._merge([(word, coeff)])
        except NotComposableError as exc:
            raise PotentialSyntaxError(str(exc), number) from None
    return w


def dump_potential(w: Potential) -> str:
    lines = [f'term {format_rational(w.terms[word])} {_render(w.sq, word)}' for word in w.support()]
    return '\n'.join(lines) + '\n'


def parse_equivalence(text: str, sq: SurfaceQuiver, N: int) -> RightEquivalence:
    """
    Read a right-equivalence; arrows without lines map to themselves.

    Raises:
        EquivalenceSyntaxError: malformed line, unknown arrow or a path that does not compose
        ZeroScaleError, CompositionTypeError: the images do not define an equivalence
    """
    scales = {}
    tails = {}
    for number, tokens in _lines(text):
        keyword = tokens[0]
        if keyword == 'scale' and len(tokens) == 3:
            (a,) = _arrows(sq, tokens[1:2], number, EquivalenceSyntaxError)
            scales[a] = _coefficient(tokens[2], number, EquivalenceSyntaxError)
        elif keyword == 'add' and len(tokens) >= 4:
            (a,) = _arrows(sq, tokens[1:2], number, EquivalenceSyntaxError)
            coeff = _coefficient(tokens[2], number, EquivalenceSyntaxError)
            path = _arrows(sq, tokens[3:], number, EquivalenceSyntaxError)
            vector = tails.setdefault(a, PathVector(sq, N))
            try:
                vector._merge([(path, coeff)])
            except NotComposableError as exc:
                raise EquivalenceSyntaxError(str(exc), number) from None
        else:
            raise EquivalenceSyntaxError(f'cannot parse {" ".join(tokens)!r}', number)

    images = []
    for a in range(sq.arrow_count):
        image = PathVector.arrow(sq, N, a, scales.get(a, QQ.one))
        if a in tails:
            image = image + tails[a]
        images.append(image)
    return RightEquivalence(sq, N, images)


def dump_equivalence(phi: RightEquivalence) -> str:
    sq = phi.sq
    lines = []
    for a in sorted(phi.moved):
        name = sq.quiver.arrow_tokens[a]
        scale = phi.scale(a)
        if scale != 1:
            lines.append(f'scale {name} {format_rational(scale)}')
        tail = phi.tail(a)
        for path in tail.support():
            lines.append(f'add {name} {format_rational(tail.terms[path])} {_render(sq, path)}')
    return '\n'.join(lines) + '\n'
