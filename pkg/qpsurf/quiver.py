"""
General quivers and seeds with mutation.

A Quiver keeps its arrows sorted by identifier; that order is the fixed
arrow order used for canonical cyclic words everywhere else, so
algebra code refers to arrows by their position in ``Quiver.arrows``.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from .exceptions import InvalidQuiverError, QuiverSyntaxError

logger = logging.getLogger('qpsurf')


def token(identifier) -> str:
    """Whitespace-free text form of a vertex or arrow identifier."""
    if isinstance(identifier, tuple):
        return '.'.join(token(part) for part in identifier)
    return str(identifier)


class Quiver:
    """
    Finite quiver without loops and oriented 2-cycles.

    Args:
        vertices: vertex identifiers in a fixed order
        arrows: (identifier, source, target) triples; stored sorted by identifier
        check: reject loops and oriented 2-cycles
    """

    def __init__(self, vertices: Sequence[Hashable],
                 arrows: Sequence[Tuple[Hashable, Hashable, Hashable]],
                 check: bool = True):
        self.vertices: Tuple[Hashable, ...] = tuple(vertices)
        self._vertex_index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._vertex_index) != len(self.vertices):
            raise InvalidQuiverError('duplicate vertex identifiers')

        ordered = sorted(arrows, key=lambda triple: triple[0])
        self.arrows: Tuple[Hashable, ...] = tuple(a for a, _, _ in ordered)
        self._arrow_index = {a: i for i, a in enumerate(self.arrows)}
        if len(self._arrow_index) != len(self.arrows):
            raise InvalidQuiverError('duplicate arrow identifiers')
        try:
            self.src: Tuple[int, ...] = tuple(self._vertex_index[s] for _, s, _ in ordered)
            self.tgt: Tuple[int, ...] = tuple(self._vertex_index[t] for _, _, t in ordered)
        except KeyError as exc:
            raise InvalidQuiverError(f'arrow endpoint {exc.args[0]!r} is not a vertex') from None

        if check:
            self._check()

    def _check(self):
        pairs = set()
        for a, (s, t) in enumerate(zip(self.src, self.tgt)):
            if s == t:
                raise InvalidQuiverError(f'loop at {token(self.vertices[s])} ({token(self.arrows[a])})')
            pairs.add((s, t))
        for s, t in pairs:
            if (t, s) in pairs:
                raise InvalidQuiverError(
                    f'oriented 2-cycle between {token(self.vertices[s])} and {token(self.vertices[t])}'
                )

    def __repr__(self):
        return f'<Quiver |Q0|={len(self.vertices)} |Q1|={len(self.arrows)}>'

    def __eq__(self, other):
        if not isinstance(other, Quiver):
            return NotImplemented
        return self.vertices == other.vertices and self.triples() == other.triples()

    __hash__ = None

    # -------------------------------------------------------------------------
    # Lookup
    # -------------------------------------------------------------------------

    def vertex_index(self, v: Hashable) -> int:
        try:
            return self._vertex_index[v]
        except KeyError:
            raise IndexError(f'no vertex {v!r}') from None

    def arrow_index(self, a: Hashable) -> int:
        try:
            return self._arrow_index[a]
        except KeyError:
            raise IndexError(f'no arrow {a!r}') from None

    def triples(self) -> Tuple[Tuple[Hashable, Hashable, Hashable], ...]:
        return tuple(
            (a, self.vertices[s], self.vertices[t])
            for a, s, t in zip(self.arrows, self.src, self.tgt)
        )

    @cached_property
    def out_arrows(self) -> Tuple[Tuple[int, ...], ...]:
        out = [[] for _ in self.vertices]
        for a, s in enumerate(self.src):
            out[s].append(a)
        return tuple(tuple(x) for x in out)

    @cached_property
    def in_arrows(self) -> Tuple[Tuple[int, ...], ...]:
        into = [[] for _ in self.vertices]
        for a, t in enumerate(self.tgt):
            into[t].append(a)
        return tuple(tuple(x) for x in into)

    @cached_property
    def arrow_tokens(self) -> Tuple[str, ...]:
        return tuple(token(a) for a in self.arrows)

    @cached_property
    def token_index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.arrow_tokens)}

    def is_composable(self, word: Sequence[int]) -> bool:
        return all(self.tgt[a] == self.src[b] for a, b in zip(word, word[1:]))

    def is_cycle(self, word: Sequence[int]) -> bool:
        return bool(word) and self.is_composable(word) and self.tgt[word[-1]] == self.src[word[0]]

    def to_networkx(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(len(self.vertices)))
        for a, (s, t) in enumerate(zip(self.src, self.tgt)):
            graph.add_edge(s, t, key=a)
        return graph


# =============================================================================
# CHORDS
# =============================================================================

@dataclass(frozen=True)
class Chord:
    """
    Arrow ``beta`` short-cutting the fragment ``word[i..j]`` of a cycle.

    Indices run in traversal order and wrap around; the fragment has
    between 2 and len(word) - 1 arrows, s(beta) = s(word[i]) and
    t(beta) = t(word[j]).
    """
    beta: int
    i: int
    j: int

    def span(self, n: int) -> int:
        return (self.j - self.i) % n + 1

    def positions(self, n: int) -> Tuple[int, ...]:
        return tuple((self.i + k) % n for k in range(self.span(n)))


def chords_in(q: Quiver, word: Sequence[int]) -> List[Chord]:
    """All chords of a cycle given as a traversal-ordered arrow word."""
    n = len(word)
    chords = []
    if n < 3:
        return chords
    targets = [q.tgt[a] for a in word]
    for i in range(n):
        for beta in q.out_arrows[q.src[word[i]]]:
            tb = q.tgt[beta]
            for span in range(2, n):
                j = (i + span - 1) % n
                if targets[j] == tb:
                    chords.append(Chord(beta, i, j))
    return chords


def has_chord(q: Quiver, word: Sequence[int]) -> bool:
    n = len(word)
    if n < 3:
        return False
    targets = [q.tgt[a] for a in word]
    for i in range(n):
        reach = {q.tgt[beta] for beta in q.out_arrows[q.src[word[i]]]}
        if any(targets[(i + span - 1) % n] in reach for span in range(2, n)):
            return True
    return False


# =============================================================================
# SEEDS AND MUTATION
# =============================================================================

@dataclass(frozen=True, eq=False)
class Seed:
    """Index set with a skew-symmetric integer exchange matrix."""
    index: Tuple[Hashable, ...]
    epsilon: np.ndarray

    def __post_init__(self):
        eps = np.asarray(self.epsilon, dtype=np.int64)
        if eps.shape != (len(self.index), len(self.index)):
            raise InvalidQuiverError('exchange matrix does not match the index set')
        if not np.array_equal(eps, -eps.T):
            raise InvalidQuiverError('exchange matrix is not skew-symmetric')
        object.__setattr__(self, 'index', tuple(self.index))
        object.__setattr__(self, 'epsilon', eps)

    @classmethod
    def from_matrix(cls, epsilon, index: Optional[Sequence[Hashable]] = None) -> 'Seed':
        eps = np.asarray(epsilon, dtype=np.int64)
        if index is None:
            index = range(1, eps.shape[0] + 1)
        return cls(tuple(index), eps)

    def __eq__(self, other):
        if not isinstance(other, Seed):
            return NotImplemented
        return self.index == other.index and np.array_equal(self.epsilon, other.epsilon)

    __hash__ = None


def mutate_seed(seed: Seed, k: Hashable) -> Seed:
    """
    Seed mutation at index k.

    eps'_ij = -eps_ij if k in (i, j), otherwise
    eps_ij + (|eps_ik| eps_kj + eps_ik |eps_kj|) / 2.

    Raises:
        IndexError: k is not in the index set
    """
    if k not in seed.index:
        raise IndexError(f'{k!r} is not an index of the seed')
    pos = seed.index.index(k)
    eps = seed.epsilon
    col = eps[:, pos]
    row = eps[pos, :]
    mutated = eps + (np.outer(np.abs(col), row) + np.outer(col, np.abs(row))) // 2
    mutated[pos, :] = -row
    mutated[:, pos] = -col
    return Seed(seed.index, mutated)


def epsilon(q: Quiver) -> np.ndarray:
    """Exchange matrix: (#arrows i->j) - (#arrows j->i), in vertex order."""
    n = len(q.vertices)
    eps = np.zeros((n, n), dtype=np.int64)
    for s, t in zip(q.src, q.tgt):
        eps[s, t] += 1
        eps[t, s] -= 1
    return eps


def seed_of(q: Quiver) -> Seed:
    return Seed(q.vertices, epsilon(q))


def quiver_from_epsilon(eps, vertices: Optional[Sequence[Hashable]] = None) -> Quiver:
    """Quiver with eps_ij arrows i->j for every positive entry."""
    eps = np.asarray(eps, dtype=np.int64)
    if vertices is None:
        vertices = tuple(range(1, eps.shape[0] + 1))
    arrows = []
    for i, j in zip(*np.nonzero(eps > 0)):
        for n in range(int(eps[i, j])):
            arrows.append((f'{token(vertices[i])}>{token(vertices[j])}#{n}', vertices[i], vertices[j]))
    return Quiver(vertices, arrows)


def _reversed_name(name: str) -> str:
    return name[1:] if name.startswith('~') else '~' + name


def mutate_quiver(q: Quiver, k: Hashable) -> Quiver:
    """
    Quiver mutation at vertex k.

    1. every path a: i->k, b: k->j gets a composite arrow [ab]: i->j;
    2. arrows at k are reversed (named ~a);
    3. oriented 2-cycles are cancelled pairwise in identifier order.

    Raises:
        IndexError: k is not a vertex
    """
    kv = q.vertex_index(k)
    names = q.arrow_tokens
    arrows: List[Tuple[str, int, int]] = []

    for a in range(len(q.arrows)):
        s, t = q.src[a], q.tgt[a]
        if kv in (s, t):
            arrows.append((_reversed_name(names[a]), t, s))
        else:
            arrows.append((names[a], s, t))
    for a in q.in_arrows[kv]:
        for b in q.out_arrows[kv]:
            arrows.append((f'[{names[a]}{names[b]}]', q.src[a], q.tgt[b]))

    by_pair: Dict[Tuple[int, int], List[str]] = defaultdict(list)
    for name, s, t in arrows:
        by_pair[(s, t)].append(name)
    for pair in by_pair.values():
        pair.sort()
    cancelled = 0
    for (s, t), forward in by_pair.items():
        if s < t and (t, s) in by_pair:
            backward = by_pair[(t, s)]
            drop = min(len(forward), len(backward))
            del forward[:drop]
            del backward[:drop]
            cancelled += drop

    result = Quiver(
        q.vertices,
        [(name, q.vertices[s], q.vertices[t]) for (s, t), names_ in by_pair.items() for name in names_],
    )
    logger.debug(f'Mutated at {token(k)}: {cancelled} 2-cycles cancelled')
    return result


# =============================================================================
# TEXT FORMAT
# =============================================================================

def dump_quiver(q: Quiver) -> str:
    lines = [f'v {token(v)}' for v in q.vertices]
    lines += [f'a {token(a)} {token(s)} {token(t)}' for a, s, t in q.triples()]
    return '\n'.join(lines) + '\n'


def parse_quiver(text: str) -> Quiver:
    """
    Parse ``v <id>`` and ``a <id> <src> <dst>`` lines.

    Raises:
        QuiverSyntaxError: malformed lines or unknown vertices
    """
    vertices: List[str] = []
    arrows: List[Tuple[str, str, str]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == 'v' and len(tokens) == 2:
            if tokens[1] in vertices:
                raise QuiverSyntaxError(f'duplicate vertex {tokens[1]!r}', number)
            vertices.append(tokens[1])
        elif tokens[0] == 'a' and len(tokens) == 4:
            if tokens[2] not in vertices or tokens[3] not in vertices:
                raise QuiverSyntaxError('arrow endpoint is not a declared vertex', number)
            arrows.append((tokens[1], tokens[2], tokens[3]))
        elif tokens[0] in ('l', 'r', 'f', 'region', 'lp'):
            continue
        else:
            raise QuiverSyntaxError(f'cannot parse {line!r}', number)
    return Quiver(vertices, arrows)
