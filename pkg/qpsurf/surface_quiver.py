"""
The quiver Q_{T,m} of an ideal triangulation.

Every triangle is cut into (m+1)^2 small triangles; vertices are the
lattice points (a0, a1, a2), a0 + a1 + a2 = m + 1, other than the
corners, with points on a side shared by both triangles of the arc.
Arrows are the sides of the downward small triangles, oriented
counterclockwise, so every downward triangle bounds a black region.

Arrow identifiers are ``(face, b, j)``: ``b`` is the downward triangle
(b0 + b1 + b2 = m - 1, corners b + 1 - e_u) and the arrow runs from
corner ``j`` to corner ``j + 1`` of it.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

import networkx as nx
from sympy.utilities.iterables import minlex

from .exceptions import InvalidQuiverError, InvalidTriangulationError, UnsupportedRankError
from .quiver import Quiver, has_chord, token
from .surface import IdealTriangulation, validate

logger = logging.getLogger('qpsurf')

Word = Tuple[int, ...]

# direction e_i - e_j, counterclockwise steps of 60 degrees
DIRECTION_INDEX = {(1, 0): 0, (2, 0): 1, (2, 1): 2, (0, 1): 3, (0, 2): 4, (1, 2): 5}


def least_rotation(word: Sequence[int]) -> Word:
    return minlex(tuple(word))


def _compositions(total: int) -> List[Tuple[int, int, int]]:
    return [
        (i, j, total - i - j)
        for i in range(total + 1)
        for j in range(total + 1 - i)
    ]


def _orbits(perm: Sequence[int]) -> List[Word]:
    seen = [False] * len(perm)
    orbits = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        orbit = []
        a = start
        while not seen[a]:
            seen[a] = True
            orbit.append(a)
            a = perm[a]
        orbits.append(tuple(orbit))
    return orbits


@dataclass(frozen=True)
class ChordlessCell:
    """A chordless cycle together with what it bounds."""
    word: Word
    kind: str              # 'black', 'white' or 'L'
    puncture: Optional[int] = None
    level: Optional[int] = None


class SurfaceQuiver:
    """
    Q_{T,m} together with its embedding data.

    Attributes:
        triangulation: the ideal triangulation it was built from
        m: rank parameter
        quiver: the underlying Quiver (arrows sorted by identifier)
        l, r, f: successor of every arrow in its black region, white
            region and L_p^(k) cycle
        lp_index: (puncture, level) of the unique L_p^(k) through each arrow
        vertex_kind: 'edge' or 'interior' per vertex
    """

    def __init__(self, triangulation: IdealTriangulation, m: int, quiver: Quiver,
                 l: Tuple[int, ...], r: Tuple[int, ...], f: Tuple[int, ...],
                 lp_index: Tuple[Tuple[int, int], ...],
                 vertex_kind: Dict[Hashable, str]):
        self.triangulation = triangulation
        self.m = m
        self.quiver = quiver
        self.l = l
        self.r = r
        self.f = f
        self.lp_index = lp_index
        self.vertex_kind = vertex_kind

    def __repr__(self):
        t = self.triangulation
        return f'<SurfaceQuiver g={t.genus} d={t.num_punctures} m={self.m} |Q0|={len(self.quiver.vertices)}>'

    @property
    def arrow_count(self) -> int:
        return len(self.quiver.arrows)

    def face_of(self, a: int) -> int:
        return self.quiver.arrows[a][0]

    def triangle_of(self, a: int) -> Tuple[int, int, int]:
        return self.quiver.arrows[a][1]

    def corner_of(self, a: int) -> int:
        return self.quiver.arrows[a][2]

    # -------------------------------------------------------------------------
    # Regions and L_p^(k) cycles
    # -------------------------------------------------------------------------

    @cached_property
    def black_regions(self) -> Tuple[Word, ...]:
        return tuple(sorted(least_rotation(o) for o in _orbits(self.l)))

    @cached_property
    def white_regions(self) -> Tuple[Word, ...]:
        return tuple(sorted(least_rotation(o) for o in _orbits(self.r)))

    @cached_property
    def lp(self) -> Dict[Tuple[int, int], Word]:
        """L_p^(k) in traversal order starting at its least arrow."""
        cycles = {}
        for orbit in _orbits(self.f):
            key = self.lp_index[orbit[0]]
            if key in cycles:
                raise InvalidQuiverError(f'L cycle at puncture {key[0]} level {key[1]} is disconnected')
            cycles[key] = least_rotation(orbit)
        return dict(sorted(cycles.items()))

    def lp_cycle(self, p: int, k: int) -> Word:
        return self.lp[(p, k)]

    @cached_property
    def black_of(self) -> Tuple[Word, ...]:
        """Black region through every arrow."""
        region = [()] * self.arrow_count
        for word in self.black_regions:
            for a in word:
                region[a] = word
        return tuple(region)

    @cached_property
    def white_of(self) -> Tuple[Word, ...]:
        region = [()] * self.arrow_count
        for word in self.white_regions:
            for a in word:
                region[a] = word
        return tuple(region)

    @cached_property
    def patches(self) -> Dict[int, FrozenSet[int]]:
        """Vertices on the L_p^(k) cycles of each puncture."""
        vertices: Dict[int, set] = {p: set() for p in self.triangulation.punctures}
        for a, (p, _) in enumerate(self.lp_index):
            vertices[p].add(self.quiver.src[a])
            vertices[p].add(self.quiver.tgt[a])
        return {p: frozenset(v) for p, v in vertices.items()}

    def patch(self, p: int) -> FrozenSet[int]:
        return self.patches[p]

    def cycle_vertices(self, word: Sequence[int]) -> FrozenSet[int]:
        return frozenset(self.quiver.src[a] for a in word)

    def location(self, word: Sequence[int]) -> Tuple[int, ...]:
        """Punctures whose patch contains the cycle."""
        vertices = self.cycle_vertices(word)
        return tuple(p for p, patch in self.patches.items() if vertices <= patch)

    def is_local(self, word: Sequence[int]) -> bool:
        return bool(self.location(word))

    def is_straight(self, word: Sequence[int]) -> bool:
        """No two consecutive sides of a black triangle, unless chordless."""
        canonical = least_rotation(word)
        if canonical in self.chordless_set:
            return True
        n = len(word)
        return all(self.l[word[i]] != word[(i + 1) % n] for i in range(n))

    def is_lp_power(self, word: Sequence[int]) -> Optional[Tuple[int, int, int]]:
        """(p, k, n) when the cycle is (L_p^(k))^n, else None."""
        first = word[0]
        p, k = self.lp_index[first]
        base = len(self.lp[(p, k)])
        if len(word) % base:
            return None
        n = len(word)
        if all(self.f[word[i]] == word[(i + 1) % n] for i in range(n)):
            return p, k, n // base
        return None

    # -------------------------------------------------------------------------
    # Chordless cycles
    # -------------------------------------------------------------------------

    @cached_property
    def chordless_cells(self) -> Tuple[ChordlessCell, ...]:
        cells = {}
        for word in self.black_regions:
            cells[word] = ChordlessCell(word, 'black')
        lp_words = {word: key for key, word in self.lp.items()}
        for word in self.white_regions:
            if word in lp_words:
                p, k = lp_words[word]
                cells[word] = ChordlessCell(word, 'L', p, k)
            else:
                cells[word] = ChordlessCell(word, 'white')
        for word, (p, k) in lp_words.items():
            cells.setdefault(word, ChordlessCell(word, 'L', p, k))
        return tuple(sorted(cells.values(), key=lambda c: (len(c.word), c.word)))

    @cached_property
    def chordless_set(self) -> FrozenSet[Word]:
        return frozenset(cell.word for cell in self.chordless_cells)

    @cached_property
    def cell_of(self) -> Dict[Word, ChordlessCell]:
        return {cell.word: cell for cell in self.chordless_cells}

    @property
    def max_valence(self) -> int:
        return max(self.triangulation.valences.values())

    # -------------------------------------------------------------------------
    # m = 2 arrow kinds
    # -------------------------------------------------------------------------

    def _require_rank_two(self):
        if self.m != 2:
            raise UnsupportedRankError(f'only defined for m=2 (got m={self.m})')

    def apex_of(self, a: int) -> int:
        """Corner x of the face whose small black triangle contains the arrow."""
        self._require_rank_two()
        b = self.triangle_of(a)
        return b.index(max(b))

    def kind_of(self, a: int) -> str:
        """
        'a' (center to side), 'b' (side to side) or 'd' (side to center).

        For the black triangle at corner x of a face with the other
        corners y = x+1, z = x+2: a runs c -> [xz]_x, b runs
        [xz]_x -> [xy]_x, d runs [xy]_x -> c.
        """
        x = self.apex_of(a)
        return 'abd'[(self.corner_of(a) - x) % 3]

    def arrow_at(self, face: int, apex: int, kind: str) -> int:
        self._require_rank_two()
        b = tuple(1 if u == apex else 0 for u in range(3))
        j = (apex + 'abd'.index(kind)) % 3
        return self.quiver.arrow_index((face, b, j))

    def center(self, face: int) -> int:
        self._require_rank_two()
        return self.quiver.vertex_index(('i', face, (1, 1, 1)))

    def arrows_of_kind(self, kind: str) -> Tuple[int, ...]:
        return tuple(a for a in range(self.arrow_count) if self.kind_of(a) == kind)

    def edge_cycle(self, a: int) -> Word:
        """The white quadrilateral through an a or d arrow."""
        self._require_rank_two()
        word = self.white_of[a]
        if len(word) != 4 or word in self.lp.values():
            raise InvalidQuiverError(f'arrow {token(self.quiver.arrows[a])} is not on an edge cycle')
        return word

    @cached_property
    def edge_cycles(self) -> Tuple[Word, ...]:
        lp_words = set(self.lp.values())
        return tuple(w for w in self.white_regions if w not in lp_words and len(w) == 4)


# =============================================================================
# CONSTRUCTION
# =============================================================================

def _vertex_key(t: IdealTriangulation, face: int, point: Tuple[int, int, int]):
    zeros = [u for u in range(3) if point[u] == 0]
    if not zeros:
        return ('i', face, point), None
    side = (zeros[0] + 1) % 3
    dart = 3 * face + side
    canonical = t.canonical_dart(dart)
    weight = point[side] if dart == canonical else point[(side + 1) % 3]
    return ('e', canonical, weight), (side, dart != canonical)


def _end_angle(direction: Tuple[int, int], side_info) -> int:
    angle = DIRECTION_INDEX[direction]
    if side_info is None:
        return angle
    side, flipped = side_info
    relative = (angle - DIRECTION_INDEX[((side + 1) % 3, side)]) % 6
    return relative + 3 if flipped else relative


def build_surface_quiver(t: IdealTriangulation, m: int) -> SurfaceQuiver:
    """
    Construct Q_{T,m}.

    Args:
        t: a triangulation passing validate()
        m: rank parameter, m >= 1

    Returns:
        SurfaceQuiver with l, r, f and the L_p^(k) membership populated

    Raises:
        InvalidTriangulationError: validate(t) reports findings
        UnsupportedRankError: m < 1
    """
    if m < 1:
        raise UnsupportedRankError(f'm must be a positive integer (got {m})')
    report = validate(t)
    if not report.ok:
        raise InvalidTriangulationError(str(report))

    vertices: Dict[Hashable, str] = {}
    for face in range(t.face_count):
        for point in _compositions(m + 1):
            if max(point) == m + 1:
                continue
            key, side_info = _vertex_key(t, face, point)
            vertices.setdefault(key, 'interior' if side_info is None else 'edge')

    arrows = []
    ends: Dict[Hashable, List[Tuple[int, Hashable, bool]]] = {v: [] for v in vertices}
    lp_of: Dict[Hashable, Tuple[int, int]] = {}
    for face in range(t.face_count):
        for b in _compositions(m - 1):
            corners = [tuple(b[u] + 1 - (u == j) for u in range(3)) for j in range(3)]
            for j in range(3):
                nxt = (j + 1) % 3
                arrow = (face, b, j)
                source, source_side = _vertex_key(t, face, corners[j])
                target, target_side = _vertex_key(t, face, corners[nxt])
                arrows.append((arrow, source, target))
                ends[source].append((_end_angle((j, nxt), source_side), arrow, True))
                ends[target].append((_end_angle((nxt, j), target_side), arrow, False))
                i = (j + 2) % 3
                lp_of[arrow] = (t.corner_puncture(face, i), m - b[i])

    quiver = Quiver(list(vertices), arrows)
    index = quiver.arrow_index

    n = len(quiver.arrows)
    l = [0] * n
    r = [0] * n
    for key, around in ends.items():
        around.sort()
        angles = [angle for angle, _, _ in around]
        if len(set(angles)) != len(angles):
            raise InvalidQuiverError(f'overlapping arrows at vertex {token(key)}')
        for pos, (_, arrow, outgoing) in enumerate(around):
            if outgoing:
                continue
            after = around[(pos + 1) % len(around)]
            before = around[pos - 1]
            if not (after[2] and before[2]):
                raise InvalidQuiverError(f'arrows do not alternate at vertex {token(key)}')
            r[index(arrow)] = index(after[1])
            l[index(arrow)] = index(before[1])

    for (face, b, j) in quiver.arrows:
        if l[index((face, b, j))] != index((face, b, (j + 1) % 3)):
            raise InvalidQuiverError('rotation system disagrees with the black triangles')

    lp_index = tuple(lp_of[a] for a in quiver.arrows)
    f = [0] * n
    for a in range(n):
        successors = [
            b for b in quiver.out_arrows[quiver.tgt[a]]
            if lp_index[b] == lp_index[a]
        ]
        if len(successors) != 1:
            raise InvalidQuiverError(f'L cycle through {token(quiver.arrows[a])} is not a simple cycle')
        f[a] = successors[0]

    sq = SurfaceQuiver(t, m, quiver, tuple(l), tuple(r), tuple(f), lp_index, vertices)
    logger.info(
        f'Built Q_(T,{m}) for (g={t.genus}, d={t.num_punctures}): '
        f'{len(quiver.vertices)} vertices, {n} arrows'
    )
    return sq


# =============================================================================
# OPERATIONS
# =============================================================================

def step_l(q: SurfaceQuiver, a: int) -> int:
    return q.l[a]


def step_r(q: SurfaceQuiver, a: int) -> int:
    return q.r[a]


def step_f(q: SurfaceQuiver, a: int) -> int:
    return q.f[a]


def lp_cycles(q: SurfaceQuiver) -> List[Tuple[int, int, Word]]:
    """(puncture, level, cycle) for every L_p^(k)."""
    return [(p, k, word) for (p, k), word in q.lp.items()]


def enumerate_chordless(q: SurfaceQuiver) -> List[Word]:
    """
    Black regions, white regions and L_p^(k) for k = 2..m.

    L_p^(1) coincides with a white region and is listed once. Every
    returned cycle is checked to be free of chords.

    Raises:
        InvalidQuiverError: a listed cycle has a chord
    """
    words = [cell.word for cell in q.chordless_cells]
    for word in words:
        if has_chord(q.quiver, word):
            raise InvalidQuiverError(f'cycle {word} has a chord')
    return words


def chordless_search_bound(q: SurfaceQuiver) -> int:
    return max(3 * q.m, q.m * q.max_valence)


def brute_force_chordless(q: SurfaceQuiver, length_bound: Optional[int] = None) -> List[Word]:
    """
    Chordless cycles found by graph search, independent of the embedding.

    Only cycles without repeated vertices are searched, up to
    ``length_bound`` arrows (default: the longest L_p^(m)).
    """
    quiver = q.quiver
    bound = length_bound or chordless_search_bound(q)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(quiver.vertices)))
    parallel: Dict[Tuple[int, int], List[int]] = {}
    for a, (s, t) in enumerate(zip(quiver.src, quiver.tgt)):
        parallel.setdefault((s, t), []).append(a)
        graph.add_edge(s, t)

    found = set()
    for nodes in nx.chordless_cycles(graph, length_bound=bound):
        if len(nodes) < 2:
            continue
        steps = [parallel[(nodes[i], nodes[(i + 1) % len(nodes)])] for i in range(len(nodes))]
        if any(len(options) > 1 for options in steps):
            continue
        word = tuple(options[0] for options in steps)
        if not has_chord(quiver, word):
            found.add(least_rotation(word))
    return sorted(found, key=lambda w: (len(w), w))


def dump_surface_quiver(q: SurfaceQuiver) -> str:
    """Quiver dump followed by l/r/f successors, regions and L cycles."""
    names = q.quiver.arrow_tokens
    lines = [f'v {token(v)}' for v in q.quiver.vertices]
    lines += [f'a {token(a)} {token(s)} {token(t)}' for a, s, t in q.quiver.triples()]
    for label, perm in (('l', q.l), ('r', q.r), ('f', q.f)):
        lines += [f'{label} {names[a]} {names[perm[a]]}' for a in range(q.arrow_count)]
    for word in q.black_regions:
        lines.append('region black ' + ' '.join(names[a] for a in word))
    for word in q.white_regions:
        lines.append('region white ' + ' '.join(names[a] for a in word))
    for (p, k), word in q.lp.items():
        lines.append(f'lp {p} {k} ' + ' '.join(names[a] for a in word))
    return '\n'.join(lines) + '\n'
