"""
Marked surfaces and ideal triangulations.

A triangulation is stored as a combinatorial map: every triangle owns
three consecutive darts (directed half-edges) listed counterclockwise,
and ``opposite`` pairs the two darts of each arc. Punctures are the
orbits of the corners under the gluing.

Dart ``3*f + s`` runs from corner ``s`` to corner ``s+1`` of face ``f``.
"""

import logging
import re
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple, Union

import networkx as nx

from .exceptions import (
    FoldedEdgeError,
    GluingError,
    OrientationError,
    SameTriangleError,
    TriangulationSyntaxError,
)

logger = logging.getLogger('qpsurf')

LABEL_RE = re.compile(r'^[A-Za-z0-9_]+$')


@dataclass(frozen=True)
class MarkedSurface:
    """Closed oriented surface of genus g with d punctures."""
    genus: int
    num_punctures: int

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.num_punctures

    @property
    def is_triangulable(self) -> bool:
        if self.euler_characteristic >= 0:
            return False
        if self.genus == 0:
            return self.num_punctures >= 4
        return self.num_punctures >= 3

    @property
    def arc_count(self) -> int:
        return 6 * self.genus - 6 + 3 * self.num_punctures

    @property
    def face_count(self) -> int:
        return 4 * self.genus - 4 + 2 * self.num_punctures


@dataclass(frozen=True)
class Finding:
    """A single violated triangulation condition."""
    kind: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    findings: Tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings

    @property
    def kinds(self) -> Tuple[str, ...]:
        return tuple(sorted({f.kind for f in self.findings}))

    def __str__(self):
        if self.ok:
            return 'valid'
        return '; '.join(f'{f.kind}: {f.detail}' for f in self.findings)


@dataclass(frozen=True)
class Counts:
    arcs: int
    faces: int
    valences: Dict[int, int]


@dataclass(frozen=True)
class IdealTriangulation:
    """
    Oriented triangles glued along their sides.

    Attributes:
        face_labels: one label per triangle
        dart_labels: three labels per triangle, counterclockwise
        opposite: involution pairing the two darts of every arc
    """
    face_labels: Tuple[str, ...]
    dart_labels: Tuple[str, ...]
    opposite: Tuple[int, ...]

    # -------------------------------------------------------------------------
    # Combinatorial map
    # -------------------------------------------------------------------------

    @property
    def face_count(self) -> int:
        return len(self.face_labels)

    @property
    def dart_count(self) -> int:
        return len(self.dart_labels)

    @staticmethod
    def face_of(dart: int) -> int:
        return dart // 3

    @staticmethod
    def side_of(dart: int) -> int:
        return dart % 3

    @staticmethod
    def next_dart(dart: int) -> int:
        return 3 * (dart // 3) + (dart % 3 + 1) % 3

    @staticmethod
    def prev_dart(dart: int) -> int:
        return 3 * (dart // 3) + (dart % 3 + 2) % 3

    @cached_property
    def _dart_index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.dart_labels)}

    def dart(self, ref: Union[int, str]) -> int:
        """Resolve a dart given by index or label."""
        if isinstance(ref, int):
            if not 0 <= ref < self.dart_count:
                raise IndexError(f'no dart {ref}')
            return ref
        try:
            return self._dart_index[ref]
        except KeyError:
            raise IndexError(f'no half-edge labelled {ref!r}') from None

    @cached_property
    def dart_puncture(self) -> Tuple[int, ...]:
        """Puncture at the start of every dart."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.dart_count))
        for d in range(self.dart_count):
            o = self.opposite[d]
            # start(d) = end(o) and end(d) = start(o)
            graph.add_edge(d, self.next_dart(o))
            graph.add_edge(self.next_dart(d), o)
        components = sorted((min(c), c) for c in nx.connected_components(graph))
        puncture = [0] * self.dart_count
        for index, (_, component) in enumerate(components):
            for d in component:
                puncture[d] = index
        return tuple(puncture)

    def corner_puncture(self, face: int, corner: int) -> int:
        return self.dart_puncture[3 * face + corner]

    def dart_end(self, dart: int) -> int:
        return self.dart_puncture[self.next_dart(dart)]

    @property
    def num_punctures(self) -> int:
        return max(self.dart_puncture) + 1 if self.dart_count else 0

    @property
    def punctures(self) -> Tuple[int, ...]:
        return tuple(range(self.num_punctures))

    @cached_property
    def valences(self) -> Dict[int, int]:
        return dict(sorted(Counter(self.dart_puncture).items()))

    def valence(self, puncture: int) -> int:
        return self.valences[puncture]

    @cached_property
    def arcs(self) -> Tuple[int, ...]:
        """Canonical dart of every arc (the smaller of the pair)."""
        return tuple(d for d in range(self.dart_count) if d < self.opposite[d])

    def canonical_dart(self, dart: int) -> int:
        return min(dart, self.opposite[dart])

    def arc_endpoints(self, dart: int) -> Tuple[int, int]:
        return self.dart_puncture[dart], self.dart_end(dart)

    @property
    def euler_characteristic(self) -> int:
        return self.num_punctures - len(self.arcs) + self.face_count

    @property
    def genus(self) -> int:
        return (2 - self.euler_characteristic) // 2

    @property
    def surface(self) -> MarkedSurface:
        return MarkedSurface(self.genus, self.num_punctures)

    @cached_property
    def face_graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.face_count))
        for d in self.arcs:
            graph.add_edge(self.face_of(d), self.face_of(self.opposite[d]), dart=d)
        return graph

    def is_connected(self) -> bool:
        return self.face_count > 0 and nx.is_connected(self.face_graph)

    def face_across(self, dart: int) -> int:
        return self.face_of(self.opposite[dart])


# =============================================================================
# PARSING
# =============================================================================

def parse_triangulation(text: str) -> IdealTriangulation:
    """
    Parse the line-oriented triangulation format.

    Lines:
        surface ...                       (optional header, ignored)
        tri <id> <he1> <he2> <he3>        (half-edges counterclockwise)
        glue <heA> <heB> [opposite|same]

    Args:
        text: Triangulation file contents

    Returns:
        IdealTriangulation with punctures derived from the gluing

    Raises:
        TriangulationSyntaxError: malformed lines or duplicate labels
        GluingError: half-edges unmatched or matched twice
        OrientationError: a gluing that would not reverse direction
    """
    face_labels: List[str] = []
    dart_labels: List[str] = []
    glue_lines: List[Tuple[int, str, str]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == 'surface':
            continue
        if keyword == 'tri':
            if len(tokens) != 5:
                raise TriangulationSyntaxError('tri expects an id and three half-edges', number)
            for label in tokens[1:]:
                if not LABEL_RE.match(label):
                    raise TriangulationSyntaxError(f'bad label {label!r}', number)
            if tokens[1] in face_labels:
                raise TriangulationSyntaxError(f'duplicate triangle {tokens[1]!r}', number)
            for label in tokens[2:]:
                if label in dart_labels or tokens[2:].count(label) > 1:
                    raise TriangulationSyntaxError(f'duplicate half-edge {label!r}', number)
            face_labels.append(tokens[1])
            dart_labels.extend(tokens[2:])
        elif keyword == 'glue':
            if len(tokens) not in (3, 4):
                raise TriangulationSyntaxError('glue expects two half-edges', number)
            if len(tokens) == 4 and tokens[3] not in ('opposite', 'same'):
                raise TriangulationSyntaxError(f'unknown gluing mode {tokens[3]!r}', number)
            if len(tokens) == 4 and tokens[3] == 'same':
                raise OrientationError(
                    f'{tokens[1]} and {tokens[2]} glued with equal directions', number
                )
            glue_lines.append((number, tokens[1], tokens[2]))
        else:
            raise TriangulationSyntaxError(f'unknown keyword {keyword!r}', number)

    if not face_labels:
        raise TriangulationSyntaxError('no triangles')

    index = {label: i for i, label in enumerate(dart_labels)}
    opposite: List[Optional[int]] = [None] * len(dart_labels)
    for number, a, b in glue_lines:
        for label in (a, b):
            if label not in index:
                raise TriangulationSyntaxError(f'unknown half-edge {label!r}', number)
        if a == b:
            raise GluingError(f'{a} glued to itself', number)
        ia, ib = index[a], index[b]
        for label, i in ((a, ia), (b, ib)):
            if opposite[i] is not None:
                raise GluingError(f'{label} matched twice', number)
        opposite[ia] = ib
        opposite[ib] = ia

    unmatched = [dart_labels[i] for i, o in enumerate(opposite) if o is None]
    if unmatched:
        raise GluingError(f'unmatched half-edges: {" ".join(unmatched)}')

    triangulation = IdealTriangulation(
        face_labels=tuple(face_labels),
        dart_labels=tuple(dart_labels),
        opposite=tuple(opposite),
    )
    logger.debug(
        f'Parsed triangulation: {triangulation.face_count} faces, '
        f'g={triangulation.genus}, d={triangulation.num_punctures}'
    )
    return triangulation


def dump_triangulation(t: IdealTriangulation) -> str:
    lines = [f'surface g={t.genus} d={t.num_punctures}']
    for f, label in enumerate(t.face_labels):
        lines.append(f'tri {label} ' + ' '.join(t.dart_labels[3 * f:3 * f + 3]))
    for d in t.arcs:
        lines.append(f'glue {t.dart_labels[d]} {t.dart_labels[t.opposite[d]]}')
    return '\n'.join(lines) + '\n'


# =============================================================================
# VALIDATION AND COUNTS
# =============================================================================

def validate(t: IdealTriangulation) -> ValidationReport:
    """
    Check the conditions the quiver construction relies on.

    Reports self-folded triangles, arcs with coinciding endpoints,
    punctures of valence below 3, disconnected gluings and surfaces
    that admit no such triangulation.
    """
    findings: List[Finding] = []

    if not t.is_connected():
        findings.append(Finding('disconnected', 'gluing has several components'))

    for f in range(t.face_count):
        darts = range(3 * f, 3 * f + 3)
        if any(t.face_of(t.opposite[d]) == f for d in darts):
            findings.append(Finding('self-folded', f'triangle {t.face_labels[f]}'))

    for d in t.arcs:
        start, end = t.arc_endpoints(d)
        if start == end:
            findings.append(Finding(
                'loop-arc',
                f'arc {t.dart_labels[d]} has both ends at puncture {start}',
            ))

    for p, val in t.valences.items():
        if val < 3:
            findings.append(Finding('low-valence', f'puncture {p} has valence {val}'))

    if t.is_connected() and not t.surface.is_triangulable:
        findings.append(Finding(
            'surface',
            f'(g={t.genus}, d={t.num_punctures}) violates the puncture bound',
        ))

    return ValidationReport(tuple(findings))


def counts(t: IdealTriangulation) -> Counts:
    """Arc and face counts together with the valence map."""
    return Counts(arcs=len(t.arcs), faces=t.face_count, valences=dict(t.valences))


# =============================================================================
# FLIPS AND CANONICAL FORM
# =============================================================================

@dataclass(frozen=True)
class FlipResult:
    triangulation: IdealTriangulation
    report: ValidationReport
    new_arc: str = field(default='')


def flip(t: IdealTriangulation, arc: Union[int, str]) -> FlipResult:
    """
    Replace an arc by the other diagonal of its quadrilateral.

    The new diagonal keeps the half-edge labels of the removed arc, so
    flipping the same label twice returns the original triangulation up
    to relabeling.

    Raises:
        FoldedEdgeError: the arc is the folded edge of a self-folded triangle
        SameTriangleError: both sides of the arc lie on one triangle otherwise
    """
    a = t.dart(arc)
    b = t.opposite[a]
    f1, f2 = t.face_of(a), t.face_of(b)
    if f1 == f2:
        if b in (t.next_dart(a), t.prev_dart(a)):
            raise FoldedEdgeError(f'arc {t.dart_labels[a]} is folded inside triangle {t.face_labels[f1]}')
        raise SameTriangleError(f'arc {t.dart_labels[a]} borders triangle {t.face_labels[f1]} twice')

    # (a, a1, a2) and (b, b1, b2) become (b2, a1, a') and (a2, b1, b')
    a1, a2 = t.next_dart(a), t.prev_dart(a)
    b1, b2 = t.next_dart(b), t.prev_dart(b)
    moved = {
        b2: 3 * f1, a1: 3 * f1 + 1, a: 3 * f1 + 2,
        a2: 3 * f2, b1: 3 * f2 + 1, b: 3 * f2 + 2,
    }

    def relocate(d: int) -> int:
        return moved.get(d, d)

    labels = list(t.dart_labels)
    opposite = list(t.opposite)
    for old, new in moved.items():
        labels[new] = t.dart_labels[old]
    for d in range(t.dart_count):
        opposite[relocate(d)] = relocate(t.opposite[d])

    flipped = IdealTriangulation(
        face_labels=t.face_labels,
        dart_labels=tuple(labels),
        opposite=tuple(opposite),
    )
    report = validate(flipped)
    logger.debug(f'Flipped arc {t.dart_labels[a]}: {report}')
    return FlipResult(flipped, report, t.dart_labels[a])


def canonical_form(t: IdealTriangulation) -> Tuple[Tuple[int, int], ...]:
    """
    Relabeling-invariant code of the combinatorial map.

    Every dart is tried as a root; darts are numbered in breadth-first
    order along (next, opposite) and the lexicographically least code of
    (next, opposite) pairs wins.
    """
    best = None
    for root in range(t.dart_count):
        order = {root: 0}
        queue = deque([root])
        while queue:
            d = queue.popleft()
            for e in (t.next_dart(d), t.opposite[d]):
                if e not in order:
                    order[e] = len(order)
                    queue.append(e)
        if len(order) != t.dart_count:
            continue
        darts = sorted(order, key=order.get)
        code = tuple((order[t.next_dart(d)], order[t.opposite[d]]) for d in darts)
        if best is None or code < best:
            best = code
    return best or ()


def same_triangulation(t1: IdealTriangulation, t2: IdealTriangulation) -> bool:
    """Equality up to relabeling of triangles and half-edges."""
    return canonical_form(t1) == canonical_form(t2)
