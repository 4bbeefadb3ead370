"""
Builders for the bundled triangulation fixtures.

Every builder returns an IdealTriangulation. The valid family covers
(0,4), (0,n+2), (1,3) and (2,3); the once-punctured torus and the
self-folded sphere are kept for the negative cases of validation.
"""

from typing import Callable, Dict, Hashable, List, Sequence, Tuple

from .surface import IdealTriangulation, parse_triangulation


def _assemble(faces: Sequence[Tuple[str, Sequence[Hashable]]],
              partner: Callable[[Hashable], Hashable],
              prefix: str = 'h') -> IdealTriangulation:
    """
    Build a triangulation from keyed darts.

    Args:
        faces: (face label, three dart keys counterclockwise) per triangle
        partner: maps a dart key to the key of its opposite dart
        prefix: half-edge label prefix

    Returns:
        IdealTriangulation with labels prefix0, prefix1, ...
    """
    keys: List[Hashable] = [key for _, darts in faces for key in darts]
    index = {key: i for i, key in enumerate(keys)}
    opposite = tuple(index[partner(key)] for key in keys)
    return IdealTriangulation(
        face_labels=tuple(label for label, _ in faces),
        dart_labels=tuple(f'{prefix}{i}' for i in range(len(keys))),
        opposite=opposite,
    )


def from_vertex_triangles(triangles: Sequence[Tuple[Hashable, Hashable, Hashable]]) -> IdealTriangulation:
    """Glue triangles given as counterclockwise vertex triples along matching edges."""
    faces = [
        (f't{n}', [(u, v), (v, w), (w, u)])
        for n, (u, v, w) in enumerate(triangles)
    ]
    return _assemble(faces, lambda key: (key[1], key[0]))


TETRAHEDRON_TRI = """\
surface g=0 d=4
tri A a1 a2 a3
tri B b1 b2 b3
tri C c1 c2 c3
tri D d1 d2 d3
glue a3 b1
glue a1 c3
glue b3 c1
glue a2 d1
glue b2 d3
glue c2 d2
"""

ONCE_PUNCTURED_TORUS_TRI = """\
surface g=1 d=1
tri L h1 h2 h3
tri U h4 h5 h6
glue h1 h5
glue h2 h6
glue h3 h4
"""

SELF_FOLDED_TRI = """\
surface g=0 d=3
tri F x1 x2 x3
tri G y1 y2 y3
glue x1 x2
glue y1 y2
glue x3 y3
"""


def tetrahedron() -> IdealTriangulation:
    """Boundary of a tetrahedron, (g, d) = (0, 4), all valences 3."""
    return parse_triangulation(TETRAHEDRON_TRI)


def once_punctured_torus() -> IdealTriangulation:
    return parse_triangulation(ONCE_PUNCTURED_TORUS_TRI)


def self_folded() -> IdealTriangulation:
    return parse_triangulation(SELF_FOLDED_TRI)


def bipyramid(n: int) -> IdealTriangulation:
    """Double cone over an n-gon: (g, d) = (0, n + 2)."""
    if n < 3:
        raise ValueError('bipyramid needs at least 3 equator vertices')
    triangles = []
    for i in range(n):
        j = (i + 1) % n
        triangles.append((i, j, 'N'))
        triangles.append((j, i, 'S'))
    return from_vertex_triangles(triangles)


# Lattice directions of the three sides of the up and down triangles.
_UP = ((0, 0), (1, 0), (0, 1))
_DOWN = ((1, 0), (1, 1), (0, 1))


def _torus_class(point: Tuple[int, int]) -> int:
    # Z^2 modulo <(3, 0), (1, 1)>
    return (point[0] - point[1]) % 3


def _torus_darts(corners: Tuple[Tuple[int, int], ...], shift: int) -> List[Tuple[int, Tuple[int, int]]]:
    darts = []
    for s in range(3):
        p, q = corners[s], corners[(s + 1) % 3]
        start = (p[0] + shift, p[1])
        darts.append((_torus_class(start), (q[0] - p[0], q[1] - p[1])))
    return darts


def _torus_partner(key):
    cls, (dx, dy) = key
    return ((cls + dx - dy) % 3, (-dx, -dy))


def torus_three_punctures() -> IdealTriangulation:
    """Torus with three punctures of valence 6, (g, d) = (1, 3)."""
    faces = []
    for c in range(3):
        faces.append((f'U{c}', _torus_darts(_UP, c)))
        faces.append((f'D{c}', _torus_darts(_DOWN, c)))
    return _assemble(faces, _torus_partner)


def genus_two_three_punctures() -> IdealTriangulation:
    """
    Two copies of the three-punctured torus, each with one triangle
    removed, glued along the boundary by an orientation-reversing map.

    Result: (g, d) = (2, 3), ten triangles, all valences 10.
    """
    faces = []
    for copy in ('X', 'Y'):
        for c in range(3):
            if c != 0:
                faces.append((f'{copy}U{c}', [(copy,) + k for k in _torus_darts(_UP, c)]))
            faces.append((f'{copy}D{c}', [(copy,) + k for k in _torus_darts(_DOWN, c)]))

    # boundary darts left behind by the removed triangle U0 of each copy
    seam = {
        ('X', 1, (-1, 0)): ('Y', 1, (-1, 0)),
        ('X', 2, (1, -1)): ('Y', 0, (0, 1)),
        ('X', 0, (0, 1)): ('Y', 2, (1, -1)),
    }
    seam.update({b: a for a, b in seam.items()})

    def partner(key):
        if key in seam:
            return seam[key]
        return (key[0],) + _torus_partner(key[1:])

    return _assemble(faces, partner)


CATALOG: Dict[str, Callable[[], IdealTriangulation]] = {
    'tetrahedron': tetrahedron,
    'bipyramid5': lambda: bipyramid(3),
    'bipyramid6': lambda: bipyramid(4),
    'torus3': torus_three_punctures,
    'genus2': genus_two_three_punctures,
    'once_punctured_torus': once_punctured_torus,
    'self_folded': self_folded,
}

VALID_FIXTURES = ('tetrahedron', 'bipyramid5', 'bipyramid6', 'torus3', 'genus2')


def by_signature(genus: int, punctures: int) -> IdealTriangulation:
    """Return the bundled valid triangulation with the given (g, d)."""
    for name in VALID_FIXTURES:
        t = CATALOG[name]()
        if (t.genus, t.num_punctures) == (genus, punctures):
            return t
    raise KeyError(f'no bundled triangulation for (g={genus}, d={punctures})')
