"""
Cellular cohomology of the 2-complex C(T, m) and closed-form topology ranks.

C(T, m) has the quiver vertices as 0-cells, the arrows as 1-cells and a
2-cell glued along every chordless cycle. Ranks are read off integral
Smith normal forms, so torsion is visible as well.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from .exceptions import UntriangulableSurfaceError
from .surface import MarkedSurface
from .surface_quiver import SurfaceQuiver, Word

logger = logging.getLogger('qpsurf')


@dataclass(frozen=True)
class CWComplex2:
    """
    The complex C(T, m).

    Attributes:
        cells0: vertex indices
        cells1: arrow indices
        cells2: chordless cycles
        boundary1: arrow x vertex matrix, +1 at the target and -1 at the source
        boundary2: cycle x arrow matrix of arrow multiplicities
    """
    cells0: Tuple[int, ...]
    cells1: Tuple[int, ...]
    cells2: Tuple[Word, ...]
    boundary1: DomainMatrix
    boundary2: DomainMatrix

    @property
    def euler_characteristic(self) -> int:
        return len(self.cells0) - len(self.cells1) + len(self.cells2)

    def is_chain_complex(self) -> bool:
        """Every 2-cell boundary telescopes to zero."""
        product = self.boundary2 * self.boundary1
        return all(x == 0 for row in product.to_list() for x in row)


def build_complex(sq: SurfaceQuiver) -> CWComplex2:
    q = sq.quiver
    vertices = len(q.vertices)
    arrows = sq.arrow_count
    cells2 = tuple(cell.word for cell in sq.chordless_cells)

    b1 = [[ZZ(0)] * vertices for _ in range(arrows)]
    for a in range(arrows):
        b1[a][q.tgt[a]] += 1
        b1[a][q.src[a]] -= 1
    b2 = [[ZZ(0)] * arrows for _ in cells2]
    for i, word in enumerate(cells2):
        for a in word:
            b2[i][a] += 1

    complex2 = CWComplex2(
        cells0=tuple(range(vertices)),
        cells1=tuple(range(arrows)),
        cells2=cells2,
        boundary1=DomainMatrix(b1, (arrows, vertices), ZZ),
        boundary2=DomainMatrix(b2, (len(cells2), arrows), ZZ),
    )
    logger.debug(f'Built C(T,{sq.m}): {vertices} vertices, {arrows} arrows, {len(cells2)} 2-cells')
    return complex2


def _nonzero_factors(matrix: DomainMatrix) -> List[int]:
    return [abs(int(f)) for f in invariant_factors(matrix) if f != 0]


def h2_rank(c: CWComplex2) -> Tuple[int, List[int]]:
    """
    Second cohomology as the cokernel of C^1 -> C^2.

    Returns:
        (free rank, torsion invariant factors > 1)
    """
    factors = _nonzero_factors(c.boundary2)
    return len(c.cells2) - len(factors), [f for f in factors if f > 1]


def h1_rank(c: CWComplex2) -> int:
    """Free rank of the first cohomology."""
    rank2 = len(_nonzero_factors(c.boundary2))
    rank1 = len(_nonzero_factors(c.boundary1))
    return len(c.cells1) - rank2 - rank1


def h0_rank(c: CWComplex2) -> int:
    return len(c.cells0) - len(_nonzero_factors(c.boundary1))


def euler_check(c: CWComplex2, genus: int, punctures: int, m: int) -> bool:
    """
    V - E + F equals chi(S) + d(m - 1) and the alternating sum of the
    cohomology ranks.
    """
    expected = (2 - 2 * genus) + punctures * (m - 1)
    free2, _ = h2_rank(c)
    return c.euler_characteristic == expected == h0_rank(c) - h1_rank(c) + free2


# =============================================================================
# CLOSED-FORM TOPOLOGY
# =============================================================================

@dataclass(frozen=True)
class TopologyReport:
    """
    Ranks attached to the surface data (g, d, m).

    Attributes:
        spectral_genus: genus of the spectral curve
        h0..h3: Betti numbers of the conic fibration Y
        compact: Betti numbers with compact support of Y, by degree
        t_ranks: Betti numbers of the base surface T, by degree
        vertex_count: |Q_0| when a quiver was supplied
        checks: named consistency flags
    """
    m: int
    g: int
    d: int
    spectral_genus: int
    h0: int
    h1: int
    h2: int
    h3: int
    compact: Dict[int, int] = field(default_factory=dict)
    t_ranks: Dict[int, int] = field(default_factory=dict)
    vertex_count: Optional[int] = None
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def spectral_genus(g: int, d: int, m: int) -> int:
    """(m+1)^2 (g-1) + m(m+1) d / 2 + 1."""
    return (m + 1) ** 2 * (g - 1) + m * (m + 1) * d // 2 + 1


def _riemann_hurwitz(g: int, d: int, m: int, genus_sigma: int) -> bool:
    # degree m+1 cover of S with m(m+1)(d+2g-2) simple branch points
    return 2 * genus_sigma - 2 == (m + 1) * (2 * g - 2) + m * (m + 1) * (d + 2 * g - 2)


def _sequence_h3(g: int, d: int, m: int, genus_sigma: int) -> int:
    # cokernel md of the injective degree-2 map plus the kernel of the surjective degree-3 map
    return m * d + (2 * genus_sigma + 2 * g) - 4 * g


def topology_report(g: int, d: int, m: int, vertex_count: Optional[int] = None) -> TopologyReport:
    """
    Closed-form ranks for genus g, d punctures and rank m.

    Args:
        g: genus of the surface
        d: number of punctures
        m: rank parameter (m >= 1)
        vertex_count: |Q_0| of a built Q_{T,m}, checked against h3

    Raises:
        UntriangulableSurfaceError: (g, d) admits no ideal triangulation or m < 1
    """
    if m < 1:
        raise UntriangulableSurfaceError(f'm must be at least 1 (got {m})')
    if g < 0 or d < 1 or not MarkedSurface(g, d).is_triangulable:
        raise UntriangulableSurfaceError(f'no ideal triangulation of genus {g} with {d} punctures')

    genus_sigma = spectral_genus(g, d, m)
    h3 = m * (m + 2) * (2 * g - 2 + d)
    h2 = m * d + 1
    h1 = 2 * g
    compact = {3: h3, 4: h2, 5: h1, 6: 1}
    checks = {
        'riemann_hurwitz': _riemann_hurwitz(g, d, m, genus_sigma),
        'long_exact_sequence': _sequence_h3(g, d, m, genus_sigma) == h3,
        'poincare_duality': all(compact[6 - k] == rank for k, rank in enumerate((1, h1, h2, h3))),
    }
    if vertex_count is not None:
        checks['h3_equals_vertices'] = vertex_count == h3
    return TopologyReport(
        m=m, g=g, d=d,
        spectral_genus=genus_sigma,
        h0=1, h1=h1, h2=h2, h3=h3,
        compact=compact,
        t_ranks={0: 1, 1: 2 * g, 2: 1 + m * d},
        vertex_count=vertex_count,
        checks=checks,
    )


def rank_h3_matches_vertices(sq: SurfaceQuiver) -> bool:
    """The number of vertices of Q_{T,m} equals m(m+2)(2g-2+d)."""
    t = sq.triangulation
    report = topology_report(t.genus, t.num_punctures, sq.m, len(sq.quiver.vertices))
    return report.checks['h3_equals_vertices']
