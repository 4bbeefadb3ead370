"""
Management command to build the quiver Q_{T,m} of a triangulation.

Prints the quiver in the ``v``/``a`` text format followed by the l/r/f
successors, the black and white regions and the L_p^(k) cycles.

Usage:
    python manage.py build_quiver --tri tetrahedron --m 2
    python manage.py build_quiver --tri fixtures/torus3.tri --m 3 --json
"""

from qpsurf.quiver import token
from qpsurf.surface_quiver import dump_surface_quiver

from ._base import QPSurfCommand


class Command(QPSurfCommand):
    help = 'Build the quiver Q_{T,m} of an ideal triangulation'

    def run(self, *args, **options):
        sq = self.load_surface_quiver(options)
        if not options['json']:
            self.stdout.write(dump_surface_quiver(sq), ending='')
            return

        q = sq.quiver
        names = q.arrow_tokens
        self.emit_json({
            'm': sq.m,
            'vertices': [token(v) for v in q.vertices],
            'arrows': [[token(a), token(s), token(t)] for a, s, t in q.triples()],
            'black_regions': [[names[a] for a in word] for word in sq.black_regions],
            'white_regions': [[names[a] for a in word] for word in sq.white_regions],
            'lp': [
                {'puncture': p, 'level': k, 'cycle': [names[a] for a in word]}
                for (p, k), word in sorted(sq.lp.items())
            ],
        })
