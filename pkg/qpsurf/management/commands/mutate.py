"""
Management command to mutate a quiver at a vertex.

The quiver is either Q_{T,m} of a triangulation (``--tri``/``--m``) or a
plain quiver file (``--quiver``). Several ``--at`` options mutate in
sequence.

Usage:
    python manage.py mutate --tri tetrahedron --m 2 --at 0.e.1
    python manage.py mutate --quiver q.txt --at 1 --at 2 --json
"""

from django.core.management.base import CommandError

from qpsurf.quiver import dump_quiver, mutate_quiver, parse_quiver, token
from qpsurf.surface_quiver import build_surface_quiver

from ._base import QPSurfCommand


class Command(QPSurfCommand):
    help = 'Mutate a quiver at one or more vertices'

    uses_triangulation = False

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('--tri', help='Triangulation file or bundled fixture name')
        source.add_argument('--quiver', help='Quiver file in the v/a text format')
        parser.add_argument('--m', type=int, default=2, help='Rank parameter m (default 2)')
        parser.add_argument('--at', action='append', required=True,
                            help='Vertex to mutate at, as printed by build_quiver')
        super().add_arguments(parser)

    def run(self, *args, **options):
        if options['tri']:
            q = build_surface_quiver(self.load_triangulation(options['tri']), options['m']).quiver
        else:
            q = self._parse_file(options['quiver'], parse_quiver)

        for name in options['at']:
            by_token = {token(v): v for v in q.vertices}
            if name not in by_token:
                raise CommandError(f'no vertex {name!r}', returncode=2)
            q = mutate_quiver(q, by_token[name])

        if options['json']:
            self.emit_json({
                'mutated_at': options['at'],
                'vertices': [token(v) for v in q.vertices],
                'arrows': [[token(a), token(s), token(t)] for a, s, t in q.triples()],
            })
        else:
            self.stdout.write(dump_quiver(q), ending='')
