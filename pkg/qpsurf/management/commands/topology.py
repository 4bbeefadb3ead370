"""
Management command to print the closed-form topology ranks for (g, d, m).

Usage:
    python manage.py topology --g 0 --d 4 --m 1
    python manage.py topology --g 1 --d 3 --m 2 --tri torus3 --json
"""

from django.core.management.base import CommandError

from qpsurf.homology import topology_report
from qpsurf.surface_quiver import build_surface_quiver

from ._base import QPSurfCommand


class Command(QPSurfCommand):
    help = 'Spectral genus and Betti numbers attached to a punctured surface'

    uses_triangulation = False

    def add_arguments(self, parser):
        parser.add_argument('--g', type=int, required=True, help='Genus')
        parser.add_argument('--d', type=int, required=True, help='Number of punctures')
        parser.add_argument('--m', type=int, default=2, help='Rank parameter m (default 2)')
        parser.add_argument('--tri', help='Also check |Q_0| of Q_{T,m} for this triangulation')
        super().add_arguments(parser)

    def run(self, *args, **options):
        g, d, m = options['g'], options['d'], options['m']
        vertex_count = None
        if options['tri']:
            t = self.load_triangulation(options['tri'])
            if (t.genus, t.num_punctures) != (g, d):
                raise CommandError(
                    f'triangulation has genus {t.genus} with {t.num_punctures} punctures', returncode=1
                )
            vertex_count = len(build_surface_quiver(t, m).quiver.vertices)
        report = topology_report(g, d, m, vertex_count)

        if options['json']:
            self.emit_json({
                'g': g, 'd': d, 'm': m,
                'spectral_genus': report.spectral_genus,
                'betti': {'h0': report.h0, 'h1': report.h1, 'h2': report.h2, 'h3': report.h3},
                'compact_support': {str(k): v for k, v in report.compact.items()},
                't_ranks': {str(k): v for k, v in report.t_ranks.items()},
                'vertex_count': report.vertex_count,
                'checks': report.checks,
            })
        else:
            rows = [
                ('g(Sigma)', report.spectral_genus),
                ('h0', report.h0), ('h1', report.h1), ('h2', report.h2), ('h3', report.h3),
            ]
            rows += [(f'hc{k}', v) for k, v in sorted(report.compact.items())]
            rows += [(f'T h{k}', v) for k, v in sorted(report.t_ranks.items())]
            if report.vertex_count is not None:
                rows.append(('|Q0|', report.vertex_count))
            width = max(len(name) for name, _ in rows)
            for name, value in rows:
                self.stdout.write(f'{name:<{width}}  {value:>6}')
            for name, ok in report.checks.items():
                style = self.style.SUCCESS if ok else self.style.ERROR
                self.stdout.write(style(f'{name}: {"ok" if ok else "FAILED"}'))

        if not report.ok:
            raise CommandError('topology consistency checks failed', returncode=1)
