"""
Management command to decide right-equivalence of two potentials on Q_{T,2}.

Prints ``equivalent``, ``inequivalent`` or ``undecided``.

Usage:
    python manage.py equiv A.pot B.pot --tri tetrahedron --m 2 -N 12
    python manage.py equiv A.pot B.pot --tri tetrahedron --json
"""

from qpsurf.reduction import UNDECIDED, compare_potentials

from ._base import QPSurfCommand, rational


class Command(QPSurfCommand):
    help = 'Decide whether two potentials are right-equivalent'

    uses_potential = True

    def add_arguments(self, parser):
        parser.add_argument('first', help='First potential file')
        parser.add_argument('second', help='Second potential file')
        super().add_arguments(parser)

    def run(self, *args, **options):
        sq = self.load_surface_quiver(options)
        N = self.truncation(sq, options)
        w1 = self.load_potential(sq, options['first'], N)
        w2 = self.load_potential(sq, options['second'], N)
        report = compare_potentials(w1, w2)

        if options['json']:
            self.emit_json({
                'verdict': report.verdict,
                'coordinates': [[rational(x) for x in side] for side in report.coordinates],
                'theta': [rational(x) if x is not None else None for x in report.theta],
                'guaranteed_degree': report.guaranteed_degree,
                'reason': report.reason,
            })
            return

        style = self.style.NOTICE if report.verdict == UNDECIDED else self.style.SUCCESS
        self.stdout.write(style(report.verdict))
        if options['verbosity'] > 1:
            self.stdout.write(f'  {report.reason}')
