"""
Management command to list the chordless cycles of Q_{T,m}.

Usage:
    python manage.py chordless --tri tetrahedron --m 2
    python manage.py chordless --tri torus3 --m 3 --check
"""

from django.core.management.base import CommandError

from qpsurf.surface_quiver import brute_force_chordless, enumerate_chordless

from ._base import QPSurfCommand


class Command(QPSurfCommand):
    help = 'List the chordless cycles of Q_{T,m} with their kind'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--check', action='store_true',
                            help='Compare against the brute-force graph search')

    def run(self, *args, **options):
        sq = self.load_surface_quiver(options)
        names = sq.quiver.arrow_tokens
        cells = sorted(sq.chordless_cells, key=lambda cell: (len(cell.word), cell.word))

        agrees = None
        if options['check']:
            listed = sorted(enumerate_chordless(sq), key=lambda w: (len(w), w))
            agrees = listed == brute_force_chordless(sq)

        if options['json']:
            payload = {
                'count': len(cells),
                'cycles': [
                    {
                        'kind': cell.kind,
                        'puncture': cell.puncture,
                        'level': cell.level,
                        'word': [names[a] for a in cell.word],
                    }
                    for cell in cells
                ],
            }
            if agrees is not None:
                payload['brute_force_agrees'] = agrees
            self.emit_json(payload)
            return

        for cell in cells:
            where = f' p={cell.puncture} k={cell.level}' if cell.kind == 'L' else ''
            self.stdout.write(f'{cell.kind}{where}: ' + ' '.join(names[a] for a in cell.word))
        self.stdout.write(self.style.SUCCESS(f'{len(cells)} chordless cycles'))
        if agrees is True:
            self.stdout.write(self.style.SUCCESS('brute-force search agrees'))
        elif agrees is False:
            raise CommandError('brute-force search disagrees', returncode=1)
