"""
Management command to run the seeded verification suites.

Suites: chordless, cohomology, topology, cutlemma, equivariance, theta,
reduction, mutation, or all of them.

Usage:
    python manage.py verify --suite cutlemma --seed 7 --cases 500
    python manage.py verify --suite all --json
"""

from django.core.management.base import CommandError

from qpsurf.conf import get_setting
from qpsurf.prng import SUITES
from qpsurf.verify import run

from ._base import QPSurfCommand


class Command(QPSurfCommand):
    help = 'Run the verification suites and print a pass/fail summary'

    uses_triangulation = False

    def add_arguments(self, parser):
        parser.add_argument('--suite', default='all', choices=SUITES + ('all',),
                            help='Suite to run (default all)')
        parser.add_argument('--seed', type=int, default=get_setting('QPSURF_DEFAULT_SEED'),
                            help='Run seed')
        parser.add_argument('--cases', type=int, default=None,
                            help='Cases per random suite (default per suite)')
        super().add_arguments(parser)

    def run(self, *args, **options):
        if options['cases'] is not None and options['cases'] < 0:
            raise CommandError('--cases must be non-negative', returncode=2)
        results = run(options['suite'], options['seed'], options['cases'])

        if options['json']:
            self.emit_json({
                'seed': options['seed'],
                'suites': [
                    {'name': r.name, 'passed': r.passed, 'total': r.total, 'failures': r.failures}
                    for r in results
                ],
            })
        else:
            for result in results:
                if result.ok:
                    self.stdout.write(self.style.SUCCESS(result.summary()))
                else:
                    self.stdout.write(self.style.ERROR(result.summary()))
                    for failure in result.failures[:10]:
                        self.stdout.write(f'  - {failure}')

        failed = [r.name for r in results if not r.ok]
        if failed:
            raise CommandError(f'suites failed: {", ".join(failed)}', returncode=1)
