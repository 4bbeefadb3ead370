"""
Management command to write the bundled triangulations as .tri files.

Usage:
    python manage.py write_fixtures
    python manage.py write_fixtures --output /tmp/tri --include-invalid
"""

from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from qpsurf.catalog import CATALOG, VALID_FIXTURES
from qpsurf.surface import dump_triangulation


class Command(BaseCommand):
    help = 'Write the bundled triangulation fixtures to a directory'

    def add_arguments(self, parser):
        parser.add_argument('--output', default='fixtures', help='Target directory (default fixtures)')
        parser.add_argument('--include-invalid', action='store_true',
                            help='Also write fixtures that fail validation')

    def handle(self, *args, **options):
        target = Path(options['output'])
        names = sorted(CATALOG) if options['include_invalid'] else list(VALID_FIXTURES)
        self.stdout.write(self.style.NOTICE(f'Writing {len(names)} fixtures to {target}...'))
        try:
            target.mkdir(parents=True, exist_ok=True)
            for name in names:
                t = CATALOG[name]()
                (target / f'{name}.tri').write_text(dump_triangulation(t), encoding='utf-8')
                self.stdout.write(f'  - {name}.tri ({len(t.face_labels)} faces)')
        except OSError as exc:
            raise CommandError(f'cannot write fixtures: {exc.strerror}', returncode=2)
        self.stdout.write(self.style.SUCCESS(f'✓ Wrote {len(names)} fixtures'))
