"""
Shared plumbing for the qpsurf management commands.

Handles the common --tri/--m/-N/--json options, file loading and the
mapping of toolkit errors onto exit codes (1 domain, 2 input).
"""

import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from qpsurf.catalog import CATALOG
from qpsurf.conf import get_setting
from qpsurf.exceptions import InputError, QPSurfError
from qpsurf.formats import format_rational, parse_equivalence, parse_potential
from qpsurf.reduction import minimum_truncation
from qpsurf.surface import parse_triangulation
from qpsurf.surface_quiver import build_surface_quiver

logger = logging.getLogger('qpsurf')

SCHEMA = 1


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise CommandError(f'cannot read {path}: {exc.strerror}', returncode=2)


def rational(value) -> str:
    return format_rational(value)


class QPSurfCommand(BaseCommand):
    """
    Base class: subclasses implement ``run(**options)`` and may call the
    loaders below. Toolkit errors become CommandError with the matching
    return code.
    """

    uses_triangulation = True
    uses_potential = False

    def add_arguments(self, parser):
        if self.uses_triangulation:
            parser.add_argument('--tri', required=True,
                                help='Triangulation file, or the name of a bundled fixture')
            parser.add_argument('--m', type=int, default=2, help='Rank parameter m (default 2)')
        if self.uses_potential:
            parser.add_argument('-N', dest='N', type=int, default=None,
                                help='Truncation degree (default: the larger of QPSURF_DEFAULT_TRUNCATION '
                                     'and the minimum truncation when m=2)')
        parser.add_argument('--json', action='store_true', help='Print a JSON report')

    def handle(self, *args, **options):
        if self.uses_potential and options['N'] is not None and options['N'] < 1:
            raise CommandError(f'truncation degree must be at least 1, got -N {options["N"]}', returncode=2)
        try:
            self.run(*args, **options)
        except QPSurfError as exc:
            logger.error(f'{self.__module__.rsplit(".", 1)[-1]} failed: {exc}')
            raise CommandError(f'{type(exc).__name__}: {exc}', returncode=exc.exit_code)

    def run(self, *args, **options):
        raise NotImplementedError

    # -------------------------------------------------------------------------
    # Loaders
    # -------------------------------------------------------------------------

    def _parse_file(self, path: str, parser, *args):
        try:
            return parser(read_text(path), *args)
        except InputError as exc:
            raise CommandError(f'{path}: {type(exc).__name__}: {exc}', returncode=exc.exit_code)

    def load_triangulation(self, value: str):
        if value in CATALOG and not Path(value).exists():
            return CATALOG[value]()
        return self._parse_file(value, parse_triangulation)

    def load_surface_quiver(self, options):
        return build_surface_quiver(self.load_triangulation(options['tri']), options['m'])

    def truncation(self, sq, options) -> int:
        if options['N'] is not None:
            return options['N']
        default = get_setting('QPSURF_DEFAULT_TRUNCATION')
        if sq.m == 2:
            return max(default, minimum_truncation(sq))
        return default

    def load_potential(self, sq, path: str, N: int):
        return self._parse_file(path, parse_potential, sq, N)

    def load_equivalence(self, sq, path: str, N: int):
        return self._parse_file(path, parse_equivalence, sq, N)

    # -------------------------------------------------------------------------
    # Output
    # -------------------------------------------------------------------------

    def emit_json(self, payload: dict):
        self.stdout.write(json.dumps({'schema': SCHEMA, **payload}, indent=2, sort_keys=True))
