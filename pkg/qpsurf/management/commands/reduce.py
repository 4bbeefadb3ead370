"""
Management command to reduce a potential on Q_{T,2}.

The report lists the standard coefficients v_p^(1), v_p^(2), the tail on
the reduced collection keyed by cycle type and location, the
coordinates h and h_p, Theta and the degree the reduction certifies.

Usage:
    python manage.py reduce --tri tetrahedron --pot w.pot -N 12
    python manage.py reduce --tri tetrahedron --pot w.pot --json --timings
    python manage.py reduce --tri tetrahedron --pot w.pot --output reduced.pot
"""

from pathlib import Path

from django.core.management.base import CommandError

from qpsurf.formats import dump_equivalence, dump_potential
from qpsurf.primitive import primitive_class
from qpsurf.reduced import collection_index
from qpsurf.reduction import reduce
from qpsurf.theta import theta, theta_table_for

from ._base import QPSurfCommand, rational


class Command(QPSurfCommand):
    help = 'Reduce a strongly generic potential on Q_{T,2} and report Theta'

    uses_potential = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--pot', required=True, help='Potential file')
        parser.add_argument('--through', type=int, default=None,
                            help='Degree to certify (default N)')
        parser.add_argument('--timings', action='store_true',
                            help='Include per-stage wall-clock seconds')
        parser.add_argument('--output', help='Write the reduced potential to this file')
        parser.add_argument('--equivalence', help='Write the composed equivalence to this file')

    def run(self, *args, **options):
        sq = self.load_surface_quiver(options)
        N = self.truncation(sq, options)
        w = self.load_potential(sq, options['pot'], N)
        reduced = reduce(w, through=options['through'])

        index = collection_index(sq)
        names = sq.quiver.arrow_tokens
        coordinates = primitive_class(reduced.potential)
        value = theta(reduced, theta_table_for(reduced.potential))
        tail = [
            (index[word].label(), ' '.join(names[a] for a in word), coeff)
            for word, coeff in sorted(reduced.tail.items(), key=lambda item: (len(item[0]), item[0]))
        ]
        stages = [
            {'name': name, 'moves': moves, **({'seconds': round(seconds, 3)} if options['timings'] else {})}
            for name, moves, seconds in reduced.stages
        ]

        for option, text in (('output', dump_potential(reduced.potential)),
                             ('equivalence', dump_equivalence(reduced.equivalence))):
            if options[option]:
                try:
                    Path(options[option]).write_text(text, encoding='utf-8')
                except OSError as exc:
                    raise CommandError(f'cannot write {options[option]}: {exc.strerror}', returncode=2)

        if options['json']:
            self.emit_json({
                'v1': {str(p): rational(x) for p, x in sorted(reduced.v1.items())},
                'v2': {str(p): rational(x) for p, x in sorted(reduced.v2.items())},
                'tail': [{'type': label, 'word': word, 'coefficient': rational(c)} for label, word, c in tail],
                'h': rational(coordinates.h),
                'h_p': {str(p): rational(x) for p, x in sorted(coordinates.hp.items())},
                'theta': rational(value),
                'guaranteed_degree': reduced.guaranteed_degree,
                'stages': stages,
            })
            return

        for p in sorted(reduced.v1):
            self.stdout.write(f'v_{p}: {rational(reduced.v1[p])}, {rational(reduced.v2[p])}')
        self.stdout.write(f'h: {rational(coordinates.h)}')
        for p, x in sorted(coordinates.hp.items()):
            self.stdout.write(f'h_{p}: {rational(x)}')
        for label, word, c in tail:
            self.stdout.write(f'  {label}: {rational(c)}  [{word}]')
        for stage in stages:
            timing = f' in {stage["seconds"]}s' if 'seconds' in stage else ''
            self.stdout.write(f'  stage {stage["name"]}: {stage["moves"]} moves{timing}')
        self.stdout.write(f'Theta: {rational(value)}')
        self.stdout.write(self.style.SUCCESS(f'certified through degree {reduced.guaranteed_degree}'))
