"""
Management command to report the invariant coordinates of a potential.

Usage:
    python manage.py invariants --tri tetrahedron --m 2 --pot w.pot
    python manage.py invariants --tri tetrahedron --pot w.pot -N 10 --json
"""

from qpsurf.primitive import h_invariant, hp_invariant, is_generic, strong_genericity_defects

from ._base import QPSurfCommand, rational


class Command(QPSurfCommand):
    help = 'Report h, h_p, genericity and strong genericity of a potential'

    uses_potential = True

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--pot', required=True, help='Potential file')

    def run(self, *args, **options):
        sq = self.load_surface_quiver(options)
        N = self.truncation(sq, options)
        w = self.load_potential(sq, options['pot'], N)

        generic = is_generic(w)
        h = h_invariant(w) if generic else None
        hp, defects = {}, []
        if generic and sq.m == 2:
            hp = {p: hp_invariant(w, p) for p in sq.triangulation.punctures}
            defects = strong_genericity_defects(w)
        elif not generic and sq.m == 2:
            defects = None
        strongly = bool(generic and sq.m == 2 and not defects)

        if options['json']:
            self.emit_json({
                'generic': generic,
                'strongly_generic': strongly,
                'h': rational(h) if h is not None else None,
                'h_p': {str(p): rational(value) for p, value in sorted(hp.items())},
                'defects': defects,
                'terms': len(w.terms),
                'N': w.N,
            })
            return

        self.stdout.write(f'terms: {len(w.terms)} (N={w.N})')
        self.stdout.write(f'generic: {"yes" if generic else "no"}')
        if h is not None:
            self.stdout.write(f'h: {rational(h)}')
        for p, value in sorted(hp.items()):
            self.stdout.write(f'h_{p}: {rational(value)}')
        if sq.m == 2:
            self.stdout.write(f'strongly generic: {"yes" if strongly else "no"}')
            if defects:
                self.stdout.write(self.style.NOTICE(
                    'h + (-1)^val(p) h_p vanishes at punctures ' + ', '.join(map(str, defects))
                ))
