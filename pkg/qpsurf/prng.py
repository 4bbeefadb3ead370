"""
Seeded random fixtures for the verification suites.

Every case draws from its own stream: numpy's SeedSequence with the run
seed as entropy and (suite number, case index) as spawn key, fed to the
default PCG64 generator. A case therefore replays on its own, whatever
the order or sharding of the run.
"""

from typing import Dict, List, Optional, Sequence

import numpy as np

from .potential import PathVector, Potential, Rational, to_rational
from .primitive import primitive_potential
from .quiver import Quiver, Seed, quiver_from_epsilon
from .requiv import RightEquivalence, compose, diagonal
from .surface_quiver import SurfaceQuiver, Word

SUITES = (
    'chordless', 'cohomology', 'topology', 'cutlemma', 'equivariance',
    'theta', 'reduction', 'mutation',
)


def case_rng(seed: int, suite: str, index: int) -> np.random.Generator:
    """Independent generator for case ``index`` of ``suite``."""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(SUITES.index(suite), index))
    return np.random.default_rng(sequence)


def random_rational(rng: np.random.Generator, bound: int = 5, nonzero: bool = True) -> Rational:
    """p/q with |p| <= bound and 1 <= q <= bound."""
    while True:
        p = int(rng.integers(-bound, bound + 1))
        q = int(rng.integers(1, bound + 1))
        if p or not nonzero:
            return to_rational(f'{p}/{q}')


# =============================================================================
# PATHS AND CYCLES
# =============================================================================

def random_path(rng: np.random.Generator, sq: SurfaceQuiver, source: int, target: int,
                min_length: int = 2, max_length: int = 6, attempts: int = 64) -> Optional[Word]:
    """Random walk from ``source`` stopped at ``target``, or None."""
    quiver = sq.quiver
    for _ in range(attempts):
        length = int(rng.integers(min_length, max_length + 1))
        vertex, path = source, []
        for _ in range(length):
            out = quiver.out_arrows[vertex]
            if not out:
                break
            a = out[int(rng.integers(len(out)))]
            path.append(a)
            vertex = quiver.tgt[a]
        if vertex == target:
            return tuple(path)
    return None


def random_cycle(rng: np.random.Generator, sq: SurfaceQuiver, min_length: int = 3,
                 max_length: int = 8, attempts: int = 256) -> Optional[Word]:
    quiver = sq.quiver
    for _ in range(attempts):
        a = int(rng.integers(sq.arrow_count))
        rest = random_path(rng, sq, quiver.tgt[a], quiver.src[a],
                           max(1, min_length - 1), max_length - 1, attempts=4)
        if rest is not None:
            return (a,) + rest
    return None


# =============================================================================
# POTENTIALS AND EQUIVALENCES
# =============================================================================

def random_standard_coefficients(rng: np.random.Generator, sq: SurfaceQuiver,
                                 bound: int = 4) -> Dict[int, Dict[int, Rational]]:
    """v[k][p] with k_p = v1_p + (-1)^val(p) v2_p != 0 at every puncture."""
    valences = sq.triangulation.valences
    v: Dict[int, Dict[int, Rational]] = {1: {}, 2: {}}
    for p in sq.triangulation.punctures:
        while True:
            v1, v2 = random_rational(rng, bound), random_rational(rng, bound)
            if v1 + (-1) ** valences[p] * v2 != 0:
                break
        v[1][p], v[2][p] = v1, v2
    return v


def random_generic_potential(rng: np.random.Generator, sq: SurfaceQuiver, N: int,
                             extra_terms: int = 4, bound: int = 5) -> Potential:
    """Nonzero random coefficients on every chordless cycle plus random longer cycles."""
    terms = [(word, random_rational(rng, bound)) for word in sq.chordless_set]
    for _ in range(extra_terms):
        cycle = random_cycle(rng, sq, max_length=N)
        if cycle is not None and cycle not in sq.chordless_set:
            terms.append((cycle, random_rational(rng, bound)))
    w = Potential.from_terms(sq, N, sorted(terms))
    # a random extra cycle may rotate onto a chordless one and cancel it
    missing = [word for word in sq.chordless_set if word not in w.terms]
    return w + Potential.from_terms(sq, N, [(word, 1) for word in missing])


def random_standard_potential(rng: np.random.Generator, sq: SurfaceQuiver, N: int,
                              extra_terms: int = 0, bound: int = 4) -> Potential:
    """Standard-form primitive potential with k_p != 0, plus optional random cycles of degree >= 4."""
    w = primitive_potential(sq, N, random_standard_coefficients(rng, sq, bound))
    terms = []
    for _ in range(extra_terms):
        cycle = random_cycle(rng, sq, min_length=4, max_length=N)
        if cycle is not None and len(cycle) > 3:
            terms.append((cycle, random_rational(rng, bound)))
    extra = Potential.from_terms(sq, N, terms).restrict(lambda c: c not in sq.chordless_set)
    return w + extra


def random_unitriangular(rng: np.random.Generator, sq: SurfaceQuiver, N: int,
                         moves: int = 3, max_length: int = 5, bound: int = 3) -> RightEquivalence:
    """Identity plus random tails on a few arrows."""
    quiver = sq.quiver
    images = [PathVector.arrow(sq, N, a) for a in range(sq.arrow_count)]
    for _ in range(moves):
        a = int(rng.integers(sq.arrow_count))
        path = random_path(rng, sq, quiver.src[a], quiver.tgt[a], 2, max_length)
        if path is None:
            continue
        images[a] = images[a] + PathVector(sq, N, {path: random_rational(rng, bound)})
    return RightEquivalence(sq, N, images)


def random_equivalence(rng: np.random.Generator, sq: SurfaceQuiver, N: int,
                       moves: int = 3, max_length: int = 5) -> RightEquivalence:
    """Random diagonal rescaling followed by a random unitriangular move."""
    scales = {a: random_rational(rng, 3) for a in range(sq.arrow_count)}
    return compose(random_unitriangular(rng, sq, N, moves, max_length), diagonal(sq, N, scales))


# =============================================================================
# SEEDS AND QUIVERS
# =============================================================================

def random_epsilon(rng: np.random.Generator, size: int, bound: int = 5) -> np.ndarray:
    upper = np.triu(rng.integers(-bound, bound + 1, size=(size, size)), k=1)
    return upper - upper.T


def random_seed(rng: np.random.Generator, max_size: int = 8, bound: int = 5) -> Seed:
    size = int(rng.integers(1, max_size + 1))
    return Seed.from_matrix(random_epsilon(rng, size, bound))


def random_quiver(rng: np.random.Generator, max_size: int = 6, bound: int = 3) -> Quiver:
    """Loop-free, 2-cycle-free quiver from a random exchange matrix."""
    size = int(rng.integers(2, max_size + 1))
    return quiver_from_epsilon(random_epsilon(rng, size, bound))


def sample(rng: np.random.Generator, items: Sequence, count: int) -> List:
    """Up to ``count`` distinct items in random order."""
    count = min(count, len(items))
    picks = rng.choice(len(items), size=count, replace=False)
    return [items[int(i)] for i in picks]
