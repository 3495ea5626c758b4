"""Random test points on phase spaces."""
from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

NUMERATORS = range(-9, 10)
DENOMINATORS = (1, 2, 3)


NONZERO_NUMERATORS = tuple(n for n in NUMERATORS if n)


def random_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    return Fraction(rng.choice(NONZERO_NUMERATORS if nonzero else NUMERATORS), rng.choice(DENOMINATORS))


def random_point(dim: int, rng: random.Random, nonzero: bool = False) -> np.ndarray:
    """``nonzero`` keeps the point off the coordinate hyperplanes, where ranks can drop."""
    return np.array([random_rational(rng, nonzero) for _ in range(dim)], dtype=object)


def random_points(dim: int, count: int, seed: int) -> list[np.ndarray]:
    rng = random.Random(seed)
    return [random_point(dim, rng) for _ in range(count)]


def as_exact(point) -> np.ndarray:
    return np.array([Fraction(x) for x in point], dtype=object)
