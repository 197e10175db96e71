"""Shared helpers for building random exact paths in tests."""

from __future__ import annotations

import random
from fractions import Fraction

from dirtop.exactnum import Scalar
from dirtop.plgeom import Ambient, PLPath


def rand_fraction(rng: random.Random, lo=-3, hi=3, den=8) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def rand_breaks(rng: random.Random, max_inner=3) -> list[Fraction]:
    inner = sorted(
        {Fraction(rng.randint(1, 23), 24) for _ in range(rng.randint(0, max_inner))}
    )
    return [Fraction(0), *inner, Fraction(1)]


def rand_path(rng: random.Random, ambient: Ambient, lo=-3, hi=3) -> PLPath:
    breaks = rand_breaks(rng)
    lifts = [
        tuple(rand_fraction(rng, lo, hi) for _ in range(ambient.dim))
        for _ in breaks
    ]
    return PLPath(ambient, breaks, lifts)


def rand_monotone_path(rng: random.Random, ambient: Ambient) -> PLPath:
    """A path with all lift coordinates non-decreasing."""
    breaks = rand_breaks(rng)
    coords = []
    current = [rand_fraction(rng, -2, 2) for _ in range(ambient.dim)]
    coords.append(tuple(current))
    for _ in breaks[1:]:
        current = [
            c + Fraction(rng.randint(0, 8), 8) for c in current
        ]
        coords.append(tuple(current))
    return PLPath(ambient, breaks, coords)


def grid_samples(n: int) -> list[Fraction]:
    """n+1 evenly spaced rational parameters covering [0,1]."""
    return [Fraction(i, n) for i in range(n + 1)]


def scalar_grid(n: int) -> list[Scalar]:
    return [Scalar(f) for f in grid_samples(n)]
