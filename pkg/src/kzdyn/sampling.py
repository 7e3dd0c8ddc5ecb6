"""Seeded random rational sample points."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, TypeVar

from .errors import PoleError

T = TypeVar("T")
MAX_RETRIES = 10


def rand_rational(rng: random.Random, bound: int = 50, nonzero: bool = False) -> Fraction:
    while True:
        q = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if q or not nonzero:
            return q


def rand_lambda(rng: random.Random, N: int, bound: int = 50) -> tuple:
    """A random trace-zero rational vector of length N."""
    v = [rand_rational(rng, bound) for _ in range(N)]
    mean = sum(v, Fraction(0)) / N
    return tuple(x - mean for x in v)


def rand_points(rng: random.Random, n: int, bound: int = 10) -> tuple:
    """Distinct positive rationals in (0, bound]."""
    out: list[Fraction] = []
    while len(out) < n:
        q = Fraction(rng.randint(1, bound * 12), 12)
        if q not in out:
            out.append(q)
    return tuple(out)


def rand_kappa(rng: random.Random, bound: int = 50) -> Fraction:
    return rand_rational(rng, bound, nonzero=True)


def with_retries(rng: random.Random, draw: Callable[[random.Random], T], run: Callable[[T], object]):
    """Draw a sample and run; redraw on PoleError up to MAX_RETRIES times."""
    last: PoleError | None = None
    for _ in range(MAX_RETRIES):
        sample = draw(rng)
        try:
            return sample, run(sample)
        except PoleError as exc:
            last = exc
    raise last  # type: ignore[misc]
