from __future__ import annotations

import random
from fractions import Fraction

import pytest

from emverify.series import TruncSeries


def t_ladder(m: int, precision: int) -> list[TruncSeries]:
    """The odd monomial ladder t, t^3, ..., t^(2m-1)."""
    return [TruncSeries.t_power(2 * i + 1, precision) for i in range(m)]


def random_series(rng: random.Random, precision: int, sparse: int = 6) -> TruncSeries:
    terms = {}
    for _ in range(sparse):
        terms[rng.randrange(precision)] = Fraction(
            rng.randint(-9, 9), rng.randint(1, 9)
        )
    return TruncSeries.from_terms(terms, precision)


def random_odd_instance(
    rng: random.Random, m: int, precision: int
) -> list[TruncSeries]:
    """Odd series with distinct valuations <= 9 (one of valuation 1) and
    small integer coefficients, shuffled across positions."""
    vals = [1] + rng.sample(range(3, 10, 2), m - 1)
    order = list(range(m))
    rng.shuffle(order)
    out: list[TruncSeries | None] = [None] * m
    for slot, v in zip(order, vals):
        terms = {v: rng.choice([c for c in range(-3, 4) if c])}
        for d in range(v + 2, min(precision, 16), 2):
            c = rng.randint(-3, 3)
            if c:
                terms[d] = c
        out[slot] = TruncSeries.from_terms(terms, precision)
    return out  # type: ignore[return-value]


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xE15E)
