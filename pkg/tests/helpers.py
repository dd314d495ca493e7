"""Shared generators for the test suite.

Everything here hands back exact rationals; the tests compare with ``==``
on purpose, so no helper is allowed to introduce a float anywhere.
"""

from __future__ import annotations

import random
from fractions import Fraction

from bamboo import BgtInstance, PseudoInstance


def random_instance(
    rng: random.Random,
    n_lo: int = 2,
    n_hi: int = 12,
    rate_lo: int = 1,
    rate_hi: int = 100,
) -> BgtInstance:
    """A garden with integer growth rates, sorted non-increasing."""
    n = rng.randint(n_lo, n_hi)
    rates = sorted((rng.randint(rate_lo, rate_hi) for _ in range(n)), reverse=True)
    return BgtInstance.from_values(rates)


def split_density(
    total: Fraction,
    parts: int,
    rng: random.Random,
    max_share: Fraction = Fraction(1, 2),
) -> list[Fraction]:
    """Split ``total`` into ``parts`` positive rationals summing to it
    exactly, each at most ``max_share``.

    Integer weights keep the arithmetic exact. Oversized draws are simply
    rejected; equal weights always satisfy the cap (total/parts <= cap is
    checked up front), so the loop cannot run forever in a meaningful way,
    but a deterministic fallback keeps it bounded anyway.
    """
    if parts < 1:
        raise ValueError("need at least one part")
    if total / parts > max_share:
        raise ValueError("cap too small for that many parts")
    for _ in range(1000):
        weights = [rng.randint(1, 12) for _ in range(parts)]
        w = sum(weights)
        shares = [total * wi / w for wi in weights]
        if all(s <= max_share for s in shares):
            return shares
    return [total / parts] * parts


def pseudo_with_density(total: Fraction, parts: int, rng: random.Random) -> PseudoInstance:
    """A pseudo-instance whose density is exactly ``total``.

    Every share is capped at 1/2, so every period comes out >= 2, which is
    what the two-grid rounding front end requires.
    """
    shares = split_density(total, parts, rng)
    return PseudoInstance(tuple(1 / s for s in shares))
