"""Deterministic rational probe points."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DenominatorVanishes
from ..scalar import Poly, as_point

DEFAULT_COUNT = 32


def _vanishes(avoid: Iterable, p) -> bool:
    for f in avoid:
        try:
            if f.evaluate(p) == 0:
                return True
        except DenominatorVanishes:
            return True
    return False


def probe_points(nvars: int, count: int = DEFAULT_COUNT, seed: int = 0,
                 avoid: Sequence[Poly] = (), accept=None) -> list:
    """``count`` rational points off the zero sets of ``avoid``.

    ``accept`` is an optional extra predicate. Coordinates are small
    fractions so exact evaluation stays cheap.
    """
    rng = random.Random(seed)
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 100 * (count + 1):
            raise RuntimeError("could not find enough probe points off the singular locus")
        p = tuple(Fraction(rng.randint(-7, 7), rng.randint(1, 4)) for _ in range(nvars))
        if _vanishes(avoid, p):
            continue
        if accept is not None and not accept(p):
            continue
        if p in out:
            continue
        out.append(p)
    return out


def merge_probes(user: Iterable, generated: Iterable) -> list:
    seen = []
    for p in list(user) + list(generated):
        p = as_point(p)
        if p not in seen:
            seen.append(p)
    return seen
