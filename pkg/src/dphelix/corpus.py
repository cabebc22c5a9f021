"""Shipped very strong collections, all built from line bundles."""
from __future__ import annotations

from functools import lru_cache

from .delpezzo import Surface, line_bundle
from .helix import Collection, check_very_strong

__all__ = ["CORPUS", "load", "names"]

P1P1 = Surface.p1xp1()


def _lb(S: Surface, divisors) -> Collection:
    return Collection(S, tuple(line_bundle(S, D) for D in divisors))


def _toric_system(S: Surface, boundary) -> Collection:
    # partial sums of boundary divisors in fan order: O, O(D_1), O(D_1+D_2), ...
    acc = [0] * S.rho
    divs = [tuple(acc)]
    for D in boundary[:-1]:
        acc = [a + b for a, b in zip(acc, D)]
        divs.append(tuple(acc))
    return _lb(S, divs)


# boundary divisors (H, E_1, ...) of the toric models, counterclockwise from ray (1,0)
_DP1 = [(1, -1), (0, 1), (1, -1), (1, 0)]
_DP2 = [(1, -1, 0), (0, 1, 0), (1, -1, -1), (0, 0, 1), (1, 0, -1)]
_DP3 = [(1, -1, 0, -1), (0, 1, 0, 0), (1, -1, -1, 0), (0, 0, 1, 0), (1, 0, -1, -1), (0, 0, 0, 1)]

CORPUS = {
    "p1xp1-bs": lambda: _lb(P1P1, [(0, 0), (1, 0), (0, 1), (1, 1)]),
    "p1xp1-alt": lambda: _lb(P1P1, [(0, 0), (1, 0), (1, 1), (2, 1)]),
    "p2-beilinson": lambda: _lb(Surface.dp(0), [(0,), (1,), (2,)]),
    "dp1-toric": lambda: _toric_system(Surface.dp(1), _DP1),
    "dp2-toric": lambda: _toric_system(Surface.dp(2), _DP2),
    "dp3-toric": lambda: _toric_system(Surface.dp(3), _DP3),
}


def names() -> list[str]:
    return list(CORPUS)


@lru_cache(maxsize=None)
def load(name: str) -> Collection:
    try:
        c = CORPUS[name]()
    except KeyError:
        raise KeyError(f"unknown corpus entry {name!r}; known: {', '.join(CORPUS)}") from None
    check_very_strong(c)
    return c
