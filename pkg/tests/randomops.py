"""Random trace generation shared by the property and acceptance tests."""
from __future__ import annotations

import random

from dphelix.helix import (
    Collection, Reorder, Rotate, Shift, Tensor, TiltPlus, apply_step, find_good_thread,
)


def random_step(rng: random.Random, c: Collection) -> list:
    kind = rng.choice(["rotate", "tensor", "tilt", "tilt", "reorder", "shift"])
    S = c.surface
    if kind == "rotate":
        return [Rotate(rng.choice([-2, -1, 1, 2]))]
    if kind == "tensor":
        return [Tensor(tuple(rng.randint(-1, 1) for _ in range(S.rho)))]
    if kind == "shift":
        return [Shift(1)]
    if kind == "reorder":
        slopes = [e.slope(S) for e in c.objects]
        pairs = [(i + 1, j + 1) for i in range(c.n) for j in range(i + 1, c.n)
                 if len(set(slopes[i:j + 1])) == 1]
        if pairs:
            return [Reorder(*rng.choice(pairs))]
        return [Rotate(1)]
    j = rng.randint(1, c.n)
    _, k, jj = find_good_thread(c, j)
    return ([Rotate(k)] if k else []) + [TiltPlus(jj)]


def random_trace(rng: random.Random, c: Collection, max_ops: int = 6) -> tuple[list, Collection]:
    trace = []
    for _ in range(rng.randint(1, max_ops)):
        for step in random_step(rng, c):
            c = apply_step(c, step)
            trace.append(step)
    return trace, c
