"""Roots e_j - e_k found by mutation search, and the swap automorphisms they induce."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .. import intlin
from ..errors import InvalidInput
from ..intlin import Matrix, Vector
from .seeds import Seed, chi_tilde, cyclic_order, intersection_form, mutate_seed

__all__ = ["Root", "find_roots", "swap_parallel", "parallel_pairs"]


@dataclass(frozen=True)
class Root:
    vector: Vector
    word: tuple[tuple[int, int], ...] = field(compare=False)
    pair: tuple[int, int] = field(compare=False)


def parallel_pairs(s: Seed) -> list[tuple[int, int]]:
    p = s.psi_images
    return [(j + 1, k + 1) for j in range(s.n) for k in range(j + 1, s.n) if p[j] == p[k]]


def find_roots(s: Seed, depth: int) -> dict[Vector, Root]:
    """Roots visible in seeds reachable by at most `depth` mutations (an under-approximation)."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    found: dict[Vector, Root] = {}
    seen = {s}
    queue = deque([(s, ())])
    while queue:
        cur, word = queue.popleft()
        for j, k in parallel_pairs(cur):
            a = intlin.vec_sub(cur.vectors[j - 1], cur.vectors[k - 1])
            for v, pair in ((a, (j, k)), (tuple(-x for x in a), (k, j))):
                if v not in found:
                    found[v] = Root(v, word, pair)
        if len(word) == depth:
            continue
        for j in range(1, cur.n + 1):
            for eps in (1, -1):
                nxt = mutate_seed(cur, j, eps)
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, word + ((j, eps),)))
    for r in found.values():
        assert intersection_form(s, r.vector, r.vector) == -2
    return found


def swap_parallel(s: Seed, j: int, k: int) -> Matrix:
    """Matrix (reference coordinates) of the automorphism exchanging e_j and e_k."""
    if j == k or not (1 <= j <= s.n and 1 <= k <= s.n):
        raise InvalidInput("need two distinct valid indices")
    if s.psi_images[j - 1] != s.psi_images[k - 1]:
        raise InvalidInput(f"psi(e_{j}) != psi(e_{k}); swap is not defined")
    cols = list(s.vectors)
    cols[j - 1], cols[k - 1] = cols[k - 1], cols[j - 1]
    return intlin.matmul(intlin.from_columns(cols), s.inverse_basis)


def reflection_by_form(s: Seed, alpha: Vector, beta: Vector) -> Vector:
    """beta - chi~(beta, alpha) alpha, with the seed's cyclic ordering."""
    c = chi_tilde(cyclic_order(s), beta, alpha)
    return tuple(b - c * a for a, b in zip(alpha, beta))
