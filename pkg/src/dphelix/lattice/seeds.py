"""Seeds in a lattice N with a map psi: N -> Z^2, their mutations and forms.

Indices in the public API are 1-based, matching the usual notation
mu_j for mutation at the j-th basis vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, cmp_to_key
from math import gcd
from typing import Iterable, Sequence

from .. import intlin
from ..errors import InvalidInput, NotInKernel
from ..intlin import Matrix, Vector, det2

__all__ = [
    "Ambient", "Seed", "CyclicSeed", "mutate_seed", "apply_T", "cyclic_order",
    "chi_tilde", "intersection_form", "kernel_basis", "angle_cmp",
    "is_cyclically_ordered", "mutate_word",
]


def angle_cmp(u: Sequence[int], v: Sequence[int]) -> int:
    """Compare arguments of nonzero plane vectors in [0, 2pi) exactly."""
    hu = 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1
    hv = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    if hu != hv:
        return -1 if hu < hv else 1
    c = det2(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


angle_key = cmp_to_key(angle_cmp)


@dataclass(frozen=True)
class Ambient:
    psi_matrix: Matrix

    def __post_init__(self) -> None:
        m = tuple(tuple(int(x) for x in row) for row in self.psi_matrix)
        object.__setattr__(self, "psi_matrix", m)
        if len(m) != 2 or len(m[0]) != len(m[1]) or intlin.rank(m) != 2:
            raise InvalidInput("psi must be a 2 x n matrix of rank 2")

    @property
    def rank(self) -> int:
        return len(self.psi_matrix[0])

    def psi(self, v: Sequence[int]) -> tuple[int, int]:
        r0, r1 = self.psi_matrix
        return (intlin.dot(r0, v), intlin.dot(r1, v))

    def bracket(self, a: Sequence[int], b: Sequence[int]) -> int:
        return det2(self.psi(a), self.psi(b))

    @cached_property
    def kernel(self) -> tuple[Vector, ...]:
        return intlin.integer_kernel(self.psi_matrix)


def kernel_basis(amb: Ambient) -> tuple[Vector, ...]:
    """Saturated basis of Ker(psi), independent of any seed."""
    return amb.kernel


class Seed:
    """A basis e_1..e_n of N with primitive nonzero psi-images.

    Columns are kept in the order given (so index j means something), but
    equality and hashing treat the basis as a multiset.
    """

    __slots__ = ("ambient", "vectors", "__dict__")

    def __init__(self, ambient: Ambient, vectors: Iterable[Sequence[int]], check: bool = True):
        self.ambient = ambient
        self.vectors: tuple[Vector, ...] = tuple(tuple(int(x) for x in v) for v in vectors)
        if check:
            self._validate()

    def _validate(self) -> None:
        n = self.ambient.rank
        if len(self.vectors) != n or any(len(v) != n for v in self.vectors):
            raise InvalidInput(f"seed needs {n} vectors of length {n}")
        if abs(intlin.det(intlin.from_columns(self.vectors))) != 1:
            raise InvalidInput("seed vectors are not a basis of N")
        for p in self.psi_images:
            if p == (0, 0) or gcd(*p) != 1:
                raise InvalidInput(f"psi-image {p} is not nonzero primitive")

    @classmethod
    def from_basis_matrix(cls, ambient: Ambient, basis: Sequence[Sequence[int]]) -> "Seed":
        return cls(ambient, intlin.columns(basis))

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def basis_matrix(self) -> Matrix:
        return intlin.from_columns(self.vectors)

    @cached_property
    def psi_images(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.ambient.psi(v) for v in self.vectors)

    @cached_property
    def inverse_basis(self) -> Matrix:
        return intlin.unimodular_inverse(self.basis_matrix)

    def coordinates(self, v: Sequence[int]) -> Vector:
        """Coefficients of v in the basis e_1..e_n."""
        return intlin.matvec(self.inverse_basis, v)

    def from_coordinates(self, x: Sequence[int]) -> Vector:
        return intlin.matvec(self.basis_matrix, x)

    def bracket_matrix(self) -> tuple[tuple[int, ...], ...]:
        p = self.psi_images
        return tuple(tuple(det2(a, b) for b in p) for a in p)

    def canonical(self) -> "Seed":
        """Same seed with columns sorted by (argument of psi-image, coordinates)."""
        order = sorted(range(self.n), key=lambda i: (angle_key(self.psi_images[i]), self.vectors[i]))
        return Seed(self.ambient, [self.vectors[i] for i in order], check=False)

    @cached_property
    def _key(self) -> tuple:
        return (self.ambient, tuple(sorted(self.vectors)))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Seed) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Seed(psi={self.psi_images}, vectors={self.vectors})"


def _check_index(s: Seed, j: int) -> int:
    if not 1 <= j <= s.n:
        raise IndexError(f"index {j} out of range 1..{s.n}")
    return j - 1


def _sign(eps) -> int:
    if eps in (1, "+"):
        return 1
    if eps in (-1, "-"):
        return -1
    raise ValueError(f"sign must be +1 or -1, got {eps!r}")


def mutate_seed(s: Seed, j: int, eps) -> Seed:
    """e_j -> -e_j, e_i -> e_i + max(0, eps<e_i,e_j>) e_j."""
    jj = _check_index(s, j)
    e = _sign(eps)
    ej = s.vectors[jj]
    pj = s.psi_images[jj]
    out = []
    for i, (v, p) in enumerate(zip(s.vectors, s.psi_images)):
        if i == jj:
            out.append(tuple(-x for x in v))
            continue
        c = max(0, e * det2(p, pj))
        out.append(v if c == 0 else tuple(x + c * y for x, y in zip(v, ej)))
    return Seed(s.ambient, out, check=False)


def apply_T(s: Seed, j: int, eps) -> Seed:
    """Apply the transvection e_i -> e_i + eps<e_i,e_j> e_j to every basis vector."""
    jj = _check_index(s, j)
    e = _sign(eps)
    ej = s.vectors[jj]
    pj = s.psi_images[jj]
    out = []
    for v, p in zip(s.vectors, s.psi_images):
        c = e * det2(p, pj)
        out.append(tuple(x + c * y for x, y in zip(v, ej)))
    return Seed(s.ambient, out, check=False)


def mutate_word(s: Seed, word: Iterable[tuple[int, int]]) -> Seed:
    for j, eps in word:
        s = mutate_seed(s, j, eps)
    return s


@dataclass(frozen=True)
class CyclicSeed:
    seed: Seed
    order: tuple[int, ...]  # 1-based permutation: position p holds index order[p]

    def __post_init__(self) -> None:
        if sorted(self.order) != list(range(1, self.seed.n + 1)):
            raise InvalidInput("order is not a permutation")
        if not is_cyclically_ordered([self.seed.psi_images[i - 1] for i in self.order]):
            raise InvalidInput("order is not counterclockwise cyclic")

    @cached_property
    def position(self) -> tuple[int, ...]:
        """position[i] = cyclic position of basis index i (0-based both)."""
        pos = [0] * self.seed.n
        for p, i in enumerate(self.order):
            pos[i - 1] = p
        return tuple(pos)

    @cached_property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        br = self.seed.bracket_matrix()
        pos = self.position
        n = self.seed.n
        return tuple(
            tuple(1 if i == j else (br[i][j] if pos[i] > pos[j] else 0) for j in range(n))
            for i in range(n)
        )


def is_cyclically_ordered(vs: Sequence[Sequence[int]]) -> bool:
    """True if some argument choice gives theta_1 <= ... <= theta_n <= theta_1 + 2pi."""
    n = len(vs)
    # some cyclic rotation must be non-decreasing in argument measured from its first entry
    for k in range(n):
        seq = [vs[(k + i) % n] for i in range(n)]
        rel = [_relative_arg(seq[0], v) for v in seq]
        if all(rel[i] <= rel[i + 1] for i in range(n - 1)):
            return True
    return n == 0


def _relative_arg(base: Sequence[int], v: Sequence[int]):
    # (base.v, det(base, v)) is v rotated so that base points along +x
    return angle_key((base[0] * v[0] + base[1] * v[1], det2(base, v)))


def cyclic_order(s: Seed) -> CyclicSeed:
    # stable sort: parallel psi-images keep storage order
    order = sorted(range(s.n), key=lambda i: angle_key(s.psi_images[i]))
    return CyclicSeed(s, tuple(i + 1 for i in order))


def chi_tilde(cs: CyclicSeed, a: Sequence[int], b: Sequence[int]) -> int:
    x = cs.seed.coordinates(a)
    y = cs.seed.coordinates(b)
    g = cs.gram
    return sum(xi * sum(gij * yj for gij, yj in zip(row, y)) for xi, row in zip(x, g) if xi)


def _require_kernel(s: Seed, v: Sequence[int]) -> None:
    if s.ambient.psi(v) != (0, 0):
        raise NotInKernel(f"{tuple(v)} is not in Ker(psi)")


def intersection_form(s: Seed | CyclicSeed, a: Sequence[int], b: Sequence[int]) -> int:
    cs = s if isinstance(s, CyclicSeed) else cyclic_order(s)
    _require_kernel(cs.seed, a)
    _require_kernel(cs.seed, b)
    return -chi_tilde(cs, a, b)
