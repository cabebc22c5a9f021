"""Exceptional collections at the level of K-classes: duals, seeds, rotation, tilting.

Object indices are 1-based throughout, as in (E_1, ..., E_n).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence, Union

from . import intlin
from .delpezzo import KClass, Surface, euler_chi, tensor
from .errors import InvalidInput, NotExceptional, NotGood, NotVeryStrong, ReplayError, SlopeMismatch
from .intlin import det2
from .lattice.seeds import Ambient, CyclicSeed, Seed

__all__ = [
    "Collection", "VeryStrongCertificate", "check_exceptional", "check_very_strong",
    "left_mutate_class", "right_mutate_class", "dual_collection", "seed_of", "cyclic_seed_of",
    "rotate_thread", "is_good", "is_right_good", "find_good_thread", "tilt_plus", "tilt_minus",
    "reorder", "shift", "Rotate", "Shift", "Reorder", "Tensor", "TiltPlus", "TiltMinus",
    "Step", "replay", "apply_step", "invert_step", "invert_trace", "duality_matrix", "basis_matrix",
]


@dataclass(frozen=True)
class Collection:
    surface: Surface
    objects: tuple[KClass, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple(self.objects))
        if len(self.objects) != self.surface.n:
            raise InvalidInput(f"{self.surface.name} needs {self.surface.n} objects, got {len(self.objects)}")

    @property
    def n(self) -> int:
        return len(self.objects)

    @cached_property
    def duals(self) -> tuple[KClass, ...]:
        return dual_collection(self)

    @cached_property
    def dual_psi(self) -> tuple[tuple[int, int], ...]:
        return tuple(F.psi(self.surface) for F in self.duals)

    def ranks(self) -> tuple[int, ...]:
        return tuple(E.r for E in self.objects)


@dataclass(frozen=True)
class VeryStrongCertificate:
    slopes: tuple[Fraction, ...]
    shift: int   # 1 when the input was the global negation of a bundle collection


def _idx(c: Collection, j: int) -> int:
    if not 1 <= j <= c.n:
        raise IndexError(f"index {j} out of range 1..{c.n}")
    return j - 1


def check_exceptional(c: Collection) -> None:
    S = c.surface
    E = c.objects
    for i, e in enumerate(E):
        if euler_chi(S, e, e) != 1:
            raise NotExceptional(f"chi(E_{i+1}, E_{i+1}) = {euler_chi(S, e, e)} != 1")
        r, d = e.psi(S)
        if (r, d) == (0, 0) or gcd(r, d) != 1:
            raise NotExceptional(f"E_{i+1} has (r, d) = ({r}, {d}), not coprime")
    for i in range(c.n):
        for j in range(i + 1, c.n):
            v = euler_chi(S, E[j], E[i])
            if v != 0:
                raise NotExceptional(f"chi(E_{j+1}, E_{i+1}) = {v} != 0")


def check_very_strong(c: Collection) -> VeryStrongCertificate:
    check_exceptional(c)
    ranks = c.ranks()
    shift = 0
    objs = c.objects
    if all(r < 0 for r in ranks):
        shift = 1
        objs = tuple(-e for e in objs)
    elif not all(r > 0 for r in ranks):
        raise NotVeryStrong(f"not shift of bundle collection: ranks {ranks}")
    S = c.surface
    slopes = tuple(Fraction(e.degree(S), e.r) for e in objs)
    for i in range(len(slopes) - 1):
        if slopes[i] > slopes[i + 1]:
            raise NotVeryStrong(f"slope chain fails at {i+1}: {slopes[i]} > {slopes[i+1]}")
    if slopes[-1] > slopes[0] + S.K2:
        raise NotVeryStrong(f"slope span {slopes[-1]} > {slopes[0]} + {S.K2}")
    return VeryStrongCertificate(slopes, shift)


def left_mutate_class(S: Surface, F: KClass, A: KClass) -> KClass:
    return A - euler_chi(S, F, A) * F


def right_mutate_class(S: Surface, F: KClass, A: KClass) -> KClass:
    return A - euler_chi(S, A, F) * F


def dual_collection(c: Collection) -> tuple[KClass, ...]:
    """[F_1], ..., [F_n] in index order, F_j = L_{E_1} ... L_{E_{j-1}} E_j."""
    S = c.surface
    out = []
    for j, A in enumerate(c.objects):
        for k in range(j - 1, -1, -1):
            A = left_mutate_class(S, c.objects[k], A)
        out.append(A)
    return tuple(out)


def _ambient(S: Surface) -> Ambient:
    return Ambient(S.psi_matrix)


def seed_of(c: Collection) -> Seed:
    """The seed {[F_i]} in N = K(Z), basis vectors in index order."""
    return Seed(_ambient(c.surface), [F.vector for F in c.duals])


def cyclic_seed_of(c: Collection) -> CyclicSeed:
    return CyclicSeed(seed_of(c), tuple(range(1, c.n + 1)))


def _rotate_once(c: Collection, k: int) -> tuple[KClass, ...]:
    S = c.surface
    E = c.objects
    if k > 0:
        return E[1:] + (tensor(S, E[0], tuple(-x for x in S.canonical)),)
    return (tensor(S, E[-1], S.canonical),) + E[:-1]


def rotate_thread(c: Collection, k: int) -> Collection:
    """Slide the thread k steps along the helix E_{i+n} = E_i (x) omega^{-1}."""
    out = c
    for _ in range(abs(k)):
        out = Collection(c.surface, _rotate_once(out, 1 if k > 0 else -1))
    return out


def _brackets(c: Collection, j: int) -> list[int]:
    p = c.dual_psi
    return [det2(p[k], p[j]) for k in range(c.n)]


def is_good(c: Collection, j: int) -> bool:
    jj = _idx(c, j)
    if jj == 0:
        return False
    b = _brackets(c, jj)
    return all(b[k] <= 0 for k in range(jj + 1, c.n)) and all(b[k] >= 0 for k in range(jj))


def is_right_good(c: Collection, j: int) -> bool:
    """Sign pattern that makes tilt_minus(c, j) correspond to mu_1^-."""
    jj = _idx(c, j)
    if jj == 0:
        return False
    b = _brackets(c, 0)
    return all(b[k] <= 0 for k in range(1, jj + 1)) and all(b[k] >= 0 for k in range(jj + 1, c.n))


def find_good_thread(c: Collection, j: int) -> tuple[Collection, int, int]:
    """Rotate so that the object now at index j becomes good.

    Returns (thread, rotation offset k, new index of the tracked object).
    """
    _idx(c, j)
    offsets = sorted(range(j - c.n, j), key=lambda k: (abs(k), k))
    for k in offsets:
        t = rotate_thread(c, k)
        if is_good(t, j - k):
            return t, k, j - k
    raise NotGood(f"no thread containing E_{j} is good for it")


def tilt_plus(c: Collection, j: int) -> Collection:
    """(L_{E_1}..L_{E_{j-1}} E_j [-1], E_1, .., E_{j-1}, E_{j+1}, .., E_n)."""
    jj = _idx(c, j)
    if jj == 0:
        raise NotGood("tilt at index 1 is degenerate")
    if not is_good(c, j):
        raise NotGood(f"collection is not good for E_{j}")
    E = c.objects
    new = (-c.duals[jj],) + E[:jj] + E[jj + 1:]
    out = Collection(c.surface, new)
    check_very_strong(out)
    return out


def tilt_minus(c: Collection, j: int) -> Collection:
    """(E_2, .., E_j, R_{E_j}..R_{E_2} E_1 [1], E_{j+1}, .., E_n)."""
    jj = _idx(c, j)
    if jj == 0:
        raise NotGood("tilt at index 1 is degenerate")
    if not is_right_good(c, j):
        raise NotGood(f"collection is not right-good for E_1 up to index {j}")
    S = c.surface
    E = c.objects
    A = E[0]
    for k in range(1, jj + 1):
        A = right_mutate_class(S, E[k], A)
    new = E[1:jj + 1] + (-A,) + E[jj + 1:]
    out = Collection(S, new)
    check_very_strong(out)
    return out


def reorder(c: Collection, i: int, j: int) -> Collection:
    """Swap E_i and E_j inside a block of mutually orthogonal objects."""
    a, b = sorted((_idx(c, i), _idx(c, j)))
    S = c.surface
    E = list(c.objects)
    slopes = {E[t].slope(S) for t in range(a, b + 1)}
    if len(slopes) != 1:
        raise SlopeMismatch(f"objects {a+1}..{b+1} do not share one slope")
    E[a], E[b] = E[b], E[a]
    return Collection(S, tuple(E))


def shift(c: Collection, k: int) -> Collection:
    if k % 2 == 0:
        return c
    return Collection(c.surface, tuple(-e for e in c.objects))


@dataclass(frozen=True)
class Rotate:
    k: int
    stage: str = field(default="", compare=False)


@dataclass(frozen=True)
class Shift:
    k: int
    stage: str = field(default="", compare=False)


@dataclass(frozen=True)
class Reorder:
    i: int
    j: int
    stage: str = field(default="", compare=False)


@dataclass(frozen=True)
class Tensor:
    c1: tuple[int, ...]
    stage: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c1", tuple(int(x) for x in self.c1))


@dataclass(frozen=True)
class TiltPlus:
    j: int
    stage: str = field(default="", compare=False)


@dataclass(frozen=True)
class TiltMinus:
    j: int
    stage: str = field(default="", compare=False)


Step = Union[Rotate, Shift, Reorder, Tensor, TiltPlus, TiltMinus]


def apply_step(c: Collection, step: Step) -> Collection:
    if isinstance(step, Rotate):
        return rotate_thread(c, step.k)
    if isinstance(step, Shift):
        return shift(c, step.k)
    if isinstance(step, Reorder):
        return reorder(c, step.i, step.j)
    if isinstance(step, Tensor):
        if len(step.c1) != c.surface.rho:
            raise InvalidInput(f"twist {step.c1} has wrong length")
        return Collection(c.surface, tuple(tensor(c.surface, e, step.c1) for e in c.objects))
    if isinstance(step, TiltPlus):
        return tilt_plus(c, step.j)
    if isinstance(step, TiltMinus):
        return tilt_minus(c, step.j)
    raise InvalidInput(f"unknown step {step!r}")


def replay(c: Collection, trace: Sequence[Step]) -> Collection:
    for i, step in enumerate(trace):
        try:
            c = apply_step(c, step)
        except (InvalidInput, NotGood, NotExceptional, NotVeryStrong, SlopeMismatch, IndexError) as exc:
            raise ReplayError(i, step, str(exc)) from exc
    return c


def invert_step(step: Step) -> Step:
    if isinstance(step, Rotate):
        return Rotate(-step.k, step.stage)
    if isinstance(step, Shift):
        return Shift(-step.k, step.stage)
    if isinstance(step, Reorder):
        return step
    if isinstance(step, Tensor):
        return Tensor(tuple(-x for x in step.c1), step.stage)
    if isinstance(step, TiltPlus):
        return TiltMinus(step.j, step.stage)
    if isinstance(step, TiltMinus):
        return TiltPlus(step.j, step.stage)
    raise InvalidInput(f"unknown step {step!r}")


def invert_trace(trace: Sequence[Step]) -> list[Step]:
    return [invert_step(s) for s in reversed(trace)]


def duality_matrix(c: Collection) -> tuple[tuple[int, ...], ...]:
    S = c.surface
    return tuple(tuple(euler_chi(S, e, f) for f in c.duals) for e in c.objects)


def basis_matrix(classes: Sequence[KClass]) -> intlin.Matrix:
    return intlin.from_columns([e.vector for e in classes])
