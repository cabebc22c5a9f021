"""Toric oracle: smooth complete fans, their Neron-Severi lattices, and the
blow-up embedding of Ker(psi) into divisor classes orthogonal to the boundary.

This module deliberately does not use the seed-side form chi~; it computes
intersection numbers from the fan alone, so agreement between the two is a
genuine cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from . import intlin
from .errors import InvalidInput, NotInKernel, OracleMismatch
from .intlin import det2
from .lattice.seeds import Seed, angle_key, intersection_form

__all__ = [
    "Fan", "ToricNS", "BlownNS", "complete_fan", "toric_self_intersection", "blow_up",
    "iota", "iota_inverse", "oracle_check", "class_from_alphas",
]

Ray = tuple[int, int]


@dataclass(frozen=True)
class Fan:
    rays: tuple[Ray, ...]

    def __post_init__(self) -> None:
        rays = tuple(tuple(int(c) for c in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        m = len(rays)
        if m < 3:
            raise InvalidInput("a complete fan needs at least three rays")
        for i in range(m):
            if det2(rays[i], rays[(i + 1) % m]) != 1:
                raise InvalidInput(f"cone {rays[i]}, {rays[(i + 1) % m]} is not smooth")


def _gaps_ok(rays: list[Ray]) -> int | None:
    """Index i of a cyclic gap rays[i] -> rays[i+1] of angle >= pi, else None."""
    m = len(rays)
    if m < 3:
        return m - 1 if m else None
    for i in range(m):
        if det2(rays[i], rays[(i + 1) % m]) <= 0:
            return i
    return None


def _resolve_cone(u: Ray, w: Ray) -> list[Ray]:
    """Rays strictly between u and w in the minimal resolution of cone(u, w)."""
    out = []
    d = det2(u, w)
    while d > 1:
        k = next(k for k in range(1, d) if (w[0] + k * u[0]) % d == 0 and (w[1] + k * u[1]) % d == 0)
        u = ((w[0] + k * u[0]) // d, (w[1] + k * u[1]) // d)
        out.append(u)
        d = det2(u, w)
    return out


def complete_fan(vectors: Sequence[Sequence[int]]) -> Fan:
    """Smallest fan from the fixed rule: close up with negated extreme rays, then resolve."""
    rays: list[Ray] = []
    for v in vectors:
        v = (int(v[0]), int(v[1]))
        if v == (0, 0) or gcd(*v) != 1:
            raise InvalidInput(f"{v} is not a nonzero primitive vector")
        if v not in rays:
            rays.append(v)
    rays.sort(key=angle_key)
    i = _gaps_ok(rays)
    if i is not None:
        a, b = rays[i], rays[(i + 1) % len(rays)]
        for extra in ((-a[0], -a[1]), (-b[0], -b[1])):
            if extra not in rays:
                rays.append(extra)
        rays.sort(key=angle_key)
    while (i := _gaps_ok(rays)) is not None:
        a = rays[i]
        rays.append((-a[1], a[0]))  # strictly inside a gap of angle >= pi
        rays.sort(key=angle_key)
    out: list[Ray] = []
    m = len(rays)
    for i in range(m):
        out.append(rays[i])
        out.extend(_resolve_cone(rays[i], rays[(i + 1) % m]))
    return Fan(tuple(out))


@dataclass(frozen=True)
class ToricNS:
    fan: Fan

    @cached_property
    def self_numbers(self) -> tuple[int, ...]:
        """a_i with u_{i-1} + u_{i+1} = a_i u_i, so that D_i^2 = -a_i."""
        r = self.fan.rays
        m = len(r)
        out = []
        for i in range(m):
            s = (r[i - 1][0] + r[(i + 1) % m][0], r[i - 1][1] + r[(i + 1) % m][1])
            # s is parallel to u_i by smoothness
            a = s[0] // r[i][0] if r[i][0] else s[1] // r[i][1]
            assert (a * r[i][0], a * r[i][1]) == s
            out.append(a)
        return tuple(out)

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        m = len(self.fan.rays)
        a = self.self_numbers
        rows = []
        for i in range(m):
            row = [0] * m
            row[(i + 1) % m] += 1
            row[(i - 1) % m] += 1
            row[i] = -a[i]
            rows.append(tuple(row))
        return tuple(rows)

    @property
    def rank(self) -> int:
        return len(self.fan.rays) - 2

    def relations(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Coefficient vectors of sum <u_i, chi> D_i = 0 for chi = (1,0), (0,1)."""
        r = self.fan.rays
        return tuple(x for x, _ in r), tuple(y for _, y in r)

    def pair(self, x: Sequence, y: Sequence):
        return intlin.dot(x, intlin.matvec(self.matrix, y))


def class_from_alphas(ns: ToricNS, alphas: Sequence[int]) -> tuple[Fraction, ...]:
    """Some divisor combination sum x_i D_i with intersection numbers alphas."""
    rx, ry = ns.relations()
    if intlin.dot(rx, alphas) != 0 or intlin.dot(ry, alphas) != 0:
        raise InvalidInput(f"alpha-vector {tuple(alphas)} is not the intersection vector of a class")
    x = intlin.solve_any(ns.matrix, alphas)
    if x is None:
        raise InvalidInput(f"alpha-vector {tuple(alphas)} is inconsistent")
    return x


def toric_self_intersection(ns: ToricNS, alphas: Sequence[int]) -> int:
    """C.C = sum_{i<j} alpha_i alpha_j det(u_i, u_j)."""
    rx, ry = ns.relations()
    if intlin.dot(rx, alphas) != 0 or intlin.dot(ry, alphas) != 0:
        raise InvalidInput(f"alpha-vector {tuple(alphas)} is not the intersection vector of a class")
    r = ns.fan.rays
    m = len(r)
    return sum(alphas[i] * alphas[j] * det2(r[i], r[j]) for i in range(m) for j in range(i + 1, m))


@dataclass(frozen=True)
class BlownNS:
    """NS of the blow-up.

    A class is a pair (x, a) meaning pi^*(sum x_r D_r) - sum a_i E_i.
    """
    toric: ToricNS
    ray_of: tuple[int, ...]  # seed index (0-based) -> ray index

    @property
    def n_exceptional(self) -> int:
        return len(self.ray_of)

    def pair(self, u: tuple, v: tuple, matrix=None):
        (xu, au), (xv, av) = u, v
        mat = self.toric.matrix if matrix is None else matrix
        return intlin.dot(xu, intlin.matvec(mat, xv)) - intlin.dot(au, av)

    def boundary(self, rho: int) -> tuple:
        """Strict transform of the toric divisor on ray rho."""
        m = len(self.toric.fan.rays)
        x = tuple(int(i == rho) for i in range(m))
        return (x, tuple(1 if r == rho else 0 for r in self.ray_of))

    def exceptional(self, i: int) -> tuple:
        m = len(self.toric.fan.rays)
        return ((0,) * m, tuple(-int(t == i) for t in range(self.n_exceptional)))


def blow_up(s: Seed) -> BlownNS:
    fan = complete_fan(s.psi_images)
    index = {r: i for i, r in enumerate(fan.rays)}
    return BlownNS(ToricNS(fan), tuple(index[p] for p in s.psi_images))


def iota(b: BlownNS, s: Seed, a: Sequence[int]) -> tuple:
    """pi^*C_a - sum a_i E_i for a in Ker(psi), with a_i the seed coordinates of a."""
    if s.ambient.psi(a) != (0, 0):
        raise NotInKernel(f"{tuple(a)} is not in Ker(psi)")
    coeff = s.coordinates(a)
    m = len(b.toric.fan.rays)
    alphas = [0] * m
    for i, c in enumerate(coeff):
        alphas[b.ray_of[i]] += c
    try:
        x = class_from_alphas(b.toric, alphas)
    except InvalidInput as exc:
        raise OracleMismatch(f"no toric class C_a: {exc}") from exc
    # stored as (toric part, coefficients of -E_i): pi^*C - sum a_i E_i
    return (x, tuple(coeff))


def iota_inverse(b: BlownNS, s: Seed, cls: tuple) -> tuple[int, ...]:
    """sum (alpha . E_i) e_i, in reference coordinates."""
    coeff = []
    for i in range(b.n_exceptional):
        v = Fraction(b.pair(cls, b.exceptional(i)))
        if v.denominator != 1:
            raise OracleMismatch("non-integral exceptional coefficient")
        coeff.append(int(v))
    return s.from_coordinates(coeff)


def oracle_check(s: Seed, toric_matrix_override=None) -> list[dict]:
    """Compare iota(k_p).iota(k_q) with the seed intersection form on a kernel basis.

    toric_matrix_override replaces the toric intersection matrix (negative control).
    """
    b = blow_up(s)
    basis = s.ambient.kernel
    images = [iota(b, s, k) for k in basis]
    report = []
    for p, kp in enumerate(basis):
        for q, kq in enumerate(basis):
            lhs = Fraction(b.pair(images[p], images[q], toric_matrix_override))
            rhs = intersection_form(s, kp, kq)
            lhs_out = int(lhs) if lhs.denominator == 1 else str(lhs)
            report.append({"pair": [p, q], "lhs": lhs_out, "rhs": rhs, "ok": lhs == rhs})
    return report
