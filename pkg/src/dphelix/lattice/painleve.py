"""Semi-definiteness of the intersection form on Ker(psi) and the radical vector."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .. import intlin
from ..errors import NotQPainleve
from ..intlin import Vector
from .seeds import CyclicSeed, Seed, cyclic_order, intersection_form

__all__ = ["FormCertificate", "kernel_gram", "is_q_painleve", "delta_class", "classify_form"]


@dataclass(frozen=True)
class FormCertificate:
    ok: bool
    radical: tuple[Vector, ...]   # integer basis of the radical (reference coordinates)
    witness: Vector | None        # vector with positive self-pairing, if any
    witness_value: int | None = None

    @property
    def radical_rank(self) -> int:
        return len(self.radical)


def kernel_gram(s: Seed | CyclicSeed) -> tuple[tuple[Vector, ...], tuple[tuple[int, ...], ...]]:
    cs = s if isinstance(s, CyclicSeed) else cyclic_order(s)
    basis = cs.seed.ambient.kernel
    g = tuple(tuple(intersection_form(cs, a, b) for b in basis) for a in basis)
    return basis, g


def _integral(v: list[Fraction]) -> Vector:
    den = lcm(*(x.denominator for x in v)) if v else 1
    return intlin.primitive([int(x * den) for x in v])


def classify_form(gram) -> tuple[list[list[Fraction]] | None, list[Fraction] | None]:
    """Symmetric Gaussian reduction of -gram over Q.

    Returns (radical basis in gram coordinates, None) if gram is negative
    semi-definite, else (None, witness) with witness^T gram witness > 0.
    """
    k = len(gram)
    a = [[Fraction(-x) for x in row] for row in gram]
    vecs = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    alive = list(range(k))
    while alive:
        neg = next((i for i in alive if a[i][i] < 0), None)
        if neg is not None:
            return None, vecs[neg]
        piv = next((i for i in alive if a[i][i] > 0), None)
        if piv is None:
            # all diagonals zero: any nonzero off-diagonal gives an indefinite 2-plane
            for i in alive:
                for j in alive:
                    if i < j and a[i][j] != 0:
                        sgn = -1 if a[i][j] > 0 else 1
                        return None, [x + sgn * y for x, y in zip(vecs[i], vecs[j])]
            return [vecs[i] for i in alive], None
        alive.remove(piv)
        p = a[piv][piv]
        col = {j: a[j][piv] for j in alive}
        for j in alive:
            if col[j]:
                vecs[j] = [x - col[j] / p * y for x, y in zip(vecs[j], vecs[piv])]
            for t in alive:
                a[j][t] -= col[j] * col[t] / p
    return [], None


def is_q_painleve(s: Seed | CyclicSeed) -> FormCertificate:
    basis, g = kernel_gram(s)
    radical, witness = classify_form(g)

    def lift(c: list[Fraction]) -> Vector:
        x = _integral(c)
        return tuple(sum(xi * b[t] for xi, b in zip(x, basis)) for t in range(len(basis[0])))

    if witness is not None:
        w = lift(witness)
        return FormCertificate(False, (), w, intersection_form(s, w, w))
    rad = tuple(lift(r) for r in radical)
    return FormCertificate(len(rad) > 0, rad, None)


def delta_class(s: Seed) -> tuple[Vector, Vector]:
    """The primitive radical vector with positive seed coefficients, and those coefficients."""
    cert = is_q_painleve(s)
    if not cert.ok:
        raise NotQPainleve("seed is not of q-Painleve type; no radical vector")
    if cert.radical_rank != 1:
        raise NotQPainleve(f"radical has rank {cert.radical_rank}; positive generator not unique")
    delta = intlin.primitive(cert.radical[0])
    c = s.coordinates(delta)
    if all(x < 0 for x in c):
        delta = tuple(-x for x in delta)
        c = tuple(-x for x in c)
    if not all(x > 0 for x in c):
        raise NotQPainleve(f"radical generator has mixed-sign coefficients {c}")
    return delta, c
