"""K(Z) of a del Pezzo surface in (rank, c1, chi - rank) coordinates.

The Euler form comes from Riemann-Roch. Roots are (-2)-classes orthogonal to
the canonical class. Weyl and orthogonal groups act on K(Z) as integer matrices
in the coordinate order (r, c1..., m).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Sequence

from . import intlin
from .errors import InvalidInput, NotOrthogonal
from .intlin import Matrix, Vector

__all__ = [
    "Surface", "KClass", "euler_chi", "tensor", "tensor_matrix", "line_bundle",
    "finite_roots", "affine_roots", "reflect", "reflection_matrix", "weyl_closure",
    "simple_roots", "root_lattice_type", "orthogonal_decompose", "weyl_word",
    "euler_gram", "is_orthogonal_element", "k_perp_basis", "RootLatticeInfo",
    "delta", "structure_sheaf", "apply", "compose", "generators", "is_positive",
]


@dataclass(frozen=True)
class Surface:
    kind: str          # "dP" (blow-up of P2 at m points) or "P1xP1"
    m: int = 0

    def __post_init__(self) -> None:
        if self.kind == "P1xP1":
            object.__setattr__(self, "m", 0)
        elif self.kind != "dP" or not 0 <= self.m <= 8:
            raise InvalidInput(f"unknown surface {self.kind!r} m={self.m}")

    @classmethod
    def dp(cls, m: int) -> "Surface":
        return cls("dP", m)

    @classmethod
    def p1xp1(cls) -> "Surface":
        return cls("P1xP1")

    @property
    def name(self) -> str:
        if self.kind == "P1xP1":
            return "P1xP1"
        return "P2" if self.m == 0 else f"dP{self.m}"

    @property
    def rho(self) -> int:
        return 2 if self.kind == "P1xP1" else self.m + 1

    @property
    def n(self) -> int:
        return self.rho + 2

    @cached_property
    def gram(self) -> Matrix:
        if self.kind == "P1xP1":
            return ((0, 1), (1, 0))
        return tuple(tuple((1 if i == 0 else -1) if i == j else 0 for j in range(self.rho))
                     for i in range(self.rho))

    @cached_property
    def canonical(self) -> Vector:
        if self.kind == "P1xP1":
            return (-2, -2)
        return (-3,) + (1,) * self.m

    def dot(self, a: Sequence[int], b: Sequence[int]) -> int:
        return intlin.dot(a, intlin.matvec(self.gram, b))

    @property
    def K2(self) -> int:
        return self.dot(self.canonical, self.canonical)

    def degree(self, c1: Sequence[int]) -> int:
        return -self.dot(c1, self.canonical)

    @cached_property
    def psi_matrix(self) -> Matrix:
        """psi = (r, d) on (r, c1, m) coordinates."""
        n = self.n
        d = tuple(-x for x in intlin.matvec(self.gram, self.canonical))
        return ((1,) + (0,) * (n - 1), (0,) + d + (0,))

    @cached_property
    def twist_generator(self) -> tuple[Vector, int]:
        """Line bundle class D and l = d(O(D)), the divisibility of K."""
        if self.kind == "P1xP1":
            return (1, 0), 2
        if self.m == 0:
            return (1,), 3
        e1 = tuple(int(i == 1) for i in range(self.rho))
        return e1, 1


@dataclass(frozen=True)
class KClass:
    r: int
    c1: Vector
    m: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "c1", tuple(int(x) for x in self.c1))

    @classmethod
    def from_vector(cls, v: Sequence[int]) -> "KClass":
        return cls(int(v[0]), tuple(v[1:-1]), int(v[-1]))

    @property
    def vector(self) -> Vector:
        return (self.r,) + self.c1 + (self.m,)

    @property
    def chi(self) -> int:
        return self.r + self.m

    def __add__(self, o: "KClass") -> "KClass":
        return KClass(self.r + o.r, intlin.vec_add(self.c1, o.c1), self.m + o.m)

    def __sub__(self, o: "KClass") -> "KClass":
        return KClass(self.r - o.r, intlin.vec_sub(self.c1, o.c1), self.m - o.m)

    def __neg__(self) -> "KClass":
        return KClass(-self.r, tuple(-x for x in self.c1), -self.m)

    def __rmul__(self, k: int) -> "KClass":
        return KClass(k * self.r, tuple(k * x for x in self.c1), k * self.m)

    def degree(self, S: Surface) -> int:
        return S.degree(self.c1)

    def psi(self, S: Surface) -> tuple[int, int]:
        return (self.r, S.degree(self.c1))

    def slope(self, S: Surface) -> Fraction | float:
        # torsion classes sit above every rational slope
        return Fraction(S.degree(self.c1), self.r) if self.r else float("inf")


def delta(S: Surface) -> KClass:
    return KClass(0, (0,) * S.rho, 1)


def structure_sheaf(S: Surface) -> KClass:
    return KClass(1, (0,) * S.rho, 0)


def euler_chi(S: Surface, E: KClass, F: KClass) -> int:
    dE = S.degree(E.c1)
    return E.r * F.chi + F.r * E.chi - E.r * F.r - S.dot(E.c1, F.c1) - F.r * dE


@lru_cache(maxsize=None)
def euler_gram(S: Surface) -> Matrix:
    basis = [KClass.from_vector(tuple(int(i == j) for j in range(S.n))) for i in range(S.n)]
    return tuple(tuple(euler_chi(S, a, b) for b in basis) for a in basis)


def tensor(S: Surface, E: KClass, D: Sequence[int]) -> KClass:
    """Class of E tensored with O(D); the chi update is Riemann-Roch for the twist."""
    D = tuple(D)
    twice = E.r * (S.dot(D, D) - S.dot(D, S.canonical))
    if twice % 2:
        raise InvalidInput("twist breaks integrality of chi")
    return KClass(E.r, tuple(c + E.r * x for c, x in zip(E.c1, D)), E.m + S.dot(E.c1, D) + twice // 2)


def line_bundle(S: Surface, D: Sequence[int]) -> KClass:
    return tensor(S, structure_sheaf(S), D)


def _matrix_of(S: Surface, f) -> Matrix:
    cols = [f(KClass.from_vector(tuple(int(i == j) for j in range(S.n)))).vector for i in range(S.n)]
    return intlin.from_columns(cols)


def tensor_matrix(S: Surface, D: Sequence[int]) -> Matrix:
    return _matrix_of(S, lambda E: tensor(S, E, D))


def k_perp_basis(S: Surface) -> tuple[Vector, ...]:
    """Saturated basis of the NS classes orthogonal to K."""
    row = intlin.matvec(S.gram, S.canonical)
    return intlin.integer_kernel((row,))


def _enumerate_minus_two(S: Surface, box: int) -> list[Vector]:
    out = []
    K = S.canonical
    if S.kind == "P1xP1":
        for v in product(range(-box, box + 1), repeat=2):
            if S.dot(v, K) == 0 and S.dot(v, v) == -2:
                out.append(v)
        return out
    # diagonal form a0^2 - sum b^2 = -2 and 3 a0 + sum b = 0: prune on the square budget
    m = S.m
    for a0 in range(-box, box + 1):
        budget = a0 * a0 + 2
        target = -3 * a0

        def rec(prefix: list[int], left: int, total: int) -> None:
            k = len(prefix)
            if k == m:
                if left == 0 and total == target:
                    out.append((a0, *prefix))
                return
            rest = m - k - 1
            for b in range(-box, box + 1):
                if b * b > left:
                    continue
                # remaining entries can move the sum by at most rest*box
                if abs(target - total - b) > rest * box:
                    continue
                prefix.append(b)
                rec(prefix, left - b * b, total + b)
                prefix.pop()

        rec([], budget, 0)
    return out


@lru_cache(maxsize=None)
def finite_roots(S: Surface, box: int = 3) -> frozenset[KClass]:
    vs = _enumerate_minus_two(S, box)
    roots = frozenset(KClass(0, v, 0) for v in vs)
    # completeness: the set must be closed under its own reflections
    for a in roots:
        for b in roots:
            if reflect(S, a, b) not in roots:
                raise AssertionError(f"root set not reflection-closed at box {box}")
    return roots


def affine_roots(S: Surface, height_bound: int) -> frozenset[KClass]:
    if height_bound < 0:
        raise ValueError("height_bound must be non-negative")
    out = set()
    for a in finite_roots(S):
        for k in range(-height_bound, height_bound + 1):
            out.add(KClass(a.r, a.c1, a.m + k))
    return frozenset(out)


def reflect(S: Surface, alpha: KClass, beta: KClass) -> KClass:
    if euler_chi(S, alpha, alpha) != 2 or alpha.psi(S) != (0, 0):
        raise InvalidInput(f"{alpha} is not a root")
    c = euler_chi(S, beta, alpha)
    return beta - c * alpha


def reflection_matrix(S: Surface, alpha: KClass) -> Matrix:
    return _matrix_of(S, lambda E: reflect(S, alpha, E))


def _height_functional(S: Surface) -> Vector:
    # generic weights so no root pairs to zero
    return tuple(1000 ** (S.rho - i) + 7 * i + 1 for i in range(S.rho)) if S.kind == "dP" else (1, 0)


def is_positive(S: Surface, alpha: KClass) -> bool:
    h = intlin.dot(_height_functional(S), alpha.c1)
    if h == 0:
        raise AssertionError("height functional vanishes on a root")
    return h > 0


@lru_cache(maxsize=None)
def simple_roots(S: Surface) -> tuple[KClass, ...]:
    pos = [a for a in finite_roots(S) if is_positive(S, a)]
    posset = set(pos)
    simple = []
    for a in pos:
        if not any((a - b) in posset for b in pos if b != a):
            simple.append(a)
    return tuple(sorted(simple, key=lambda a: a.vector))


@lru_cache(maxsize=None)
def weyl_closure(S: Surface) -> frozenset:
    """All elements of W(Z) as matrices on K(Z), by BFS from simple reflections."""
    gens = [reflection_matrix(S, a) for a in simple_roots(S)]
    ident = intlin.identity(S.n)
    seen = {ident}
    frontier = deque([ident])
    while frontier:
        g = frontier.popleft()
        for s in gens:
            h = intlin.matmul(s, g)
            if h not in seen:
                seen.add(h)
                frontier.append(h)
    return frozenset(seen)


def apply(g: Matrix, E: KClass) -> KClass:
    return KClass.from_vector(intlin.matvec(g, E.vector))


def is_orthogonal_element(S: Surface, f: Matrix) -> bool:
    X = euler_gram(S)
    if intlin.matmul(intlin.transpose(f), intlin.matmul(X, f)) != X:
        return False
    return intlin.matmul(S.psi_matrix, f) == S.psi_matrix


def weyl_word(S: Surface, w: Matrix) -> list[KClass]:
    """Simple roots a_1..a_k with w = s_{a_1} ... s_{a_k}, by length descent.

    Raises NotOrthogonal when w is not in W(Z).
    """
    simple = simple_roots(S)
    mats = {a: reflection_matrix(S, a) for a in simple}
    word: list[KClass] = []
    cur = w
    ident = intlin.identity(S.n)
    for _ in range(len(finite_roots(S)) + 1):
        if cur == ident:
            return list(reversed(word))
        for a in simple:
            if not is_positive(S, apply(cur, a)):
                cur = intlin.matmul(cur, mats[a])
                word.append(a)
                break
        else:
            raise NotOrthogonal("element fixes the positive chamber but is not the identity; not in W(Z)")
    raise NotOrthogonal("length descent did not terminate; not in W(Z)")


def orthogonal_decompose(S: Surface, f: Matrix) -> tuple[Matrix, Vector]:
    """Split f = (tensor by D) o w with w in W(Z) and D orthogonal to K."""
    f = tuple(tuple(int(x) for x in row) for row in f)
    if not is_orthogonal_element(S, f):
        raise NotOrthogonal("matrix does not preserve the Euler form, rank and degree")
    img = apply(f, structure_sheaf(S))
    D = img.c1
    if img.r != 1 or S.dot(D, S.canonical) != 0 or 2 * img.m != S.dot(D, D):
        raise NotOrthogonal(f"image of O is {img}, not a degree-0 line bundle")
    w = intlin.matmul(tensor_matrix(S, tuple(-x for x in D)), f)
    if apply(w, structure_sheaf(S)) != structure_sheaf(S):
        raise NotOrthogonal("residual does not fix O")
    weyl_word(S, w)
    return w, D


@dataclass(frozen=True)
class RootLatticeInfo:
    label: str
    components: tuple[str, ...]
    simple_roots: tuple[KClass, ...]
    complement: tuple[Vector, ...]           # basis of R(Z)^perp inside K^perp
    complement_gram: tuple[tuple[int, ...], ...]


def _dynkin_label(nodes: list[int], adj: dict[int, set[int]]) -> str:
    k = len(nodes)
    degs = {v: len(adj[v]) for v in nodes}
    branch = [v for v in nodes if degs[v] == 3]
    if not branch:
        return f"A{k}"
    b = branch[0]
    arms = []
    for start in adj[b]:
        length, prev, cur = 1, b, start
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return f"D{k}"
    if arms[0] == 1 and arms[1] == 2:
        return f"E{k}"
    raise AssertionError(f"not a simply-laced finite Dynkin diagram: arms {arms}")


def root_lattice_type(S: Surface) -> RootLatticeInfo:
    simple = list(simple_roots(S))
    adj: dict[int, set[int]] = {i: set() for i in range(len(simple))}
    for i, a in enumerate(simple):
        for j, b in enumerate(simple):
            if i != j and euler_chi(S, a, b) != 0:
                adj[i].add(j)
    seen: set[int] = set()
    comps = []
    for v in adj:
        if v in seen:
            continue
        stack, comp = [v], []
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(_dynkin_label(comp, adj))
    comps.sort(key=lambda c: (int(c[1:]), c[0]))
    label = "+".join(comps) if comps else "A0"
    # orthogonal complement of the roots inside K^perp
    kp = k_perp_basis(S)
    if simple:
        rows = tuple(tuple(S.dot(a.c1, v) for v in kp) for a in simple)
        coeffs = intlin.integer_kernel(rows)
    else:
        coeffs = tuple(tuple(int(i == j) for j in range(len(kp))) for i in range(len(kp)))
    comp_vecs = tuple(
        tuple(sum(c * v[t] for c, v in zip(cv, kp)) for t in range(S.rho)) for cv in coeffs
    )
    gram = tuple(tuple(S.dot(a, b) for b in comp_vecs) for a in comp_vecs)
    return RootLatticeInfo(label, tuple(comps), tuple(simple), comp_vecs, gram)


def compose(S: Surface, w: Matrix, D: Sequence[int]) -> Matrix:
    return intlin.matmul(tensor_matrix(S, D), w)


def generators(S: Surface) -> Iterable[tuple[str, Matrix]]:
    """Reflections in simple roots and twists by a basis of K^perp (with inverses)."""
    for a in simple_roots(S):
        yield f"s{a.c1}", reflection_matrix(S, a)
    for v in k_perp_basis(S):
        yield f"t{v}", tensor_matrix(S, v)
        yield f"t{tuple(-x for x in v)}", tensor_matrix(S, tuple(-x for x in v))
