"""Search-plus-verify pipeline producing a trace between two very strong collections.

Stages, each checked before the next one runs:

1. polygons   tilts until the T-polygons agree up to SL(2,Z)
2. vectors    a rotation making dual psi-images agree indexwise up to SL(2,Z)
3. twist      a line-bundle twist removing the remaining shear
4. residual   the isometry of K(Z) relating the two dual bases
5. weyl       its Weyl part, realized by tilts, one reorder, and the inverse tilts
6. pic0       the degree-zero twist left over

Searches are bounded. SearchExhausted means the limits were too small, not
that no trace exists.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import lcm
from typing import Iterator, Sequence

from . import intlin
from .delpezzo import KClass, Surface, euler_chi, is_orthogonal_element, orthogonal_decompose, weyl_word
from .errors import DPHelixError, IncompatibleSurfaces, InvalidInput, SearchExhausted
from .helix import (
    Collection, Reorder, Rotate, Shift, Step, Tensor, TiltPlus, basis_matrix, check_very_strong,
    find_good_thread, invert_trace, replay, rotate_thread, shift, tilt_plus,
)
from .intlin import Matrix, det2
from .lattice.painleve import classify_form
from .lattice.polygons import canonical_polygon, polygon_from_psi
from .lattice.seeds import Ambient, Seed, intersection_form

__all__ = [
    "Limits", "ConnectResult", "align_polygons", "align_vectors", "align_twist",
    "orthogonal_residual", "realize_weyl", "connect", "lattice_invariants",
]

@dataclass(frozen=True)
class Limits:
    depth: int = 8              # tilts in the polygon search
    weyl_depth: int = 6         # tilts when looking for roots to reflect in
    max_states: int = 200_000


@dataclass
class ConnectResult:
    trace: list[Step]
    log: list[str] = field(default_factory=list)


def _stage(steps: Sequence[Step], name: str) -> list[Step]:
    return [type(s)(**{**{k: getattr(s, k) for k in s.__dataclass_fields__}, "stage": name}) for s in steps]


def polygon_key(c: Collection) -> tuple:
    # delta coefficients of the seed of a very strong collection are the ranks
    p = polygon_from_psi(c.dual_psi, [abs(e.r) for e in c.objects])
    return canonical_polygon(p).vertices


def tilt_moves(c: Collection, distinct_psi: bool = True) -> Iterator[tuple[list[Step], Collection]]:
    """One tilt at each object (via a good thread), with the rotation it needs."""
    seen_psi = set()
    for j in range(1, c.n + 1):
        if distinct_psi:
            p = c.dual_psi[j - 1]
            if p in seen_psi:
                continue
            seen_psi.add(p)
        thread, k, jj = find_good_thread(c, j)
        steps: list[Step] = [Rotate(k)] if k else []
        steps.append(TiltPlus(jj))
        yield steps, tilt_plus(thread, jj)


def _sl2_between(src: Sequence[tuple[int, int]], dst: Sequence[tuple[int, int]]) -> Matrix | None:
    """g in SL(2,Z) with g src[i] = dst[i] for all i, if one exists."""
    i0 = 0
    i1 = next((i for i in range(len(src)) if det2(src[i0], src[i]) != 0), None)
    if i1 is None:
        return None
    d = det2(src[i0], src[i1])
    # g = [dst0 dst1] [src0 src1]^{-1}
    inv = ((src[i1][1], -src[i1][0]), (-src[i0][1], src[i0][0]))
    m = ((dst[i0][0], dst[i1][0]), (dst[i0][1], dst[i1][1]))
    g = intlin.matmul(m, inv)
    if any(x % d for row in g for x in row):
        return None
    g = tuple(tuple(x // d for x in row) for row in g)
    if g[0][0] * g[1][1] - g[0][1] * g[1][0] != 1:
        return None
    if any(intlin.matvec(g, s) != tuple(t) for s, t in zip(src, dst)):
        return None
    return g


def _sl2_multiset(src: Sequence[tuple[int, int]], dst: Sequence[tuple[int, int]]) -> Matrix | None:
    """g in SL(2,Z) with g(src) = dst as multisets."""
    target = sorted(dst)
    i1 = next(i for i in range(len(src)) if det2(src[0], src[i]) != 0)
    for a in set(dst):
        for b in set(dst):
            g = _sl2_between([src[0], src[i1]], [a, b])
            if g is not None and sorted(intlin.matvec(g, v) for v in src) == target:
                return g
    return None


def align_polygons(a: Collection, b: Collection, depth: int = 8,
                   max_states: int = 200_000) -> tuple[list[Step], Collection, Matrix]:
    """Tilts on a until its T-polygon is SL(2,Z)-equivalent to that of b."""
    target = polygon_key(b)
    start_key = polygon_key(a)
    parents: dict[tuple, tuple] = {start_key: (None, [], a)}
    level = [start_key]
    sizes = [1]
    found = start_key if start_key == target else None
    d = 0
    while found is None and d < depth and level:
        d += 1
        nxt = []
        for key in level:
            cur = parents[key][2]
            for steps, child in tilt_moves(cur):
                ck = polygon_key(child)
                if ck in parents:
                    continue
                parents[ck] = (key, steps, child)
                nxt.append(ck)
                if ck == target:
                    found = ck
                    break
                if len(parents) > max_states:
                    raise SearchExhausted("polygons", {"depth": d, "states": len(parents), "levels": sizes})
            if found is not None:
                break
        level = nxt
        sizes.append(len(nxt))
    if found is None:
        raise SearchExhausted("polygons", {"depth": depth, "states": len(parents), "levels": sizes})
    trace: list[Step] = []
    key = found
    while parents[key][0] is not None:
        prev, steps, _ = parents[key]
        trace[:0] = steps
        key = prev
    reached = parents[found][2]
    g = _sl2_multiset(b.dual_psi, reached.dual_psi)
    if g is None:
        raise DPHelixError("polygon match without a psi-multiset match")
    return trace, reached, g


def align_vectors(a: Collection, b: Collection) -> tuple[list[Step], Collection, Matrix]:
    """A rotation of a whose dual psi-images are f(psi(F_i of b)) indexwise."""
    for k in range(a.n):
        t = rotate_thread(a, k)
        f = _sl2_between(b.dual_psi, t.dual_psi)
        if f is not None:
            return ([Rotate(k)] if k else []), t, f
    raise InvalidInput("dual psi-images do not agree up to SL(2,Z) and rotation")


def align_twist(a: Collection, b: Collection, f: Matrix | None = None) -> tuple[list[Step], Collection]:
    """Twist a by a power of the generator of Pic modulo K^perp to remove a shear."""
    S = a.surface
    if f is None:
        f = _sl2_between(b.dual_psi, a.dual_psi)
    if f is None or f[0] != (1, 0) or f[1][1] != 1:
        raise DPHelixError(f"residual SL(2,Z) element {f} is not a shear (r, d) -> (r, d + k r)")
    k = f[1][0]
    if k == 0:
        return [], a
    gen, ell = S.twist_generator
    if k % ell:
        raise DPHelixError(f"shear {k} not divisible by {ell}")
    D = tuple(-(k // ell) * x for x in gen)
    # prefer a multiple of the primitive canonical direction in the same class mod K^perp
    kp = intlin.primitive(S.canonical)
    c, rem = divmod(S.dot(D, S.canonical), S.dot(kp, S.canonical))
    if rem == 0:
        D = tuple(c * x for x in kp)
    step = Tensor(D)
    return [step], replay(a, [step])


def orthogonal_residual(a: Collection, b: Collection) -> Matrix:
    """g in O(Z) with g [F_i of a] = [F_i of b]."""
    if a.dual_psi != b.dual_psi:
        raise InvalidInput("dual psi-images differ; residual is not in O(Z)")
    fa = basis_matrix(a.duals)
    fb = basis_matrix(b.duals)
    g = intlin.matmul(fb, intlin.unimodular_inverse(fa))
    if not is_orthogonal_element(a.surface, g):
        raise InvalidInput("residual does not preserve the Euler form, rank and degree")
    return g


@dataclass
class _Visible:
    path: list[Step]
    reflect_steps: list[Step]


def _reorder_steps(c: Collection, j: int, k: int) -> list[Step]:
    """Steps swapping the parallel duals F_j and F_k (j < k), rotating first if the block wraps."""
    p = c.dual_psi
    if all(p[t] == p[j - 1] for t in range(j - 1, k)):
        return [Reorder(j, k)]
    n = c.n
    shift_by = n - k + 1
    return [Rotate(-shift_by), Reorder(1, shift_by + j), Rotate(shift_by)]


def _root_key(v: tuple[int, ...]) -> tuple[int, ...]:
    # a root and its negative give the same reflection
    return v if v > tuple(-x for x in v) else tuple(-x for x in v)


def _collect_roots(c: Collection, depth: int, needed: set, max_states: int) -> dict:
    """BFS over tilts from c, recording every root e_j - e_k visible along the way."""
    visible: dict[tuple, _Visible] = {}
    checked = 0
    start = frozenset(F.vector for F in c.duals)
    seen = {start}
    queue = deque([(c, [])])
    while queue:
        cur, path = queue.popleft()
        p = cur.dual_psi
        for j in range(cur.n):
            for k in range(j + 1, cur.n):
                if p[j] == p[k]:
                    key = _root_key((cur.duals[j] - cur.duals[k]).vector)
                    if key not in visible:
                        visible[key] = _Visible(list(path), _reorder_steps(cur, j + 1, k + 1))
        if len(visible) > checked:
            checked = len(visible)
            if needed <= _expressible(c.surface, set(visible), needed):
                return visible
        tilts = sum(1 for s in path if isinstance(s, TiltPlus))
        if tilts >= depth:
            continue
        for steps, child in tilt_moves(cur, distinct_psi=False):
            key = frozenset(F.vector for F in child.duals)
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_states:
                raise SearchExhausted("weyl", {"states": len(seen), "roots": len(visible)})
            queue.append((child, path + steps))
    return visible


def _reflect_vec(S: Surface, alpha: tuple, beta: tuple) -> tuple:
    a = KClass.from_vector(alpha)
    b = KClass.from_vector(beta)
    return (b - euler_chi(S, b, a) * a).vector


def _conjugation_table(S: Surface, visible: set, needed: set = frozenset(), slack: int = 2,
                       limit: int = 20000) -> dict:
    """Roots reachable from visible ones by visible reflections, with conjugating words.

    The reflection group is affine, so the point-class coordinate needs a
    cutoff. Reaching m from generators at m' passes through 2m' - m, hence the
    window is the range of the visible and needed roots widened by its own span.
    """
    ends = [r[-1] for r in visible | set(needed)]
    span = max(ends) - min(ends)
    lo, hi = min(ends) - span - slack, max(ends) + span + slack
    table: dict[tuple, tuple] = {}
    frontier = []
    for g in sorted(visible):
        table[g] = (g, ())
        frontier.append(g)
    gens = sorted(visible)
    while frontier and len(table) < limit:
        nxt = []
        for beta in frontier:
            base, word = table[beta]
            for d in gens:
                img = _root_key(_reflect_vec(S, d, beta))
                if img in table or not lo <= img[-1] <= hi:
                    continue
                table[img] = (base, (d,) + word)
                nxt.append(img)
        frontier = nxt
    return table


def _expressible(S: Surface, visible: set, needed: set) -> set:
    if not visible:
        return set()
    table = _conjugation_table(S, visible, needed)
    return {r for r in needed if r in table}


def realize_weyl(c: Collection, w: Matrix, depth: int = 6, max_states: int = 200_000) -> list[Step]:
    """Trace on c whose replay has classes w([E_i]) indexwise, for w in W(Z)."""
    S = c.surface
    word = weyl_word(S, w)
    if not word:
        return []
    needed = {_root_key(a.vector) for a in word}
    visible = _collect_roots(c, depth, needed, max_states)
    table = _conjugation_table(S, set(visible), needed)
    missing = needed - set(table)
    if missing:
        raise SearchExhausted("weyl", {"depth": depth, "visible_roots": len(visible), "missing": len(missing)})
    flat: list[tuple] = []
    for a in word:
        base, conj = table[_root_key(a.vector)]
        for g in list(conj) + [base] + list(reversed(conj)):
            if flat and flat[-1] == g:
                flat.pop()
            else:
                flat.append(g)
    trace: list[Step] = []
    for g in flat:
        v = visible[g]
        trace += v.path + v.reflect_steps + invert_trace(v.path)
    return trace


def lattice_invariants(c: Collection) -> dict:
    """Rank, radical rank and discriminant of the intersection form on Ker(psi) of the seed."""
    S = c.surface
    seed = Seed(Ambient(S.psi_matrix), [F.vector for F in c.duals])
    basis = seed.ambient.kernel
    gram = [[intersection_form(seed, x, y) for y in basis] for x in basis]
    radical, witness = classify_form(gram)
    if witness is not None:
        return {"rank": c.n, "radical_rank": None, "discriminant": None}
    out = {"rank": c.n, "radical_rank": len(radical)}
    if len(radical) == 1:
        r = radical[0]
        den = lcm(*(x.denominator for x in r))
        y = intlin.primitive([int(x * den) for x in r])
        u = intlin.complete_to_basis(y)
        g2 = intlin.matmul(intlin.transpose(u), intlin.matmul(gram, u))
        sub = tuple(tuple(row[1:]) for row in g2[1:])
        out["discriminant"] = intlin.det(sub) if sub else 1
    else:
        out["discriminant"] = None
    return out


def _check_same_surface(a: Collection, b: Collection) -> None:
    ia, ib = lattice_invariants(a), lattice_invariants(b)
    for key in ("rank", "radical_rank", "discriminant"):
        if ia[key] != ib[key]:
            raise IncompatibleSurfaces(key, ia[key], ib[key])
    if a.surface != b.surface:
        raise IncompatibleSurfaces("surface", a.surface.name, b.surface.name)


def connect(a: Collection, b: Collection, limits: Limits = Limits()) -> ConnectResult:
    """Trace t with replay(a, t) == b, verified before returning."""
    _check_same_surface(a, b)
    sa = check_very_strong(a)
    sb = check_very_strong(b)
    result = ConnectResult([])
    out = result.trace
    cur = a
    if sa.shift:
        out += _stage([Shift(1)], "normalize")
        cur = shift(cur, 1)
    target = shift(b, 1) if sb.shift else b

    steps, cur, g = align_polygons(cur, target, limits.depth, limits.max_states)
    out += _stage(steps, "polygons")
    result.log.append(f"polygons: {len(steps)} steps, g={g}")

    steps, cur, f = align_vectors(cur, target)
    out += _stage(steps, "vectors")
    result.log.append(f"vectors: {len(steps)} steps, f={f}")

    steps, cur = align_twist(cur, target, f)
    out += _stage(steps, "twist")
    result.log.append(f"twist: {len(steps)} steps")

    res = orthogonal_residual(cur, target)
    w, D = orthogonal_decompose(a.surface, res)
    result.log.append(f"residual: pic0 twist {D}, weyl word length {len(weyl_word(a.surface, w))}")

    steps = realize_weyl(cur, w, limits.weyl_depth, limits.max_states)
    out += _stage(steps, "weyl")
    cur = replay(cur, steps)
    result.log.append(f"weyl: {len(steps)} steps")

    if any(D):
        out += _stage([Tensor(D)], "pic0")
        cur = replay(cur, [Tensor(D)])
    if sb.shift:
        out += _stage([Shift(1)], "normalize")

    final = replay(a, out)
    if final.objects != b.objects:
        raise DPHelixError("internal error: assembled trace does not reproduce the target")
    result.log.append(f"verified: {len(out)} steps")
    return result
