"""T-polygons of q-Painleve seeds and an SL(2,Z) normal form for lattice polygons."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from ..errors import InvalidInput
from ..intlin import det2
from .painleve import delta_class
from .seeds import Seed, angle_key

__all__ = [
    "Polygon", "t_polygon", "canonical_polygon", "transform_polygon", "check_t_polygon",
    "edge_data", "predicted_edge_data", "lattice_length", "ccw_sort", "polygon_from_psi",
]

Point = tuple[int, int]


def ccw_sort(points: Sequence[Point]) -> tuple[Point, ...]:
    """Sort points around the origin counterclockwise, starting at the least one."""
    pts = sorted(set(points), key=angle_key)
    k = pts.index(min(pts))
    return tuple(pts[k:] + pts[:k])


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(tuple(int(c) for c in v) for v in self.vertices))

    def edges(self) -> list[tuple[Point, Point]]:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def twice_area(self) -> int:
        return sum(det2(a, b) for a, b in self.edges())


def lattice_length(a: Point, b: Point) -> int:
    return gcd(b[0] - a[0], b[1] - a[1])


def _solve_lines(u: Point, cu: int, w: Point, cw: int) -> tuple[Fraction, Fraction]:
    # det(v, u) = -cu and det(v, w) = -cw, i.e. v.(u_y, -u_x) = -cu
    a11, a12, a21, a22 = u[1], -u[0], w[1], -w[0]
    d = a11 * a22 - a12 * a21
    x = Fraction(-cu * a22 + cw * a12, d)
    y = Fraction(-cw * a11 + cu * a21, d)
    return x, y


def t_polygon(s: Seed) -> Polygon:
    """Intersection of the half-planes det(v, psi(e_i)) >= -c_i."""
    _, c = delta_class(s)
    return polygon_from_psi(s.psi_images, c)


def polygon_from_psi(psi_images: Sequence[Point], c: Sequence[int]) -> Polygon:
    dist: dict[Point, int] = {}
    for p, ci in zip(psi_images, c):
        if dist.setdefault(p, ci) != ci:
            raise InvalidInput(f"parallel basis vectors with different radical coefficients at {p}")
    dirs = sorted(dist, key=angle_key)
    verts = []
    for i, u in enumerate(dirs):
        w = dirs[(i + 1) % len(dirs)]
        if det2(u, w) <= 0:
            raise InvalidInput("edge directions do not turn counterclockwise by less than pi")
        x, y = _solve_lines(u, dist[u], w, dist[w])
        if x.denominator != 1 or y.denominator != 1:
            raise InvalidInput(f"non-integral vertex ({x}, {y})")
        verts.append((int(x), int(y)))
    for v in verts:
        for u, cu in dist.items():
            if det2(v, u) < -cu:
                raise InvalidInput(f"vertex {v} violates the half-plane for {u}")
    return Polygon(ccw_sort(verts))


def edge_data(p: Polygon) -> list[tuple[Point, int, int]]:
    """(primitive edge direction, lattice distance to origin, lattice length) per edge.

    Direction is oriented so that the polygon lies where det(v, dir) >= -distance.
    """
    out = []
    for a, b in p.edges():
        ell = lattice_length(a, b)
        d = ((a[0] - b[0]) // ell, (a[1] - b[1]) // ell)
        out.append((d, -det2(a, d), ell))
    return out


def predicted_edge_data(s: Seed) -> list[tuple[Point, int, int]]:
    _, c = delta_class(s)
    mult: dict[Point, int] = {}
    dist: dict[Point, int] = {}
    for p, ci in zip(s.psi_images, c):
        mult[p] = mult.get(p, 0) + 1
        dist[p] = ci
    return [(p, dist[p], dist[p] * mult[p]) for p in mult]


def check_t_polygon(p: Polygon) -> list[str]:
    """Empty list when p is a T-polygon; otherwise the violated conditions."""
    problems = []
    vs = p.vertices
    n = len(vs)
    if n < 3:
        return ["fewer than three vertices"]
    for i in range(n):
        a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
        turn = det2((b[0] - a[0], b[1] - a[1]), (c[0] - b[0], c[1] - b[1]))
        if turn <= 0:
            problems.append(f"not strictly convex at {b}")
        if gcd(*b) != 1:
            problems.append(f"vertex {b} not primitive")
    for a, b in p.edges():
        if det2(a, b) <= 0:
            problems.append(f"origin not strictly inside edge {a}->{b}")
            continue
        ell = lattice_length(a, b)
        dist = det2(a, b) // ell
        if ell % dist:
            problems.append(f"edge {a}->{b}: length {ell} not divisible by distance {dist}")
    return problems


def transform_polygon(g: Sequence[Sequence[int]], p: Polygon) -> Polygon:
    pts = [(g[0][0] * x + g[0][1] * y, g[1][0] * x + g[1][1] * y) for x, y in p.vertices]
    return Polygon(ccw_sort(pts))


def _frame(d: Point) -> tuple[tuple[int, int], tuple[int, int]]:
    # some g in SL(2,Z) with g d = (1,0)
    x, y = d
    g0, a, b = _egcd(x, y)
    if g0 == -1:
        a, b = -a, -b
    elif g0 != 1:
        raise InvalidInput(f"direction {d} is not primitive")
    return ((a, b), (-y, x))


def _egcd(x: int, y: int) -> tuple[int, int, int]:
    if y == 0:
        return (abs(x), 1 if x >= 0 else -1, 0)
    g, a, b = _egcd(y, x % y)
    return g, b, a - (x // y) * b


def canonical_polygon(p: Polygon) -> Polygon:
    """SL(2,Z) normal form: least vertex list over all (vertex, incident edge) frames.

    Either orientation of the input vertex list is accepted.
    """
    vs = p.vertices if p.twice_area() > 0 else tuple(reversed(p.vertices))
    n = len(vs)
    best = None
    for k in range(n):
        v = vs[k]
        for nb in (vs[(k + 1) % n], vs[k - 1]):
            ell = lattice_length(v, nb)
            d = ((nb[0] - v[0]) // ell, (nb[1] - v[1]) // ell)
            g = _frame(d)
            img = [(g[0][0] * x + g[0][1] * y, g[1][0] * x + g[1][1] * y) for x, y in vs]
            # remaining freedom: shear (x, y) -> (x + t y, y); make the vertex's x in [0, |b|)
            t = _shear_param(img[k][0], img[k][1])
            img = [(x + t * y, y) for x, y in img]
            cand = tuple(img[k:] + img[:k])
            if best is None or cand < best:
                best = cand
    return Polygon(best)


def _shear_param(x: int, b: int) -> int:
    # choose t with 0 <= x + t b < |b|
    if b == 0:
        return 0
    return -(x // b) if b > 0 else (x // -b)
