"""Upper half-plane geometry: 2x2 matrices, cross-ratios, geodesics, ideal polygons.

The point at infinity is ``math.inf`` (``-inf`` is folded onto it); every
formula that meets it cancels the infinite factors exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CrossingGeodesicsError,
    DegenerateConfigurationError,
    DomainError,
    NonHyperbolicError,
)

INF = math.inf
PARABOLIC_TOL = 1e-9


def boundary_point(v):
    """Normalize a boundary point: reals stay floats, any infinity becomes ``INF``."""
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf", "-inf", "infinity", "∞", "oo"):
            return INF
        v = float(s)
    if isinstance(v, complex):
        if v.imag != 0:
            if cmath.isnan(v) or cmath.isinf(v):
                raise DomainError(f"invalid point {v!r}")
            return v
        v = v.real
    v = float(v)
    if math.isnan(v):
        raise DomainError("boundary point is NaN")
    return INF if math.isinf(v) else v + 0.0


def is_inf(v):
    return isinstance(v, float) and math.isinf(v)


@dataclass(frozen=True)
class Matrix2:
    """A 2x2 matrix acting by Moebius transformations.

    Products of reflections have determinant -1, so the determinant is not
    forced; ``normalized`` rescales to determinant +1 or -1.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def diagonal_translation(cls, length):
        """Translation of the given length along (0, inf)."""
        h = math.exp(0.5 * length)
        return cls(h, 0.0, 0.0, 1.0 / h)

    @classmethod
    def from_array(cls, m):
        m = np.asarray(m)
        return cls(*(v.item() for v in (m[0, 0], m[0, 1], m[1, 0], m[1, 1])))

    def to_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    @property
    def is_real(self):
        return all(not isinstance(v, complex) or v.imag == 0 for v in (self.a, self.b, self.c, self.d))

    def __matmul__(self, o):
        return Matrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self):
        det = self.det
        if det == 0:
            raise DegenerateConfigurationError("singular matrix")
        return Matrix2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def normalized(self):
        det = self.det
        if det == 0:
            raise DegenerateConfigurationError("singular matrix")
        if self.is_real:
            s = 1.0 / math.sqrt(abs(float(np.real(det))))
        else:
            s = 1.0 / cmath.sqrt(det)
        return Matrix2(self.a * s, self.b * s, self.c * s, self.d * s)

    def apply(self, z):
        """Moebius image of a boundary point or a complex point."""
        if is_inf(z):
            return INF if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return INF
        return (self.a * z + self.b) / den

    def conjugate_by(self, g):
        """Return g M g^-1."""
        return g @ self @ g.inverse()


def _diff(x, y):
    """Return ('inf', None), ('zero', None) or ('val', x - y)."""
    xi, yi = is_inf(x), is_inf(y)
    if xi and yi:
        return "zero", None
    if xi or yi:
        return "inf", None
    v = x - y
    return ("zero", None) if v == 0 else ("val", v)


def cross_ratio(a, b, c, d):
    """[a, b; c, d] = (a - b)(d - c) / ((a - c)(d - b)), with exact handling of inf."""
    pts = [boundary_point(p) if not isinstance(p, complex) else p for p in (a, b, c, d)]
    a, b, c, d = pts
    num = [_diff(a, b), _diff(d, c)]
    den = [_diff(a, c), _diff(d, b)]
    zn = sum(k == "zero" for k, _ in num)
    zd = sum(k == "zero" for k, _ in den)
    inn = sum(k == "inf" for k, _ in num)
    ind = sum(k == "inf" for k, _ in den)
    if zn and zd:
        raise DegenerateConfigurationError(f"cross ratio 0/0 at {pts}")
    if zn:
        if inn > ind:
            raise DegenerateConfigurationError(f"cross ratio 0*inf at {pts}")
        return 0.0
    if zd:
        if ind > inn:
            raise DegenerateConfigurationError(f"cross ratio inf/inf at {pts}")
        return INF
    if inn != ind:
        return INF if inn > ind else 0.0
    value = 1.0
    for k, v in num:
        if k == "val":
            value *= v
    for k, v in den:
        if k == "val":
            value /= v
    return value


@dataclass(frozen=True)
class Geodesic:
    """Oriented geodesic from boundary point p to boundary point q."""

    p: float
    q: float

    def __post_init__(self):
        object.__setattr__(self, "p", boundary_point(self.p))
        object.__setattr__(self, "q", boundary_point(self.q))
        if self.p == self.q:
            raise DegenerateConfigurationError("geodesic endpoints coincide")

    def reversed(self):
        return Geodesic(self.q, self.p)

    def mapped(self, m):
        return Geodesic(m.apply(self.p), m.apply(self.q))

    def endpoints(self):
        return (self.p, self.q)

    def same_line(self, other, tol=1e-9):
        def close(u, v):
            if is_inf(u) or is_inf(v):
                return is_inf(u) and is_inf(v)
            return abs(u - v) <= tol * max(1.0, abs(u), abs(v))
        return (close(self.p, other.p) and close(self.q, other.q)) or (
            close(self.p, other.q) and close(self.q, other.p)
        )


def geodesic_distance(g1, g2):
    """Distance between disjoint geodesics, from sech^2(d/2) = cross ratio."""
    p1, q1, p2, q2 = g1.p, g1.q, g2.p, g2.q
    shared = {p1, q1} & {p2, q2}
    if shared:
        raise DegenerateConfigurationError("geodesics share an endpoint (asymptotic)")
    for c, d in ((p2, q2), (q2, p2)):
        w = cross_ratio(q1, p1, c, d)
        if 0.0 < w < 1.0:
            w_c = cross_ratio(q1, d, c, p1)  # equals 1 - w
            if w_c <= 0:
                raise CrossingGeodesicsError("geodesics are tangent at infinity or cross")
            return 2.0 * math.asinh(math.sqrt(w_c / w))
    raise CrossingGeodesicsError(f"geodesics {g1} and {g2} intersect")


def axis(m):
    """Oriented axis (repelling to attracting) and translation length of a hyperbolic matrix."""
    if not m.is_real:
        raise NonHyperbolicError("axis needs a real matrix")
    det = float(np.real(m.det))
    if det <= 0:
        raise NonHyperbolicError("axis needs a positive determinant")
    s = math.sqrt(det)
    a, b, c, d = (float(np.real(v)) / s for v in (m.a, m.b, m.c, m.d))
    tr = a + d
    if abs(tr) <= 2.0 + PARABOLIC_TOL:
        raise NonHyperbolicError(f"|trace| = {abs(tr)} is not > 2")
    length = 2.0 * math.acosh(abs(tr) / 2.0)
    disc = math.sqrt(tr * tr - 4.0)
    if c == 0:
        fixed = [INF, b / (d - a)]
    else:
        dm = d - a
        qv = -0.5 * (dm + math.copysign(disc, dm if dm != 0 else 1.0))
        fixed = [qv / c, -b / qv]

    def attracting(z):
        if is_inf(z):
            return abs(a) > abs(d)
        return abs(c * z + d) > 1.0

    f0, f1 = fixed
    if attracting(f0):
        f0, f1 = f1, f0
    return Geodesic(f0, f1), length


def reflection(g):
    """Matrix (determinant -1) of the reflection in geodesic g, acting on boundary points."""
    p, q = g.p, g.q
    if is_inf(q):
        p, q = q, p
    if is_inf(p):
        return Matrix2(-1.0, 2.0 * q, 0.0, 1.0)
    cen = 0.5 * (p + q)
    rad = 0.5 * (q - p)
    return Matrix2(cen / rad, (rad * rad - cen * cen) / rad, 1.0 / rad, -cen / rad)


def random_sl2(rng, scale=1.0):
    """A random real determinant-one matrix (entries of size about exp(scale))."""
    while True:
        a, b, c = rng.normal(0.0, scale, size=3)
        a = math.exp(a) * rng.choice([-1.0, 1.0])
        if abs(a) > 1e-3:
            d = (1.0 + b * c) / a
            return Matrix2(a, b, c, d)


def _circle_angle(x):
    return math.pi if is_inf(x) else 2.0 * math.atan(x)


@dataclass(frozen=True)
class IdealPolygon:
    """Ideal polygon with vertices in circular order on R u {inf}."""

    vertices: tuple

    def __post_init__(self):
        vs = tuple(boundary_point(v) for v in self.vertices)
        for v in vs:
            if isinstance(v, complex):
                raise DomainError("polygon vertices must be real or inf")
        object.__setattr__(self, "vertices", vs)
        n = len(vs)
        if n < 3:
            raise DomainError("an ideal polygon needs at least 3 vertices")
        if len(set(vs)) != n:
            raise DegenerateConfigurationError("polygon vertices must be distinct")
        ang = [_circle_angle(v) for v in vs]
        drops = sum(ang[(i + 1) % n] < ang[i] for i in range(n))
        if drops not in (1, n - 1):
            raise DomainError("polygon vertices are not in circular order")

    @property
    def n(self):
        return len(self.vertices)

    def sides(self):
        vs = self.vertices
        return [Geodesic(vs[i], vs[(i + 1) % self.n]) for i in range(self.n)]

    def nonadjacent_pairs(self):
        n = self.n
        return [(i, j) for i in range(n) for j in range(i + 2, n) if not (i == 0 and j == n - 1)]

    @classmethod
    def regular(cls, n, rotation=0.0):
        """Vertices equally spaced on the boundary circle, moved to the line."""
        phis = [-0.5 * math.pi + math.pi * (k + 0.5) / n + 0.5 * rotation for k in range(n)]
        return cls(tuple(math.tan(p) for p in phis))

    @classmethod
    def random(cls, n, rng, include_inf=False):
        """Random polygon; with ``include_inf`` the last vertex is inf."""
        k = n - 1 if include_inf else n
        xs = sorted(np.tan(rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size=k)).tolist())
        if include_inf:
            xs.append(INF)
        return cls(tuple(xs))


def polygon_cross_ratios(poly):
    """(i, j, [x_i, x_{i+1}; x_j, x_{j+1}]) over non-adjacent side pairs."""
    vs = poly.vertices
    n = poly.n
    return [(i, j, cross_ratio(vs[i], vs[(i + 1) % n], vs[j], vs[(j + 1) % n]))
            for i, j in poly.nonadjacent_pairs()]


def polygon_ortholengths(poly):
    """(i, j, l_ij) over the n(n-3)/2 unordered pairs of non-adjacent sides."""
    sides = poly.sides()
    return [(i, j, geodesic_distance(sides[i], sides[j])) for i, j in poly.nonadjacent_pairs()]


__all__ = [
    "INF", "Matrix2", "Geodesic", "IdealPolygon", "boundary_point", "is_inf", "cross_ratio",
    "geodesic_distance", "axis", "reflection", "random_sl2", "polygon_ortholengths",
    "polygon_cross_ratios",
]
