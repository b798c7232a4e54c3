"""Moments of hitting functions: F2 quadrature, Vlamis integrals, average hitting time."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .moebius import IdealPolygon, is_inf, polygon_ortholengths
from .numerics import (
    ZETA3,
    QuadratureSpec,
    _require,
    check_real,
    integrate,
    integrate2d,
    polylog,
    sech2_half,
    sphere_volume,
)

BLOCK = 1 << 16


@dataclass(frozen=True)
class HittingSample:
    length: float

    def __post_init__(self):
        if not (self.length > 0 and math.isfinite(self.length)):
            raise DomainError("hitting length must be positive and finite")


@dataclass(frozen=True)
class MomentReport:
    k: int
    estimate: float
    stderr: float
    formula_value: float
    n_samples: int
    seed: int | None = None

    @property
    def z_score(self):
        if self.stderr == 0:
            return 0.0 if self.estimate == self.formula_value else math.inf
        return (self.estimate - self.formula_value) / self.stderr

    def to_dict(self):
        return {"k": self.k, "estimate": self.estimate, "stderr": self.stderr,
                "formula_value": self.formula_value, "n_samples": self.n_samples,
                "seed": self.seed}


def _positive(name, v):
    v = check_real(name, v)
    if v <= 0:
        raise DomainError(f"{name} must be > 0")
    return v


def chord_length(x, y, l):
    """Length of the part of geodesic (x, y) between the geodesics (-1, 1) and (-e^l, e^l)."""
    x, y = check_real("x", x), check_real("y", y, allow_inf=True)
    l = _positive("l", l)
    E = math.exp(l)
    if not (abs(x) < 1.0 < E < abs(y)):
        raise DomainError("geodesic (x, y) must cross both (-1, 1) and (-e^l, e^l)")
    if is_inf(y):
        s = 0.0
    else:
        s = E / y
    if s < 0:
        x, s = -x, -s
    return float(_chord_s(np.array([x]), np.array([s]), E)[0])


def _chord_s(x, s, E):
    """Chord length for the geodesic from x to y = E / s, 0 <= s < 1, |x| < 1.

    Intersection points with |z| = 1 and |z| = E share the denominator x s + E,
    which cancels in sinh(d/2) = |z1 - z2| / (2 sqrt(Im z1 Im z2)).
    """
    du = s * (E * E - 1.0)
    v1 = np.sqrt((1.0 - x) * (1.0 + x) * (E - s) * (E + s))
    v2 = E * np.sqrt((E - x) * (E + x) * (1.0 - s) * (1.0 + s))
    dv = v1 - v2
    return 2.0 * np.arcsinh(np.sqrt(du * du + dv * dv) / (2.0 * np.sqrt(v1 * v2)))


def chord_length_by_arclength(x, y, l, spec=None):
    """Independent check: integrate d theta / sin theta along the semicircle through x, y."""
    E = math.exp(l)
    c = 0.5 * (x + y)

    def angle(r):
        u = (x * y + r * r) / (x + y)
        return math.atan2(math.sqrt(max(r * r - u * u, 0.0)), u - c)

    t1, t2 = sorted((angle(1.0), angle(E)))
    res = integrate(lambda t: 1.0 / np.sin(t), (t1, t2), spec or QuadratureSpec(1e-13, 1e-13))
    return _require(res, "chord arclength")


def f2_quadrature(l, spec=None):
    """F2(l) as the double integral of 2 L(x, y, l) / (x - y)^2 over |x| < 1, |y| > e^l."""
    l = _positive("l", l)
    spec = spec or QuadratureSpec(abs_tol=1e-9, rel_tol=1e-9)
    E = math.exp(l)

    # y = E / s maps y > E onto 0 < s < 1; the y < -E branch is equal by symmetry
    def f(x, s):
        s = np.asarray(s, dtype=float)
        return 2.0 * _chord_s(x, s, E) * E / (E - x * s) ** 2

    res = integrate2d(f, (-1.0, 1.0), (0.0, 1.0), spec, smooth_endpoints=True)
    return 2.0 * _require(res, "f2_quadrature")


def vlamis_fnk(n, k, l, spec=None):
    """Vlamis moment density: sphere volume times the radial integral up to log coth(l/2)."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise DomainError("n must be an integer >= 2")
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise DomainError("k must be an integer >= 0")
    l = _positive("l", l)
    spec = spec or QuadratureSpec(abs_tol=1e-12, rel_tol=1e-12)
    R = math.log(1.0 / math.tanh(0.5 * l))
    coth = 1.0 / math.tanh(l)

    # in u = R - r, with cosh R = coth l, the gap coth l - cosh r is 2 sinh(R - u/2) sinh(u/2)
    def f(u):
        u = np.asarray(u, dtype=float)
        r = R - u
        out = np.sinh(r) ** (n - 2)
        if k:
            gap = 2.0 * np.sinh(R - 0.5 * u) * np.sinh(0.5 * u)
            out = out * np.log((coth + np.cosh(r)) / gap) ** k
        return out

    res = integrate(f, (0.0, R), spec, smooth_endpoints=True)
    return sphere_volume(n - 2) * _require(res, "vlamis_fnk")


def vlamis_first_moment_closed(l):
    """Li2(-tanh^2(l/2)) - Li2(tanh^2(l/2)) + pi^2/4."""
    t2 = math.tanh(0.5 * _positive("l", l)) ** 2
    return polylog(2, -t2) - polylog(2, t2) + math.pi ** 2 / 4.0


def bt_F(a):
    """The closed-form first-moment summand F(a), for a = sech^2(l/2) in (0, 1)."""
    a = check_real("a", a)
    if not 0.0 < a < 1.0:
        raise DomainError("bt_F needs 0 < a < 1")
    la = math.log(a)
    lb = math.log1p(-a)
    return math.fsum([
        -12.0 * ZETA3,
        -(4.0 * math.pi ** 2 / 3.0) * lb,
        6.0 * lb * lb * la,
        -4.0 * lb * la * la,
        -8.0 * (2.0 * la - lb) * polylog(2, a),
        24.0 * polylog(3, a),
        12.0 * polylog(3, 1.0 - a),
    ])


def average_hitting_formula(poly):
    """Average hitting time of an ideal polygon from its finite orthospectrum and its n cusps."""
    terms = [bt_F(sech2_half(l)) for _, _, l in polygon_ortholengths(poly)]
    area = math.pi * (poly.n - 2)
    return math.fsum(terms + [6.0 * ZETA3 * poly.n]) / (2.0 * math.pi * area)


def _triangle_map(a, b, c):
    """Real matrix sending -1, 1, inf to a, b, c (as a 2x2 numpy array)."""
    def to_zero_one_inf(p, q, r):
        # z -> (z - p)(q - r) / ((z - r)(q - p)) sends p, q, r to 0, 1, inf
        if is_inf(p):
            return np.array([[0.0, q - r], [1.0, -r]])
        if is_inf(q):
            return np.array([[1.0, -p], [1.0, -r]])
        if is_inf(r):
            return np.array([[1.0, -p], [0.0, q - p]])
        return np.array([[q - r, -p * (q - r)], [q - p, -r * (q - p)]])

    S = to_zero_one_inf(-1.0, 1.0, math.inf)
    T = to_zero_one_inf(a, b, c)
    return np.linalg.solve(T, S)


def _cayley(r):
    out = np.empty(r.shape, dtype=complex)
    inf = np.isinf(r)
    out[inf] = 1.0
    rr = r[~inf]
    out[~inf] = (rr - 1j) / (rr + 1j)
    return out


def _sample_block(maps, disk, normals, rng, m):
    n_tri = len(maps)
    tri = rng.integers(0, n_tri, size=m)
    phi = rng.uniform(0.0, math.pi, size=m)
    x = np.cos(phi)
    y = np.sqrt(np.maximum(1.0 - x * x, 0.0)) / (1.0 - rng.random(size=m))
    theta = rng.uniform(0.0, 2.0 * math.pi, size=m)
    z = x + 1j * y
    w = np.empty(m, dtype=complex)
    for t, (M, flip) in enumerate(maps):
        sel = tri == t
        zz = np.conj(z[sel]) if flip else z[sel]
        w[sel] = (M[0, 0] * zz + M[0, 1]) / (M[1, 0] * zz + M[1, 1])
    u, v = w.real, w.imag
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        centre = u + v * sin_t / cos_t
        rad = v / np.abs(cos_t)
    p = centre - rad
    q = centre + rad
    vertical = ~np.isfinite(p) | ~np.isfinite(q)
    p = np.where(vertical, u, p)
    q = np.where(vertical, np.inf, q)
    A = _cayley(p)
    B = _cayley(q)
    D = B - A
    # Cyrus-Beck clipping of the Klein chord A + t (B - A) against the polygon
    num = (normals[None, :].conj() * (A[:, None] - disk[None, :])).real
    den = (normals[None, :].conj() * D[:, None]).real
    with np.errstate(divide="ignore", invalid="ignore"):
        tt = -num / den
    t_in = np.max(np.where(den > 0, tt, 0.0), axis=1)
    t_out = np.min(np.where(den < 0, tt, 1.0), axis=1)
    return 0.5 * (np.log(t_out) + np.log1p(-t_in) - np.log(t_in) - np.log1p(-t_out))


def _polygon_setup(poly):
    vs = poly.vertices
    maps = []
    for k in range(1, poly.n - 1):
        M = _triangle_map(vs[0], vs[k], vs[k + 1])
        maps.append((M, np.linalg.det(M) < 0))
    disk = _cayley(np.array(vs, dtype=float))
    nxt = np.roll(disk, -1)
    edge = nxt - disk
    area2 = np.sum((disk.conj() * nxt).imag)
    inward = 1j * edge if area2 > 0 else -1j * edge
    return maps, disk, inward


def hitting_samples(poly, n_samples, seed, threads=None):
    """Chord lengths through n uniformly distributed unit tangent vectors of the polygon."""
    if seed is None:
        raise DomainError("a seed is required for Monte Carlo runs")
    if not isinstance(n_samples, (int, np.integer)) or n_samples < 1:
        raise DomainError("n_samples must be a positive integer")
    maps, disk, normals = _polygon_setup(poly)
    n_blocks = -(-int(n_samples) // BLOCK)
    children = np.random.SeedSequence(int(seed)).spawn(n_blocks)
    sizes = [BLOCK] * (n_blocks - 1) + [int(n_samples) - BLOCK * (n_blocks - 1)]

    def run(i):
        rng = np.random.default_rng(children[i])
        return _sample_block(maps, disk, normals, rng, sizes[i])

    threads = threads or int(os.environ.get("HYPID_THREADS", "1") or 1)
    if threads > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            blocks = list(ex.map(run, range(n_blocks)))
    else:
        blocks = [run(i) for i in range(n_blocks)]
    return np.concatenate(blocks)


def average_hitting_mc(poly, n_samples, seed, threads=None, return_samples=False):
    """Monte Carlo hitting-time moments k = 0 and k = 1 against the closed form."""
    samples = hitting_samples(poly, n_samples, seed, threads)
    mean = math.fsum(samples.tolist()) / len(samples)
    std = float(np.std(samples, ddof=1)) if len(samples) > 1 else 0.0
    formula = average_hitting_formula(poly)
    reports = [
        MomentReport(0, 1.0, 0.0, 1.0, len(samples), seed),
        MomentReport(1, mean, std / math.sqrt(len(samples)), formula, len(samples), seed),
    ]
    if return_samples:
        return reports, samples
    return reports


def stderr_slope(poly, sizes, seed):
    """Least-squares slope of log stderr against log n over independent runs."""
    errs = [average_hitting_mc(poly, int(n), seed + i)[1].stderr for i, n in enumerate(sizes)]
    slope = np.polyfit(np.log(np.asarray(sizes, dtype=float)), np.log(errs), 1)[0]
    return float(slope), errs


__all__ = [
    "HittingSample", "MomentReport", "chord_length", "chord_length_by_arclength", "f2_quadrature",
    "vlamis_fnk", "vlamis_first_moment_closed", "bt_F", "average_hitting_formula",
    "hitting_samples", "average_hitting_mc", "stderr_slope",
]
