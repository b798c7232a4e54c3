"""Pairs of pants and one-holed tori: perpendiculars, gap functions and summands."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RogersRangeError
from .numerics import (
    QuadratureSpec,
    _require,
    acosh1p,
    acosh_from_log,
    check_real,
    integrate2d,
    log_cosh,
    log_sinh,
    rogers,
)

_LOG2 = math.log(2.0)
RANGE_TOL = 1e-12


def _positive(name, v):
    v = check_real(name, v)
    if v <= 0:
        raise DomainError(f"{name} must be > 0, got {v}")
    return v


def _nonneg(name, v):
    v = check_real(name, v)
    if v < 0:
        raise DomainError(f"{name} must be >= 0, got {v}")
    return v


@dataclass(frozen=True)
class PantsMetric:
    """Boundary lengths l_i, seam lengths m_i (between boundaries i+1, i+2), and
    lengths n_i of the simple orthogeodesic from boundary i to itself."""

    l1: float
    l2: float
    l3: float
    m1: float
    m2: float
    m3: float
    n1: float
    n2: float
    n3: float

    @property
    def l(self):
        return (self.l1, self.l2, self.l3)

    @property
    def m(self):
        return (self.m1, self.m2, self.m3)

    @property
    def n(self):
        return (self.n1, self.n2, self.n3)


@dataclass(frozen=True)
class TorusSummandInput:
    a: float
    mA: float

    def __post_init__(self):
        _positive("a", self.a)
        _positive("mA", self.mA)


def _acosh1p_log(log_delta):
    if log_delta < 40.0:
        return acosh1p(math.exp(log_delta))
    return log_delta + _LOG2


def _seam(a, b, c):
    # cosh m - 1 = (cosh a + cosh(b - c)) / (sinh b sinh c), half-lengths a, b, c
    log_delta = np.logaddexp(log_cosh(a), log_cosh(b - c)) - log_sinh(b) - log_sinh(c)
    return _acosh1p_log(float(log_delta))


def pants_perpendiculars(l1, l2, l3):
    """Seam and self-orthogeodesic lengths of the pants with boundary lengths l1, l2, l3."""
    ls = tuple(_positive(f"l{i + 1}", v) for i, v in enumerate((l1, l2, l3)))
    h = [0.5 * v for v in ls]
    m = [_seam(h[i], h[(i + 1) % 3], h[(i + 2) % 3]) for i in range(3)]
    n = []
    for i in range(3):
        log_c = log_sinh(m[(i + 2) % 3]) + log_sinh(h[(i + 1) % 3])
        n.append(2.0 * acosh_from_log(max(log_c, 0.0)))
    return PantsMetric(*ls, *m, *n)


def self_orthogeodesic_alt(metric, i):
    """Second hexagon formula for n_i, used as a consistency check."""
    log_c = log_sinh(metric.m[(i + 1) % 3]) + log_sinh(0.5 * metric.l[(i + 2) % 3])
    return 2.0 * acosh_from_log(max(log_c, 0.0))


def gap_D(x, y, z):
    """D(x, y, z) = 2 log((e^{x/2} + e^{(y+z)/2}) / (e^{-x/2} + e^{(y+z)/2}))."""
    x = _positive("x", x)
    y, z = _nonneg("y", y), _nonneg("z", z)
    s = 0.5 * (y + z)
    h = 0.5 * x
    # D = 4 atanh(sinh h / (cosh h + e^s)), rescaled to avoid overflow
    gap = s - h
    if gap > 700.0:
        r = -math.expm1(-x) * 0.5 * math.exp(-gap)
    else:
        r = -math.expm1(-x) / (1.0 + math.exp(-x) + 2.0 * math.exp(gap))
    return 4.0 * math.atanh(r)


def _log_cosh_sum(u, v):
    return float(np.logaddexp(log_cosh(u), log_cosh(v)))


def gap_R(x, y, z):
    """R(x, y, z) = x - log((cosh(y/2) + cosh((x+z)/2)) / (cosh(y/2) + cosh((x-z)/2)))."""
    x = _positive("x", x)
    y, z = _nonneg("y", y), _nonneg("z", z)
    return x - (_log_cosh_sum(0.5 * y, 0.5 * (x + z)) - _log_cosh_sum(0.5 * y, 0.5 * (x - z)))


def cusp_gap(y, z):
    """1 / (1 + e^{(y+z)/2})."""
    s = 0.5 * (_nonneg("y", y) + _nonneg("z", z))
    e = math.exp(-s)
    return e / (1.0 + e)


def basmajian_width(l):
    """2 log coth(l/2): length of the boundary interval shadowed by an orthogeodesic."""
    l = _positive("l", l)
    return 2.0 * (math.log1p(math.exp(-l)) - math.log(-math.expm1(-l)))


def _R(arg):
    if arg < -RANGE_TOL or arg > 1.0 + RANGE_TOL or math.isnan(arg):
        raise RogersRangeError(f"Rogers argument {arg!r} outside [0, 1]")
    return rogers(min(1.0, max(0.0, arg)))


def _lasso_arguments(l, m):
    """(1-x)/(1-xy), (1-y)/(1-xy), y and (1-y)^2 x / ((1-x)^2 y) for x = e^-l, y = tanh^2(m/2)."""
    x = math.exp(-l)
    one_x = -math.expm1(-l)
    y = math.tanh(0.5 * m) ** 2
    one_y = 1.0 / math.cosh(0.5 * m) ** 2
    one_xy = one_x + x * one_y
    inv_c = math.exp(-2.0 * (log_sinh(m) + log_sinh(0.5 * l)))
    return one_x / one_xy, one_y / one_xy, y, inv_c


def luo_tan_pair_term(l, m):
    """One ordered-pair summand of f(P): boundary of length l, seam of length m leaving it."""
    u, v, y, w = _lasso_arguments(l, m)
    return 2.0 * _R(u) - 2.0 * _R(v) - _R(y) - _R(w)


def luo_tan_f(p):
    """Luo-Tan summand f(P) for an embedded pair of pants, summed over ordered pairs i != j."""
    terms = [luo_tan_pair_term(p.l[i], p.m[j]) for i in range(3) for j in range(3) if i != j]
    return 4.0 * math.fsum(terms)


def luo_tan_g_summand(s):
    """Summand of g(T) for an interior simple closed geodesic A of a one-holed torus."""
    u, v, y, w = _lasso_arguments(s.a, s.mA)
    return 2.0 * _R(u) - 2.0 * _R(v) - 2.0 * _R(y) - _R(w)


def torus_summand_input(a, boundary_length):
    """(a, m_A) where m_A is the cuff-to-boundary seam of the cut pants (a, a, L)."""
    p = pants_perpendiculars(a, a, boundary_length)
    return TorusSummandInput(a, p.m1)


def lasso_closed(l, m):
    """Closed form of the lasso volume La(l, m)."""
    l, m = _positive("l", l), _positive("m", m)
    u, v, y, _ = _lasso_arguments(l, m)
    return 2.0 * (_R(y) - _R(u) + _R(v))


def lasso_endpoints(l, m):
    """(c, d) = (e^l, e^l coth^2(m/2))."""
    c = math.exp(l)
    return c, c / math.tanh(0.5 * m) ** 2


def lasso_integrand(x, y, c, d):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    logs = np.log(y) + np.log(c - x) + np.log(d - x) - np.log(x) - np.log(y - c) - np.log(d - y)
    return logs / (y - x) ** 2


def lasso_integral(l, m, spec=None):
    """La(l, m) by iterated quadrature of the double integral over (0,1) x (c,d)."""
    l, m = _positive("l", l), _positive("m", m)
    spec = spec or QuadratureSpec(abs_tol=1e-10, rel_tol=1e-10)
    c, d = lasso_endpoints(l, m)
    res = integrate2d(lambda x, y: lasso_integrand(x, y, c, d), (0.0, 1.0), (c, d), spec,
                      smooth_endpoints=True)
    return _require(res, "lasso_integral")


__all__ = [
    "PantsMetric", "TorusSummandInput", "pants_perpendiculars", "self_orthogeodesic_alt",
    "gap_D", "gap_R", "cusp_gap", "basmajian_width", "luo_tan_f", "luo_tan_pair_term",
    "luo_tan_g_summand", "torus_summand_input", "lasso_closed", "lasso_integral",
    "lasso_endpoints", "lasso_integrand",
]
