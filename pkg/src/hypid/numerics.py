"""Scalar special functions, hyperbolic helpers and adaptive quadrature."""

from __future__ import annotations

import cmath
import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import special as _sp

from .errors import DomainError, QuadratureError

ZETA3 = 1.2020569031595942853997381615114499907649862923405
PI2_6 = math.pi ** 2 / 6.0


def check_real(name, value, *, allow_inf=False):
    """Return ``value`` as a float, rejecting NaN (and infinities unless allowed)."""
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if math.isnan(v):
        raise DomainError(f"{name} is NaN")
    if math.isinf(v) and not allow_inf:
        raise DomainError(f"{name} must be finite, got {v}")
    return v


def check_complex(name, value):
    try:
        z = complex(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a number, got {value!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {z}")
    return z


def fsum_complex(values):
    """Correctly rounded sum of complex (or real) values, real and imaginary parts separately."""
    values = list(values)
    re = math.fsum(complex(v).real for v in values)
    im = math.fsum(complex(v).imag for v in values)
    return complex(re, im)


# ---------------------------------------------------------------- polylog

@lru_cache(maxsize=None)
def _bernoulli_table(n):
    return tuple(float(b) for b in _sp.bernoulli(n))


@lru_cache(maxsize=None)
def zeta_int(s):
    """Riemann zeta at an integer s != 1."""
    if s == 1:
        raise DomainError("zeta has a pole at s = 1")
    if s == 0:
        return -0.5
    if s < 0:
        m = -s
        b = _bernoulli_table(m + 1)[m + 1]
        return (-1) ** m * b / (m + 1)
    if s == 3:
        return ZETA3
    return float(_sp.zeta(s, 1))


def _polylog_series(k, z):
    total = 0j
    zn = z
    n = 1
    while True:
        term = zn / n ** k
        total += term
        if abs(term) <= 1e-17 * abs(total) or n > 400:
            return total
        n += 1
        zn *= z


def _polylog_log_series(k, z):
    # expansion in mu = log z, valid for |mu| < 2 pi
    mu = cmath.log(z)
    harmonic = math.fsum(1.0 / j for j in range(1, k))
    special = mu ** (k - 1) / math.factorial(k - 1) * (harmonic - cmath.log(-mu))
    re_parts = [special.real]
    im_parts = [special.imag]
    small = 0
    for j in range(0, 160):
        if j == k - 1:
            continue
        s = k - j
        zs = zeta_int(s)
        if zs == 0.0:
            continue
        term = zs * mu ** j / math.factorial(j)
        re_parts.append(term.real)
        im_parts.append(term.imag)
        if abs(term) < 1e-18:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return complex(math.fsum(re_parts), math.fsum(im_parts))


def polylog(k, z):
    """Li_k(z) for integer k >= 0 and |z| <= 1.

    Returns a float for real ``z`` and a complex otherwise.
    """
    if not isinstance(k, (int, np.integer)) or k < 0:
        raise DomainError(f"polylog order must be a non-negative integer, got {k!r}")
    k = int(k)
    real_input = isinstance(z, (int, float, np.floating, np.integer))
    zc = check_complex("z", z)
    if abs(zc) > 1.0 + 1e-15:
        raise DomainError(f"polylog is implemented for |z| <= 1 only, got |z| = {abs(zc)}")
    if zc == 1:
        if k <= 1:
            raise DomainError(f"Li_{k} has a singularity at z = 1")
        return zeta_int(k) if real_input else complex(zeta_int(k))
    if k == 0:
        val = zc / (1 - zc)
    elif k == 1:
        val = -cmath.log(1 - zc) if not real_input else complex(-math.log1p(-zc.real))
    elif abs(zc) <= 0.5:
        val = _polylog_series(k, zc)
    else:
        val = _polylog_log_series(k, zc)
    if real_input:
        return float(val.real)
    return complex(val)


def rogers(x):
    """Rogers dilogarithm Li2(x) + log(x) log(1 - x) / 2 on [0, 1]."""
    x = check_real("x", x)
    if x < 0.0 or x > 1.0:
        raise DomainError(f"rogers is defined on [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return PI2_6
    if x == 0.5:
        return PI2_6 / 2.0
    return polylog(2, x) + 0.5 * math.log(x) * math.log1p(-x)


# ---------------------------------------------------------------- hyperbolic helpers

_LOG2 = math.log(2.0)


def log_cosh(t):
    t = abs(t)
    return t + math.log1p(math.exp(-2.0 * t)) - _LOG2


def log_sinh(t):
    if t <= 0:
        raise DomainError("log_sinh needs t > 0")
    if t < 1.0:
        return math.log(math.sinh(t))
    return t + math.log1p(-math.exp(-2.0 * t)) - _LOG2


def acosh1p(delta):
    """acosh(1 + delta) without cancellation for small delta."""
    if delta < 0:
        raise DomainError("acosh1p needs delta >= 0")
    return math.log1p(delta + math.sqrt(delta * (delta + 2.0)))


def acosh_from_log(log_x):
    """acosh(exp(log_x)) for log_x >= 0, safe when exp(log_x) overflows."""
    if log_x < 0:
        raise DomainError("acosh argument below 1")
    if log_x < 20.0:
        return math.acosh(math.exp(log_x))
    return log_x + math.log1p(math.sqrt(-math.expm1(-2.0 * log_x)))


def sech2_half(l):
    """sech^2(l/2) = 4 e^-l / (1 + e^-l)^2, finite for every l >= 0."""
    e = math.exp(-abs(l))
    return 4.0 * e / (1.0 + e) ** 2


def sphere_volume(k):
    """Volume of the unit k-sphere in R^(k+1); the 0-sphere has volume 2."""
    if k < 0:
        raise DomainError("sphere dimension must be >= 0")
    return 2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0)


def ball_volume(k, r, spec=None):
    """Volume of a radius-r ball in hyperbolic k-space."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise DomainError("ball dimension must be an integer >= 1")
    r = check_real("r", r)
    if r < 0:
        raise DomainError("radius must be >= 0")
    if r == 0.0:
        return 0.0
    if k == 1:
        return 2.0 * r
    if k == 2:
        return 4.0 * math.pi * math.sinh(0.5 * r) ** 2
    if k == 3:
        t = 2.0 * r
        if t < 0.5:
            s, term, n = 0.0, t, 1
            while True:
                term *= t * t / ((n + 1) * (n + 2))
                n += 2
                s += term
                if term < 1e-18 * s:
                    break
            return math.pi * s
        return math.pi * (math.sinh(t) - t)
    spec = spec or QuadratureSpec(abs_tol=1e-14, rel_tol=1e-13)
    res = integrate(lambda t: np.sinh(t) ** (k - 1), (0.0, r), spec)
    _require(res, "ball_volume")
    return sphere_volume(k - 1) * res.value


# ---------------------------------------------------------------- quadrature

@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {v!r}")
        if not isinstance(self.max_subdivisions, (int, np.integer)) or self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be an integer >= 1")

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    converged: bool
    n_evals: int
    n_intervals: int

    def __float__(self):
        return float(self.value)


def _require(res, what):
    if not res.converged:
        raise QuadratureError(
            f"{what}: quadrature tolerance not met (estimate {res.value!r}, error {res.error!r})", res
        )
    return res.value


_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KW = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GW = np.zeros(15)
_GW[1:7:2] = _WG[:3]
_GW[7] = _WG[3]
_GW[9:15:2] = _WG[2::-1]
_EPS = np.finfo(float).eps


def _gk_many(g, intervals):
    """Apply G7-K15 on a batch of (a, b) intervals with one integrand call."""
    ab = np.asarray(intervals, dtype=float)
    centre = 0.5 * (ab[:, 0] + ab[:, 1])
    half = 0.5 * (ab[:, 1] - ab[:, 0])
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(g(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise DomainError(f"integrand is not finite at interior point {bad!r}")
    kron = fx @ _KW
    gauss = fx @ _GW
    mean = kron / 2.0
    resasc = np.abs(fx - mean[:, None]) @ _KW
    resabs = np.abs(fx) @ _KW
    err = np.abs(kron - gauss) * np.abs(half)
    resasc = resasc * np.abs(half)
    resabs = resabs * np.abs(half)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = np.where(
            (resasc != 0) & (err != 0),
            resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5),
            err,
        )
    floor = np.where(resabs > np.finfo(float).tiny / (50 * _EPS), 50 * _EPS * resabs, 0.0)
    err = np.maximum(scaled, floor)
    return kron * half, err


def integrate(f, domain, spec=None, *, points=(), vectorized=True, smooth_endpoints=False):
    """Adaptive Gauss-Kronrod quadrature of f over an interval or rectangle.

    ``domain`` is ``(a, b)`` or ``((a, b), (c, d))``. Declared ``points`` split
    the interval; ``smooth_endpoints`` applies a polynomial change of variable
    on every piece that flattens integrable endpoint singularities. The result
    carries a ``converged`` flag instead of silently returning a bad value.
    """
    spec = spec or QuadratureSpec()
    if len(domain) == 2 and all(isinstance(d, (tuple, list)) for d in domain):
        return integrate2d(f, domain[0], domain[1], spec, x_points=points,
                           smooth_endpoints=smooth_endpoints)
    a, b = (check_real("a", domain[0]), check_real("b", domain[1]))
    if a == b:
        return QuadratureResult(0.0, 0.0, True, 0, 0)
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    cuts = sorted({a, b, *(check_real("point", p) for p in points if a < p < b)})
    pieces = list(zip(cuts[:-1], cuts[1:]))

    if vectorized:
        fv = f
    else:
        def fv(x):
            return np.array([f(float(t)) for t in np.ravel(x)], dtype=float)

    def mapped(piece):
        lo, hi = piece
        width = hi - lo
        if not smooth_endpoints:
            return lambda u: fv(u)
        def g(u):
            x = lo + width * u * u * (3.0 - 2.0 * u)
            return fv(x) * (6.0 * width) * u * (1.0 - u)
        return g

    funcs = [mapped(p) for p in pieces]
    base = [(0.0, 1.0) if smooth_endpoints else p for p in pieces]

    heap = []
    frozen = []
    n_evals = 0
    for pid, (lo, hi) in enumerate(base):
        val, err = _gk_many(funcs[pid], [(lo, hi)])
        n_evals += 15
        heapq.heappush(heap, (-err[0], pid, lo, hi, val[0]))
    n_sub = 0

    def totals():
        items = heap + frozen
        return (math.fsum(v[4] for v in items), math.fsum(-v[0] for v in items))

    value, error = totals()
    while error > spec.tolerance(value) and heap:
        if n_sub >= spec.max_subdivisions:
            break
        negerr, pid, lo, hi, val = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or (hi - lo) <= 4 * _EPS * max(abs(lo), abs(hi), 1e-300):
            frozen.append((negerr, pid, lo, hi, val))
            continue
        vals, errs = _gk_many(funcs[pid], [(lo, mid), (mid, hi)])
        n_evals += 30
        n_sub += 1
        heapq.heappush(heap, (-errs[0], pid, lo, mid, vals[0]))
        heapq.heappush(heap, (-errs[1], pid, mid, hi, vals[1]))
        value, error = totals() if n_sub % 64 == 0 else (value - val + vals[0] + vals[1],
                                                         error + negerr + errs[0] + errs[1])
    value, error = totals()
    converged = error <= spec.tolerance(value)
    return QuadratureResult(sign * value, error, bool(converged), n_evals, len(heap) + len(frozen))


def integrate2d(f, x_range, y_range, spec=None, *, x_points=(), y_points=(), smooth_endpoints=False):
    """Iterated quadrature of f(x, y) with f vectorized in y.

    ``y_range`` entries and ``y_points`` may be callables of x.
    """
    spec = spec or QuadratureSpec()
    a, b = x_range
    inner_spec = QuadratureSpec(
        abs_tol=spec.abs_tol / (10.0 * max(abs(b - a), 1.0)),
        rel_tol=spec.rel_tol / 10.0,
        max_subdivisions=spec.max_subdivisions,
    )
    worst = {"ok": True, "evals": 0}

    def inner(x):
        c = y_range[0](x) if callable(y_range[0]) else y_range[0]
        d = y_range[1](x) if callable(y_range[1]) else y_range[1]
        pts = y_points(x) if callable(y_points) else y_points
        res = integrate(lambda y: f(x, y), (c, d), inner_spec, points=pts,
                        smooth_endpoints=smooth_endpoints)
        worst["ok"] = worst["ok"] and res.converged
        worst["evals"] += res.n_evals
        return res.value

    outer = integrate(inner, (a, b), spec, points=x_points, vectorized=False,
                      smooth_endpoints=smooth_endpoints)
    # each converged inner error is below its own tolerance, so their integral
    # is at most abs_tol |b - a| + rel_tol * (integral of |inner|)
    inner_bound = inner_spec.abs_tol * abs(b - a) + inner_spec.rel_tol * abs(outer.value)
    err = outer.error + inner_bound
    ok = outer.converged and worst["ok"] and err <= spec.tolerance(outer.value) * 1.5
    return QuadratureResult(outer.value, err, bool(ok), worst["evals"], outer.n_intervals)


__all__ = [
    "ZETA3", "polylog", "rogers", "zeta_int", "ball_volume", "sphere_volume",
    "QuadratureSpec", "QuadratureResult", "integrate", "integrate2d", "fsum_complex",
    "log_cosh", "log_sinh", "sech2_half", "acosh1p", "acosh_from_log", "check_real", "check_complex",
]
