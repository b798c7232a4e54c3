"""Identity evaluators returning IdentityReport objects."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

from . import __version__
from .errors import BQConditionError, DomainError, SingularTermError
from .moebius import polygon_cross_ratios, polygon_ortholengths
from .numerics import check_real, fsum_complex, rogers, sech2_half
from .orthospectrum import cached_spectrum, unoriented
from .panttorus import basmajian_width, gap_D
from .tracetree import (
    bq_check,
    enumerate_primitives,
    lambda_from_trace,
    length_from_trace,
)

MU_TOL = 1e-9
BOUND_TOL = 1e-12
BRANCH_WARN = 1e-3


@dataclass
class IdentityReport:
    identity_name: str
    target: complex
    partial_sum: complex
    n_terms: int
    cutoff: float
    monotone_increasing: bool
    bounded: bool = True
    terms: list | None = None
    mod_2pi_i: bool = False
    extra: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    @property
    def residual(self):
        diff = complex(self.target) - complex(self.partial_sum)
        if self.mod_2pi_i:
            diff = complex(diff.real, _reduce_angle(diff.imag))
        return abs(diff)

    def to_dict(self, include_terms=False):
        out = {
            "identity": self.identity_name,
            "target": encode_number(self.target),
            "partial_sum": encode_number(self.partial_sum),
            "residual": self.residual,
            "n_terms": self.n_terms,
            "cutoff": encode_number(self.cutoff),
            "monotone": bool(self.monotone_increasing),
            "bounded": bool(self.bounded),
        }
        if include_terms and self.terms is not None:
            out["terms"] = [[d, encode_number(v)] for d, v in self.terms]
        if self.extra:
            out["extra"] = self.extra
        out["config"] = self.config
        out["version"] = __version__
        return out


def encode_number(v):
    if isinstance(v, complex):
        if v.imag == 0:
            return v.real
        return {"re": v.real, "im": v.imag}
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    return v


def _reduce_angle(t):
    """Reduce to (-pi, pi]."""
    r = math.fmod(t, 2.0 * math.pi)
    if r > math.pi:
        r -= 2.0 * math.pi
    elif r <= -math.pi:
        r += 2.0 * math.pi
    return r


def _assemble(name, target, terms, cutoff, include_terms, *, real=True, mod_2pi_i=False,
              extra=None, config=None):
    """Sum terms in a fixed order (largest modulus first) with exact rounding."""
    ordered = sorted(terms, key=lambda t: (-abs(t[1]), t[0]))
    total = fsum_complex(v for _, v in ordered)
    partial = total.real if real else total
    monotone = real and all(complex(v).imag == 0 and complex(v).real > 0 for _, v in terms)
    bounded = (not real) or partial <= complex(target).real + BOUND_TOL
    return IdentityReport(
        identity_name=name,
        target=target,
        partial_sum=partial,
        n_terms=len(terms),
        cutoff=cutoff,
        monotone_increasing=bool(monotone),
        bounded=bool(bounded),
        terms=ordered if include_terms else None,
        mod_2pi_i=mod_2pi_i,
        extra=extra or {},
        config=config or {},
    )


def _descriptor(p):
    if p.depth == 0:
        return "xyz"[p.slot - 1]
    return "".join(str(k) for k in p.path)


def _require_bq(seed, budget):
    res = bq_check(seed, budget)
    if not res.satisfied:
        raise BQConditionError(f"BQ check {res.status.value}: {res.reason}", res)
    return res


def _check_mu(seed, expected):
    scale = max(1.0, abs(seed.x) ** 2 + abs(seed.y) ** 2 + abs(seed.z) ** 2)
    if abs(seed.mu - expected) > MU_TOL * scale:
        raise DomainError(f"seed has mu = {seed.mu}, expected {expected}")


def _primitives(seed, trace_cutoff, bq_budget, mu=None):
    # BQ first: a seed in the elliptic range should report its witness
    _require_bq(seed, bq_budget)
    if mu is not None:
        _check_mu(seed, mu)
    return enumerate_primitives(seed, trace_cutoff)


def _h_half(x):
    """h(x)/2 = 1/(1 + e^l): half the McShane summand 1 - sqrt(1 - 4/x^2), computed stably."""
    x = complex(x)
    u = 4.0 / (x * x)
    return 0.5 * u / (1.0 + cmath.sqrt(1.0 - u))


def _clean(v, real):
    return complex(v).real if real else complex(v)


def _seed_config(seed, trace_cutoff, **kw):
    cfg = {"seed": [encode_number(complex(v)) for v in seed.values],
           "trace_cutoff": encode_number(float(trace_cutoff))}
    cfg.update(kw)
    return cfg


def mcshane_terms(prims, real):
    return [(_descriptor(p), _clean(_h_half(p.value), real)) for p in prims]


def htz_terms(prims, mu, real):
    out = []
    for p in prims:
        x = complex(p.value)
        x2 = x * x
        if abs(x2 - mu) <= 1e-12 * max(1.0, abs(x2)):
            raise SingularTermError(f"x^2 = mu at trace {p.value}")
        u = 4.0 / x2
        s = cmath.sqrt(1.0 - u)
        h = u / (1.0 + s)
        g = h - s * mu / (3.0 * (x2 - mu))
        out.append((_descriptor(p), _clean(0.5 * g, real)))
    return out


def mcshane_torus(seed, trace_cutoff, *, include_terms=False, bq_budget=40):
    """Sum of 1/(1 + e^l) over simple closed geodesics of a cusped torus; target 1/2."""
    prims = _primitives(seed, trace_cutoff, bq_budget, 0.0)
    real = seed.is_real
    return _assemble("mcshane", 0.5, mcshane_terms(prims, real), float(trace_cutoff),
                     include_terms, real=real, config=_seed_config(seed, trace_cutoff))


def htz(seed, trace_cutoff, *, include_terms=False, bq_budget=40):
    """Generalised McShane sum with the mu-dependent summand g(x)/2; target 1/2."""
    prims = _primitives(seed, trace_cutoff, bq_budget)
    mu = complex(seed.mu)
    if seed.is_real:
        mu = mu.real
    real = seed.is_real
    return _assemble("htz", 0.5, htz_terms(prims, mu, real), float(trace_cutoff),
                     include_terms, real=real, config=_seed_config(seed, trace_cutoff))


def _frak_h(x, nu):
    """log((e^nu + e^l) / (e^-nu + e^l)) with e^l = lambda^2."""
    lam = lambda_from_trace(x)
    inv = 1.0 / (lam * lam)
    return _log1p(cmath.exp(nu) * inv) - _log1p(cmath.exp(-nu) * inv)


def _log1p(w):
    w = complex(w)
    if abs(w) < 1e-4:
        total, term, k = 0j, w, 1
        while True:
            total += term / k
            k += 1
            term *= -w
            if abs(term) < 1e-18 * abs(total):
                return total
    if w.imag == 0 and w.real > -1:
        return complex(math.log1p(w.real))
    return cmath.log(1.0 + w)


def twz_terms(prims, nu, real):
    return [(_descriptor(p), _clean(_frak_h(p.value, nu), real)) for p in prims]


def twz(seed, tau, trace_cutoff, *, include_terms=False, bq_budget=40):
    """Sum of the TWZ summand over simple closed geodesics; target acosh(-tau/2) mod 2 pi i."""
    tau = complex(tau)
    if abs(tau - 2.0) < 1e-12:
        raise DomainError("tau = 2 is excluded")
    if abs(tau + 2.0) < 1e-12:
        raise DomainError("tau = -2 is the cusped case; use mcshane_torus")
    prims = _primitives(seed, trace_cutoff, bq_budget, tau + 2.0)
    nu = cmath.acosh(-tau / 2.0)
    real = seed.is_real and tau.imag == 0 and tau.real < -2.0
    target = nu.real if real else nu
    rep = _assemble("twz", target, twz_terms(prims, nu, real), float(trace_cutoff), include_terms,
                    real=real, mod_2pi_i=not real,
                    config=_seed_config(seed, trace_cutoff, tau=encode_number(tau)))
    if not real:
        gap = _reduce_angle((complex(rep.partial_sum) - nu).imag)
        if abs(gap) > math.pi - BRANCH_WARN:
            rep.extra["branch_warning"] = True
            warnings.warn("TWZ partial sum is within 1e-3 of the 2 pi i branch cut", stacklevel=2)
    return rep


def _luo_tan_term(x):
    x = float(x)
    inv_lam2 = 1.0 / lambda_from_trace(x).real ** 2  # e^-l
    sech2 = 4.0 / (x * x)
    return rogers(sech2) + 2.0 * (rogers(0.5 * (1.0 + inv_lam2)) - rogers(0.5 * (1.0 - inv_lam2)))


def luo_tan_torus(seed, trace_cutoff, *, include_terms=False, bq_budget=40):
    """Luo-Tan sum over simple closed geodesics of a cusped torus; target pi^2/2."""
    if not seed.is_real:
        raise DomainError("luo_tan_torus needs a real (Fuchsian) seed")
    prims = _primitives(seed, trace_cutoff, bq_budget, 0.0)
    terms = [(_descriptor(p), _luo_tan_term(abs(p.value))) for p in prims]
    return _assemble("luo-tan-torus", math.pi ** 2 / 2.0, terms, float(trace_cutoff),
                     include_terms, config=_seed_config(seed, trace_cutoff))


def mirzakhani_terms(prims, L1):
    return [(_descriptor(p), gap_D(L1, length_from_trace(p.value), length_from_trace(p.value)))
            for p in prims]


def mirzakhani_torus(L1, seed, trace_cutoff, *, include_terms=False, bq_budget=40):
    """Sum of D(L1, l, l) over simple closed geodesics of a one-holed torus; target L1."""
    L1 = check_real("L1", L1)
    if L1 <= 0:
        raise DomainError("boundary length must be > 0")
    if not seed.is_real:
        raise DomainError("mirzakhani_torus needs a real (Fuchsian) seed")
    prims = _primitives(seed, trace_cutoff, bq_budget, 2.0 - 2.0 * math.cosh(0.5 * L1))
    return _assemble("mirzakhani-torus", L1, mirzakhani_terms(prims, L1), float(trace_cutoff),
                     include_terms, config=_seed_config(seed, trace_cutoff, L1=L1))


def polygon_bridgeman(poly, *, include_terms=False):
    """Finite identity of an ideal polygon, by ortholengths and by cross-ratios."""
    n = poly.n
    length_terms = [(f"{i},{j}", 8.0 * rogers(sech2_half(l)))
                    for i, j, l in polygon_ortholengths(poly)]
    cr_terms = [(f"{i},{j}", rogers(w)) for i, j, w in polygon_cross_ratios(poly)]
    rep = _assemble("polygon", 4.0 * math.pi ** 2 * (n - 3) / 3.0, length_terms, math.inf,
                    include_terms, config={"vertices": [encode_number(v) for v in poly.vertices]})
    cr = _assemble("polygon-cross-ratio", (n - 3) * math.pi ** 2 / 6.0, cr_terms, math.inf, False)
    rep.extra["cross_ratio_form"] = {
        "target": cr.target, "partial_sum": cr.partial_sum, "residual": cr.residual,
    }
    if include_terms:
        rep.extra["cross_ratio_terms"] = [[d, v] for d, v in cr_terms]
    return rep


def pants_spectrum(l1, l2, l3, cutoff, max_depth=400):
    ls = tuple(check_real(f"l{i}", v) for i, v in enumerate((l1, l2, l3), 1))
    if min(ls) <= 0:
        raise DomainError("boundary lengths must be > 0")
    return cached_spectrum(*ls, float(cutoff), max_depth)


def _pants_report(name, target, per_oriented, l1, l2, l3, cutoff, include_terms, max_depth):
    recs = pants_spectrum(l1, l2, l3, cutoff, max_depth)
    # one unit per unoriented orthogeodesic, carrying both orientations' contributions
    terms = [(f"{r.from_boundary}->{r.to_boundary}:{r.word_str}", 2.0 * per_oriented(r.length))
             for r in unoriented(recs)]
    rep = _assemble(name, target, terms, float(cutoff), include_terms,
                    config={"lengths": [l1, l2, l3], "cutoff": float(cutoff)})
    rep.extra["n_oriented"] = len(recs)
    return rep


def basmajian_pants(l1, l2, l3, cutoff, *, include_terms=False, max_depth=400):
    """Sum of 2 log coth(l/2) over oriented orthogeodesics; target l1 + l2 + l3."""
    return _pants_report("basmajian-pants", float(l1) + float(l2) + float(l3), basmajian_width,
                         l1, l2, l3, cutoff, include_terms, max_depth)


def bridgeman_pants(l1, l2, l3, cutoff, *, include_terms=False, max_depth=400):
    """Sum of 4 R(sech^2(l/2)) over oriented orthogeodesics; target 4 pi^2."""
    return _pants_report("bridgeman-pants", 4.0 * math.pi ** 2,
                         lambda l: 4.0 * rogers(sech2_half(l)),
                         l1, l2, l3, cutoff, include_terms, max_depth)


__all__ = [
    "IdentityReport", "mcshane_torus", "htz", "twz", "luo_tan_torus", "mirzakhani_torus",
    "polygon_bridgeman", "basmajian_pants", "bridgeman_pants", "mcshane_terms", "htz_terms",
    "twz_terms", "mirzakhani_terms", "encode_number", "pants_spectrum",
]
