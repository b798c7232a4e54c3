"""Quick invariant suite behind ``hypid selftest``."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .identities import basmajian_pants, htz, mcshane_torus, pants_spectrum, polygon_bridgeman
from .moebius import IdealPolygon
from .moments import chord_length, chord_length_by_arclength, f2_quadrature, vlamis_fnk
from .numerics import polylog, rogers, sech2_half
from .orthospectrum import pants_group, record_length
from .panttorus import basmajian_width, lasso_closed, lasso_integral
from .tracetree import BQStatus, TraceTriple, bq_check


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _euler(rng):
    x = rng.uniform(0.0, 1.0, 200)
    worst = max(abs(rogers(v) + rogers(1.0 - v) - math.pi ** 2 / 6.0) for v in x)
    return worst <= 1e-12, f"max error {worst:.3g}"


def _pentagon(rng):
    worst = 0.0
    for _ in range(200):
        x, y = rng.uniform(0.0, 1.0, 2)
        lhs = rogers(x) + rogers(y)
        rhs = rogers(x * y) + rogers(x * (1 - y) / (1 - x * y)) + rogers(y * (1 - x) / (1 - x * y))
        worst = max(worst, abs(lhs - rhs))
    return worst <= 1e-11, f"max error {worst:.3g}"


def _li2_special(rng):
    err = abs(polylog(2, 1.0) - math.pi ** 2 / 6.0) + abs(polylog(2, -1.0) + math.pi ** 2 / 12.0)
    return err <= 1e-14, f"error {err:.3g}"


def _polygons(rng):
    worst = 0.0
    for n in (4, 5, 6):
        for _ in range(10):
            rep = polygon_bridgeman(IdealPolygon.random(n, rng, include_inf=bool(rng.integers(2))))
            worst = max(worst, rep.residual, rep.extra["cross_ratio_form"]["residual"])
    return worst <= 1e-11, f"max residual {worst:.3g}"


def _mcshane(rng):
    seed = TraceTriple(3, 3, 3)
    a, b = mcshane_torus(seed, 1e3), htz(seed, 1e3)
    ok = a.monotone_increasing and a.bounded and a.partial_sum == b.partial_sum
    return ok, f"partial sum {a.partial_sum:.12f}, htz identical: {a.partial_sum == b.partial_sum}"


def _bq(rng):
    good = bq_check(TraceTriple(3, 3, 3)).status is BQStatus.SATISFIED
    bad = bq_check(TraceTriple(2, 2, 2)).status is BQStatus.VIOLATED
    return good and bad, f"(3,3,3) satisfied: {good}, (2,2,2) violated: {bad}"


def _pants(rng):
    G = pants_group(1.0, 1.0, 1.0)
    recs = pants_spectrum(1.0, 1.0, 1.0, 5.0)
    worst = max(abs(record_length(G, r) - r.length) for r in recs)
    rep = basmajian_pants(1.0, 1.0, 1.0, 5.0)
    ok = worst <= 1e-9 and rep.bounded and rep.monotone_increasing
    return ok, f"{len(recs)} records, matrix mismatch {worst:.3g}, sum {rep.partial_sum:.6f}"


def _lasso(rng):
    err = abs(lasso_integral(1.0, 1.0) - lasso_closed(1.0, 1.0))
    return err <= 1e-6, f"error {err:.3g}"


def _f2(rng):
    rel = abs(f2_quadrature(1.0) / (4.0 * rogers(sech2_half(1.0))) - 1.0)
    return rel <= 2e-3, f"relative error {rel:.3g}"


def _vlamis(rng):
    err = max(abs(vlamis_fnk(2, 0, l) - basmajian_width(l)) for l in (0.5, 1.0, 2.0))
    return err <= 1e-10, f"error {err:.3g}"


def _chords(rng):
    worst = 0.0
    for _ in range(20):
        l = rng.uniform(0.2, 3.0)
        x = rng.uniform(-0.99, 0.99)
        y = math.exp(l) * rng.uniform(1.01, 20.0) * (1 if rng.random() < 0.5 else -1)
        worst = max(worst, abs(chord_length(x, y, l) - chord_length_by_arclength(x, y, l)))
    return worst <= 1e-8, f"max error {worst:.3g}"


CHECKS = [
    ("rogers euler reflection", _euler),
    ("rogers abel pentagon", _pentagon),
    ("dilogarithm special values", _li2_special),
    ("polygon identities", _polygons),
    ("mcshane (3,3,3) certificate", _mcshane),
    ("bq semi-decision", _bq),
    ("pants orthospectrum", _pants),
    ("lasso oracle pair", _lasso),
    ("f2 quadrature", _f2),
    ("vlamis k = 0", _vlamis),
    ("chord length oracle", _chords),
]


def run_selftest(seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crash is a failed check, not an aborted suite
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return out


__all__ = ["CheckResult", "run_selftest", "CHECKS"]
