import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hypid.errors import DomainError, RogersRangeError
from hypid.numerics import rogers
from hypid.panttorus import (
    TorusSummandInput,
    _R,
    basmajian_width,
    cusp_gap,
    gap_D,
    gap_R,
    lasso_closed,
    lasso_endpoints,
    lasso_integral,
    luo_tan_f,
    luo_tan_g_summand,
    luo_tan_pair_term,
    pants_perpendiculars,
    self_orthogeodesic_alt,
    torus_summand_input,
)

length = st.floats(0.05, 12.0)


def test_hexagon_golden(golden):
    for key, want in golden["hexagon"].items():
        p = pants_perpendiculars(*map(float, key.split(",")))
        assert list(p.m) == pytest.approx(want["m"], rel=1e-12)
        assert list(p.n) == pytest.approx(want["n"], rel=1e-12)


def test_symmetric_pants_values():
    p = pants_perpendiculars(1.0, 1.0, 1.0)
    assert p.m1 == pytest.approx(2.868695141619822, rel=1e-14)
    assert p.n1 == pytest.approx(4.402955294863257, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(a=length, b=length, c=length)
def test_two_hexagon_formulas_agree(a, b, c):
    p = pants_perpendiculars(a, b, c)
    for i in range(3):
        assert self_orthogeodesic_alt(p, i) == pytest.approx(p.n[i], rel=1e-10)
    m, _ = oracles.hexagon(a, b, c)
    assert list(p.m) == pytest.approx([float(v) for v in m], rel=1e-11)


def test_extreme_lengths_stay_finite():
    for ls in ((1e-8, 1.0, 1.0), (500.0, 500.0, 500.0), (1e-6, 1e-6, 1e-6), (0.01, 0.5, 900.0)):
        p = pants_perpendiculars(*ls)
        assert all(math.isfinite(v) and v >= 0 for v in p.m + p.n)


def test_near_cusp_seams_are_monotone():
    # shrinking l3 pushes the seams next to it to infinity
    prev = pants_perpendiculars(1.0, 1.0, 1.0)
    for l3 in (0.1, 0.01, 1e-3, 1e-5):
        p = pants_perpendiculars(1.0, 1.0, l3)
        assert p.m1 > prev.m1 and p.m2 > prev.m2
        prev = p


def test_pants_domain():
    with pytest.raises(DomainError):
        pants_perpendiculars(0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        pants_perpendiculars(1.0, float("nan"), 1.0)


def _D(x, y, z):
    x, y, z = map(mp.mpf, (x, y, z))
    return 2 * mp.log((mp.exp(x / 2) + mp.exp((y + z) / 2)) / (mp.exp(-x / 2) + mp.exp((y + z) / 2)))


def _Rgap(x, y, z):
    x, y, z = map(mp.mpf, (x, y, z))
    return x - mp.log((mp.cosh(y / 2) + mp.cosh((x + z) / 2)) / (mp.cosh(y / 2) + mp.cosh((x - z) / 2)))


@settings(max_examples=150, deadline=None)
@given(x=length, y=st.floats(0, 30), z=st.floats(0, 30))
def test_gap_functions_against_mpmath(x, y, z):
    assert gap_D(x, y, z) == pytest.approx(float(_D(x, y, z)), rel=1e-11, abs=1e-300)
    assert gap_R(x, y, z) == pytest.approx(float(_Rgap(x, y, z)), rel=1e-9, abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(x=length, y=st.floats(0.01, 30), z=st.floats(0, 30))
def test_gap_D_bounds(x, y, z):
    d = gap_D(x, y, z)
    assert 0 < d < x


def test_gap_identities():
    assert gap_D(2.0, 0.0, 0.0) == pytest.approx(2.0, rel=1e-15)
    assert gap_R(2.0, 3.0, 0.0) == pytest.approx(2.0, rel=1e-15)
    assert gap_D(1.0, 600.0, 600.0) == pytest.approx(float(_D(1.0, 600.0, 600.0)), rel=1e-12)
    assert gap_D(1.0, 2000.0, 2000.0) == 0.0  # below the smallest subnormal
    assert gap_R(1.0, 2000.0, 3.0) == pytest.approx(float(_Rgap(1.0, 2000.0, 3.0)), rel=1e-9)


@pytest.mark.parametrize("y,z", [(0.5, 0.5), (2.0, 3.0), (10.0, 1.0)])
def test_cusp_gap_is_the_small_boundary_limit(y, z):
    x = 1e-7
    assert gap_D(x, y, z) / x == pytest.approx(2 * cusp_gap(y, z), rel=1e-6)


@pytest.mark.parametrize("l", [0.01, 0.5, 1.0, 5.0, 40.0])
def test_basmajian_width(l):
    want = float(2 * mp.log(mp.coth(mp.mpf(l) / 2)))
    assert basmajian_width(l) == pytest.approx(want, rel=1e-13)


def test_luo_tan_f_against_mpmath():
    for ls in ((1.0, 1.0, 1.0), (0.5, 1.0, 2.0)):
        p = pants_perpendiculars(*ls)
        total = []
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                l, m = mp.mpf(p.l[i]), mp.mpf(p.m[j])
                x, y = mp.exp(-l), mp.tanh(m / 2) ** 2
                c = mp.sinh(m) ** 2 * mp.sinh(l / 2) ** 2
                total.append(2 * oracles.rogers((1 - x) / (1 - x * y))
                             - 2 * oracles.rogers((1 - y) / (1 - x * y))
                             - oracles.rogers(y) - oracles.rogers(1 / c))
        assert luo_tan_f(p) == pytest.approx(float(4 * mp.fsum(total)), rel=1e-12)
        assert 0 < luo_tan_f(p) < 4 * math.pi ** 2


def test_pair_term_rejects_non_pants_input():
    # short boundary with a short seam cannot come from an embedded pants
    with pytest.raises(RogersRangeError):
        luo_tan_pair_term(0.2, 0.5)
    assert luo_tan_f(pants_perpendiculars(0.3, 0.3, 0.3)) > 0


def test_g_summand_sign():
    # the torus sum is 4 pi^2 plus 8 times these terms, so they are negative
    for a in (0.5, 1.0, 3.0):
        s = torus_summand_input(a, 2.0)
        assert isinstance(s, TorusSummandInput)
        assert luo_tan_g_summand(s) < 0


def test_rogers_range_guard():
    assert _R(1.0 + 1e-13) == rogers(1.0)
    with pytest.raises(RogersRangeError):
        _R(1.01)
    with pytest.raises(RogersRangeError):
        _R(float("nan"))


def test_lasso_pair_single_point():
    assert lasso_integral(1.0, 1.0) == pytest.approx(lasso_closed(1.0, 1.0), abs=1e-8)


def test_lasso_limits():
    for l in (0.5, 1.0, 2.0):
        assert lasso_closed(l, 60.0) == pytest.approx(0.0, abs=1e-12)
        assert lasso_closed(l, 1e-7) == pytest.approx(2 * rogers(math.exp(-l)), rel=1e-6)


def test_lasso_endpoints():
    c, d = lasso_endpoints(1.0, 2.0)
    assert c == pytest.approx(math.e)
    assert d == pytest.approx(math.e / math.tanh(1.0) ** 2)


def test_luo_tan_f_bounded_on_grid():
    grid = [0.1, 0.5, 1.5, 3.0, 5.0]
    for a in grid:
        for b in grid:
            for c in grid:
                v = luo_tan_f(pants_perpendiculars(a, b, c))
                assert 0 < v < 4 * math.pi ** 2


@settings(max_examples=60, deadline=None)
@given(a=st.floats(0.1, 6), b=st.floats(0.1, 6), c=st.floats(0.1, 6))
def test_relabelling_symmetries(a, b, c):
    base = luo_tan_f(pants_perpendiculars(a, b, c))
    for perm in ((b, c, a), (c, a, b), (b, a, c)):
        assert luo_tan_f(pants_perpendiculars(*perm)) == pytest.approx(base, rel=1e-11)
    p, q = pants_perpendiculars(a, b, c), pants_perpendiculars(a, c, b)
    assert p.m1 == pytest.approx(q.m1, rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(x=st.floats(0.1, 10), y=st.floats(0.1, 10), z=st.floats(0.1, 10), dx=st.floats(0.01, 2))
def test_gap_monotonicity_and_R_bounds(x, y, z, dx):
    d = gap_D(x, y, z)
    assert gap_D(x + dx, y, z) > d
    assert gap_D(x, y + dx, z) < d
    assert gap_D(x, y, z + dx) < d
    assert gap_D(x, z, y) == pytest.approx(d, rel=1e-15)
    r = gap_R(x, y, z)
    assert 0 < r < x


def test_cusp_gap_values():
    assert cusp_gap(0, 0) == 0.5
    assert cusp_gap(1.3, 1.3) == pytest.approx(1 / (1 + math.exp(1.3)))
    assert cusp_gap(800, 800) == 0.0


def _integrand_min(l, m):
    from hypid.panttorus import lasso_integrand
    import numpy as np

    c, d = lasso_endpoints(l, m)
    X, Y = np.meshgrid(np.linspace(1e-4, 1 - 1e-4, 120), np.linspace(c * (1 + 1e-6), d * (1 - 1e-6), 120))
    return float(lasso_integrand(X, Y, c, d).min())


def test_lasso_integrand_sign():
    # nonnegative for moderate parameters; near x = 1 with small l and m the
    # log argument drops below one, so only the integral is a positive volume
    for l, m in ((1.0, 1.0), (3.0, 3.0), (0.3, 3.0), (3.0, 0.3)):
        assert _integrand_min(l, m) >= 0
    assert _integrand_min(0.3, 0.3) < 0
    assert lasso_closed(0.3, 0.3) > 0


def test_g_summand_decays():
    vals = [abs(luo_tan_g_summand(torus_summand_input(a, 2.0))) for a in (1.0, 3.0, 6.0, 12.0)]
    assert vals == sorted(vals, reverse=True)
    assert vals[-1] < 1e-3
