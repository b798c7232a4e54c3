import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from hypid.errors import (
    CrossingGeodesicsError,
    DegenerateConfigurationError,
    DomainError,
    NonHyperbolicError,
)
from hypid.moebius import (
    INF,
    Geodesic,
    IdealPolygon,
    Matrix2,
    axis,
    boundary_point,
    cross_ratio,
    geodesic_distance,
    polygon_ortholengths,
    random_sl2,
    reflection,
)

pts = st.floats(-50, 50, allow_nan=False)


def distinct(*xs, gap=1e-3):
    xs = sorted(xs)
    return all(b - a > gap for a, b in zip(xs, xs[1:]))


def test_boundary_point_spellings():
    for s in ("inf", "-inf", "∞", " Infinity "):
        assert boundary_point(s) is INF
    assert math.copysign(1.0, boundary_point(-0.0)) == 1.0
    assert boundary_point("2.5") == 2.5
    with pytest.raises(DomainError):
        boundary_point(float("nan"))


def test_cross_ratio_values_at_infinity():
    # the two infinite factors cancel
    assert cross_ratio(0, 1, INF, 2) == -1.0
    assert cross_ratio(INF, 0, 1, 2) == 0.5
    assert cross_ratio(0, 0, 1, 2) == 0.0
    assert cross_ratio(0, 1, 0, 2) == INF
    with pytest.raises(DegenerateConfigurationError):
        cross_ratio(0, 0, 0, 1)


@settings(max_examples=150, deadline=None)
@given(a=pts, b=pts, c=pts, d=pts, seed=st.integers(0, 2 ** 32 - 1))
def test_cross_ratio_moebius_invariant(a, b, c, d, seed):
    assume(distinct(a, b, c, d))
    m = random_sl2(np.random.default_rng(seed), 0.5)
    img = [m.apply(x) for x in (a, b, c, d)]
    w = cross_ratio(a, b, c, d)
    w2 = cross_ratio(*img)
    assert w2 == pytest.approx(w, rel=1e-7, abs=1e-9)


@settings(max_examples=150, deadline=None)
@given(a=pts, b=pts, c=pts, d=pts)
def test_cross_ratio_complement_relation(a, b, c, d):
    assume(distinct(a, b, c, d))
    assert 1.0 - cross_ratio(a, b, c, d) == pytest.approx(cross_ratio(a, d, c, b), abs=1e-9)
    # the cyclic form used throughout: [x1, x2; x3, x4] = 1 - [x2, x3; x4, x1]
    assert cross_ratio(a, b, c, d) == pytest.approx(1.0 - cross_ratio(b, c, d, a), abs=1e-9)


@pytest.mark.parametrize("l", [0.01, 0.5, 1.0, 3.0, 20.0])
def test_concentric_distance_is_exact(l):
    d = geodesic_distance(Geodesic(-1, 1), Geodesic(-math.exp(l), math.exp(l)))
    assert d == pytest.approx(l, rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(p1=pts, q1=pts, p2=pts, q2=pts, seed=st.integers(0, 2 ** 32 - 1))
def test_distance_oracle_and_invariance(p1, q1, p2, q2, seed):
    assume(distinct(p1, q1, p2, q2, gap=1e-2))
    assume(not oracles.linked(p1, q1, p2, q2))
    g1, g2 = Geodesic(p1, q1), Geodesic(p2, q2)
    d = geodesic_distance(g1, g2)
    assert d == pytest.approx(float(oracles.line_distance(p1, q1, p2, q2)), rel=1e-8, abs=1e-9)
    assert geodesic_distance(g2.reversed(), g1) == pytest.approx(d, rel=1e-12, abs=1e-12)
    m = random_sl2(np.random.default_rng(seed), 0.3)
    assert geodesic_distance(g1.mapped(m), g2.mapped(m)) == pytest.approx(d, rel=1e-6, abs=1e-7)


def test_distance_errors():
    with pytest.raises(CrossingGeodesicsError):
        geodesic_distance(Geodesic(-1, 1), Geodesic(0, 5))
    with pytest.raises(DegenerateConfigurationError):
        geodesic_distance(Geodesic(0, 1), Geodesic(1, 2))
    with pytest.raises(DegenerateConfigurationError):
        Geodesic(3, 3)


def test_geodesic_with_infinity():
    d = geodesic_distance(Geodesic(0, INF), Geodesic(1, 4))
    assert d == pytest.approx(2 * math.atanh(0.5))


def test_axis_of_translation():
    g, length = axis(Matrix2.diagonal_translation(1.7))
    assert g.p == 0.0 and g.q is INF
    assert length == pytest.approx(1.7)
    m = random_sl2(np.random.default_rng(4))
    h = Matrix2.diagonal_translation(2.0).conjugate_by(m)
    g2, l2 = axis(h)
    assert l2 == pytest.approx(2.0, rel=1e-9)
    assert g2.same_line(Geodesic(0, INF).mapped(m), tol=1e-7)
    with pytest.raises(NonHyperbolicError):
        axis(Matrix2(1.0, 1.0, 0.0, 1.0))


@settings(max_examples=80, deadline=None)
@given(p=pts, q=pts, z=pts)
def test_reflection_involution(p, q, z):
    assume(distinct(p, q))
    r = reflection(Geodesic(p, q))
    assert r.det == pytest.approx(-1.0)
    assert r.apply(p) == pytest.approx(p, abs=1e-7)
    assert r.apply(q) == pytest.approx(q, abs=1e-7)
    w = r.apply(r.apply(z))
    if not (isinstance(w, float) and math.isinf(w)):
        assert w == pytest.approx(z, rel=1e-6, abs=1e-6)


def test_matrix_algebra():
    m = Matrix2(2.0, 1.0, 1.0, 1.0)
    assert (m @ m.inverse()).to_array() == pytest.approx(np.eye(2))
    assert Matrix2.from_array(m.to_array()) == m
    assert m.normalized().det == pytest.approx(1.0)
    assert m.apply(INF) == 2.0
    assert Matrix2(1.0, 0.0, 0.0, 1.0).apply(INF) is INF
    with pytest.raises(DegenerateConfigurationError):
        Matrix2(1.0, 1.0, 1.0, 1.0).inverse()


def test_polygon_validation():
    IdealPolygon((0, 1, 2, INF))
    IdealPolygon((5, INF, -3, 0))  # rotations of circular order are fine
    with pytest.raises(DomainError):
        IdealPolygon((0, 2, 1, 5))
    with pytest.raises(DegenerateConfigurationError):
        IdealPolygon((0, 1, 1, 2))
    with pytest.raises(DomainError):
        IdealPolygon((0, 1))


def test_polygon_ortholength_count():
    for n in range(3, 9):
        assert len(polygon_ortholengths(IdealPolygon.regular(n))) == n * (n - 3) // 2


def test_regular_square_ortholength():
    # opposite sides of the regular ideal quadrilateral are 2 asinh(1) apart
    (_, _, l1), (_, _, l2) = polygon_ortholengths(IdealPolygon((-1, 0, 1, INF)))
    assert l1 == pytest.approx(l2)
    assert l1 == pytest.approx(2 * math.asinh(1.0))
