import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from hypid.errors import BudgetExceededError, DomainError, NonHyperbolicError
from hypid.tracetree import (
    BQStatus,
    TraceTriple,
    bq_check,
    complex_length,
    enumerate_primitives,
    flip,
    fuchsian_torus_seed,
    length_from_trace,
    symmetric_torus_trace,
    torus_matrices,
    triple_from_matrices,
)

MARKOV = ([[1, 1], [1, 2]], [[1, -1], [-1, 2]])


def test_markov_seed_matrices():
    from hypid.moebius import Matrix2

    X = Matrix2.from_array(np.array(MARKOV[0], float))
    Y = Matrix2.from_array(np.array(MARKOV[1], float))
    t = triple_from_matrices(X, Y)
    assert t.values == (3.0, 3.0, 3.0)
    assert t.mu == 0.0


def test_flip_preserves_mu():
    t = TraceTriple(3.0, 4.0, 5.0)
    for k in (1, 2, 3):
        assert flip(t, k).mu == pytest.approx(t.mu)
        assert flip(flip(t, k), k) == t
    with pytest.raises(DomainError):
        flip(t, 4)


@settings(max_examples=100, deadline=None)
@given(st.tuples(*[st.floats(-20, 20)] * 3), st.sampled_from([1, 2, 3]))
def test_flip_invariance_property(v, k):
    t = TraceTriple(*v)
    assert flip(t, k).mu == pytest.approx(t.mu, rel=1e-9, abs=1e-6)


@pytest.mark.parametrize("cutoff,count", [(1e2, 24), (1e4, 90), (1e6, 204)])
def test_markov_counts_against_farey_oracle(golden, cutoff, count):
    prims = enumerate_primitives(TraceTriple(3, 3, 3), cutoff)
    want = oracles.farey_traces(*MARKOV, cutoff)
    assert len(prims) == len(want) == count
    assert [abs(p.value) for p in prims] == pytest.approx([float(w) for w in want], rel=1e-12)


def test_general_torus_against_farey_oracle():
    X, Y = torus_matrices(2.0, twist=0.3)
    seed = triple_from_matrices(X, Y)
    mats = ([[X.a, X.b], [X.c, X.d]], [[Y.a, Y.b], [Y.c, Y.d]])
    want = oracles.farey_traces(*mats, 1e5)
    prims = enumerate_primitives(seed, 1e5)
    assert [abs(p.value) for p in prims] == pytest.approx([float(w) for w in want], rel=1e-10)


def test_regions_labelled_once():
    prims = enumerate_primitives(TraceTriple(3, 3, 3), 1e6)
    labels = [p.label for p in prims]
    assert len(set(labels)) == len(labels)
    bfs = enumerate_primitives(TraceTriple(3, 3, 3), 1e6, order="bfs")
    assert sorted(p.label for p in bfs) == sorted(labels)


def test_markov_traces_are_three_times_markov_numbers():
    for p in enumerate_primitives(TraceTriple(3, 3, 3), 1e6):
        m = p.value / 3
        assert m == round(m)


def test_sign_normalization():
    t = TraceTriple(-3, -3, 3)
    assert t.normalized_signs().values == (3.0, 3.0, 3.0)
    prims = enumerate_primitives(t, 1e3)
    assert all(p.value > 0 for p in prims)


def test_bq_examples():
    ok = bq_check(TraceTriple(3, 3, 3))
    assert ok.status is BQStatus.SATISFIED and ok.satisfied
    bad = bq_check(TraceTriple(2, 2, 2))
    assert bad.status is BQStatus.VIOLATED
    assert bad.witness is not None and abs(bad.witness.value) <= 2
    # a flip lands in the elliptic range: x y - z = 1
    deep = bq_check(TraceTriple(3, 3, 8))
    assert deep.status is BQStatus.VIOLATED and deep.witness.depth >= 1


def test_bq_fuchsian_seed():
    for L in (0.5, 2.0, 6.0):
        assert bq_check(fuchsian_torus_seed(L, twist=0.4)).satisfied


def test_bq_stable_on_random_triples():
    rng = np.random.default_rng(11)
    for _ in range(300):
        t = TraceTriple(*rng.uniform(-6, 6, 3))
        a, b = bq_check(t, 20), bq_check(t, 40)
        if a.status is not BQStatus.UNDETERMINED:
            assert b.status is a.status


def test_budget_guard():
    t = TraceTriple(0.5, 0.5, 0.5)
    with pytest.raises(BudgetExceededError):
        enumerate_primitives(t, 1e3, max_uncertified=50)
    with pytest.raises(DomainError):
        enumerate_primitives(TraceTriple(3, 3, 3), -1)


def test_lengths():
    assert length_from_trace(3.0) == pytest.approx(2 * math.acosh(1.5))
    assert length_from_trace(-3.0) == pytest.approx(2 * math.acosh(1.5))
    z = 3.0 + 0.4j
    cl = complex_length(z)
    assert 2 * np.cosh(cl / 2) == pytest.approx(z)
    assert length_from_trace(z) == pytest.approx(cl.real)
    with pytest.raises(NonHyperbolicError):
        length_from_trace(1.5)
    with pytest.raises(NonHyperbolicError):
        complex_length(-2.0)


@pytest.mark.parametrize("L", [0.5, 2.0, 5.0])
def test_fuchsian_seed_has_boundary_commutator(L):
    seed = fuchsian_torus_seed(L)
    assert seed.tau == pytest.approx(-2 * math.cosh(L / 2), rel=1e-10)
    t = symmetric_torus_trace(L)
    assert 3 * t * t - t ** 3 == pytest.approx(2 - 2 * math.cosh(L / 2), rel=1e-12)
    assert seed.x == pytest.approx(t, rel=1e-12)
