import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypid.errors import CutoffTooLargeError, DomainError
from hypid.orthospectrum import (
    BOUNDARY_WORDS,
    canonical_double_coset,
    enumerate_orthogeodesics,
    invert_word,
    multiply,
    pants_group,
    record_length,
    reduce_word,
    unoriented,
    word_from_str,
    word_to_str,
)
from hypid.panttorus import pants_perpendiculars

words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=10).map(tuple)


def test_word_utilities():
    assert reduce_word((1, 2, -2, -1, 2)) == (2,)
    assert word_to_str(()) == "e"
    assert word_to_str((1, -2)) == "aB"
    assert word_from_str("aBba") == (1, 1)
    assert invert_word((1, -2)) == (2, -1)
    with pytest.raises(DomainError):
        word_from_str("abc")


@settings(max_examples=100, deadline=None)
@given(w=words, i=st.sampled_from([1, 2, 3]), k=st.sampled_from([1, 2, 3]),
       s=st.integers(-2, 2), t=st.integers(-2, 2))
def test_canonical_coset_is_invariant(w, i, k, s, t):
    left, right = BOUNDARY_WORDS[i], BOUNDARY_WORDS[k]
    power = lambda u, n: multiply(*([u] * n)) if n >= 0 else multiply(*([invert_word(u)] * -n))
    moved = multiply(power(left, s), w, power(right, t))
    assert canonical_double_coset(moved, left, right) == canonical_double_coset(w, left, right)


@pytest.mark.parametrize("ls", [(1.0, 1.0, 1.0), (0.5, 1.0, 2.0), (2.0, 3.0, 0.7)])
def test_group_boundary_traces(ls):
    G = pants_group(*ls)
    for i, l in enumerate(ls, 1):
        assert abs(G.boundary_matrix(i).trace) == pytest.approx(2 * math.cosh(l / 2), rel=1e-12)


@pytest.mark.parametrize("key", ["1,1,1", "0.5,1,2"])
def test_spectrum_matches_word_brute_force(golden, key):
    want = golden["pants_spectrum"][key]
    ls = tuple(map(float, key.split(",")))
    recs = enumerate_orthogeodesics(pants_group(*ls), want["cutoff"])
    assert len(recs) == want["n_oriented"]
    assert [r.length for r in recs] == pytest.approx(want["lengths"], rel=1e-12)


@pytest.mark.parametrize("ls", [(1.0, 1.0, 1.0), (0.5, 1.0, 2.0)])
def test_shortest_entries_are_hexagon_lengths(ls):
    G = pants_group(*ls)
    recs = enumerate_orthogeodesics(G, 8.0)
    met = pants_perpendiculars(*ls)
    for i in (1, 2, 3):
        for k in (1, 2, 3):
            best = min(r.length for r in recs if r.from_boundary == i and r.to_boundary == k)
            want = met.n[i - 1] if i == k else met.m[6 - i - k - 1]
            assert best == pytest.approx(want, abs=1e-9)


def test_records_are_consistent():
    G = pants_group(0.5, 1.0, 2.0)
    recs = enumerate_orthogeodesics(G, 7.0)
    lengths = [r.length for r in recs]
    assert lengths == sorted(lengths)
    keys = {(r.from_boundary, r.to_boundary, r.word) for r in recs}
    assert len(keys) == len(recs)
    for r in recs:
        assert r.reversed_key() in keys
        assert record_length(G, r) == pytest.approx(r.length, rel=1e-9)
    assert len(unoriented(recs)) * 2 == len(recs)


def test_cutoff_monotone_and_prefix():
    G = pants_group(1.0, 1.0, 1.0)
    small = enumerate_orthogeodesics(G, 5.0)
    big = enumerate_orthogeodesics(G, 8.0)
    assert big[:len(small)] == small
    assert all(r.length > 5.0 for r in big[len(small):])


def test_depth_budget_raises():
    with pytest.raises(CutoffTooLargeError):
        enumerate_orthogeodesics(pants_group(1.0, 1.0, 1.0), 10.0, max_depth=3)
    with pytest.raises(DomainError):
        enumerate_orthogeodesics(pants_group(1.0, 1.0, 1.0), -1.0)
