from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_unitary
from projpairs.blockops import (
    BlockRule,
    IndexFamily,
    RuleOperator,
    SpectralPresentation,
    coverage_counts,
    entry,
    inflate,
    match_families,
    product_entry,
    split_family,
    window_indices,
    window_matrix,
    window_product,
)
from projpairs.errors import DimensionMismatchError, DomainError, MalformedOperatorError

LIMIT = 1000


def _members(families, limit=LIMIT):
    out = []
    for f in families:
        out.extend(f.elements(limit))
    return out


def test_family_basics():
    f = IndexFamily(2, 3, 5)
    assert f.element(0) == (2, 3) and f.element(4) == (2, 23)
    assert f.counter((2, 23)) == 4
    assert (2, 24) not in f and (1, 23) not in f
    assert f.elements(20) == [(2, 3), (2, 8), (2, 13), (2, 18)]
    with pytest.raises(DomainError):
        IndexFamily(0, 5, 5)


@given(st.integers(0, 6), st.integers(1, 6), st.integers(0, 6), st.integers(1, 6))
def test_intersects_matches_brute_force(r1, m1, r2, m2):
    f, g = IndexFamily(0, r1 % m1, m1), IndexFamily(0, r2 % m2, m2)
    brute = bool(set(f.elements(200)) & set(g.elements(200)))
    assert f.intersects(g) == brute


@given(st.integers(0, 5), st.integers(1, 6), st.integers(1, 7))
def test_split_is_partition(r, mod, parts):
    f = IndexFamily(1, r % mod, mod)
    subs = split_family(f, parts)
    got = sorted(_members(subs))
    assert got == f.elements(LIMIT)


@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 4))
def test_match_is_bijection(ns, nt, mod):
    sources = [IndexFamily(0, r, ns * mod) for r in range(ns)]
    targets = [IndexFamily(1, r, nt * mod) for r in range(nt)]
    pairs = match_families(sources, targets)
    assert len(pairs) == ns * nt
    # each side of the matching partitions its union
    assert sorted(_members(s for s, _ in pairs)) == sorted(_members(sources))
    assert sorted(_members(t for _, t in pairs)) == sorted(_members(targets))
    # and the pairing is a bijection on enumerations
    seen = set()
    for s, t in pairs:
        for j in range(20):
            pair = (s.element(j), t.element(j))
            assert pair[1] not in seen
            seen.add(pair[1])


def test_match_empty_sides():
    assert match_families([], []) == []
    with pytest.raises(DimensionMismatchError):
        match_families([IndexFamily(0, 0, 1)], [])


def _swap_op():
    mat = [[0.5, 0.5], [0.5, 0.5]]
    return RuleOperator([BlockRule(IndexFamily(0, 0, 2), IndexFamily(0, 1, 2), mat)])


def test_rule_entries_and_symmetry():
    op = _swap_op()
    assert entry(op, (0, 4), (0, 5)) == 0.5
    assert entry(op, (0, 5), (0, 4)) == 0.5
    assert entry(op, (0, 4), (0, 7)) == 0.0
    assert entry(op, (1, 4), (1, 4)) == 0.0
    w = window_matrix(op, SpectralPresentation((0.0,)), 10)
    np.testing.assert_array_equal(w, w.T)
    # projection: compression equals its own square because blocks are closed in the window
    np.testing.assert_allclose(w @ w, w)
    np.testing.assert_allclose(window_product(op, op, SpectralPresentation((0.0,)), 10), w)
    assert product_entry(op, op, (0, 0), (0, 1)) == 0.5


def test_rule_row_and_column():
    mat = [[0.0, 1.0], [2.0, 3.0]]
    op = RuleOperator([BlockRule(IndexFamily(0, 0, 3), IndexFamily(1, 1, 3), mat)])
    assert op.row((0, 3)) == {(1, 4): 1.0}
    assert op.row((1, 4)) == {(0, 3): 2.0, (1, 4): 3.0}
    assert op.column((0, 3)) == {(1, 4): 2.0}
    assert op.row((0, 1)) == {}


def test_overlapping_rules_detected():
    a = BlockRule(IndexFamily(0, 0, 2), IndexFamily(0, 1, 2), [[1, 0], [0, 0]])
    b = BlockRule(IndexFamily(0, 0, 4), IndexFamily(1, 0, 1), [[1, 0], [0, 0]])
    op = RuleOperator([a, b])
    with pytest.raises(MalformedOperatorError):
        op.row((0, 4))
    counts = coverage_counts(op, SpectralPresentation((0.0, 1.0)), 8)
    assert counts[(0, 4)] == 2 and counts[(0, 2)] == 1 and counts[(0, 1)] == 1


def test_rule_rejects_self_overlap():
    with pytest.raises(DomainError):
        BlockRule(IndexFamily(0, 0, 2), IndexFamily(0, 2, 4), [[1, 0], [0, 0]])
    with pytest.raises(DomainError):
        BlockRule(IndexFamily(0, 0, 2), IndexFamily(1, 0, 2), [[1, 0, 0], [0, 0, 0]])


def test_window_indices_order():
    spec = SpectralPresentation((0.0, 1.0))
    assert window_indices(spec, 2) == [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_spectral_presentation():
    spec = SpectralPresentation.from_values([2, 1, 1, Fraction(1, 2)])
    assert spec.values == (Fraction(1, 2), 1, 2)
    assert spec.lambda_min == Fraction(1, 2) and spec.lambda_max == 2
    with pytest.raises(DomainError):
        SpectralPresentation((1.0, 1.0))
    with pytest.raises(DomainError):
        SpectralPresentation(())


def test_inflate_clusters(rng):
    u = random_unitary(rng, 6)
    lam = np.array([1.0, 1.0 + 1e-13, 1.0, -0.5, 0.25, -0.5])
    x0 = (u * lam) @ u.conj().T
    spec = inflate(x0)
    np.testing.assert_allclose(spec.values, [-0.5, 0.25, 1.0], atol=1e-12)
    assert sorted(spec.column_labels) == [0, 0, 1, 2, 2, 2]
    np.testing.assert_allclose(spec.reconstruct(), x0, atol=1e-12)


def test_inflate_zero_matrix():
    spec = inflate(np.zeros((3, 3)))
    assert spec.values == (0.0,)
