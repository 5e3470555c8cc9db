import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import boundary_points, region_points
from projpairs.errors import DomainError, RegionError
from projpairs.matfactory import conjugate_by_sign, make_pq, sharpness_family, verify_rank1_projection


def _check_pair(pt, tol=1e-12):
    pq = make_pq(pt)
    assert verify_rank1_projection(pq.p, tol)
    assert verify_rank1_projection(pq.q, tol)
    qp = pq.qp
    assert abs(qp[0, 0] - pt[0]) <= tol
    assert abs(qp[1, 1] - pt[1]) <= tol


def test_hand_example_at_zero_half():
    pq = make_pq((0.0, 0.5))
    np.testing.assert_allclose(pq.p, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(pq.q, [[0, 0], [0, 1]], atol=1e-15)


def test_corner_points():
    pq = make_pq((1.0, 0.0))
    np.testing.assert_allclose(pq.p, [[1, 0], [0, 0]], atol=1e-15)
    np.testing.assert_allclose(pq.q, [[1, 0], [0, 0]], atol=1e-15)
    pq = make_pq((0.5, 0.5))
    np.testing.assert_allclose(pq.p, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(pq.q, pq.p, atol=1e-15)


def test_origin_uses_orthogonal_pair():
    pq = make_pq((0.0, 0.0))
    np.testing.assert_array_equal(pq.p, np.diag([1.0, 0.0]))
    np.testing.assert_array_equal(pq.q, np.diag([0.0, 1.0]))
    np.testing.assert_array_equal(pq.qp, np.zeros((2, 2)))


def test_negative_corner():
    pq = make_pq((-1 / 8, 3 / 8))
    qp = pq.qp
    assert qp[0, 0] == pytest.approx(-1 / 8, abs=1e-15)
    assert qp[1, 1] == pytest.approx(3 / 8, abs=1e-15)


@pytest.mark.parametrize("pt", [(0.6, 0.6), (-0.13, 0.3), (1.0, 0.5), (-0.5, -0.5)])
def test_outside_points_rejected(pt):
    with pytest.raises(RegionError):
        make_pq(pt)


def test_tolerance_clamps_roundoff():
    # a point just outside the parabola by less than the tolerance
    s = 0.3
    d = np.sqrt(s) * (1 + 1e-12)
    pq = make_pq(((s + d) / 2, (s - d) / 2))
    assert verify_rank1_projection(pq.p, 1e-9)


def test_interior_and_boundary_points():
    for pt in np.vstack([region_points(2000), boundary_points(200)]):
        _check_pair(tuple(pt))


@settings(max_examples=300)
@given(st.floats(1e-6, 1.0), st.floats(-1.0, 1.0))
def test_property_diagonal_reproduction(s, frac):
    d = frac * np.sqrt(s)
    _check_pair(((s + d) / 2, (s - d) / 2), tol=1e-11)


def test_continuity_away_from_origin():
    pts = region_points(500, offset=77)
    pts = pts[np.hypot(pts[:, 0], pts[:, 1]) > 1e-2]
    eps = 1e-7
    for x, y in pts:
        s, d = x + y, x - y
        # nudge toward the interior so the neighbour is still in A
        s2 = min(s * (1 - eps), 1.0)
        d2 = d * (1 - eps)
        a, b = make_pq((x, y)), make_pq(((s2 + d2) / 2, (s2 - d2) / 2))
        assert np.max(np.abs(a.p - b.p)) < 1e-2
        assert np.max(np.abs(a.q - b.q)) < 1e-2


def test_conjugate_by_sign_is_conjugation():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    d = np.diag([1.0, -1.0])
    np.testing.assert_array_equal(conjugate_by_sign(m), d @ m @ d)
    np.testing.assert_array_equal(conjugate_by_sign(conjugate_by_sign(m)), m)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_sharpness_family(n):
    fam = sharpness_family(n)
    assert len(fam) == n
    total = sum(q @ p for q, p in fam)
    np.testing.assert_allclose(total, np.diag([-n / 8, 3 * n / 8]), atol=1e-12)
    for q, p in fam:
        assert verify_rank1_projection(q) and verify_rank1_projection(p)


@pytest.mark.parametrize("n", [0, 1, 3, 7])
def test_sharpness_requires_even(n):
    with pytest.raises(DomainError):
        sharpness_family(n)


def test_verify_rank1_projection_rejects():
    assert not verify_rank1_projection(np.eye(2))
    assert not verify_rank1_projection(np.zeros((2, 2)))
    assert not verify_rank1_projection(np.array([[1.0, 1.0], [0.0, 0.0]]))
    v = np.array([1.0, 1j]) / np.sqrt(2)
    assert verify_rank1_projection(np.outer(v, v.conj()))
    with pytest.raises(DomainError):
        verify_rank1_projection(np.eye(2), 0.0)
