import numpy as np
import pytest

from conftest import boundary_points, random_unitary, region_points
from projpairs.errors import DomainError, RegionError
from projpairs.pairsum import build_pair_sum, verify_pair_sum
from projpairs.region import construction_constants


def _commuting(rng, pts, complex_=True):
    k = len(pts)
    u = random_unitary(rng, k, complex_)
    x, y = np.asarray(pts, dtype=float).T
    return (u * x) @ u.conj().T, (u * y) @ u.conj().T


def test_hand_example():
    r = build_pair_sum([[0.0]], [[0.5]])
    np.testing.assert_allclose(r.p, [[0.5, 0.5], [0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(r.q, [[0, 0], [0, 1]], atol=1e-15)
    np.testing.assert_allclose(r.p_prime, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)
    np.testing.assert_allclose(r.total(), np.diag([0.0, 1.0]), atol=1e-15)
    assert verify_pair_sum(r, [[0.0]], [[0.5]]).passed


def test_boundary_point_of_construction():
    a, b = construction_constants(3)
    z1, z2 = np.array([[float(b)]]), np.array([[float(a)]])
    r = build_pair_sum(z1, z2)
    rep = verify_pair_sum(r, z1, z2, 1e-12)
    assert rep.passed, rep.defects


def test_random_pairs(rng):
    pool = np.vstack([region_points(600, offset=5), boundary_points(100), [[0.0, 0.0]]])
    for trial in range(60):
        k = int(rng.integers(1, 17))
        pts = pool[rng.integers(0, len(pool), size=k)]
        z1, z2 = _commuting(rng, pts, complex_=bool(trial % 2))
        r = build_pair_sum(z1, z2)
        rep = verify_pair_sum(r, z1, z2)
        assert rep.passed, rep.defects


def test_degenerate_joint_spectrum(rng):
    pts = [(0.1, 0.2)] * 3 + [(0.1, 0.3)] * 2 + [(0.0, 0.0)] * 2
    z1, z2 = _commuting(rng, pts)
    rep = verify_pair_sum(build_pair_sum(z1, z2), z1, z2)
    assert rep.passed, rep.defects


def test_outside_pair_is_named():
    with pytest.raises(RegionError, match=r"\(x_1, y_1\)"):
        build_pair_sum(np.diag([0.1, 0.6]), np.diag([0.1, 0.6]))


def test_noncommuting_rejected():
    with pytest.raises(DomainError):
        build_pair_sum(np.diag([0.1, 0.2]), np.array([[0.1, 0.05], [0.05, 0.1]]))


def test_tampering_detected(rng):
    z1, z2 = _commuting(rng, region_points(4, offset=11))
    r = build_pair_sum(z1, z2)
    bad = r.p.copy()
    bad[0, 0] += 1e-6
    tampered = type(r)(bad, r.q, r.p_prime, r.q_prime, r.basis, r.points)
    rep = verify_pair_sum(tampered, z1, z2)
    assert not rep.passed
    assert rep.defects["p"] > 1e-10


def test_basis_covariance(rng):
    pts = region_points(5, offset=21)
    x, y = pts.T
    r0 = build_pair_sum(np.diag(x), np.diag(y))
    u = random_unitary(rng, 5)
    z1, z2 = (u * x) @ u.conj().T, (u * y) @ u.conj().T
    r1 = build_pair_sum(z1, z2)
    # the products are determined by the data, whatever eigenbasis was chosen
    big = np.block([[u, np.zeros((5, 5))], [np.zeros((5, 5)), u]])
    np.testing.assert_allclose(big @ r0.total() @ big.conj().T, r1.total(), atol=1e-11)
