"""Rank-one 2x2 projections P, Q with prescribed diagonal of QP.

For every ``(x, y)`` in the region A there are real rank-one projections
``P = P(x, y)`` and ``Q = Q(x, y)`` with ``(QP)[0, 0] = x`` and
``(QP)[1, 1] = y``.  The map is continuous on A except at the origin,
which gets its own pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, RegionError
from .region import TAU_A, RegionPoint, in_region_a

SIGN = np.array([[1.0, -1.0], [-1.0, 1.0]])

_ORIGIN_CUT = 1e-15


@dataclass(frozen=True)
class ProjectionPair2x2:
    p: np.ndarray
    q: np.ndarray
    source: RegionPoint

    @property
    def qp(self) -> np.ndarray:
        return self.q @ self.p


def _clamped_sqrt(v: float, tol: float, what: str, point) -> float:
    if v < 0:
        if v < -tol:
            raise RegionError(f"{what} = {v:.3e} < 0 at {tuple(point)}")
        return 0.0
    return math.sqrt(v)


def make_pq(point, tol: float = TAU_A) -> ProjectionPair2x2:
    """Build ``(P, Q)`` for a point of A.

    Radicands that come out slightly negative because of rounding (by at
    most ``tol``) are clamped to zero.
    """
    x, y = float(point[0]), float(point[1])
    src = RegionPoint(x, y)
    if math.hypot(x, y) < _ORIGIN_CUT:
        return ProjectionPair2x2(
            p=np.array([[1.0, 0.0], [0.0, 0.0]]),
            q=np.array([[0.0, 0.0], [0.0, 1.0]]),
            source=src,
        )
    if not in_region_a(src, tol):
        raise RegionError(f"point {(x, y)} is outside A (tol={tol:g})")
    s = x + y
    d = x - y
    if s <= 0:
        raise RegionError(f"point {(x, y)} has x + y <= 0 but is not the origin")

    r1 = _clamped_sqrt(s - d * d, tol, "s - d^2", src)
    r2 = _clamped_sqrt(1.0 / s - 1.0, tol, "1/s - 1", src)
    cross = r1 * r2
    p_off = (r1 - d * r2) / 2
    q_off = (r1 + d * r2) / 2
    p = np.array([[(1 + d + cross) / 2, p_off], [p_off, (1 - d - cross) / 2]])
    q = np.array([[(1 + d - cross) / 2, q_off], [q_off, (1 - d + cross) / 2]])
    return ProjectionPair2x2(p=p, q=q, source=src)


def conjugate_by_sign(m) -> np.ndarray:
    """``diag(1, -1) @ m @ diag(1, -1)``: flips the off-diagonal signs."""
    return np.asarray(m) * SIGN


def sharpness_family(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """``n`` pairs ``(Q_i, P_i)`` with ``sum Q_i P_i = diag(-n/8, 3n/8)``.

    Odd positions (1-based) use the pair at ``(-1/8, 3/8)``, even positions
    its sign conjugate, so the off-diagonal parts cancel in pairs.
    """
    if n < 2 or n % 2:
        raise DomainError(f"n must be even and >= 2, got {n}")
    base = make_pq((-0.125, 0.375))
    flipped = (conjugate_by_sign(base.q), conjugate_by_sign(base.p))
    out = []
    for i in range(n):
        out.append((base.q.copy(), base.p.copy()) if i % 2 == 0 else tuple(a.copy() for a in flipped))
    return out


def verify_rank1_projection(m, tol: float = 1e-12) -> bool:
    if not tol > 0:
        raise DomainError("tol must be positive")
    m = np.asarray(m)
    if m.shape == (2, 2) and not np.iscomplexobj(m):
        # scalar path: called once per block rule
        (a, b), (c, d) = m.tolist()
        sq = (a * a + b * c - a, a * b + b * d - b, c * a + d * c - c, c * b + d * d - d)
        return (
            max(abs(v) for v in sq) <= tol
            and abs(b - c) <= tol
            and abs(a + d - 1) <= tol
            and abs(a * d - b * c) <= tol
        )
    return bool(
        np.max(np.abs(m @ m - m)) <= tol
        and np.max(np.abs(m - m.conj().T)) <= tol
        and abs(np.trace(m) - 1) <= tol
        and abs(np.linalg.det(m)) <= tol
    )
