"""Four projections on K + K whose two products sum to twice z1 + z2.

Given commuting Hermitian ``z1``, ``z2`` on K whose joint eigenvalue pairs
lie in A, the 2x2 factory is applied to every joint eigenvalue pair.  The
k-th common eigenvector in the first copy of K is coupled with the k-th in
the second copy.  The primed projections are conjugates by
``diag(1, -1)`` on ``K + K``, which cancels the off-diagonal blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import RegionError
from .linalg import as_hermitian, defect_norms, joint_diag
from .matfactory import make_pq
from .region import TAU_A, in_region_a


@dataclass(frozen=True)
class PairSumResult:
    p: np.ndarray
    q: np.ndarray
    p_prime: np.ndarray
    q_prime: np.ndarray
    basis: np.ndarray
    points: list = field(default_factory=list)

    def total(self) -> np.ndarray:
        return self.q @ self.p + self.q_prime @ self.p_prime


def _assemble(u: np.ndarray, blocks: np.ndarray) -> np.ndarray:
    # blocks[k] is the 2x2 matrix on span{(u_k, 0), (0, u_k)}
    uh = u.conj().T
    rows = []
    for i in range(2):
        rows.append([(u * blocks[:, i, j]) @ uh for j in range(2)])
    return np.block(rows)


def _flip(m: np.ndarray) -> np.ndarray:
    k = m.shape[0] // 2
    out = m.copy()
    out[:k, k:] *= -1
    out[k:, :k] *= -1
    return out


def build_pair_sum(z1, z2, tol: float = TAU_A) -> PairSumResult:
    z1 = as_hermitian(z1)
    z2 = as_hermitian(z2)
    u, pairs = joint_diag(z1, z2)

    # deterministic pairing order: ascending joint eigenvalue, index tie-break
    order = sorted(range(len(pairs)), key=lambda k: (pairs[k][0], pairs[k][1], k))
    u = u[:, order]
    pairs = [pairs[k] for k in order]

    pb, qb = [], []
    for k, pt in enumerate(pairs):
        if not in_region_a(pt, tol):
            raise RegionError(f"joint eigenvalue pair (x_{k}, y_{k}) = {pt} is outside A")
        pq = make_pq(pt, tol)
        pb.append(pq.p)
        qb.append(pq.q)
    p = _assemble(u, np.array(pb))
    q = _assemble(u, np.array(qb))
    return PairSumResult(p=p, q=q, p_prime=_flip(p), q_prime=_flip(q), basis=u, points=pairs)


@dataclass
class PairSumReport:
    defects: dict
    tol: float

    @property
    def passed(self) -> bool:
        return all(v <= self.tol for v in self.defects.values())


def verify_pair_sum(r: PairSumResult, z1, z2, tol: float = 1e-10) -> PairSumReport:
    z1 = np.asarray(z1)
    z2 = np.asarray(z2)
    k = z1.shape[0]
    target = np.zeros((2 * k, 2 * k), dtype=np.result_type(z1, z2))
    target[:k, :k] = 2 * z1
    target[k:, k:] = 2 * z2
    defects = {}
    for name in ("p", "q", "p_prime", "q_prime"):
        defects[name] = max(defect_norms(getattr(r, name)))
    defects["sum"] = float(np.max(np.abs(r.total() - target)))
    return PairSumReport(defects, tol)
