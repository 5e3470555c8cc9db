"""Dense Hermitian linear algebra at desk scale (dim <= 64).

The eigensolver is a cyclic Jacobi iteration, kept in-repo so results do
not depend on the LAPACK build.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericError

HERMITIAN_TOL = 1e-12
COMMUTE_TOL = 1e-10
MAX_DIM = 64


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray  # ascending
    basis: np.ndarray  # columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.values) @ self.basis.conj().T


def as_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``a`` as square Hermitian and return its symmetrized copy."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DomainError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.iscomplexobj(a):
        a = a.astype(float)
    scale = np.max(np.abs(a))
    if np.max(np.abs(a - a.conj().T)) > tol * scale:
        raise DomainError("matrix is not Hermitian")
    return (a + a.conj().T) / 2


def _offdiag_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def hermitian_eig(a, max_sweeps: int = 30, rtol: float = 1e-13) -> EigenDecomposition:
    a = as_hermitian(a)
    n = a.shape[0]
    if n > MAX_DIM:
        raise DomainError(f"dimension {n} exceeds {MAX_DIM}")
    a = a.copy()
    v = np.eye(n, dtype=a.dtype)
    norm = np.linalg.norm(a)
    target = rtol * norm
    # below this an element is negligible and its phase is unreliable
    negligible = 1e-20 * norm

    for _ in range(max_sweeps + 1):
        if _offdiag_norm(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g <= negligible:
                    continue
                phase = apq / g
                theta = (a[q, q].real - a[p, p].real) / (2 * g)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                # phase fix on column q, then a real rotation annihilating (p, q)
                j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=a.dtype)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = j.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ j
    else:
        raise NumericError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    values = np.real(np.diag(a)).copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(values[order], v[:, order])


def joint_diag(z1, z2, cluster_tol: float = 1e-8):
    """Simultaneously diagonalize two commuting Hermitian matrices.

    Returns ``(u, pairs)`` where the columns of ``u`` are common eigenvectors
    and ``pairs[k] = (x_k, y_k)`` are the eigenvalues of ``z1`` and ``z2`` on
    column ``k``.  Columns are ordered by ``x`` cluster, then by ``y``.
    """
    z1 = as_hermitian(z1)
    z2 = as_hermitian(z2)
    if z1.shape != z2.shape:
        raise DomainError(f"shape mismatch {z1.shape} vs {z2.shape}")
    scale = max(np.max(np.abs(z1)), np.max(np.abs(z2)), 1.0) ** 2
    if np.max(np.abs(z1 @ z2 - z2 @ z1)) > COMMUTE_TOL * scale:
        raise DomainError("z1 and z2 do not commute")

    e1 = hermitian_eig(z1)
    dtype = np.result_type(e1.basis, z2)
    u = e1.basis.astype(dtype)
    vals = e1.values
    gap = cluster_tol * max(np.max(np.abs(vals)), 0.0)

    start = 0
    n = len(vals)
    for k in range(1, n + 1):
        if k == n or vals[k] - vals[k - 1] > gap:
            block = u[:, start:k]
            if k - start > 1:
                c = block.conj().T @ z2 @ block
                # roundoff can dominate a tiny compression; symmetrize it here
                w = hermitian_eig((c + c.conj().T) / 2).basis
                u[:, start:k] = block @ w
            start = k

    x = np.real(np.einsum("ij,ik,kj->j", u.conj(), z1, u))
    y = np.real(np.einsum("ij,ik,kj->j", u.conj(), z2, u))
    return u, [(float(a), float(b)) for a, b in zip(x, y)]


def defect_norms(p) -> tuple[float, float]:
    """``(max|p@p - p|, max|p - p^*|)``."""
    p = np.asarray(p)
    return float(np.max(np.abs(p @ p - p))), float(np.max(np.abs(p - p.conj().T)))
