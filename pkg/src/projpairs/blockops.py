"""Finitely described operators on the basis {(k, t) : t = 0, 1, 2, ...}.

A finite Hermitian ``x0`` is modelled as ``x0 (x) 1`` on ``H0 (x) l2``: label
``k`` is an eigenvalue of ``x0`` and ``t`` counts the copy.  Every
eigenvalue thus has countably infinite multiplicity, which is what makes
the Hilbert-hotel identifications below possible.

Subspaces commuting with ``x0 (x) 1`` are unions of arithmetic progressions
in ``t`` for fixed ``k`` (:class:`IndexFamily`).  An operator is a list of
:class:`BlockRule` objects, each placing one 2x2 matrix on every aligned
pair ``(source[s], target[s])``.  Entries are read off exactly: there is no
truncation anywhere.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DimensionMismatchError, DomainError, MalformedOperatorError
from .linalg import hermitian_eig

Index = tuple  # (label, copy)


@dataclass(frozen=True)
class SpectralPresentation:
    """Distinct eigenvalues ``values[k]``, each of infinite multiplicity.

    ``rotation`` (optional) holds eigenvectors of the original matrix in its
    columns, and ``column_labels[j]`` is the label of column ``j``.
    """

    values: tuple
    rotation: Optional[np.ndarray] = None
    column_labels: Optional[tuple] = None

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise DomainError("a spectral presentation needs at least one eigenvalue")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise DomainError("eigenvalues must be strictly increasing")

    @classmethod
    def from_values(cls, values: Iterable) -> "SpectralPresentation":
        return cls(tuple(sorted(set(values))))

    @property
    def labels(self) -> list:
        return list(enumerate(self.values))

    def __len__(self):
        return len(self.values)

    @property
    def lambda_min(self):
        return self.values[0]

    @property
    def lambda_max(self):
        return self.values[-1]

    def reconstruct(self) -> np.ndarray:
        if self.rotation is None:
            return np.diag(np.array(self.values, dtype=float))
        lam = np.array([float(self.values[k]) for k in self.column_labels])
        u = self.rotation
        return (u * lam) @ u.conj().T


def inflate(x0, cluster_tol: float = 1e-10) -> SpectralPresentation:
    """Spectral presentation of ``x0 (x) 1``.

    Eigenvalues closer than ``cluster_tol * ||x0||`` share a label; the label
    value is the cluster mean.
    """
    eig = hermitian_eig(x0)
    vals = eig.values
    gap = cluster_tol * float(np.max(np.abs(vals)))
    groups = [[0]]
    for j in range(1, len(vals)):
        if vals[j] - vals[j - 1] > gap:
            groups.append([])
        groups[-1].append(j)
    values = tuple(float(np.mean(vals[g])) for g in groups)
    col_labels = tuple(k for k, g in enumerate(groups) for _ in g)
    return SpectralPresentation(values, eig.basis, col_labels)


@dataclass(frozen=True, order=True)
class IndexFamily:
    """The set ``{(label, t) : t = residue (mod modulus)}``."""

    label: int
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise DomainError(f"invalid family {self}")

    def element(self, s: int) -> Index:
        return (self.label, self.residue + s * self.modulus)

    def counter(self, u: Index) -> Optional[int]:
        """Position ``s`` of ``u`` in the enumeration, or None."""
        k, t = u
        if k != self.label or t < 0 or t % self.modulus != self.residue:
            return None
        return (t - self.residue) // self.modulus

    def __contains__(self, u) -> bool:
        return self.counter(u) is not None

    def elements(self, t_limit: int) -> list:
        return [(self.label, t) for t in range(self.residue, t_limit, self.modulus)]

    def intersects(self, other: "IndexFamily") -> bool:
        if self.label != other.label:
            return False
        return (self.residue - other.residue) % math.gcd(self.modulus, other.modulus) == 0

    def as_list(self) -> list:
        return [self.label, self.residue, self.modulus]


def split_family(f: IndexFamily, parts: int) -> list[IndexFamily]:
    """Partition ``f`` into ``parts`` interleaved sub-progressions."""
    if parts < 1:
        raise DomainError("parts must be >= 1")
    return [IndexFamily(f.label, f.residue + j * f.modulus, parts * f.modulus) for j in range(parts)]


def match_families(sources: Sequence[IndexFamily], targets: Sequence[IndexFamily]):
    """Align two countable unions of families by an explicit bijection.

    Each source is split into ``len(targets)`` parts and each target into
    ``len(sources)`` parts; the sub-families are then paired in
    lexicographic order.  The ``s``-th element of a source sub-family
    corresponds to the ``s``-th element of its partner.
    """
    if not sources and not targets:
        return []
    if not sources or not targets:
        raise DimensionMismatchError(
            f"cannot match {len(sources)} source families with {len(targets)} target families"
        )
    ns, nt = len(sources), len(targets)
    src = sorted(sub for f in sources for sub in split_family(f, nt))
    tgt = sorted(sub for f in targets for sub in split_family(f, ns))
    return list(zip(src, tgt))


@dataclass(frozen=True)
class BlockRule:
    """``mat`` acting on ``span{source[s], target[s]}`` for every ``s``.

    Row/column 0 of ``mat`` is the source element, 1 the target element.
    """

    source: IndexFamily
    target: IndexFamily
    mat: tuple

    def __post_init__(self):
        rows = self.mat.tolist() if isinstance(self.mat, np.ndarray) else self.mat
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise DomainError("rule matrix must be 2x2")
        object.__setattr__(self, "mat", tuple(tuple(float(v) for v in r) for r in rows))
        if self.source.intersects(self.target):
            raise DomainError(f"source {self.source} and target {self.target} overlap")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.mat)

    def families(self):
        return (self.source, self.target)


class RuleOperator:
    """An operator given by block rules; immutable after construction."""

    def __init__(self, rules: Iterable[BlockRule] = ()):
        self.rules = tuple(rules)
        # label -> modulus -> residue -> [(rule index, slot), ...]
        table: dict = defaultdict(lambda: defaultdict(lambda: defaultdict(list)))
        for ri, rule in enumerate(self.rules):
            for slot, fam in enumerate(rule.families()):
                table[fam.label][fam.modulus][fam.residue].append((ri, slot))
        self._table = {k: {m: dict(r) for m, r in v.items()} for k, v in table.items()}

    def __len__(self):
        return len(self.rules)

    def __repr__(self):
        return f"RuleOperator({len(self.rules)} rules)"

    def locate_all(self, u: Index) -> list:
        k, t = u
        hits = []
        for mod, residues in self._table.get(k, {}).items():
            hits.extend(residues.get(t % mod, ()))
        return hits

    def locate(self, u: Index):
        """``(rule index, slot, s)`` of the rule position holding ``u``, or None."""
        hits = self.locate_all(u)
        if not hits:
            return None
        if len(hits) > 1:
            raise MalformedOperatorError(f"index {u} is covered by more than one rule position")
        ri, slot = hits[0]
        fam = self.rules[ri].families()[slot]
        return ri, slot, fam.counter(u)

    def row(self, u: Index) -> dict:
        """Nonzero entries ``{v: op[u, v]}`` of row ``u``."""
        loc = self.locate(u)
        if loc is None:
            return {}
        ri, slot, s = loc
        rule = self.rules[ri]
        partner = rule.families()[1 - slot].element(s)
        out = {}
        if rule.mat[slot][slot] != 0.0:
            out[u] = rule.mat[slot][slot]
        if rule.mat[slot][1 - slot] != 0.0:
            out[partner] = rule.mat[slot][1 - slot]
        return out

    def column(self, v: Index) -> dict:
        """Nonzero entries ``{u: op[u, v]}`` of column ``v``."""
        loc = self.locate(v)
        if loc is None:
            return {}
        ri, slot, s = loc
        rule = self.rules[ri]
        partner = rule.families()[1 - slot].element(s)
        out = {}
        if rule.mat[slot][slot] != 0.0:
            out[v] = rule.mat[slot][slot]
        if rule.mat[1 - slot][slot] != 0.0:
            out[partner] = rule.mat[1 - slot][slot]
        return out


def entry(op: RuleOperator, u: Index, v: Index) -> float:
    loc = op.locate(u)
    if loc is None:
        return 0.0
    ri, slot, s = loc
    rule = op.rules[ri]
    if v == u:
        return rule.mat[slot][slot]
    if v == rule.families()[1 - slot].element(s):
        return rule.mat[slot][1 - slot]
    return 0.0


def product_row(left: RuleOperator, right: RuleOperator, u: Index) -> dict:
    """Nonzero entries of row ``u`` of ``left @ right``, computed exactly."""
    out: dict = {}
    for w, lv in left.row(u).items():
        for v, rv in right.row(w).items():
            out[v] = out.get(v, 0.0) + lv * rv
    return out


def product_entry(left: RuleOperator, right: RuleOperator, u: Index, v: Index) -> float:
    return product_row(left, right, u).get(v, 0.0)


def window_indices(spec: SpectralPresentation, T: int) -> list:
    """Indices ``(k, t)`` with ``t < T``, ordered by ``(t, k)``."""
    if T < 1:
        raise DomainError("window size T must be >= 1")
    return [(k, t) for t in range(T) for k in range(len(spec))]


def _window(rows, spec, T):
    idx = window_indices(spec, T)
    pos = {u: i for i, u in enumerate(idx)}
    out = np.zeros((len(idx), len(idx)))
    for i, u in enumerate(idx):
        for v, val in rows(u).items():
            j = pos.get(v)
            if j is not None:
                out[i, j] = val
    return out


def window_matrix(op: RuleOperator, spec: SpectralPresentation, T: int) -> np.ndarray:
    """Compression of ``op`` to the indices with ``t < T`` (exact entries)."""
    return _window(op.row, spec, T)


def window_product(left: RuleOperator, right: RuleOperator, spec: SpectralPresentation, T: int) -> np.ndarray:
    """Compression of ``left @ right`` (not the product of compressions)."""
    return _window(lambda u: product_row(left, right, u), spec, T)


def coverage_counts(op: RuleOperator, spec: SpectralPresentation, T: int) -> dict:
    """Number of rule positions holding each window index."""
    return {u: len(op.locate_all(u)) for u in window_indices(spec, T)}
