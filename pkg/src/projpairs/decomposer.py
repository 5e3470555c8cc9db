"""Write ``x (x) 1`` as a sum of ``n = 2m`` products ``Q_i P_i``.

The input is a spectral presentation whose spectrum lies in
``[-(n-4)^2/(8n), n-2]``.  The operator is split as ``x = y_1 + ... + y_m``
and each ``y_g`` is written as ``QP + Q'P'`` through the two-copy pairing of
:mod:`projpairs.pairsum`.

Sectors, per group ``g`` (0-based; group ``g`` owns the copies
``t = g (mod m)``, called ``E_g``)::

    hat pool     part of E_g where y_g = 0
    tilde pool   part of E_g where y_g = 2b
    hat G1       labels with lambda > 2b, copies outside E_g
    tilde G1     labels with lambda <= 2b, copies outside E_g

When both label classes are present the pools are ``t = g`` and
``t = g + m (mod 2m)``; when one class is empty its pool is empty and the
other pool is all of ``E_g``.  Off ``E_g`` the value of ``y_g`` at
``(k, t)`` is ``(lambda_k - 2b [t in D_g]) / (m - 1)`` where ``D_g`` is the
union of the tilde pools of the other groups.  Each G1 family is matched
with a pool family; the block on ``(pool element, G1 element)`` is the
factory pair at ``(y_g(pool)/2, y_g(G1)/2)``, which is ``(0, .)`` for hat
blocks and ``(b, .)`` for tilde blocks.

The construction lives in the eigenbasis of the input; the rotation back to
the original basis is kept in the spectral presentation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .blockops import (
    BlockRule,
    IndexFamily,
    RuleOperator,
    SpectralPresentation,
    coverage_counts,
    match_families,
    product_row,
    window_indices,
    window_product,
)
from .errors import DomainError, FeasibilityError, MalformedOperatorError, MembershipError
from .matfactory import conjugate_by_sign, make_pq, verify_rank1_projection
from .region import TAU_A, RegionPoint, bound_table, check_feasibility, in_region_a

HAT = "hat"
TILDE = "tilde"


@dataclass(frozen=True)
class SectorPlan:
    n: int
    m: int
    a: Fraction
    b: Fraction
    values: tuple
    f_labels: tuple  # labels with lambda > 2b

    @property
    def hat_active(self) -> bool:
        return bool(self.f_labels)

    @property
    def tilde_active(self) -> bool:
        return len(self.f_labels) < len(self.values)

    @property
    def other_labels(self) -> tuple:
        return tuple(k for k in range(len(self.values)) if k not in self.f_labels)

    def e_families(self, g: int) -> list:
        return [IndexFamily(k, g, self.m) for k in range(len(self.values))]

    def _pool(self, g, active, other_active, shift):
        if not active:
            return []
        if other_active:
            return [IndexFamily(k, g + shift, 2 * self.m) for k in range(len(self.values))]
        return self.e_families(g)

    def hat_pool(self, g: int) -> list:
        return self._pool(g, self.hat_active, self.tilde_active, 0)

    def tilde_pool(self, g: int) -> list:
        return self._pool(g, self.tilde_active, self.hat_active, self.m)

    def _g1(self, g, labels):
        m2 = 2 * self.m
        return [IndexFamily(k, r, m2) for k in labels for r in range(m2) if r % self.m != g]

    def hat_g1(self, g: int) -> list:
        return self._g1(g, self.f_labels)

    def tilde_g1(self, g: int) -> list:
        return self._g1(g, self.other_labels)

    def in_tilde_pool(self, t: int) -> bool:
        """Whether copy ``t`` lies in the tilde pool of its own group."""
        if not self.tilde_active:
            return False
        if not self.hat_active:
            return True
        return t % (2 * self.m) >= self.m

    def in_d(self, g: int, t: int) -> bool:
        return t % self.m != g and self.in_tilde_pool(t)

    def sector(self, g: int, u) -> str:
        k, t = u
        if t % self.m == g:
            return TILDE + "2" if self.in_tilde_pool(t) else HAT + "2"
        return HAT + "1" if k in self.f_labels else TILDE + "1"


def _check_n(n: int) -> int:
    if n < 4 or n % 2:
        raise DomainError(f"n must be even and >= 4, got {n}")
    return n // 2


def plan_sectors(spec: SpectralPresentation, n: int) -> SectorPlan:
    m = _check_n(n)
    verdict = check_feasibility(float(spec.lambda_min), float(spec.lambda_max), n)
    if not verdict.sufficient:
        raise FeasibilityError("; ".join(verdict.messages), verdict)
    t = bound_table(n)
    two_b = 2 * t.b
    f_labels = tuple(k for k, lam in spec.labels if lam > two_b)
    return SectorPlan(n=n, m=m, a=t.a, b=t.b, values=spec.values, f_labels=f_labels)


def build_yi_values(plan: SectorPlan, spec: SpectralPresentation, g: int) -> dict:
    """Values of ``y_g`` on the cells ``(k, t mod 2m)``.

    Arithmetic is exact when the eigenvalues are ``Fraction`` instances.
    """
    m = plan.m
    two_b = 2 * plan.b
    out = {}
    for k, lam in spec.labels:
        for r in range(2 * m):
            sec = plan.sector(g, (k, r))
            if sec == HAT + "2":
                out[k, r] = Fraction(0)
            elif sec == TILDE + "2":
                out[k, r] = two_b
            else:
                out[k, r] = (lam - two_b * plan.in_d(g, r)) / (m - 1)
    return out


@dataclass(frozen=True)
class BlockRecord:
    group: int
    sector: str
    label: int
    residue: int
    point: RegionPoint


@dataclass(frozen=True)
class Decomposition:
    n: int
    m: int
    spec: SpectralPresentation
    a: Fraction
    b: Fraction
    pairs: tuple  # ((Q_1, P_1), ..., (Q_n, P_n))
    plan: SectorPlan
    records: tuple = ()


def decompose(spec: SpectralPresentation, n: int) -> Decomposition:
    plan = plan_sectors(spec, n)
    m = plan.m
    pairs = []
    records = []
    for g in range(m):
        yv = build_yi_values(plan, spec, g)
        q1, p1, q2, p2 = [], [], [], []
        sectors = (
            (HAT, plan.hat_g1(g), plan.hat_pool(g), Fraction(0)),
            (TILDE, plan.tilde_g1(g), plan.tilde_pool(g), plan.b),
        )
        for name, g1, pool, x_half in sectors:
            for g1_sub, pool_sub in match_families(g1, pool):
                k, t = g1_sub.element(0)
                r = t % (2 * m)
                pk, pt = pool_sub.element(0)
                assert yv[pk, pt % (2 * m)] == 2 * x_half
                point = RegionPoint(float(x_half), float(yv[k, r] / 2))
                if not in_region_a(point, TAU_A):
                    raise MembershipError(g + 1, k, r, point)
                pq = make_pq(point, TAU_A)
                q1.append(BlockRule(pool_sub, g1_sub, pq.q))
                p1.append(BlockRule(pool_sub, g1_sub, pq.p))
                q2.append(BlockRule(pool_sub, g1_sub, conjugate_by_sign(pq.q)))
                p2.append(BlockRule(pool_sub, g1_sub, conjugate_by_sign(pq.p)))
                records.append(BlockRecord(g, name, k, r, point))
        pairs.append((RuleOperator(q1), RuleOperator(p1)))
        pairs.append((RuleOperator(q2), RuleOperator(p2)))
    return Decomposition(
        n=n, m=m, spec=spec, a=plan.a, b=plan.b, pairs=tuple(pairs), plan=plan, records=tuple(records)
    )


@dataclass
class VerificationReport:
    T: int
    tol: float
    max_defect: float = 0.0
    worst_entry: Optional[tuple] = None
    group_offdiag: float = 0.0
    yi_defect: float = 0.0
    projection_failures: list = field(default_factory=list)
    coverage_failures: list = field(default_factory=list)
    sector_failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            self.max_defect <= self.tol
            and self.group_offdiag <= self.tol
            and self.yi_defect <= self.tol
            and not self.projection_failures
            and not self.coverage_failures
            and not self.sector_failures
        )

    def lines(self) -> list:
        out = [
            f"window T={self.T}, tol={self.tol:g}",
            f"max |sum_i Q_i P_i - x| over window: {self.max_defect:.3e}"
            + (f" at {self.worst_entry}" if self.worst_entry else ""),
            f"max off-diagonal of paired sums QP + Q'P': {self.group_offdiag:.3e}",
            f"max deviation of paired sums from y_g: {self.yi_defect:.3e}",
            f"projection audit failures: {len(self.projection_failures)}",
            f"coverage audit failures: {len(self.coverage_failures)}",
            f"sector audit failures: {len(self.sector_failures)}",
        ]
        for f in (self.projection_failures + self.coverage_failures + self.sector_failures)[:10]:
            out.append(f"  - {f}")
        out.append("PASS" if self.passed else "FAIL")
        return out


def _is_projection_block(mat, tol) -> bool:
    a = np.asarray(mat)
    if verify_rank1_projection(a, tol):
        return True
    diag01 = all(min(abs(v), abs(v - 1)) <= tol for v in np.diag(a))
    return diag01 and abs(a[0, 1]) <= tol and abs(a[1, 0]) <= tol


def _window_rows(d: Decomposition, rows: list, in_window: set, yvals: list):
    """Entrywise defects on the given window rows."""
    max_defect, worst, offdiag, yi_def = 0.0, None, 0.0, 0.0
    errors = []
    for u in rows:
        k, t = u
        total: dict = {}
        try:
            for g in range(d.m):
                grp: dict = {}
                for q, p in d.pairs[2 * g : 2 * g + 2]:
                    for v, val in product_row(q, p, u).items():
                        grp[v] = grp.get(v, 0.0) + val
                for v, val in grp.items():
                    if v != u and v in in_window:
                        offdiag = max(offdiag, abs(val))
                    total[v] = total.get(v, 0.0) + val
                yi_def = max(yi_def, abs(grp.get(u, 0.0) - float(yvals[g][k, t % (2 * d.m)])))
        except MalformedOperatorError as exc:
            errors.append(str(exc))
            continue
        total.setdefault(u, 0.0)
        lam = float(d.spec.values[k])
        for v, val in total.items():
            if v not in in_window:
                continue
            err = abs(val - (lam if v == u else 0.0))
            if err > max_defect:
                max_defect, worst = err, (u, v)
    return max_defect, worst, offdiag, yi_def, errors


def _sector_audit(d: Decomposition, tol: float) -> list:
    failures = []
    plan = d.plan
    a, b = float(d.a), float(d.b)
    for g in range(d.m):
        (q_op, p_op), (q2_op, p2_op) = d.pairs[2 * g], d.pairs[2 * g + 1]
        if not (len(q_op) == len(p_op) == len(q2_op) == len(p2_op)):
            failures.append(f"group {g + 1}: rule counts differ between Q/P operators")
            continue
        for ri, (qr, pr) in enumerate(zip(q_op.rules, p_op.rules)):
            where = f"group {g + 1}, rule {ri} ({qr.source.as_list()} <-> {qr.target.as_list()})"
            if (qr.source, qr.target) != (pr.source, pr.target):
                failures.append(f"{where}: Q and P rules are not aligned")
                continue
            src, tgt = qr.source, qr.target
            if src.residue % d.m != g or src.modulus % d.m:
                failures.append(f"{where}: pool family outside the group's copies")
            if tgt.modulus % d.m == 0 and tgt.residue % d.m == g:
                failures.append(f"{where}: partner family inside the group's copies")
            x, y = np.diag(qr.array @ pr.array)
            hat = tgt.label in plan.f_labels
            if hat:
                ok = abs(x) <= TAU_A and -TAU_A <= y <= 1 + TAU_A
            else:
                ok = abs(x - b) <= TAU_A and a - TAU_A <= y <= 1 - b + TAU_A
            if not ok:
                failures.append(f"{where}: {'hat' if hat else 'tilde'} point {(x, y)} violates its sector bounds")
            if not in_region_a((x, y), TAU_A):
                failures.append(f"{where}: point {(x, y)} outside A")
    return failures


def verify_decomposition(d: Decomposition, T: int, tol: float = 1e-9, workers: int = 1) -> VerificationReport:
    """Check ``sum_i Q_i P_i = x (x) 1`` entrywise on the window ``t < T``.

    Also audits every rule matrix, coverage of the window by each operator,
    and the sector bounds of every block point.  With ``workers > 1`` the
    window rows are split across threads; the report is identical.
    """
    if T < 2 * d.m:
        raise DomainError(f"window T={T} must be >= 2m = {2 * d.m}")
    rep = VerificationReport(T=T, tol=tol)

    checked: dict = {}
    for i, (q, p) in enumerate(d.pairs):
        for name, op in (("Q", q), ("P", p)):
            for ri, rule in enumerate(op.rules):
                if rule.mat not in checked:
                    checked[rule.mat] = _is_projection_block(rule.mat, tol)
                if not checked[rule.mat]:
                    rep.projection_failures.append(
                        f"{name}_{i + 1} rule {ri} ({rule.source.as_list()} <-> {rule.target.as_list()}) "
                        "is not a projection block"
                    )
            for u, c in coverage_counts(op, d.spec, T).items():
                if c != 1:
                    rep.coverage_failures.append(f"{name}_{i + 1} covers {u} {c} times")

    idx = window_indices(d.spec, T)
    in_window = set(idx)
    yvals = [build_yi_values(d.plan, d.spec, g) for g in range(d.m)]
    if workers > 1:
        chunks = [idx[j::workers] for j in range(workers)]
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda rows: _window_rows(d, rows, in_window, yvals), chunks))
    else:
        parts = [_window_rows(d, idx, in_window, yvals)]

    order = {u: j for j, u in enumerate(idx)}
    for max_defect, worst, offdiag, yi_def, errors in parts:
        if max_defect > rep.max_defect or (
            max_defect == rep.max_defect and worst is not None and rep.worst_entry is not None
            and (order[worst[0]], worst[1]) < (order[rep.worst_entry[0]], rep.worst_entry[1])
        ):
            rep.max_defect, rep.worst_entry = max_defect, worst
        rep.group_offdiag = max(rep.group_offdiag, offdiag)
        rep.yi_defect = max(rep.yi_defect, yi_def)
        rep.coverage_failures.extend(errors)

    rep.sector_failures.extend(_sector_audit(d, tol))
    return rep


def summand_windows(d: Decomposition, T: int) -> list:
    """Compressions of each ``Q_i P_i`` to the window ``t < T``."""
    return [window_product(q, p, d.spec, T) for q, p in d.pairs]
