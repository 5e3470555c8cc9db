"""The attainable region A of diagonal pairs of QP, and closed-form bounds.

A is the set of pairs ``(x, y)`` with ``(x - y)**2 <= x + y <= 1``; these are
exactly the diagonal entries ``((QP e1, e1), (QP e2, e2))`` of a product of
two rank-one projections in dimension two.  Everything else in this module
is derived from A: range estimates for sums of ``n`` such products, the
extremal linear functional behind the negative-operator threshold, and the
``n(c)`` estimates for operators of norm at most ``c``.

Constants that depend only on integers are computed with ``Fraction`` and
converted to ``float`` when compared with user data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .errors import DomainError

#: Membership tolerance used wherever the construction feeds exact points
#: of the boundary of A (see :mod:`projpairs.decomposer`).
TAU_A = 1e-9


class RegionPoint(NamedTuple):
    x: float
    y: float

    @property
    def s(self):
        return self.x + self.y

    @property
    def d(self):
        return self.x - self.y


def in_region_a(p, tol: float = 0.0) -> bool:
    """Return True iff ``(x-y)**2 <= x+y + tol`` and ``x+y <= 1 + tol``."""
    if tol < 0:
        raise DomainError("tolerance must be nonnegative")
    x, y = p
    s = x + y
    d = x - y
    return d * d <= s + tol and s <= 1 + tol


def on_boundary_a(p, tol: float = 1e-12) -> bool:
    x, y = p
    s, d = x + y, x - y
    return in_region_a(p, tol) and (abs(d * d - s) <= tol or abs(s - 1) <= tol)


def region_x_range() -> tuple[float, float]:
    """Infimum and supremum of x over A.

    Both are attained: ``(-1/8, 3/8)`` and ``(1, 0)`` lie in A.
    """
    return (-0.125, 1.0)


def _threshold(n: int) -> Fraction:
    return -Fraction((n - 2) ** 2, 8 * n)


def inf_linear_functional(n: int) -> float:
    """``inf{y + (n-1)x : (x, y) in A} = -(n-2)**2 / (8n)``."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return float(_threshold(n))


@lru_cache(maxsize=4)
def _grid(grid: int):
    ticks = np.linspace(-0.125, 1.0, grid)
    x, y = np.meshgrid(ticks, ticks, indexing="ij")
    mask = ((x - y) ** 2 <= x + y) & (x + y <= 1.0)
    return x[mask], y[mask]


def region_grid(grid: int = 2001) -> tuple[np.ndarray, np.ndarray]:
    """Grid points of the box ``[-1/8, 1]**2`` that lie in A."""
    if grid < 2:
        raise DomainError("grid must have at least 2 ticks per axis")
    return _grid(int(grid))


def inf_linear_functional_bruteforce(n: int, grid: int = 2001) -> float:
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if grid < 100:
        raise DomainError("grid must be >= 100")
    x, y = region_grid(grid)
    return float(np.min(y + (n - 1) * x))


@dataclass(frozen=True)
class BoundTable:
    """Closed-form constants for sums of ``n`` compositions QP.

    ``necessary_low``/``necessary_high``: any such sum x satisfies
    ``necessary_low <= x <= necessary_high``.
    ``threshold``: no sum satisfies ``x <= a`` for ``a < threshold``.
    ``sufficient_low``/``sufficient_high``: spectra inside this interval are
    always representable (even ``n >= 4`` only, else None).
    ``a`` and ``b`` are the constants of the sufficient construction with
    ``m = n/2``; None when not applicable.
    """

    n: int
    necessary_low: Fraction
    necessary_high: Fraction
    threshold: Fraction
    sufficient_low: Optional[Fraction] = None
    sufficient_high: Optional[Fraction] = None
    m: Optional[int] = None
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None

    @property
    def has_sufficient(self) -> bool:
        return self.sufficient_low is not None


def construction_constants(m: int) -> tuple[Fraction, Fraction]:
    """The pair ``(a, b)`` used by the sufficient construction with n = 2m."""
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    a = -Fraction((m - 2) * (m + 2), 8 * m * m)
    b = Fraction((m - 2) * (3 * m - 2), 8 * m * m)
    return a, b


def bound_table(n: int) -> BoundTable:
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    kw = {}
    if n % 2 == 0 and n >= 4:
        m = n // 2
        a, b = construction_constants(m)
        kw = dict(
            sufficient_low=-Fraction((n - 4) ** 2, 8 * n),
            sufficient_high=Fraction(n - 2),
            m=m,
            a=a,
            b=b,
        )
    return BoundTable(
        n=n,
        necessary_low=-Fraction(n, 8),
        necessary_high=Fraction(n),
        threshold=_threshold(n),
        **kw,
    )


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Outcome of the closed-form checks for one ``n``.

    ``sufficient`` is None when the sufficient criterion does not apply
    (odd ``n`` or ``n < 4``).
    """

    n: int
    necessary_bounds: bool
    necessary_threshold: bool
    sufficient: Optional[bool]
    messages: list[str] = field(default_factory=list)

    @property
    def necessary(self) -> bool:
        return self.necessary_bounds and self.necessary_threshold


def check_feasibility(lambda_min: float, lambda_max: float, n: int) -> FeasibilityVerdict:
    if lambda_min > lambda_max:
        raise DomainError(f"lambda_min={lambda_min} exceeds lambda_max={lambda_max}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    t = bound_table(n)
    msgs = []

    lo, hi = float(t.necessary_low), float(t.necessary_high)
    bounds_ok = lambda_min >= lo and lambda_max <= hi
    if not bounds_ok:
        msgs.append(
            f"necessary range violated: spectrum [{lambda_min:g}, {lambda_max:g}] "
            f"not inside [-n/8, n] = [{lo:g}, {hi:g}]"
        )

    thr = float(t.threshold)
    thr_ok = lambda_max >= thr
    if not thr_ok:
        msgs.append(
            f"negative threshold violated: lambda_max = {lambda_max:g} "
            f"< -(n-2)^2/(8n) = {thr:g}, so x <= lambda_max*1 is not a sum of {n} products QP"
        )

    suff = None
    if t.has_sufficient:
        slo, shi = float(t.sufficient_low), float(t.sufficient_high)
        suff = lambda_min >= slo and lambda_max <= shi
        if not suff:
            msgs.append(
                f"sufficient range not met: spectrum [{lambda_min:g}, {lambda_max:g}] "
                f"not inside [-(n-4)^2/(8n), n-2] = [{slo:g}, {shi:g}]"
            )
    else:
        msgs.append(f"sufficient construction needs even n >= 4 (n = {n})")
    return FeasibilityVerdict(n, bounds_ok, thr_ok, suff, msgs)


def min_sufficient_n(lambda_min: float, lambda_max: float) -> int:
    """Smallest even ``n >= 4`` whose sufficient range contains the spectrum."""
    if lambda_min > lambda_max:
        raise DomainError(f"lambda_min={lambda_min} exceeds lambda_max={lambda_max}")
    c = max(-lambda_min, 0.0)
    # (n-4)^2 >= 8cn needs n >= 4 + 4c + 4*sqrt(c^2 + 2c); start just below it.
    lo = max(4 + 4 * c + 4 * math.sqrt(c * c + 2 * c), lambda_max + 2) - 2
    n = max(4, 2 * math.floor(lo / 2))
    while True:
        t = bound_table(n)
        if lambda_min >= float(t.sufficient_low) and lambda_max <= float(t.sufficient_high):
            return n
        n += 2


def nc_bounds(c: float) -> tuple[float, int]:
    """Lower and upper estimates of n(c) for Hermitian x with ``||x|| <= c``."""
    if not c > 0:
        raise DomainError(f"c must be positive, got {c}")
    lower = 2 + 4 * c + 4 * math.sqrt(c * c + c)
    upper = 2 * math.ceil(2 + 2 * c + 2 * math.sqrt(c * c + 2 * c))
    if not (8 * c + 8 / 3 <= math.ceil(lower) and upper <= 8 * c + 10):
        raise ArithmeticError(f"linear n(c) estimates fail at c={c}")
    return lower, upper


def cn_Cn_intervals(n: int) -> tuple[tuple[float, float], tuple[float, float]]:
    """Intervals known to contain C(n) (positive side) and c(n) (negative side)."""
    if n % 2 or n < 4:
        raise DomainError(f"n must be even and >= 4, got {n}")
    t = bound_table(n)
    big = (float(t.sufficient_high), float(t.necessary_high))
    small = (float(-t.sufficient_low), float(-t.threshold))
    return big, small
