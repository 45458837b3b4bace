"""Closed-form upper bounds on the contextual fraction q(G) of quantum graphs.

Rank-1 bound: ``(1 - 1/d)^(d-1) - 2^-(d-1)``, the share of the sphere lying in the
annulus ``1/d <= |<psi|phi>|^2 <= 1/2``. Rank-r bound: ``I_{1/2}(r, d-r) -
I_{r/d}(r, d-r)`` with ``I`` the regularised incomplete beta function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

__all__ = [
    "BoundParams",
    "theorem1_bound",
    "argmax_over_d",
    "annulus_proportion",
    "reg_inc_beta",
    "reg_inc_beta_exact",
    "reg_inc_beta_array",
    "rank_bound",
    "rank_bound_float",
    "beta_pdf",
    "beta_norm_constant",
    "beta_median",
    "verify_half_corollary",
    "HalfCorollaryReport",
]

_EPS = 1e-16
_TINY = 1e-300


@dataclass(frozen=True)
class BoundParams:
    d: int
    r: int = 1
    t1: Fraction | float | None = None
    t2: Fraction | float | None = None

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"d must be >= 2, got {self.d}")
        if not 1 <= self.r < self.d:
            raise ValueError(f"rank must satisfy 1 <= r < d, got r={self.r}, d={self.d}")
        if self.t1 is None:
            object.__setattr__(self, "t1", Fraction(self.r, self.d))
        if self.t2 is None:
            object.__setattr__(self, "t2", Fraction(1, 2))
        if not (0 <= self.t1 <= 1 and 0 <= self.t2 <= 1):
            raise ValueError("thresholds must lie in [0, 1]")
        if self.t1 > self.t2:
            raise ValueError(f"t1={self.t1} exceeds t2={self.t2}")


def theorem1_bound(d: int) -> Fraction:
    """Exact ``(1 - 1/d)^(d-1) - 1/2^(d-1)``."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return Fraction(d - 1, d) ** (d - 1) - Fraction(1, 2 ** (d - 1))


def argmax_over_d(d_max: int) -> tuple[int, Fraction, float]:
    """Maximiser of the rank-1 bound over ``2 <= d <= d_max``.

    Returns ``(d*, value, 1/e)``; the last entry is the large-d limit.
    """
    if d_max < 2:
        raise ValueError("d_max must be >= 2")
    best_d, best = 2, theorem1_bound(2)
    for d in range(3, d_max + 1):
        val = theorem1_bound(d)
        if val > best:
            best_d, best = d, val
    return best_d, best, math.exp(-1)


# ------------------------------------------------------- incomplete beta


def _check_domain(x, a, b) -> None:
    if not 0 <= x <= 1:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if a <= 0 or b <= 0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")


def _betacf(x: float, a: float, b: float, max_iter: int = 10_000) -> float:
    # modified Lentz evaluation of the continued fraction for I_x(a, b)
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"continued fraction did not converge for x={x}, a={a}, b={b}")


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularised incomplete beta function ``I_x(a, b)``.

    Continued fraction, applied directly when ``x < (a + 1) / (a + b + 2)`` and
    through ``I_x(a, b) = 1 - I_{1-x}(b, a)`` otherwise.
    """
    _check_domain(x, a, b)
    x = float(x)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(x, a, b) / a
    return 1.0 - front * _betacf(1.0 - x, b, a) / b


def reg_inc_beta_exact(x: Fraction, a: int, b: int) -> Fraction:
    """``I_x(a, b)`` for integer shapes and rational ``x`` as an exact binomial tail:
    ``sum_{j=a}^{a+b-1} C(a+b-1, j) x^j (1-x)^(a+b-1-j)``."""
    x = Fraction(x)
    if not (isinstance(a, int) and isinstance(b, int)):
        raise TypeError("exact path needs integer shape parameters")
    _check_domain(x, a, b)
    n = a + b - 1
    y = 1 - x
    return sum((comb(n, j) * x**j * y ** (n - j) for j in range(a, n + 1)), Fraction(0))


def reg_inc_beta_array(x, a: float, b: float) -> np.ndarray:
    """Vectorised ``I_x(a, b)`` for CDF evaluation on samples.

    Integer shapes use the binomial tail in floating point; other shapes fall back
    to the scalar continued fraction.
    """
    xs = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    if float(a).is_integer() and float(b).is_integer() and a + b < 200:
        a, b = int(a), int(b)
        n = a + b - 1
        out = np.zeros_like(xs)
        y = 1.0 - xs
        for j in range(a, n + 1):
            out += comb(n, j) * xs**j * y ** (n - j)
        return np.clip(out, 0.0, 1.0)
    return np.vectorize(lambda t: reg_inc_beta(t, a, b), otypes=[float])(xs)


def beta_norm_constant(r: int, d: int) -> float:
    """``2 / B(r, d - r)``, the normalising constant of the density of the root
    overlap ``sqrt(sum_{k<=r} |U_k1|^2)``."""
    return 2.0 * math.exp(math.lgamma(d) - math.lgamma(r) - math.lgamma(d - r))


def beta_pdf(t, a: float, b: float):
    """Beta(a, b) density ``t^(a-1) (1-t)^(b-1) / B(a, b)``."""
    t = np.asarray(t, dtype=float)
    log_b = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
    with np.errstate(divide="ignore"):
        return np.exp((a - 1) * np.log(t) + (b - 1) * np.log1p(-t) - log_b)


def beta_median(a: float, b: float, tol: float = 1e-12) -> float:
    """Median of Beta(a, b) by bisection on ``reg_inc_beta``."""
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if reg_inc_beta(mid, a, b) < 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ------------------------------------------------------------- the bounds


def annulus_proportion(params: BoundParams):
    """Fraction of the space inside ``t1 <= overlap <= t2``.

    Rank 1: exact ``(1 - t1)^(d-1) - (1 - t2)^(d-1)`` (a Fraction when the
    thresholds are rational). Higher rank: ``I_{t2}(r, d-r) - I_{t1}(r, d-r)``,
    exact when both thresholds are rational.
    """
    d, r, t1, t2 = params.d, params.r, params.t1, params.t2
    exact = isinstance(t1, (int, Fraction)) and isinstance(t2, (int, Fraction))
    if r == 1:
        if exact:
            return (1 - Fraction(t1)) ** (d - 1) - (1 - Fraction(t2)) ** (d - 1)
        return (1 - float(t1)) ** (d - 1) - (1 - float(t2)) ** (d - 1)
    if exact:
        return reg_inc_beta_exact(Fraction(t2), r, d - r) - reg_inc_beta_exact(Fraction(t1), r, d - r)
    return reg_inc_beta(float(t2), r, d - r) - reg_inc_beta(float(t1), r, d - r)


def rank_bound(d: int, r: int) -> Fraction:
    """Exact ``I_{1/2}(r, d-r) - I_{r/d}(r, d-r)``."""
    if not 1 <= r < d:
        raise ValueError(f"rank must satisfy 1 <= r < d, got r={r}, d={d}")
    return reg_inc_beta_exact(Fraction(1, 2), r, d - r) - reg_inc_beta_exact(Fraction(r, d), r, d - r)


def rank_bound_float(d: int, r: int) -> float:
    """The rank-r bound through the continued-fraction path."""
    if not 1 <= r < d:
        raise ValueError(f"rank must satisfy 1 <= r < d, got r={r}, d={d}")
    return reg_inc_beta(0.5, r, d - r) - reg_inc_beta(r / d, r, d - r)


@dataclass
class HalfCorollaryReport:
    holds: bool
    worst_value: Fraction
    worst_at: tuple[int, int]
    median_ok: bool
    worst_median_gap: float
    checked: int

    @property
    def margin(self) -> Fraction:
        return Fraction(1, 2) - self.worst_value


def verify_half_corollary(d_max: int, median_tol: float = 1e-10) -> HalfCorollaryReport:
    """Check ``rank_bound(d, r) < 1/2`` for ``2 <= d <= d_max``, ``1 <= r <= d/2``,
    and the median ordering ``median(Beta(r, d-r)) <= r/d`` on the same grid."""
    if d_max < 2:
        raise ValueError("d_max must be >= 2")
    worst, where = Fraction(-1), (0, 0)
    holds = True
    median_ok = True
    worst_gap = -math.inf
    checked = 0
    for d in range(2, d_max + 1):
        for r in range(1, d // 2 + 1):
            val = rank_bound(d, r)
            checked += 1
            if val >= Fraction(1, 2):
                holds = False
            if val > worst:
                worst, where = val, (d, r)
            gap = beta_median(r, d - r, tol=median_tol / 10) - r / d
            worst_gap = max(worst_gap, gap)
            if gap > median_tol:
                median_ok = False
    return HalfCorollaryReport(holds, worst, where, median_ok, worst_gap, checked)
