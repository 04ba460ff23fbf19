"""Leading-order phase family of the series, its derivatives, the hypothesis
check, and location/classification of interior maxima.

The logged general term satisfies (as t -> 0+, u = x t fixed)

    t * log_summand(u/t, t)  ->  level(-1):  v u - A u^2 - sum_j f_j Li2(e^{-alpha_j u})

with f_j = -sum_{beta,gamma} S/beta collected over the terms sharing alpha_j.
Level 0 and the higher levels supply the t^1, t^2, ... coefficients.  The
maxima of the leading level on (0, inf) dictate every exponential growth
rate downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateError, DomainError
from .qseries import SeriesSpec
from .specfun import bernoulli_poly, dilog, gamma_fn, li1, polylog_nonpos

MAX_ORDER = 8            # stationary points classified up to order m_u = 8
_DEGENERACY_RTOL = 1e-8  # |H^(2m)| below this * scale counts as zero
_BISECT_RTOL = 1e-15


@dataclass(frozen=True)
class PhaseFamily:
    """Series spec plus the (alpha_j, f_j) coefficient list, alpha ascending.
    Terms whose f sums to zero stay in ``spec`` (they still feed the higher
    levels) but are excluded from ``falpha``."""
    spec: SeriesSpec
    falpha: tuple[tuple[float, float], ...]


def build_phase(spec: SeriesSpec) -> PhaseFamily:
    by_alpha: dict[float, float] = {}
    scale: dict[float, float] = {}
    for p in spec.terms:
        by_alpha[p.alpha] = by_alpha.get(p.alpha, 0.0) - p.S / p.beta
        scale[p.alpha] = scale.get(p.alpha, 0.0) + abs(p.S / p.beta)
    falpha = tuple((a, f) for a, f in sorted(by_alpha.items())
                   if abs(f) > 1e-15 * scale[a])
    return PhaseFamily(spec, falpha)


def phase_value(pf: PhaseFamily, level: int, u: float) -> float:
    """Level -1: v u - A u^2 - sum_j f_j Li2(e^{-alpha_j u}).
    Level 0:  -sum_terms (gamma/beta - 1/2) S Li1(e^{-alpha u}) - B u.
    Level m>=1: (-1)^(m-1)/(m+1)! sum_terms beta^m S B_{m+1}(gamma/beta)
                Li_{1-m}(e^{-alpha u}).
    """
    if not u > 0:
        raise DomainError(f"phase needs u > 0, got {u}")
    s = pf.spec
    if level == -1:
        return (s.v * u - s.A * u * u
                - sum(f * dilog(math.exp(-a * u)) for a, f in pf.falpha))
    if level == 0:
        return (-sum((p.gamma / p.beta - 0.5) * p.S * li1(math.exp(-p.alpha * u))
                     for p in s.terms) - s.B * u)
    m = level
    sgn = 1.0 if (m - 1) % 2 == 0 else -1.0
    acc = sum(p.beta ** m * p.S * bernoulli_poly(m + 1, p.gamma / p.beta)
              * _li_one_minus(m, math.exp(-p.alpha * u)) for p in s.terms)
    return sgn * acc / math.factorial(m + 1)


def _li_one_minus(m: int, x: float) -> float:
    # Li_{1-m}(x) for m >= 1
    if m == 1:
        return polylog_nonpos(0, x)
    return polylog_nonpos(m - 1, x)


def phase_deriv(pf: PhaseFamily, k: int, u: float) -> float:
    """k-th u-derivative of the leading level (analytic, no differencing)."""
    if not u > 0:
        raise DomainError(f"phase needs u > 0, got {u}")
    if k < 1:
        raise DomainError("derivative order must be >= 1")
    s = pf.spec
    if k == 1:
        return (s.v - 2.0 * s.A * u
                - sum(a * f * math.log1p(-math.exp(-a * u)) for a, f in pf.falpha))
    if k == 2:
        return (-2.0 * s.A
                - sum(a * a * f / math.expm1(a * u) for a, f in pf.falpha))
    return -sum((-a) ** k * f * polylog_nonpos(k - 2, math.exp(-a * u))
                for a, f in pf.falpha)


@dataclass(frozen=True)
class HypothesisReport:
    increasing: bool
    branch: str   # "limit" or "sampled"
    slope_sum: float
    detail: str

    def __bool__(self) -> bool:
        return self.increasing


def check_hypothesis(pf: PhaseFamily) -> HypothesisReport:
    """True iff the leading phase is nondecreasing on some (0, eps].

    As u -> 0+ the derivative behaves like -(sum_j alpha_j f_j) log u + O(1),
    so the sign of sum alpha_j f_j decides; the balanced case falls back to
    sign sampling on a geometric grid.
    """
    slope = sum(a * f for a, f in pf.falpha)
    scale = sum(abs(a * f) for a, f in pf.falpha)
    if abs(slope) > 1e-13 * max(scale, 1.0):
        if slope > 0:
            return HypothesisReport(True, "limit", slope,
                                    "sum alpha_j f_j > 0 forces +inf slope at 0+")
        return HypothesisReport(False, "limit", slope,
                                "sum alpha_j f_j < 0 forces -inf slope at 0+")
    max_alpha = max((a for a, _ in pf.falpha), default=1.0)
    eps = min(1.0, 1.0 / (2.0 * max_alpha))
    for i in range(40):
        u = eps * 2.0 ** (-i)
        if phase_deriv(pf, 1, u) < 0:
            return HypothesisReport(False, "sampled", slope,
                                    f"negative slope at u={u:.3e}")
    return HypothesisReport(True, "sampled", slope,
                            "balanced log coefficient; slope >= 0 on the grid")


@dataclass(frozen=True)
class StationaryPoint:
    """Interior local maximum of the leading phase: location, half-order of
    the first nonvanishing even derivative, the phase value, that derivative,
    and the Laplace constant."""
    u: float
    order: int
    h_value: float
    h2m: float
    c_u: float


def laplace_constant(pf: PhaseFamily, u: float, order: int, h2m: float) -> float:
    """e^{H0(u)} Gamma(1/(2m))/m * ((2m)!/|H^(2m)(u)|)^(1/(2m))."""
    m = order
    return (math.exp(phase_value(pf, 0, u)) * gamma_fn(1.0 / (2 * m)) / m
            * (math.factorial(2 * m) / abs(h2m)) ** (1.0 / (2 * m)))


def search_upper_bound(pf: PhaseFamily) -> float:
    """A u beyond which the leading phase is certainly decreasing (A > 0 or
    v < 0) or negligible (A = v = 0)."""
    s = pf.spec
    sum_abs_f = sum(abs(f) for _, f in pf.falpha)
    if s.A > 0:
        u_hi = (abs(s.v) + sum_abs_f * math.pi ** 2 / 6.0 + 1.0) / s.A + 1.0
    elif s.v < 0:
        u_hi = 1.0
        while (s.v + sum(abs(a * f) * max(-math.log1p(-math.exp(-a * u_hi)), 0.0)
                         for a, f in pf.falpha) >= 0):
            u_hi *= 2.0
            if u_hi > 1e9:
                raise DegenerateError("no decreasing-dominance bound found")
        u_hi += 1.0
    else:
        min_alpha = min((a for a, _ in pf.falpha), default=1.0)
        u_hi = 50.0 / min_alpha
    # safety: extend while the slope is still nonnegative at the bound
    guard = 0
    while pf.falpha and phase_deriv(pf, 1, u_hi) > 0 and s.A > 0:
        u_hi *= 2.0
        guard += 1
        if guard > 60:
            raise DegenerateError("slope stays positive past any sane bound")
    return u_hi


def _grid(pf: PhaseFamily, u_lo: float, u_hi: float) -> list[float]:
    # geometric below 1, linear above; fine enough that a sign change of the
    # analytic slope cannot hide between neighbors for the admissible specs
    pts = []
    u = u_lo
    while u < min(1.0, u_hi):
        pts.append(u)
        u *= 1.07
    max_alpha = max((a for a, _ in pf.falpha), default=1.0)
    step = 0.05 * min(1.0, 1.0 / max_alpha)
    u = 1.0
    while u <= u_hi:
        pts.append(u)
        u += step
    pts.append(u_hi)
    return pts


def stationary_points(pf: PhaseFamily) -> list[StationaryPoint]:
    """All interior local maxima of the leading phase, u ascending.

    Brackets sign changes (+ -> -) of the analytic slope on a composite
    grid, bisects each bracket to relative width 1e-15, then classifies the
    order as the smallest m with |H^(2m)(u)| above 1e-8 * scale.  An empty
    list is a valid outcome (no interior peak; the tail carries everything).
    """
    if not pf.falpha and pf.spec.A == 0:
        return []
    u_lo = 1e-8
    u_hi = search_upper_bound(pf)
    grid = _grid(pf, u_lo, u_hi)
    vals = [phase_deriv(pf, 1, u) for u in grid]
    scale = sum(a * a * abs(f) for a, f in pf.falpha) + 2.0 * pf.spec.A
    out = []
    for i in range(len(grid) - 1):
        if vals[i] > 0.0 >= vals[i + 1]:
            a, b = grid[i], grid[i + 1]
            fa = vals[i]
            while b - a > _BISECT_RTOL * max(1.0, b):
                mid = 0.5 * (a + b)
                fm = phase_deriv(pf, 1, mid)
                if fm > 0.0:
                    a, fa = mid, fm
                else:
                    b = mid
            u = 0.5 * (a + b)
            order = None
            h2m = 0.0
            for m in range(1, MAX_ORDER + 1):
                h2m = phase_deriv(pf, 2 * m, u)
                if abs(h2m) > _DEGENERACY_RTOL * scale:
                    order = m
                    break
            if order is None:
                raise DegenerateError(
                    f"no even derivative up to order {2 * MAX_ORDER} exceeds "
                    f"tolerance at u={u}")
            if h2m > 0:
                raise DegenerateError(
                    f"classified even derivative positive at bracketed "
                    f"maximum u={u}")
            out.append(StationaryPoint(
                u=u, order=order, h_value=phase_value(pf, -1, u), h2m=h2m,
                c_u=laplace_constant(pf, u, order, h2m)))
    return out
