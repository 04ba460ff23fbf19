"""Laplace expansion at each interior maximum, the leading tail term, and
assembly of the full asymptotic value including the constant-product
prefactor.

At a maximum u of order k the logged term expands around x = u/t with
peak-width normalizer V = (-F^(2k)(u/t)/(2k)!)^(1/(2k)); the reduced
derivatives lambda_r = F^(r)(u/t)/(r! V^r) (r != 2k) feed the moment
corrections kappa via exp(sum* lambda_r y^r) = sum_l kappa_l y^l, of which
only even indices survive the symmetric integral:

    sum over terms near the peak ~ e^{F(u/t)}/V *
        sum_l Gamma((2l+1)/(2k)) kappa_{2l}(u,t)/k.

When no interior maximum exists and the flat tail applies, the leading
contribution is Gamma(B/alpha_1)/(alpha_1 f(alpha_1)^(B/alpha_1)) *
t^(B/alpha_1 - 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BranchError, DegenerateError, HypothesisError, SignError
from .logvalue import LogValue
from .phase import (PhaseFamily, StationaryPoint, build_phase, check_hypothesis,
                    laplace_constant, phase_value, stationary_points)
from .qseries import (ProductSpec, QuadTerm, SeriesSpec, log_summand,
                      log_summand_deriv, normalize, prefactor_asym,
                      prefactor_constants)

DEFAULT_L = 2   # correction order; round-off dominates past this at desk-scale t
DEFAULT_M = 8   # prefactor correction order


@dataclass(frozen=True)
class CorrectionSeries:
    """Peak data at one maximum: width normalizer V and the even moment
    corrections kappa_0=1, kappa_2, ..., kappa_{2L}."""
    u: float
    k_u: int
    V: float
    kappas: tuple[float, ...]


def _lambda_table(spec: SeriesSpec, sp: StationaryPoint, t: float,
                  rmax: int) -> tuple[float, dict[int, float]]:
    two_k = 2 * sp.order
    x = sp.u / t
    d2k = log_summand_deriv(spec, two_k, x, t)
    if d2k >= 0:
        raise SignError(
            f"order-{two_k} derivative nonnegative at the peak (t={t} too large)")
    V = (-d2k / math.factorial(two_k)) ** (1.0 / two_k)
    lams: dict[int, float] = {}
    for r in range(1, rmax + 1):
        if r == two_k:
            continue
        lams[r] = log_summand_deriv(spec, r, x, t) / (math.factorial(r) * V ** r)
    return V, lams


def _exp_series(lams: dict[int, float], order: int) -> list[float]:
    # coefficients of exp(sum_r a_r y^r): b_0 = 1, n b_n = sum_r r a_r b_{n-r}
    b = [0.0] * (order + 1)
    b[0] = 1.0
    for n in range(1, order + 1):
        s = 0.0
        for r, a in lams.items():
            if r <= n:
                s += r * a * b[n - r]
        b[n] = s / n
    return b


def kappa_by_partitions(lams: dict[int, float], ell: int) -> float:
    """Direct partition-sum evaluation of kappa_ell = sum over {l_r} with
    sum r l_r = ell of prod lambda_r^(l_r)/l_r!.  Cross-check oracle for the
    power-series exponential; practical only for small ell."""
    rs = sorted(r for r in lams if r <= ell)

    def rec(i: int, remaining: int) -> float:
        if remaining == 0:
            return 1.0
        if i >= len(rs):
            return 0.0
        r = rs[i]
        total = 0.0
        term = 1.0
        count = 0
        while r * count <= remaining:
            total += term * rec(i + 1, remaining - r * count)
            count += 1
            term *= lams[r] / count
        return total

    return rec(0, ell)


def corrections(spec: SeriesSpec, sp: StationaryPoint, t: float,
                L: int) -> CorrectionSeries:
    """Peak-width normalizer and kappa_0..kappa_{2L} at the maximum sp."""
    if L < 0:
        raise ValueError("correction order must be nonnegative")
    k = sp.order
    rmax = max(2 * k * (2 * k + 1) * L, 1)
    V, lams = _lambda_table(spec, sp, t, rmax)
    coeffs = _exp_series(lams, 2 * L)
    return CorrectionSeries(u=sp.u, k_u=k, V=V,
                            kappas=tuple(coeffs[2 * ell] for ell in range(L + 1)))


def peak_value(spec: SeriesSpec, sp: StationaryPoint, t: float,
               L: int = DEFAULT_L) -> LogValue:
    """exp(F(u/t,t))/V * sum_{l<=L} Gamma((2l+1)/(2k)) kappa_{2l}/k."""
    cs = corrections(spec, sp, t, L)
    k = cs.k_u
    s = sum(math.gamma((2 * ell + 1) / (2 * k)) * cs.kappas[ell] / k
            for ell in range(L + 1))
    if s <= 0:
        raise DegenerateError(
            f"correction sum nonpositive ({s}); expansion broke down at t={t}")
    f_u = log_summand(spec, sp.u / t, t)
    return LogValue(1, f_u - math.log(cs.V) + math.log(s))


def leading_constant(pf: PhaseFamily, sp: StationaryPoint) -> tuple[float, float, float]:
    """(C_u, t_power, rate) of the t->0 law C_u t^(-1+1/(2m)) e^(rate/t)."""
    c_u = laplace_constant(pf, sp.u, sp.order, sp.h2m)
    return c_u, -1.0 + 1.0 / (2 * sp.order), sp.h_value


def tail_branch_applies(pf: PhaseFamily) -> bool:
    s = pf.spec
    return (s.A == 0 and s.v == 0 and bool(pf.falpha) and pf.falpha[0][1] > 0)


def tail_leading(pf: PhaseFamily, t: float) -> LogValue:
    """Gamma(B/alpha_1)/(alpha_1 f(alpha_1)^(B/alpha_1)) * t^(B/alpha_1 - 1),
    the leading far-tail contribution when A = v = 0 and f(alpha_1) > 0."""
    s = pf.spec
    if s.A != 0 or s.v != 0:
        raise BranchError("tail term is zero unless A = 0 and v = 0")
    if not pf.falpha:
        raise BranchError("no Pochhammer terms: tail exponent alpha_1 undefined")
    alpha1, f1 = pf.falpha[0]
    if f1 < 0:
        raise BranchError("f(alpha_1) < 0: tail term is zero")
    if s.B <= 0:
        raise BranchError("tail term needs B > 0")
    ba = s.B / alpha1
    log = (math.lgamma(ba) - math.log(alpha1) - ba * math.log(f1)
           + (ba - 1.0) * math.log(t))
    return LogValue(1, log)


@dataclass(frozen=True)
class AsymptoticResult:
    """Asymptotic value at a fixed t, split as
    log = log_constant + t_power*log t + rate/t + log(correction_factor).

    rate/t_power/log_constant describe the dominant branch's t->0 law with
    the constant-product prefactor folded in; correction_factor absorbs the
    finite-t corrections (kappa sums, prefactor exponential tail, and any
    subdominant branch).  branch is "peak", "tail" or "sum-of-peaks+tail".
    """
    rate: float
    t_power: float
    log_constant: float
    correction_factor: float
    branch: str
    t: float
    total: LogValue

    def log_value(self) -> float:
        return self.total.log_abs


def asym_from_parts(series: SeriesSpec, prefactor: tuple[QuadTerm, ...],
                    t: float, L: int = DEFAULT_L, M: int = DEFAULT_M,
                    extra_log: float = 0.0) -> AsymptoticResult:
    """Assemble peaks + tail for a normalized series and multiply by the
    asymptotic constant-product prefactor (and an optional fixed log factor,
    applied verbatim on both branches)."""
    pf = build_phase(series)
    hyp = check_hypothesis(pf)
    if not hyp:
        raise HypothesisError(f"increasing-near-zero hypothesis fails: {hyp.detail}")
    sps = stationary_points(pf)
    n_val = LogValue.zero()
    for sp in sps:
        n_val = n_val + peak_value(series, sp, t, L)
    if tail_branch_applies(pf):
        i_val = tail_leading(pf, t)
    else:
        i_val = LogValue.zero()
    if n_val.is_zero() and i_val.is_zero():
        raise DegenerateError(
            "no interior maximum and no applicable tail branch; "
            "the expansion machinery does not cover this spec")
    pre = prefactor_asym(prefactor, t, M)
    total = (n_val + i_val) * pre * LogValue.from_log(extra_log)

    if prefactor:
        A_H, B_H, logC, _ = prefactor_constants(prefactor)
    else:
        A_H, B_H, logC = 0.0, 0.0, 0.0
    tail_only = not sps
    if sps:
        dom = max(sps, key=lambda sp: sp.h_value)
        c_u, tp, rate = leading_constant(pf, dom)
        if not i_val.is_zero() and (dom.h_value < 0
                                    or (dom.h_value == 0
                                        and pf.spec.B / pf.falpha[0][0] - 1.0 < tp)):
            tail_only = True
    if tail_only:
        alpha1, f1 = pf.falpha[0]
        ba = pf.spec.B / alpha1
        rate = 0.0
        tp = ba - 1.0
        log_cu = math.lgamma(ba) - math.log(alpha1) - ba * math.log(f1)
    else:
        log_cu = math.log(c_u)
    branch = ("tail" if not sps else
              ("sum-of-peaks+tail" if not i_val.is_zero() else "peak"))
    rate_total = A_H + rate
    t_power = B_H + tp
    log_constant = logC + log_cu
    base = rate_total / t + t_power * math.log(t) + log_constant
    corr = math.exp(total.log_abs - base) * total.sign
    return AsymptoticResult(rate=rate_total, t_power=t_power,
                            log_constant=log_constant, correction_factor=corr,
                            branch=branch, t=t, total=total)


def asym_total(product: ProductSpec, t: float, L: int = DEFAULT_L,
               M: int = DEFAULT_M) -> AsymptoticResult:
    """Full asymptotic value of the raw series: normalize, expand the
    normalized part, multiply by the constant-product asymptotics."""
    series, pref = normalize(product)
    return asym_from_parts(series, pref.quads, t, L, M)
