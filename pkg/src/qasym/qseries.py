"""Series data model and exact (truncated) evaluation.

Covers: finite/infinite q-Pochhammer symbols in log space, the canonical
normalization from finite-symbol quadruples to infinite-symbol terms, the
logged general term of the normalized series and its x-derivatives, direct
log-space summation of the series, and the small-t product asymptotics of
the constant prefactor.

Truncation policy for every infinite sum: relative threshold 1e-18 with
consecutive-small-term counting.  Values are LogValue throughout; the
interesting series reach exp(pi^2/(5t)), which overflows binary64 for
t < 0.0125.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError, SpecError
from .logvalue import LogValue
from .specfun import bernoulli_number, bernoulli_poly

T_MAX = 0.5                 # largest t any evaluation accepts
LN_EPS = math.log(1e-18)    # relative truncation threshold, in log space
_KLOG_MARGIN = 45.0         # e^-45 ~ 3e-20: inner k-sums stop past this decay
_KMAX_HARD = 10_000_000

LOG_2PI = math.log(2.0 * math.pi)


def _check_domain_triple(A: float, v: float, B: float) -> None:
    ok = (A > 0) or (A == 0 and v == 0 and B > 0) or (A == 0 and v < 0)
    if not ok:
        raise SpecError(
            "domain triple violated: need A>0, or A=0,v=0,B>0, or A=0,v<0 "
            f"(got A={A}, v={v}, B={B})")


@dataclass(frozen=True)
class PochTerm:
    """One factor (q^(alpha*m+gamma); q^beta)_inf^S of the series denominator."""
    alpha: float
    beta: float
    gamma: float
    S: float

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise SpecError(f"PochTerm needs alpha>0, got {self.alpha}")
        if not self.beta > 0:
            raise SpecError(f"PochTerm needs beta>0, got {self.beta}")
        if not self.gamma > 0:
            raise SpecError(f"PochTerm needs gamma>0, got {self.gamma}")
        if self.S == 0:
            raise SpecError("PochTerm needs S != 0 (merged-away terms are dropped)")


@dataclass(frozen=True)
class SeriesSpec:
    """Canonical description of the normalized series
    sum_m q^(A m^2 + B m) z^m / prod (q^(alpha m+gamma); q^beta)_inf^S,
    with z = e^v.  ``terms`` is sorted by (alpha, beta, gamma) and free of
    duplicate keys; it may be empty (purely polynomial exponent).
    """
    A: float
    B: float
    v: float
    terms: tuple[PochTerm, ...] = ()

    def __post_init__(self) -> None:
        if self.A < 0:
            raise SpecError(f"need A >= 0, got {self.A}")
        _check_domain_triple(self.A, self.v, self.B)
        keys = [(p.alpha, p.beta, p.gamma) for p in self.terms]
        if keys != sorted(keys):
            raise SpecError("terms must be sorted by (alpha, beta, gamma)")
        if len(set(keys)) != len(keys):
            raise SpecError("duplicate (alpha, beta, gamma) terms must be merged")

    @staticmethod
    def make(A: float, B: float, v: float,
             terms: list[tuple[float, float, float, float]]) -> "SeriesSpec":
        """Build a SeriesSpec from raw (alpha, beta, gamma, S) tuples,
        merging duplicates by adding S and dropping zero-S terms."""
        merged: dict[tuple[float, float, float], float] = {}
        for a, b, g, s in terms:
            key = (a, b, g)
            merged[key] = merged.get(key, 0.0) + s
        kept = tuple(PochTerm(a, b, g, s)
                     for (a, b, g), s in sorted(merged.items()) if s != 0.0)
        return SeriesSpec(A, B, v, kept)


@dataclass(frozen=True)
class QuadTerm:
    """One finite symbol (q^a; q^b)_(c*m+d)^S of the raw series."""
    a: float
    b: float
    c: float
    d: float
    S: float

    def __post_init__(self) -> None:
        if not self.b > 0:
            raise SpecError(f"QuadTerm needs b>0, got {self.b}")
        if not self.c > 0:
            raise SpecError(f"QuadTerm needs c>0, got {self.c}")
        if not self.a + self.b * self.d > 0:
            raise SpecError(
                f"QuadTerm needs a+bd>0, got a+bd={self.a + self.b * self.d}")
        ab = self.a / self.b
        if ab <= 0 and abs(ab - round(ab)) < 1e-9:
            raise SpecError(
                f"QuadTerm needs a/b away from nonpositive integers (Gamma pole), "
                f"got a/b={ab}")


@dataclass(frozen=True)
class ProductSpec:
    """Raw series sum_m q^(A m^2+B m) z^m / prod (q^a;q^b)_(c m+d)^S.

    Also reused (with c, d ignored) for the m-independent constant product
    prod (q^a;q^b)_inf^(-S); ``quads`` may then be empty.
    """
    A: float
    B: float
    v: float
    quads: tuple[QuadTerm, ...] = ()

    def __post_init__(self) -> None:
        if self.A < 0:
            raise SpecError(f"need A >= 0, got {self.A}")
        _check_domain_triple(self.A, self.v, self.B)

    @staticmethod
    def make(A: float, B: float, v: float,
             quads: list[tuple[float, float, float, float, float]]) -> "ProductSpec":
        return ProductSpec(A, B, v, tuple(QuadTerm(*q) for q in quads))


def normalize(spec: ProductSpec) -> tuple[SeriesSpec, ProductSpec]:
    """Rewrite finite symbols through (q^a;q^b)_z = (q^a;q^b)_inf/(q^(a+bz);q^b)_inf.

    Each quadruple (a,b,c,d,S) becomes the infinite-symbol term
    (alpha, beta, gamma) = (b*c, b, a+b*d) with denominator exponent -S,
    plus the m-independent factor (q^a;q^b)_inf^(-S) collected in the
    returned constant-prefactor ProductSpec (quads merged on (a,b)).
    """
    terms = [(q.b * q.c, q.b, q.a + q.b * q.d, -q.S) for q in spec.quads]
    series = SeriesSpec.make(spec.A, spec.B, spec.v, terms)
    pref: dict[tuple[float, float], float] = {}
    for q in spec.quads:
        key = (q.a, q.b)
        pref[key] = pref.get(key, 0.0) + q.S
    quads = tuple(QuadTerm(a, b, 1.0, 0.0, s)
                  for (a, b), s in sorted(pref.items()) if s != 0.0)
    return series, ProductSpec(spec.A, spec.B, spec.v, quads)


# ---------------------------------------------------------------------------
# q-Pochhammer symbols


def qpoch_finite(a: float, q: float, m: int) -> LogValue:
    """(a;q)_m = prod_{k<m} (1 - a q^k), exact in log space; (a;q)_0 = 1."""
    if m < 0:
        raise DomainError("finite symbol needs m >= 0")
    if m == 0:
        return LogValue.one()
    factors = 1.0 - a * q ** np.arange(m, dtype=float)
    if np.any(factors == 0.0):
        raise PoleError("vanishing factor in finite q-Pochhammer symbol")
    sign = -1 if int(np.sum(factors < 0)) % 2 else 1
    return LogValue(sign, float(np.sum(np.log(np.abs(factors)))))


def qpoch_inf(a: float, q: float) -> LogValue:
    """log (a;q)_inf for 0 <= a < 1, 0 < q < 1.

    Truncates once a q^K < 1e-18; the omitted tail is bounded by
    2 a q^K/(1-q) and reported in the result's err field.
    """
    if not 0.0 <= a < 1.0:
        raise DomainError(f"qpoch_inf needs 0 <= a < 1, got {a}")
    if not 0.0 < q < 1.0:
        raise DomainError(f"qpoch_inf needs 0 < q < 1, got {q}")
    if q >= 1.0 - 1e-12:
        raise ConvergenceError("q too close to 1; use the product asymptotics")
    if a == 0.0:
        return LogValue.one()
    K = max(int((math.log(1e-18) - math.log(a)) / math.log(q)) + 1, 1)
    k = np.arange(K, dtype=float)
    total = float(np.sum(np.log1p(-a * q ** k)))
    err = 2.0 * a * q ** K / (1.0 - q)
    return LogValue(1, total, err=err)


def _gamma_sign_log(x: float) -> tuple[int, float]:
    # sign and log|Gamma(x)| for real non-pole x
    if x > 0:
        return 1, math.lgamma(x)
    if x == int(x):
        raise PoleError(f"Gamma pole at {x}")
    sign = -1 if int(math.floor(x)) % 2 else 1
    return sign, math.lgamma(x)


def mcintosh_asym(a: float, b: float, t: float, M: int) -> LogValue:
    """Small-t asymptotics of log (e^{-at}; e^{-bt})_inf:

        -pi^2/(6bt) + (1/2 - a/b) log(bt) + log(sqrt(2 pi)/Gamma(a/b))
        - sum_{l=1}^{M} b^l B_l B_{l+1}(a/b) t^l / (l (l+1)!).

    The t-power carries bt, not t alone; the plain-t form fails the direct
    q-Pochhammer cross-check by (a/b-1/2) log b whenever b != 1.
    """
    if not b > 0:
        raise DomainError(f"need b > 0, got {b}")
    if not t > 0:
        raise DomainError(f"need t > 0, got {t}")
    if b * t >= 2.0 * math.pi:
        raise ConvergenceError("bt >= 2*pi: expansion radius exceeded")
    ab = a / b
    gsign, glog = _gamma_sign_log(ab)
    out = (-math.pi ** 2 / (6.0 * b * t) + (0.5 - ab) * math.log(b * t)
           + 0.5 * LOG_2PI - glog)
    for ell in range(1, M + 1):
        bn = bernoulli_number(ell)
        if bn == 0:
            continue
        out -= (b ** ell * float(bn) * bernoulli_poly(ell + 1, ab) * t ** ell
                / (ell * math.factorial(ell + 1)))
    return LogValue(gsign, out)


def prefactor_constants(quads: tuple[QuadTerm, ...]) -> tuple[float, float, float, int]:
    """(A_H, B_H, log C_H, sign) of prod (q^a;q^b)_inf^(-S) ~
    C_H t^{B_H} exp(A_H/t + sum A_l t^l)."""
    A_H = 0.0
    B_H = 0.0
    logC = 0.0
    sign = 1
    for q in quads:
        ab = q.a / q.b
        A_H += math.pi ** 2 * q.S / (6.0 * q.b)
        B_H += (ab - 0.5) * q.S
        gsign, glog = _gamma_sign_log(ab)
        logC += q.S * (glog - 0.5 * LOG_2PI + (ab - 0.5) * math.log(q.b))
        if gsign < 0:
            if q.S != int(q.S):
                raise DomainError("negative Gamma with non-integer exponent")
            sign *= -1 if int(q.S) % 2 else 1
    return A_H, B_H, logC, sign


def prefactor_asym(spec: ProductSpec | tuple[QuadTerm, ...], t: float,
                   M: int) -> LogValue:
    """log of prod (q^a;q^b)_inf^(-S) via the aggregated constants, with the
    correction series truncated at order M."""
    quads = spec.quads if isinstance(spec, ProductSpec) else tuple(spec)
    if not quads:
        return LogValue.one()
    if not t > 0:
        raise DomainError(f"need t > 0, got {t}")
    A_H, B_H, logC, sign = prefactor_constants(quads)
    out = A_H / t + B_H * math.log(t) + logC
    for ell in range(1, M + 1):
        bn = bernoulli_number(ell)
        if bn == 0:
            continue
        A_l = sum(float(bn) * q.S * q.b ** ell * bernoulli_poly(ell + 1, q.a / q.b)
                  / (ell * math.factorial(ell + 1)) for q in quads)
        out += A_l * t ** ell
    return LogValue(sign, out)


def prefactor_exact(spec: ProductSpec | tuple[QuadTerm, ...], t: float) -> LogValue:
    """prod (q^a;q^b)_inf^(-S) by direct symbol evaluation (needs a > 0)."""
    quads = spec.quads if isinstance(spec, ProductSpec) else tuple(spec)
    out = LogValue.one()
    for q in quads:
        if q.a <= 0:
            raise DomainError("exact prefactor needs a > 0 in every quad")
        lv = qpoch_inf(math.exp(-q.a * t), math.exp(-q.b * t))
        out = out * LogValue.from_log(-q.S * lv.log_abs, err=abs(q.S) * lv.err)
    return out


# ---------------------------------------------------------------------------
# The logged general term and its derivatives


def _require_t(t: float) -> None:
    if not 0.0 < t < T_MAX:
        raise ConvergenceError(f"t must lie in (0, {T_MAX}), got {t}")


def _kernel(term: PochTerm, x: np.ndarray, t: float, n: int) -> np.ndarray:
    """sum_{k>=1} (-k alpha t)^n e^{-k(alpha x + gamma) t} / (k (1-e^{-k beta t}))
    for a vector of x >= 0; truncated at relative 1e-18."""
    w = (term.alpha * x + term.gamma) * t
    wmin = float(w.min())
    kmax = int(_KLOG_MARGIN / wmin) + 10
    if kmax > _KMAX_HARD:
        raise ConvergenceError(
            f"inner sum needs {kmax} terms (alpha*x+gamma too small for this t)")
    out = np.zeros_like(w)
    chunk = max(1, min(kmax, (1 << 22) // max(len(w), 1)))
    k0 = 1
    while k0 <= kmax:
        k = np.arange(k0, min(k0 + chunk, kmax + 1), dtype=float)
        denom = -np.expm1(-k * term.beta * t)       # 1 - e^{-k beta t}
        if n == 0:
            coef = 1.0 / (k * denom)
            out += coef @ np.exp(-np.outer(k, w))
        else:
            # (-k alpha t)^n / k = (-1)^n exp(n log(k alpha t) - log k); keep in
            # log space so high orders neither overflow nor underflow early
            logcoef = n * np.log(k * term.alpha * t) - np.log(k) - np.log(denom)
            contrib = np.exp(logcoef[:, None] - np.outer(k, w))
            out += ((-1.0) ** n) * contrib.sum(axis=0)
        k0 += chunk
    return out


def log_summand(spec: SeriesSpec, x, t: float):
    """The logged x-th term of the series: x v - A x^2 t - B x t plus the
    Pochhammer contribution sum_terms S * kernel.  Accepts scalar or array
    x >= 0 and returns matching shape."""
    _require_t(t)
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if np.any(xa < 0):
        raise DomainError("log_summand needs x >= 0")
    out = xa * spec.v - spec.A * xa ** 2 * t - spec.B * xa * t
    for term in spec.terms:
        out = out + term.S * _kernel(term, xa, t, 0)
    return float(out[0]) if scalar else out


def log_summand_deriv(spec: SeriesSpec, n: int, x, t: float):
    """n-th x-derivative of log_summand.  Polynomial part contributes
    v - 2Axt - Bt (n=1), -2At (n=2), 0 (n>=3)."""
    _require_t(t)
    if n < 1 or n > 64:
        raise DomainError(f"derivative order must lie in [1, 64], got {n}")
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if np.any(xa <= 0):
        raise DomainError("log_summand_deriv needs x > 0")
    if n == 1:
        out = spec.v - 2.0 * spec.A * xa * t - spec.B * t
    elif n == 2:
        out = np.full_like(xa, -2.0 * spec.A * t)
    else:
        out = np.zeros_like(xa)
    for term in spec.terms:
        out = out + term.S * _kernel(term, xa, t, n)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# Direct summation


def series_sum(spec: SeriesSpec, t: float) -> LogValue:
    """sum_m exp(log_summand(m)) accumulated in log space.

    Stops once 50 consecutive terms each contribute < 1e-18 relative AND
    m t > u_stop, where u_stop = 2*max(t*argmax, 1) + 10|log t|/min alpha;
    this covers both the peak and the slow tail regime.  Raises if the
    terms keep growing far beyond that bound (domain-triple violation
    that slipped past the static check).
    """
    _require_t(t)
    min_alpha = min((p.alpha for p in spec.terms), default=1.0)
    block = 256
    m0 = 0
    run_max = -math.inf          # running max of the logged terms
    run_arg = 0.0                # its location
    acc = 0.0                    # sum of exp(log - run_max)
    small_run = 0
    while True:
        m = np.arange(m0, m0 + block, dtype=float)
        logs = log_summand(spec, m, t)
        bmax = float(logs.max())
        if bmax > run_max:
            if run_max > -math.inf:
                acc *= math.exp(run_max - bmax)
            run_max = bmax
            run_arg = float(m[int(np.argmax(logs))])
        acc += float(np.exp(logs - run_max).sum())
        total_log = run_max + math.log(acc)
        small = logs - total_log < LN_EPS
        # trailing run of negligible terms, carried across blocks
        if small.all():
            small_run += block
        else:
            last_big = int(np.nonzero(~small)[0][-1])
            small_run = block - 1 - last_big
        u_stop = 2.0 * max(t * run_arg, 1.0) + 10.0 * abs(math.log(t)) / min_alpha
        m_end = m0 + block - 1
        if small_run >= 50 and m_end * t > u_stop:
            break
        if m_end * t > 2000.0:
            raise ConvergenceError(
                "series terms still significant far past the expected decay "
                f"(m*t = {m_end * t:.1f}); domain triple violated dynamically?")
        m0 += block
    return LogValue(1, total_log)
