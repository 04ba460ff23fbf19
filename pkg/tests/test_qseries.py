import math
import random

import numpy as np
import pytest

import qasym.qseries as qs
from qasym.errors import ConvergenceError, DomainError, SpecError
from qasym.qseries import (ProductSpec, QuadTerm, SeriesSpec, log_summand,
                           log_summand_deriv, mcintosh_asym, normalize,
                           prefactor_asym, prefactor_constants, prefactor_exact,
                           qpoch_finite, qpoch_inf, series_sum)

RAM = SeriesSpec.make(0.5, 0.5, 0.0, [(1, 1, 1, -2)])
EULER = SeriesSpec.make(0.0, 1.0, 0.0, [(1, 1, 1, -1)])


class TestSpecValidation:
    def test_domain_triple(self):
        with pytest.raises(SpecError, match="domain triple"):
            SeriesSpec.make(0.0, 0.0, 0.0, [(1, 1, 1, 1)])
        with pytest.raises(SpecError, match="domain triple"):
            SeriesSpec.make(0.0, -1.0, 0.0, [(1, 1, 1, 1)])
        # the three admissible branches
        SeriesSpec.make(1.0, -3.0, 2.0, [(1, 1, 1, 1)])
        SeriesSpec.make(0.0, 1.0, 0.0, [(1, 1, 1, 1)])
        SeriesSpec.make(0.0, 0.0, -1.0, [(1, 1, 1, 1)])

    def test_quad_invariants(self):
        with pytest.raises(SpecError, match="a\\+bd>0"):
            QuadTerm(0.0, 1.0, 1.0, 0.0, 1.0)
        with pytest.raises(SpecError, match="b>0"):
            QuadTerm(1.0, 0.0, 1.0, 0.0, 1.0)
        with pytest.raises(SpecError, match="Gamma pole"):
            QuadTerm(-1.0, 1.0, 1.0, 2.0, 1.0)

    def test_merge_and_drop(self):
        spec = SeriesSpec.make(1.0, 0.0, 0.0,
                               [(1, 1, 1, 1.0), (1, 1, 1, -1.0), (2, 1, 1, 3.0)])
        assert len(spec.terms) == 1
        assert spec.terms[0].alpha == 2


class TestQPochFinite:
    def test_empty_product(self):
        assert qpoch_finite(0.5, 0.5, 0).to_float() == 1.0

    def test_two_factors(self):
        assert qpoch_finite(0.5, 0.5, 2).to_float() == pytest.approx(0.375, rel=1e-15)

    def test_direct_loop(self):
        prod = 1.0
        for k in range(10):
            prod *= 1.0 - 0.9 * 0.9 ** k
        assert qpoch_finite(0.9, 0.9, 10).to_float() == pytest.approx(prod, rel=1e-13)

    def test_recurrence(self):
        rng = random.Random(7)
        for _ in range(60):
            a = rng.uniform(0.01, 0.95)
            q = rng.uniform(0.05, 0.95)
            m = rng.randrange(0, 40)
            lhs = qpoch_finite(a, q, m + 1)
            rhs = qpoch_finite(a, q, m).log_abs + math.log1p(-a * q ** m)
            assert abs(lhs.log_abs - rhs) <= 1e-13 * max(1.0, abs(rhs))


class TestQPochInf:
    def test_direct_product(self):
        oracle = sum(math.log1p(-0.5 * 0.5 ** k) for k in range(60))
        assert qpoch_inf(0.5, 0.5).log_abs == pytest.approx(oracle, rel=1e-14)

    def test_tiny_a(self):
        assert abs(qpoch_inf(1e-20, 0.5).log_abs) < 1e-18

    def test_li1_style_identity(self):
        # log (a;q)_inf = -sum_k a^k/(k (1-q^k))
        a, q = 0.25, 0.5
        oracle = -sum(a ** k / (k * (1.0 - q ** k)) for k in range(1, 80))
        assert qpoch_inf(a, q).log_abs == pytest.approx(oracle, rel=1e-13)

    def test_splitting(self):
        rng = random.Random(11)
        for _ in range(40):
            a = rng.uniform(0.01, 0.9)
            q = rng.uniform(0.05, 0.9)
            m = rng.randrange(0, 30)
            lhs = qpoch_inf(a, q).log_abs
            rhs = qpoch_finite(a, q, m).log_abs + qpoch_inf(a * q ** m, q).log_abs
            assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))

    def test_q_near_one_refused(self):
        with pytest.raises(ConvergenceError):
            qpoch_inf(0.5, 1.0 - 1e-13)


class TestMcintosh:
    def test_vs_symbol_b1(self):
        t = 0.01
        m = mcintosh_asym(1, 1, t, 10)
        d = qpoch_inf(math.exp(-t), math.exp(-t))
        assert abs(m.log_abs - d.log_abs) <= 1e-10 * abs(d.log_abs)

    def test_vs_symbol_b2(self):
        t = 0.02
        m = mcintosh_asym(1, 2, t, 10)
        d = qpoch_inf(math.exp(-t), math.exp(-2 * t))
        assert abs(m.log_abs - d.log_abs) <= 1e-9 * abs(d.log_abs)

    def test_integer_ratio_needs_bt_power(self):
        # (e^{-2t};e^{-2t})_inf: the plain-t form would be off by log(2)/2
        t = 0.01
        m = mcintosh_asym(2, 2, t, 10)
        d = qpoch_inf(math.exp(-2 * t), math.exp(-2 * t))
        assert abs(m.log_abs - d.log_abs) <= 1e-10

    def test_leading_constant_limit(self):
        # with a/b = 1/2 the power term vanishes, so the true symbol's log
        # plus pi^2/(12t) tends to log(sqrt(2 pi)/Gamma(1/2)) = log(sqrt 2)
        target = 0.5 * math.log(2.0)
        gaps = []
        for t in (1e-2, 1e-3, 1e-4):
            truth = qpoch_inf(math.exp(-t), math.exp(-2 * t)).log_abs
            gaps.append(abs(truth + math.pi ** 2 / (12 * t) - target))
        assert gaps[2] < gaps[1] < gaps[0]
        assert gaps[2] < 1e-4

    def test_error_shrinks_with_order(self):
        t = 0.05
        truth = qpoch_inf(math.exp(-t), math.exp(-3 * t)).log_abs
        errs = [abs(mcintosh_asym(1, 3, t, M).log_abs - truth)
                for M in range(2, 9)]
        assert all(e2 <= e1 * (1 + 1e-12) for e1, e2 in zip(errs, errs[1:]))
        assert errs[-1] < errs[0]


class TestPrefactor:
    def test_hand_constants(self):
        # single quad (1,1,1,0,S=2): A_H = pi^2/3, B_H = 1, C_H = 1/(2 pi)
        quads = (QuadTerm(1, 1, 1, 0, 2),)
        A_H, B_H, logC, sign = prefactor_constants(quads)
        assert A_H == pytest.approx(math.pi ** 2 / 3.0, rel=1e-15)
        assert B_H == pytest.approx(1.0)
        assert logC == pytest.approx(math.log(1.0 / (2 * math.pi)), rel=1e-15)
        assert sign == 1

    def test_empty_product(self):
        assert prefactor_asym((), 0.05, 8).to_float() == 1.0

    def test_vs_exact_symbol(self):
        t = 0.01
        quads = (QuadTerm(1, 2, 1, 0, 1),)
        asym = prefactor_asym(quads, t, 8)
        exact = -qpoch_inf(math.exp(-t), math.exp(-2 * t)).log_abs
        assert abs(asym.log_abs - exact) <= 1e-8


class TestNormalize:
    def test_ramanujan(self):
        series, pref = normalize(ProductSpec.make(0.5, 0.5, 0.0, [(1, 1, 1, 0, 2)]))
        assert series.terms == (qs.PochTerm(1, 1, 1, -2.0),)
        assert len(pref.quads) == 1 and pref.quads[0].S == 2.0

    def test_zero_merge_dropped(self):
        series, pref = normalize(ProductSpec.make(
            1.0, 0.0, 0.0, [(1, 1, 1, 0, 1), (1, 1, 1, 0, -1)]))
        assert series.terms == ()
        assert pref.quads == ()

    def test_f0_map(self):
        # numerator symbol -> S=-1 term, denominator -> S=+1
        series, pref = normalize(ProductSpec.make(
            1.0, 0.0, 0.0, [(1, 1, 2, 0, 1), (1, 1, 1, 0, -1)]))
        assert series.terms == (qs.PochTerm(1, 1, 1, 1.0), qs.PochTerm(2, 1, 1, -1.0))
        assert pref.quads == ()   # (q;q)_inf^-1 * (q;q)_inf cancels


class TestLogSummand:
    def test_polynomial_only(self):
        spec = SeriesSpec(1.0, 2.0, -0.5, ())
        x, t = 3.0, 0.1
        assert log_summand(spec, x, t) == pytest.approx(
            3 * -0.5 - 9 * 1.0 * t - 3 * 2.0 * t, rel=1e-15)

    def test_inner_sum_oracle(self):
        # x = 0 on the golden-ratio series: -2 sum_k e^{-0.1k}/(k(1-e^{-0.1k}))
        t = 0.1
        oracle = -2.0 * sum(math.exp(-t * k) / (k * -math.expm1(-t * k))
                            for k in range(1, 400))
        assert log_summand(RAM, 0.0, t) == pytest.approx(oracle, rel=1e-13)

    def test_exp_consistency_with_symbols(self):
        # the m-th logged term equals the value built from qpoch_inf directly
        t, m = 0.1, 7
        direct = (-(0.5 * m * m + 0.5 * m) * t
                  + 2.0 * qpoch_inf(math.exp(-(m + 1) * t), math.exp(-t)).log_abs)
        assert log_summand(RAM, float(m), t) == pytest.approx(direct, rel=1e-12)

    def test_vectorized_matches_scalar(self):
        xs = np.array([0.0, 1.0, 9.62, 113.0])
        vec = log_summand(RAM, xs, 0.05)
        for x, v in zip(xs, vec):
            assert v == pytest.approx(log_summand(RAM, float(x), 0.05), rel=1e-15)

    def test_t_range(self):
        with pytest.raises(ConvergenceError):
            log_summand(RAM, 1.0, 0.5)


def _stencil(spec, n, x, t, h):
    f = lambda y: log_summand(spec, y, t)
    if n == 1:
        return (f(x + h) - f(x - h)) / (2 * h)
    if n == 2:
        return (f(x + h) - 2 * f(x) + f(x - h)) / h ** 2
    return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h ** 3)


def _stencil_rich(spec, n, x, t, h):
    # Richardson step removes the O(h^2) term of the plain stencils
    return (4 * _stencil(spec, n, x, t, h / 2) - _stencil(spec, n, x, t, h)) / 3


class TestLogSummandDeriv:
    def test_no_terms_high_order(self):
        spec = SeriesSpec(1.0, 0.0, 0.0, ())
        assert log_summand_deriv(spec, 3, 2.0, 0.1) == 0.0

    def test_first_derivative_fd(self):
        x, t = 9.62, 0.1
        fd = _stencil(RAM, 1, x, t, 1e-5)
        assert abs(log_summand_deriv(RAM, 1, x, t) - fd) <= 1e-7

    def test_stencils_orders_1_2_3(self):
        # steps scale with the local length x+1: derivatives steepen sharply
        # toward the lower endpoint
        t = 0.05
        coef = {1: 1e-3, 2: 2e-3, 3: 4e-3}
        for n in (1, 2, 3):
            for x in (1.0, 10.0, 30.0, 60.0):
                fd = _stencil_rich(RAM, n, x, t, coef[n] * (x + 1.0))
                an = log_summand_deriv(RAM, n, x, t)
                assert abs(an - fd) <= 1e-6 * max(abs(an), abs(fd))

    def test_scaling_to_phase_curvature(self):
        # t^-1 * second derivative at u/t approaches the phase curvature
        # H''(u) = -1 - 2 e^{-u}/(1-e^{-u}) with O(t) error
        u = 0.9624236501192069
        h2 = -1.0 - 2.0 * math.exp(-u) / (1.0 - math.exp(-u))
        errs = [abs(log_summand_deriv(RAM, 2, u / t, t) / t - h2)
                for t in (0.1, 0.05, 0.025)]
        assert errs[0] > errs[1] > errs[2]
        ratios = [errs[0] / errs[1], errs[1] / errs[2]]
        assert all(1.5 < r < 2.5 for r in ratios)


class TestSeriesSum:
    def test_euler_identity(self):
        for t in (0.1, 0.05):
            assert abs(series_sum(EULER, t).to_float() - 1.0) <= 1e-12

    def test_euler_b2(self):
        spec = SeriesSpec.make(0.0, 2.0, 0.0, [(1, 1, 1, -1)])
        t = 0.05
        assert series_sum(spec, t).to_float() == pytest.approx(
            1.0 - math.exp(-t), rel=1e-12)

    def test_direct_symbol_oracle(self):
        # independent route: H = (q;q)_inf^2 * sum q^(m(m+1)/2)/(q;q)_m^2
        t = 0.1
        q = math.exp(-t)
        logs = []
        for m in range(300):
            lp = qpoch_finite(q, q, m).log_abs
            logs.append(-(0.5 * m * m + 0.5 * m) * t - 2.0 * lp)
        mx = max(logs)
        oracle = (mx + math.log(sum(math.exp(v - mx) for v in logs))
                  + 2.0 * qpoch_inf(q, q).log_abs)
        assert series_sum(RAM, t).log_abs == pytest.approx(oracle, abs=1e-11)

    def test_truncation_threshold_insensitive(self, monkeypatch):
        base = series_sum(RAM, 0.05).log_abs
        monkeypatch.setattr(qs, "_KLOG_MARGIN", 90.0)
        monkeypatch.setattr(qs, "LN_EPS", 2 * math.log(1e-18))
        tight = series_sum(RAM, 0.05).log_abs
        assert abs(tight - base) <= 1e-12 * max(1.0, abs(base))


class TestPrefactorExact:
    def test_matches_symbols(self):
        t = 0.05
        quads = (QuadTerm(1, 1, 1, 0, 2),)
        lv = prefactor_exact(quads, t)
        direct = -2.0 * qpoch_inf(math.exp(-t), math.exp(-t)).log_abs
        assert lv.log_abs == pytest.approx(direct, rel=1e-14)
