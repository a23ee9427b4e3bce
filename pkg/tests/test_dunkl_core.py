import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl_approx import (
    DomainError,
    DunklParam,
    LogValue,
    NonConvergence,
    Polynomial,
    SeriesControl,
    dunkl_derivative,
    dunkl_exp,
    dunkl_exp_ratio,
    gamma_nu_log,
    gamma_nu_log_direct,
    log_gamma,
    theta,
)
from tests.conftest import rel
from tests.oracle_values import DUNKL_EXP, LOG_GAMMA, LOG_GAMMA_NU, RATIO

MUS = (0.0, 0.25, 0.5, 1.0, 2.0)


class TestTheta:
    @pytest.mark.parametrize("k, expected", [(0, 0), (7, 1), (2, 0)])
    def test_examples(self, k, expected):
        assert theta(k) == expected

    def test_recursion(self):
        for k in range(10_001):
            assert theta(k + 1) == theta(k) + (-1) ** k

    def test_negative(self):
        with pytest.raises(DomainError):
            theta(-1)


class TestGammaNu:
    def test_examples(self):
        assert gamma_nu_log(DunklParam(1.3), 0).log_abs == 0.0
        assert gamma_nu_log(DunklParam(0.0), 4).log_abs == pytest.approx(math.log(24), rel=1e-15)
        assert gamma_nu_log(DunklParam(0.5), 1).log_abs == pytest.approx(math.log(2), rel=1e-15)

    @pytest.mark.parametrize("mu", MUS)
    def test_ratio_recursion(self, mu):
        p = DunklParam(mu)
        for k in range(61):
            step = math.exp(gamma_nu_log(p, k + 1).log_abs - gamma_nu_log(p, k).log_abs)
            assert rel(step, 2 * mu * theta(k + 1) + k + 1) <= 1e-12

    @pytest.mark.parametrize("mu", MUS)
    def test_recursion_matches_closed_form(self, mu):
        p = DunklParam(mu)
        for k in range(1, 201):
            a = gamma_nu_log(p, k).log_abs
            b = gamma_nu_log_direct(p, k).log_abs
            assert rel(a, b) <= 1e-11

    @pytest.mark.parametrize("key", sorted(LOG_GAMMA_NU))
    def test_oracle(self, key):
        mu, k = key
        assert rel(gamma_nu_log(DunklParam(mu), k).log_abs, LOG_GAMMA_NU[key]) <= 1e-14

    def test_factorial_reduction(self):
        p = DunklParam(0.0)
        for k in range(101):
            assert rel(math.exp(gamma_nu_log(p, k).log_abs), float(math.factorial(k))) <= 1e-12

    def test_sign_always_positive(self):
        assert all(gamma_nu_log(DunklParam(0.7), k).sign == 1 for k in range(50))

    def test_rejects_negative_mu(self):
        with pytest.raises(DomainError):
            DunklParam(-0.1)


class TestLogGamma:
    @pytest.mark.parametrize("x, expected", [(1.0, 0.0), (0.5, 0.5723649429247001),
                                             (5.0, math.log(24.0))])
    def test_examples(self, x, expected):
        assert log_gamma(x) == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize("x", sorted(LOG_GAMMA))
    def test_oracle(self, x):
        ref = LOG_GAMMA[x]
        if ref == 0.0:
            assert abs(log_gamma(x)) <= 1e-15
        else:
            assert rel(log_gamma(x), ref) <= 1e-13

    @given(st.floats(0.5, 1e6))
    def test_recurrence(self, x):
        # log Gamma(x + 1) = log Gamma(x) + log x; absolute error scaled to the magnitudes
        lhs = log_gamma(x + 1.0)
        rhs = log_gamma(x) + math.log(x)
        assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs), abs(log_gamma(x)))

    @pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)


class TestLogValue:
    def test_zero_invariant(self):
        with pytest.raises(ValueError):
            LogValue(0, 1.0)
        with pytest.raises(ValueError):
            LogValue(1, -math.inf)
        assert float(LogValue.from_float(0.0)) == 0.0

    @given(st.floats(-1e100, 1e100).filter(lambda v: v != 0 and abs(v) > 1e-100),
           st.floats(-1e100, 1e100).filter(lambda v: v != 0 and abs(v) > 1e-100))
    def test_mul_div(self, a, b):
        la, lb = LogValue.from_float(a), LogValue.from_float(b)
        assert (la * lb).sign == (1 if a * b > 0 else -1)
        assert (la * lb).log_abs == la.log_abs + lb.log_abs
        assert (la / lb).log_abs == la.log_abs - lb.log_abs
        assert float(la * lb) == pytest.approx(a * b, rel=1e-13)

    def test_overflow_to_inf(self):
        assert float(LogValue(-1, 1e4)) == -math.inf

    def test_zero_division(self):
        with pytest.raises(ZeroDivisionError):
            LogValue.one() / LogValue.from_float(0.0)


class TestDunklExp:
    def test_examples(self):
        assert float(dunkl_exp(DunklParam(0.9), 0.0)) == 1.0
        assert float(dunkl_exp(DunklParam(0.0), 1.0)) == pytest.approx(math.e, rel=1e-15)

    def test_half_mu_example_against_direct_sum(self):
        # 1 / gamma_0.5(k) by the ratio recursion, 200 terms
        total, g = 0.0, 1.0
        for k in range(200):
            total += 1.0 / g
            g *= k + 1 + 2 * 0.5 * ((k + 1) % 2)
        assert rel(float(dunkl_exp(DunklParam(0.5), 1.0)), total) <= 1e-15

    @pytest.mark.parametrize("key", sorted(DUNKL_EXP))
    def test_oracle(self, key):
        mu, x = key
        assert rel(float(dunkl_exp(DunklParam(mu), x)), DUNKL_EXP[key]) <= 1e-13

    def test_exp_reduction(self):
        p = DunklParam(0.0)
        for x in np.linspace(-30.0, 30.0, 601):
            assert rel(float(dunkl_exp(p, x)), math.exp(x)) <= 1e-12

    def test_nonconvergence(self):
        with pytest.raises(NonConvergence):
            dunkl_exp(DunklParam(0.5), 500.0, SeriesControl(max_terms=50))

    def test_positive_for_positive_x(self):
        assert dunkl_exp(DunklParam(1.0), 7.0).sign == 1

    def test_rejects_nonfinite(self):
        with pytest.raises(DomainError):
            dunkl_exp(DunklParam(0.0), math.inf)


class TestRatio:
    def test_examples(self):
        assert dunkl_exp_ratio(DunklParam(1.0), 0.0).value == 1.0
        assert dunkl_exp_ratio(DunklParam(0.0), 3.0).value == pytest.approx(math.exp(-6), rel=1e-13)

    @pytest.mark.parametrize("key", sorted(RATIO))
    def test_oracle(self, key):
        mu, x = key
        assert rel(dunkl_exp_ratio(DunklParam(mu), x).value, RATIO[key]) <= 1e-13

    def test_range_and_monotone(self):
        xs = np.linspace(0.0, 20.0, 201)
        for mu in (0.0, 1e-8, 0.1, 0.5, 1.0, 1.5, 2.0):
            vals = [dunkl_exp_ratio(DunklParam(mu), x).value for x in xs]
            assert all(0.0 < v <= 1.0 for v in vals)
            assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_precision_flag(self):
        # mu = 0 at x = 10: the split cancels by e^20, far past 1e6
        r = dunkl_exp_ratio(DunklParam(0.0), 10.0)
        assert r.precision_loss and r.method == "positive-series"
        assert r.value == pytest.approx(math.exp(-20.0), rel=1e-12)
        assert not dunkl_exp_ratio(DunklParam(1.0), 2.0).precision_loss

    def test_domain(self):
        with pytest.raises(DomainError):
            dunkl_exp_ratio(DunklParam(0.0), -1.0)


class TestDunklDerivative:
    def test_examples(self):
        assert dunkl_derivative(DunklParam(0.3), Polynomial([1.0])).coeffs == ()
        assert dunkl_derivative(DunklParam(0.5), Polynomial.monomial(3)).coeffs == (0.0, 0.0, 4.0)
        assert dunkl_derivative(DunklParam(0.0), Polynomial([0.0, 3.0, 1.0])).coeffs == (3.0, 2.0)

    @pytest.mark.parametrize("mu", [0.0, 0.5])
    @pytest.mark.parametrize("lam", [1.0, 2.0])
    def test_eigen_relation(self, mu, lam):
        p = DunklParam(mu)
        K = 30
        coeffs = [lam ** k / math.exp(gamma_nu_log(p, k).log_abs) for k in range(K + 1)]
        lhs = dunkl_derivative(p, Polynomial(coeffs)).coeffs
        rhs = [lam * c for c in coeffs[:K]]
        assert len(lhs) == K
        for a, b in zip(lhs, rhs):
            assert abs(a - b) <= 1e-10 * max(1.0, abs(b))

    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=11), st.floats(0, 3))
    @settings(max_examples=60)
    def test_leibniz_even_factor(self, psi_coeffs, mu):
        p = DunklParam(mu)
        phi = Polynomial.monomial(2)
        psi = Polynomial(psi_coeffs)
        lhs = dunkl_derivative(p, phi * psi)
        rhs = dunkl_derivative(p, phi) * psi + phi * dunkl_derivative(p, psi)
        n = max(len(lhs.coeffs), len(rhs.coeffs))
        for j in range(n):
            a, b = lhs.coefficient(j), rhs.coefficient(j)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(b))

    def test_matches_definition_at_points(self):
        # D f(x) = f'(x) + mu (f(x) - f(-x)) / x
        mu = 0.7
        q = Polynomial([1.0, -2.0, 0.5, 3.0, 1.0])
        dq = dunkl_derivative(DunklParam(mu), q)
        deriv = Polynomial([j * c for j, c in enumerate(q.coeffs)][1:])
        for x in (0.3, 1.0, 2.5):
            assert dq(x) == pytest.approx(deriv(x) + mu * (q(x) - q(-x)) / x, rel=1e-13)


class TestPolynomial:
    def test_trim_and_degree(self):
        assert Polynomial([1.0, 0.0, 0.0]).degree == 0
        assert Polynomial([0.0]).degree == -1
        assert Polynomial().coeffs == ()

    def test_arithmetic(self):
        a = Polynomial([1.0, 2.0])
        b = Polynomial([0.0, 1.0])
        assert (a * b).coeffs == (0.0, 1.0, 2.0)
        assert (a - a).coeffs == ()
        assert (a + 1.0).coeffs == (2.0, 2.0)
        assert a(2.0) == 5.0
