import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl_approx import (
    DomainError,
    ModulusKind,
    OperatorConfig,
    SmoothnessNorms,
    apply,
    bound_final,
    bound_lemma8,
    bound_theorem6,
    bound_theorem7,
    central_moment_closed,
    lipschitz_constant,
    modulus,
    second_modulus,
    theorem7_radicand,
    upsilon,
)
from dunkl_approx.moduli import default_window, final_deltas
from dunkl_approx.presets import PRESETS


def ident(t):
    return t


def const(t):
    return 3.0


def hg(n=10, mu=0.0, alpha=0.5, lam=0.0):
    return OperatorConfig("HermiteGamma", n, mu, alpha, lam)


class TestModulus:
    def test_examples(self):
        est = modulus(ident, 0.3, (0.0, 2.0), 0.01)
        assert est.value == pytest.approx(0.3, rel=1e-12)
        assert est.is_lower_bound and est.kind is ModulusKind.FIRST_ORDER
        assert modulus(const, 0.5, (0.0, 2.0), 0.1).value == 0.0

    def test_sin_converges_from_below(self):
        ref = 2.0 * math.sin(0.5)
        est = modulus(math.sin, 1.0, (0.0, 4.0 * math.pi), 1e-4)
        assert est.value <= ref + 1e-15
        assert ref - est.value <= 1e-4

    def test_halving_step_never_decreases(self):
        prev = 0.0
        for step in (0.4, 0.2, 0.1, 0.05, 0.025):
            v = modulus(math.sin, 1.0, (0.0, 6.4), step).value
            assert v >= prev - 1e-15
            prev = v

    def test_matches_brute_force(self):
        rng = np.random.default_rng(0)
        vals = rng.normal(size=101)
        f = lambda t: vals[int(round(t * 100))]  # noqa: E731
        step, delta = 0.01, 0.137
        brute = max(abs(vals[i] - vals[j]) for i in range(101) for j in range(101)
                    if abs(i - j) * step <= delta + 1e-12)
        assert modulus(f, delta, (0.0, 1.0), step).value == brute

    @given(st.floats(0.02, 1.0), st.floats(0.02, 1.0))
    @settings(max_examples=30)
    def test_monotone_in_delta(self, d1, d2):
        d1, d2 = sorted((d1, d2))
        f = PRESETS["sqrt"].target
        assert modulus(f, d1, (0.0, 3.0), 0.01).value <= modulus(f, d2, (0.0, 3.0), 0.01).value
        assert second_modulus(f, d1, (0.0, 3.0), 0.01).value <= \
            second_modulus(f, d2, (0.0, 3.0), 0.01).value

    def test_subadditivity_diagnostic(self):
        step = 0.01
        for f, lip in ((math.sin, 1.0), (lambda t: math.exp(-t), 1.0)):
            for d in (0.05, 0.3, 1.0):
                w1 = modulus(f, d, (0.0, 5.0), step).value
                w2 = modulus(f, 2 * d, (0.0, 5.0), step).value
                assert w2 <= 2 * w1 + 2 * step * lip

    def test_errors(self):
        with pytest.raises(DomainError):
            modulus(ident, 0.0, (0.0, 1.0), 0.1)
        with pytest.raises(DomainError):
            modulus(ident, 0.05, (0.0, 1.0), 0.1)
        with pytest.raises(DomainError):
            modulus(ident, 0.5, (1.0, 1.0), 0.1)


class TestSecondModulus:
    def test_examples(self):
        assert second_modulus(lambda t: 2 * t - 1, 0.5, (0.0, 3.0), 0.01).value == pytest.approx(0.0, abs=1e-13)
        assert second_modulus(lambda t: t * t, 0.3, (0.0, 3.0), 0.01).value == pytest.approx(0.18, rel=1e-10)
        assert second_modulus(const, 0.3, (0.0, 3.0), 0.01).value == 0.0

    @pytest.mark.parametrize("name, delta", [("sin", 0.4), ("exp_decay", 0.4), ("sqrt", 0.25)])
    def test_analytic_presets(self, name, delta):
        p = PRESETS[name]
        est = second_modulus(p.target, delta, (0.0, 8.0), 0.005)
        assert est.kind is ModulusKind.SECOND_ORDER
        assert est.value <= p.omega2(delta) + 1e-12
        assert est.value >= 0.97 * p.omega2(delta)


class TestLipschitz:
    def test_examples(self):
        assert lipschitz_constant(ident, 1.0, (0.0, 2.0), 0.01) == pytest.approx(1.0, rel=1e-12)
        assert lipschitz_constant(math.sqrt, 0.5, (0.0, 4.0), 0.01) == pytest.approx(1.0, rel=1e-12)
        assert lipschitz_constant(const, 0.7, (0.0, 1.0), 0.1) == 0.0

    def test_exponent_range(self):
        with pytest.raises(DomainError):
            lipschitz_constant(ident, 0.0, (0.0, 1.0), 0.1)
        with pytest.raises(DomainError):
            lipschitz_constant(ident, 1.5, (0.0, 1.0), 0.1)


class TestBounds:
    def test_lipschitz_bound_examples(self):
        c = hg()
        assert bound_theorem6(c, 1.0, 0.0, 1.0) == 0.0
        assert bound_theorem6(c, 1.0, 1.0, 1.0) == pytest.approx(math.sqrt(0.28), rel=1e-14)
        for x in (0.0, 0.5, 2.0):
            err = abs(apply(c, PRESETS["identity"].target, x).value - x)
            assert err == pytest.approx(central_moment_closed(c, 1, x), rel=1e-10)
            assert err <= bound_theorem6(c, x, 1.0, 1.0)

    def test_modulus_bound_examples(self):
        c = hg(n=100)
        assert bound_theorem7(c, 1.0, 0.0) == 0.0
        l2 = central_moment_closed(c, 2, 1.0)
        assert bound_theorem7(c, 1.0, 0.1) == pytest.approx((1 + math.sqrt(100 * l2)) * 0.1, rel=1e-14)

    def test_radicand_identity_example(self):
        c = OperatorConfig("HermiteGamma", 10, 0.5, 0.5, 1.0)
        assert theorem7_radicand(c, 1.0) == pytest.approx(10 * central_moment_closed(c, 2, 1.0), rel=1e-14)

    def test_smooth_bound_examples(self):
        c = hg(mu=0.5)
        l1, l2 = central_moment_closed(c, 1, 1.0), central_moment_closed(c, 2, 1.0)
        assert bound_lemma8(c, 1.0, SmoothnessNorms(1, 1, 1)) == pytest.approx(3 * (l1 + l2))
        assert bound_lemma8(c, 1.0, SmoothnessNorms(2.0, 0, 0)) == pytest.approx(2 * (l1 + l2))
        with pytest.raises(DomainError):
            SmoothnessNorms(math.inf, 0, 0)

    def test_final_examples(self):
        c = hg()
        assert bound_final(c, 1.0, 2.0, 0.0, 0.0) == 0.0
        d2, d1 = final_deltas(c, 1.0)
        assert d2 == pytest.approx(0.5 * math.sqrt(upsilon(c, 1.0)))
        assert bound_final(c, 1.0, 3.0, 0.0, d1) == pytest.approx(0.2)
        # f = t^2 on [0, b]: omega_2 = 2 delta^2, omega(delta) = delta (2b - delta)
        b = 4.0
        sq = PRESETS["square"]
        bound = bound_final(c, 1.0, 2.0, sq.omega2(d2), d1 * (2 * b - d1))
        err = abs(apply(c, sq.target, 1.0).value - 1.0)
        assert err <= bound
        grid_w = modulus(sq.target, d1, (0.0, b), d1 / 50).value
        assert grid_w <= d1 * (2 * b - d1) + 1e-12
        with pytest.raises(DomainError):
            bound_final(c, 1.0, 0.0, 0.0, 0.0)

    def test_default_window(self):
        c = hg(n=10)
        lo, hi = default_window(c, 2.0)
        l1, l2 = central_moment_closed(c, 1, 2.0), central_moment_closed(c, 2, 2.0)
        assert lo == 0.0 and hi == pytest.approx(2.0 + 4 * math.sqrt(l2 * 10) / 10 + l1)
