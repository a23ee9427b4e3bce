import itertools
import math

import pytest

from dunkl_approx import (
    DomainError,
    OperatorConfig,
    Polynomial,
    TargetFunction,
    apply,
    central_moment_closed,
    moment_closed,
    moment_report,
    shifted_apply,
    upsilon,
)
from dunkl_approx.presets import PRESETS
from tests.conftest import rel

GRID = [OperatorConfig("HermiteGamma", n, mu, a, lam)
        for n, mu, a, lam in itertools.product((5, 10, 50, 100), (0.0, 0.5, 1.0),
                                                (0.0, 0.5), (0.0, 1.0))]
XS = [0.25 * i for i in range(9)]


def hg(n=10, mu=0.0, alpha=0.5, lam=0.0):
    return OperatorConfig("HermiteGamma", n, mu, alpha, lam)


def test_examples():
    assert moment_closed(hg(mu=0.7), 0, 1.3) == 1.0
    assert moment_closed(hg(), 1, 1.0) == pytest.approx(1.2, rel=1e-15)
    for n, x in ((10, 1.0), (7, 0.3)):
        c = hg(n=n, alpha=0.0)
        assert moment_closed(c, 2, x) == pytest.approx(x * x + 4 * x / n + 2 / n ** 2, rel=1e-14)
        assert central_moment_closed(c, 2, x) == pytest.approx(2 * x / n + 2 / n ** 2, rel=1e-14)
    assert central_moment_closed(hg(), 1, 1.0) == pytest.approx(0.2, rel=1e-15)
    assert central_moment_closed(hg(alpha=0.0, lam=2.0), 1, 3.0) == pytest.approx(0.3, rel=1e-15)
    assert central_moment_closed(hg(), 2, 1.0) == pytest.approx(0.28, rel=1e-14)
    assert upsilon(hg(), 1.0) == pytest.approx(0.32, rel=1e-14)


def test_upsilon_at_zero():
    for c in GRID:
        lam, n = c.lam, c.n
        assert upsilon(c, 0.0) == pytest.approx(((lam + 1) / n) ** 2 + (lam + 1) * (lam + 2) / n ** 2,
                                                rel=1e-14)


@pytest.mark.parametrize("c", GRID, ids=str)
def test_central_moment_algebra(c):
    for x in XS:
        m1 = moment_closed(c, 1, x)
        m2 = moment_closed(c, 2, x)
        l1 = central_moment_closed(c, 1, x)
        l2 = central_moment_closed(c, 2, x)
        assert rel(l1, m1 - x) <= 1e-12
        assert rel(l2, m2 - 2 * x * m1 + x * x) <= 1e-12
        assert upsilon(c, x) >= l2
        if x > 0:
            assert l2 > 0
        else:
            assert l2 == pytest.approx((c.lam + 1) * (c.lam + 2) / c.n ** 2, rel=1e-15)


def test_n_decay():
    for mu, a, lam in itertools.product((0.0, 0.5, 1.0), (0.0, 0.5), (0.0, 1.0)):
        for x in XS:
            scaled_l1 = {n * central_moment_closed(hg(n, mu, a, lam), 1, x) for n in (5, 10, 50, 100)}
            assert max(scaled_l1) - min(scaled_l1) <= 1e-10
            n_l2 = [n * central_moment_closed(hg(n, mu, a, lam), 2, x) for n in (5, 10, 50, 100)]
            # bounded along n: never above the n = 5 value and never below 2x
            assert max(n_l2) <= n_l2[0] + 1e-12
            assert min(n_l2) >= 2 * x - 1e-12


def test_closed_vs_numeric_second_moment_independent_oracle():
    # central moments computed directly from the weights, without the closed forms
    from dunkl_approx import weights
    from dunkl_approx.operators import kernel_shapes
    c = hg(n=10, mu=0.5, alpha=0.5, lam=1.0)
    x = 1.25
    ws = weights(c, x)
    a = kernel_shapes(c, len(ws.weights))
    # E (T - x)^2 = a(a+1)/n^2 - 2 x a / n + x^2
    l2 = sum(w * (ak * (ak + 1) / c.n ** 2 - 2 * x * ak / c.n + x * x)
             for w, ak in zip(ws.weights, a))
    assert l2 == pytest.approx(central_moment_closed(c, 2, x), rel=1e-10)


def test_report():
    r = moment_report(hg(mu=0.5), 1.0)
    assert r.m0 == 1.0
    assert r.upsilon == r.lambda1 ** 2 + r.lambda2
    assert abs(r.lambda1 - (r.m1 - r.x)) <= 1e-12
    assert abs(r.lambda2 - (r.m2 - 2 * r.x * r.m1 + r.x ** 2)) <= 1e-12
    assert not r.precision_loss
    # mu = 0 carries no ratio term, so no flag even where the split cancels
    assert not moment_report(hg(n=100, mu=0.0), 2.0).precision_loss


def test_shifted_examples():
    c = hg()
    one = TargetFunction.monomial(0)
    t = TargetFunction.monomial(1)
    sq = TargetFunction.monomial(2)
    assert shifted_apply(c, one, 1.0) == pytest.approx(1.0, abs=1e-11)
    assert shifted_apply(c, t, 1.0) == pytest.approx(1.0, abs=1e-11)
    ref = moment_closed(c, 2, 1.0) + 1.0 - 1.2 ** 2
    assert shifted_apply(c, sq, 1.0) == pytest.approx(ref, abs=1e-10)
    numeric = apply(c, sq, 1.0).value + 1.0 - 1.2 ** 2
    assert shifted_apply(c, sq, 1.0) == pytest.approx(numeric, abs=1e-14)


@pytest.mark.parametrize("a, b", list(itertools.product((-1.0, 0.0, 1.0, 2.0), repeat=2)))
def test_shifted_affine_reproduction(a, b):
    f = TargetFunction.from_polynomial(Polynomial([a, b]))
    for c in GRID[::5]:
        for x in XS:
            assert abs(shifted_apply(c, f, x) - (a + b * x)) <= 1e-9


def test_family_restriction():
    for fam in ("WafiRaoGamma", "SzaszDunkl", "HermiteSzasz"):
        with pytest.raises(DomainError):
            moment_closed(OperatorConfig(fam, 10), 1, 1.0)
    with pytest.raises(DomainError):
        moment_closed(hg(), 3, 1.0)
    with pytest.raises(DomainError):
        central_moment_closed(hg(), 0, 1.0)


def test_sin_shifted_is_finite():
    assert math.isfinite(shifted_apply(hg(mu=1.0), PRESETS["sin"].target, 1.7))
