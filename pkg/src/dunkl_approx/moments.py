"""Closed-form moments of the Dunkl-Gamma Hermite operator.

With r = e_mu(-nx) / e_mu(nx):

    S(1)  = 1
    S(t)  = x + 2 alpha x^2 / n + (lambda + 1) / n
    S(t^2) = x^2/n^2 (n^2 + 4 n alpha x + 4 alpha^2 x^2 + 2 alpha + 4 alpha mu r)
             + 2 mu x (n - 2 alpha x) r / n^2
             + 2 (lambda + 2)(n + 2 alpha x) x / n^2 + (lambda + 1)(lambda + 2) / n^2

and the central moments

    L1 = (2 alpha x^2 + lambda + 1) / n
    L2 = [x^2/n (4 x^2 alpha^2 + 4 lambda alpha + 10 alpha) + 2x (mu r + 1)
          + (lambda + 1)(lambda + 2) / n] / n.

L2 is evaluated in this factored form; m2 - 2x m1 + x^2 cancels badly once
x is large against 1/n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dunkl_core import DunklParam, Ratio, SeriesControl, KERNEL_SERIES, dunkl_exp_ratio
from .errors import DomainError
from .operators import (
    DEFAULT_QUAD,
    OPERATOR_SERIES,
    Family,
    OperatorConfig,
    QuadratureControl,
    TargetFunction,
    apply,
)


def _check(config: OperatorConfig, x: float) -> None:
    if config.family is not Family.HERMITE_GAMMA:
        raise DomainError(f"closed-form moments cover HermiteGamma only, got {config.family}")
    if not (x >= 0.0 and math.isfinite(x)):
        raise DomainError(f"x must be finite and >= 0, got {x!r}")


def reflection_ratio(config: OperatorConfig, x: float,
                     ctrl: SeriesControl = KERNEL_SERIES) -> Ratio:
    """e_mu(-nx) / e_mu(nx) with its precision diagnostic."""
    return dunkl_exp_ratio(DunklParam(config.mu), config.n * x, ctrl)


def moment_closed(config: OperatorConfig, order: int, x: float) -> float:
    """S_n(t^order; x) for order in {0, 1, 2}."""
    _check(config, x)
    n, mu, a, lam = config.n, config.mu, config.alpha, config.lam
    if order == 0:
        return 1.0
    if order == 1:
        return x + 2.0 * a * x * x / n + (lam + 1.0) / n
    if order != 2:
        raise DomainError(f"order must be 0, 1 or 2, got {order!r}")
    r = reflection_ratio(config, x).value
    n2 = float(n) * n
    return (x * x / n2 * (n2 + 4.0 * n * a * x + 4.0 * a * a * x * x + 2.0 * a
                          + 4.0 * a * mu * r)
            + 2.0 * mu * x / n2 * (n - 2.0 * a * x) * r
            + 2.0 * (lam + 2.0) / n2 * (n + 2.0 * a * x) * x
            + (lam + 1.0) * (lam + 2.0) / n2)


def central_moment_closed(config: OperatorConfig, order: int, x: float) -> float:
    """S_n((t - x)^order; x) for order in {1, 2}."""
    _check(config, x)
    n, mu, a, lam = config.n, config.mu, config.alpha, config.lam
    if order == 1:
        return (2.0 * a * x * x + lam + 1.0) / n
    if order != 2:
        raise DomainError(f"order must be 1 or 2, got {order!r}")
    r = reflection_ratio(config, x).value
    return (x * x / n * (4.0 * x * x * a * a + 4.0 * lam * a + 10.0 * a)
            + 2.0 * x * (mu * r + 1.0)
            + (lam + 1.0) * (lam + 2.0) / n) / n


def upsilon(config: OperatorConfig, x: float) -> float:
    """L1^2 + L2."""
    l1 = central_moment_closed(config, 1, x)
    return l1 * l1 + central_moment_closed(config, 2, x)


@dataclass(frozen=True)
class MomentReport:
    m0: float
    m1: float
    m2: float
    lambda1: float
    lambda2: float
    upsilon: float
    x: float
    config: OperatorConfig
    precision_loss: bool


def moment_report(config: OperatorConfig, x: float) -> MomentReport:
    l1 = central_moment_closed(config, 1, x)
    l2 = central_moment_closed(config, 2, x)
    ratio = reflection_ratio(config, x)
    return MomentReport(
        m0=moment_closed(config, 0, x),
        m1=moment_closed(config, 1, x),
        m2=moment_closed(config, 2, x),
        lambda1=l1,
        lambda2=l2,
        upsilon=l1 * l1 + l2,
        x=float(x),
        config=config,
        precision_loss=bool(ratio.precision_loss and config.mu > 0.0),
    )


def shifted_apply(config: OperatorConfig, f: TargetFunction, x: float,
                  ctrl: SeriesControl = OPERATOR_SERIES,
                  quad: QuadratureControl = DEFAULT_QUAD) -> float:
    """S_n(f; x) + f(x) - f(x + L1); reproduces affine functions."""
    l1 = central_moment_closed(config, 1, x)
    return apply(config, f, x, ctrl, quad).value + f(x) - f(x + l1)
