"""Positive linear operators with Dunkl weights.

Four families share one structure: a probability weight sequence w_k(x)
times a per-term functional K_k(f).

    family          weights                                K_k(f)
    SzaszDunkl      (nx)^k / gamma_mu(k) / e_mu(nx)        f((k + 2 mu theta_k) / n)
    HermiteSzasz    H_k(n, alpha) x^k / k! / Z             f((k + 2 mu theta_k) / n)
    WafiRaoGamma    as SzaszDunkl                          E f(T), T ~ Gamma(a_k, n)
    HermiteGamma    as HermiteSzasz                        E f(T), T ~ Gamma(a_k, n)

with Z = exp(alpha x^2) e_mu(nx) and a_k = k + 2 mu theta_k + lambda + 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from ._backend import kernels
from ._kernels_py import ENV_BOUNDED, ENV_POLY, QUAD_BUDGET, QUAD_OK
from .dunkl_core import (
    DunklParam,
    Polynomial,
    SeriesControl,
    dunkl_exp,
    log_gamma,
    log_gamma_nu_table,
)
from .errors import DomainError, GrowthViolation, NonConvergence, QuadratureFailure

GROWTH_SLACK = 1.1
# weights this small are left out of the quadrature mixture; their
# contribution is folded into the truncation bound
SKIP_WEIGHT = 1e-17
# terms past the truncation point are summed into tail_mass until they drop
# below this fraction of the total
TAIL_FLOOR = 1e-20


class Family(str, enum.Enum):
    SZASZ_DUNKL = "SzaszDunkl"
    WAFI_RAO_GAMMA = "WafiRaoGamma"
    HERMITE_SZASZ = "HermiteSzasz"
    HERMITE_GAMMA = "HermiteGamma"

    @property
    def hermite(self) -> bool:
        return self in (Family.HERMITE_SZASZ, Family.HERMITE_GAMMA)

    @property
    def gamma_kernel(self) -> bool:
        return self in (Family.WAFI_RAO_GAMMA, Family.HERMITE_GAMMA)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class OperatorConfig:
    """Operator family plus (n, mu, alpha, lambda).

    ``lam`` is lambda. alpha is ignored by the non-Hermite families and
    lambda by the point-evaluation families; :attr:`alpha_eff` and
    :attr:`lam_eff` give the values actually used.
    """

    family: Family
    n: int
    mu: float = 0.0
    alpha: float = 0.0
    lam: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("mu", "alpha", "lam"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, v)

    @property
    def alpha_eff(self) -> float:
        return self.alpha if self.family.hermite else 0.0

    @property
    def lam_eff(self) -> float:
        return self.lam if self.family.gamma_kernel else 0.0

    def with_family(self, family: Family) -> OperatorConfig:
        return OperatorConfig(family, self.n, self.mu, self.alpha, self.lam)


@dataclass(frozen=True)
class Bounded:
    """|f(t)| <= bound on [0, inf)."""

    bound: float

    def __post_init__(self):
        if not (self.bound >= 0.0 and math.isfinite(self.bound)):
            raise DomainError(f"bound must be finite and >= 0, got {self.bound!r}")

    def envelope(self, t: float) -> float:
        return self.bound


@dataclass(frozen=True)
class PolynomialDegree:
    """|f(t)| <= const * (1 + t**degree) on [0, inf)."""

    degree: float
    const: float = 1.0

    def __post_init__(self):
        if not (self.degree >= 0.0 and math.isfinite(self.degree)):
            raise DomainError(f"degree must be finite and >= 0, got {self.degree!r}")
        if not (self.const >= 0.0 and math.isfinite(self.const)):
            raise DomainError(f"const must be finite and >= 0, got {self.const!r}")

    def envelope(self, t: float) -> float:
        return self.const * (1.0 + t ** self.degree)


Growth = Union[Bounded, PolynomialDegree]


def _env_args(growth: Growth):
    if isinstance(growth, Bounded):
        return ENV_BOUNDED, growth.bound, 0.0, 0.0
    return ENV_POLY, 0.0, growth.const, growth.degree


@dataclass(frozen=True)
class TargetFunction:
    """A function on [0, inf) with a declared growth class.

    ``poly`` is set when the function is a polynomial; Gamma-kernel
    expectations then use exact moments instead of quadrature.
    """

    eval: Callable[[float], float]
    growth: Growth
    label: str = "f"
    poly: Polynomial | None = field(default=None, compare=False)

    def __call__(self, t: float) -> float:
        return self.eval(t)

    @classmethod
    def from_polynomial(cls, poly: Polynomial, label: str | None = None) -> TargetFunction:
        const = max(sum(abs(c) for c in poly.coeffs), 0.0)
        growth = PolynomialDegree(max(poly.degree, 0), const)
        return cls(poly, growth, label or f"poly{list(poly.coeffs)}", poly)

    @classmethod
    def monomial(cls, m: int) -> TargetFunction:
        return cls.from_polynomial(Polynomial.monomial(m), f"t^{m}")


@dataclass(frozen=True)
class QuadratureControl:
    """Adaptive Gauss-Kronrod settings for Gamma-kernel expectations.

    The integration window is where the log-density is above its peak minus
    ``window_drop``. ``force_quadrature`` bypasses the exact polynomial path.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    max_subdivisions: int = 200
    window_drop: float = 40.0
    force_quadrature: bool = False

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol >= 0.0):
            raise ValueError("abs_tol must be > 0 and rel_tol >= 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if not self.window_drop > 0.0:
            raise ValueError("window_drop must be > 0")


OPERATOR_SERIES = SeriesControl(tail_tol=1e-12, max_terms=None)
DEFAULT_QUAD = QuadratureControl()


@dataclass(frozen=True)
class WeightSeries:
    """Truncated weights w_0..w_K and the mass of the discarded terms."""

    weights: np.ndarray
    tail_mass: float
    x: float
    config: OperatorConfig

    @property
    def trunc_k(self) -> int:
        return len(self.weights) - 1

    @property
    def total(self) -> float:
        return float(kernels.neumaier_sum(self.weights)) + self.tail_mass


def _log(v: float) -> float:
    return math.log(v) if v > 0.0 else -math.inf


def default_max_terms(config: OperatorConfig, x: float) -> int:
    mean = config.n * x + 2.0 * config.alpha_eff * x * x
    return max(256, math.ceil(8.0 * mean))


def _weight_logterms(config: OperatorConfig, x: float, kmax: int) -> np.ndarray:
    lg = log_gamma_nu_table(config.mu, kmax)
    log_nx = math.log(config.n * x)
    if config.family.hermite:
        return kernels.hermite_log_coeffs(lg, _log(config.alpha_eff * x * x), log_nx, kmax)
    return np.arange(kmax + 1) * log_nx - lg


def weights(config: OperatorConfig, x: float, ctrl: SeriesControl = OPERATOR_SERIES) -> WeightSeries:
    """Normalized weights of the operator at x, truncated once the cumulative
    weight reaches 1 - ctrl.tail_tol."""
    if not (x >= 0.0 and math.isfinite(x)):
        raise DomainError(f"x must be finite and >= 0, got {x!r}")
    if x == 0.0:
        return WeightSeries(np.ones(1), 0.0, 0.0, config)
    a = config.alpha_eff
    log_z = a * x * x + dunkl_exp(DunklParam(config.mu), config.n * x).log_abs
    cap = ctrl.max_terms if ctrl.max_terms is not None else default_max_terms(config, x)
    mean = config.n * x + 2.0 * a * x * x
    kmax = min(int(mean + 12.0 * math.sqrt(mean + 1.0) + 40.0), cap - 1)
    target = 1.0 - ctrl.tail_tol
    while True:
        w = np.exp(_weight_logterms(config, x, kmax) - log_z)
        cum = np.cumsum(w)
        hit = np.nonzero(cum >= target)[0]
        peak = int(np.argmax(w))
        past = np.nonzero(w[peak:] < TAIL_FLOOR * cum[-1])[0]
        settled = past.size > 0
        if hit.size and settled:
            end = peak + int(past[0])
            break
        if kmax >= cap - 1:
            if not hit.size:
                raise NonConvergence(
                    f"weights for {config.family} at x={x}: cumulative weight "
                    f"{cum[-1]!r} < 1 - {ctrl.tail_tol} after {cap} terms")
            end = kmax
            break
        kmax = min(2 * kmax, cap - 1)
    k = int(hit[0])
    tail = float(kernels.neumaier_sum(w[k + 1:end + 1])) if end > k else 0.0
    return WeightSeries(w[: k + 1], tail, float(x), config)


def kernel_shapes(config: OperatorConfig, count: int) -> np.ndarray:
    k = np.arange(count, dtype=float)
    return k + 2.0 * config.mu * (np.arange(count) % 2) + config.lam_eff + 1.0


def kernel_nodes(config: OperatorConfig, count: int) -> np.ndarray:
    k = np.arange(count, dtype=float)
    return (k + 2.0 * config.mu * (np.arange(count) % 2)) / config.n


def _rising_moments(shapes: np.ndarray, rate: float, degree: int) -> list[np.ndarray]:
    """E[T^j] = a (a+1) ... (a+j-1) / rate^j for j = 0..degree."""
    out = [np.ones_like(shapes)]
    for j in range(1, degree + 1):
        out.append(out[-1] * (shapes + (j - 1)) / rate)
    return out


def _poly_expectations(poly: Polynomial, shapes: np.ndarray, rate: float) -> np.ndarray:
    if not poly.coeffs:
        return np.zeros_like(shapes)
    moments = _rising_moments(shapes, rate, poly.degree)
    acc = np.zeros_like(shapes)
    for c, m in zip(poly.coeffs, moments):
        if c != 0.0:
            acc = acc + c * m
    return acc


def _abs_power_moments(shapes: np.ndarray, rate: float, p: float) -> np.ndarray:
    """E[T^p] = Gamma(a + p) / (Gamma(a) rate^p) for real p >= 0."""
    if p == 0.0:
        return np.ones_like(shapes)
    lg = np.array([log_gamma(a + p) - log_gamma(a) for a in shapes])
    return np.exp(lg - p * math.log(rate))


def _quadrature(f: TargetFunction, shape: float, rate: float, quad: QuadratureControl):
    kind, bound, const, deg = _env_args(f.growth)
    lo, hi = kernels.gamma_window(shape, rate, quad.window_drop, deg)
    log_norm = shape * math.log(rate) - log_gamma(shape)
    v, err, _n, worst, status = kernels.gk_expectation(
        f.eval, shape, rate, log_norm, lo, hi, quad.abs_tol, quad.rel_tol,
        quad.max_subdivisions, kind, bound, const, deg)
    _check_status(status, f, shape)
    _check_growth(worst, f)
    return float(v), float(err)


def _check_status(status: int, f: TargetFunction, shape: float) -> None:
    if status != QUAD_OK:
        why = "subdivision budget exhausted" if status == QUAD_BUDGET else "roundoff limit"
        raise QuadratureFailure(f"Gamma expectation of {f.label} at shape {shape!r}: {why}")


def _check_growth(worst: float, f: TargetFunction) -> None:
    if worst > GROWTH_SLACK:
        raise GrowthViolation(
            f"{f.label} exceeds its declared growth envelope by a factor {worst:.3g}")


def gamma_kernel_expectation(shape: float, rate: float, f: TargetFunction,
                             quad: QuadratureControl = DEFAULT_QUAD) -> float:
    """E[f(T)] for T ~ Gamma(shape, rate), density rate^a t^(a-1) e^(-rate t) / Gamma(a)."""
    if not (shape > 0.0 and math.isfinite(shape)):
        raise DomainError(f"shape must be finite and > 0, got {shape!r}")
    if not (rate > 0.0 and math.isfinite(rate)):
        raise DomainError(f"rate must be finite and > 0, got {rate!r}")
    if f.poly is not None and not quad.force_quadrature:
        return float(_poly_expectations(f.poly, np.array([float(shape)]), rate)[0])
    return _quadrature(f, shape, rate, quad)[0]


@dataclass(frozen=True)
class Evaluation:
    """Operator value with its error diagnostics.

    ``trunc_bound`` bounds the contribution of the discarded weights (and of
    weights skipped by the quadrature mixture); ``quad_error`` is the summed
    quadrature error estimate.
    """

    value: float
    trunc_bound: float
    quad_error: float
    tail_mass: float
    trunc_k: int

    def __float__(self) -> float:
        return self.value


def _trunc_bound(f: TargetFunction, mass: float, series: WeightSeries,
                 shapes_or_nodes: np.ndarray, gamma: bool) -> float:
    if mass <= 0.0:
        return 0.0
    g = f.growth
    if isinstance(g, Bounded):
        return mass * g.bound
    # Cauchy-Schwarz: sum_tail w E|f| <= sqrt(mass) sqrt(sum w E f^2) and
    # f^2 <= 2 C^2 (1 + t^(2d)); the retained weights estimate E t^(2d)
    p = 2.0 * g.degree
    if gamma:
        m = _abs_power_moments(shapes_or_nodes, series.config.n, p)
    else:
        m = shapes_or_nodes ** p
    second = float(np.dot(series.weights, m)) / max(float(series.weights.sum()), 0.5)
    return math.sqrt(mass) * g.const * math.sqrt(2.0 * (1.0 + second))


def apply(config: OperatorConfig, f: TargetFunction, x: float,
          ctrl: SeriesControl = OPERATOR_SERIES,
          quad: QuadratureControl = DEFAULT_QUAD) -> Evaluation:
    """Evaluate the operator of ``config`` on f at x."""
    series = weights(config, x, ctrl)
    w = series.weights
    count = len(w)
    kind, bound, const, deg = _env_args(f.growth)
    quad_err = 0.0
    skipped = 0.0
    if not config.family.gamma_kernel:
        nodes = kernel_nodes(config, count)
        value, worst = kernels.point_mixture(f.eval, w, nodes, kind, bound, const, deg)
        _check_growth(worst, f)
        support = nodes
    else:
        shapes = kernel_shapes(config, count)
        support = shapes
        if f.poly is not None and not quad.force_quadrature:
            value = kernels.neumaier_sum(w * _poly_expectations(f.poly, shapes, config.n))
        else:
            value, quad_err, worst, status, bad, _cnt = kernels.gamma_mixture(
                f.eval, w, shapes, float(config.n), quad.window_drop, deg,
                quad.abs_tol, quad.rel_tol, quad.max_subdivisions,
                kind, bound, const, deg, SKIP_WEIGHT)
            if status != QUAD_OK:
                _check_status(status, f, float(shapes[bad]))
            _check_growth(worst, f)
            skipped = float(w[w < SKIP_WEIGHT].sum())
    bound_ = _trunc_bound(f, series.tail_mass + skipped, series, support,
                          config.family.gamma_kernel)
    return Evaluation(float(value), bound_, float(quad_err), series.tail_mass, series.trunc_k)
