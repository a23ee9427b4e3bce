"""Moduli of smoothness and the operator error bounds built on them.

The grid estimators maximize over a finite set of points, so they are lower
bounds of the true quantities. The bound evaluators take analytic moduli or
norms from the caller.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .moments import central_moment_closed, reflection_ratio, upsilon
from .operators import OperatorConfig

RADICAND_TOL = 1e-12


class ModulusKind(str, enum.Enum):
    FIRST_ORDER = "FirstOrder"
    SECOND_ORDER = "SecondOrder"


@dataclass(frozen=True)
class ModulusEstimate:
    value: float
    delta: float
    grid_step: float
    kind: ModulusKind
    is_lower_bound: bool = True

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class SmoothnessNorms:
    """Sup norms of h, h' and h''."""

    sup_f: float
    sup_f1: float
    sup_f2: float

    def __post_init__(self):
        for v in (self.sup_f, self.sup_f1, self.sup_f2):
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"norms must be finite and >= 0, got {v!r}")

    @property
    def total(self) -> float:
        return self.sup_f + self.sup_f1 + self.sup_f2


def _grid(domain, step):
    a, b = map(float, domain)
    if not (0.0 <= a < b and math.isfinite(b)):
        raise DomainError(f"domain must satisfy 0 <= a < b < inf, got {domain!r}")
    if not step > 0.0:
        raise DomainError(f"step must be > 0, got {step!r}")
    count = int(math.floor((b - a) / step * (1.0 + 1e-12))) + 1
    return a + step * np.arange(count)


def _values(f, pts):
    return np.array([f(float(t)) for t in pts], dtype=float)


def _max_lag(delta, step):
    return int(math.floor(delta / step * (1.0 + 1e-12)))


def _window_extrema(v: np.ndarray, width: int):
    """Max and min of v over every window of width + 1 consecutive samples,
    via a sparse table (O(N log width))."""
    length = width + 1
    hi, lo = v.copy(), v.copy()
    span = 1
    while 2 * span <= length:
        hi = np.maximum(hi[:-span], hi[span:])
        lo = np.minimum(lo[:-span], lo[span:])
        span *= 2
    count = len(v) - width
    off = length - span
    return (np.maximum(hi[:count], hi[off:off + count]),
            np.minimum(lo[:count], lo[off:off + count]))


def modulus(f, delta: float, domain, step: float) -> ModulusEstimate:
    """max |f(s) - f(t)| over grid pairs with |s - t| <= delta."""
    if not delta > 0.0:
        raise DomainError(f"delta must be > 0, got {delta!r}")
    if step > delta:
        raise DomainError("step must not exceed delta")
    v = _values(f, _grid(domain, step))
    lag = min(_max_lag(delta, step), len(v) - 1)
    hi, lo = _window_extrema(v, lag)
    return ModulusEstimate(float(np.max(hi - lo)), float(delta), float(step),
                           ModulusKind.FIRST_ORDER)


def second_modulus(f, delta: float, domain, step: float) -> ModulusEstimate:
    """max |f(x + 2s) - 2 f(x + s) + f(x)| over grid x and grid s in (0, delta],
    with x + 2s inside the domain."""
    if not delta > 0.0:
        raise DomainError(f"delta must be > 0, got {delta!r}")
    if step > delta:
        raise DomainError("step must not exceed delta")
    v = _values(f, _grid(domain, step))
    best = 0.0
    for s in range(1, min(_max_lag(delta, step), (len(v) - 1) // 2) + 1):
        d2 = v[2 * s:] - 2.0 * v[s:len(v) - s] + v[: len(v) - 2 * s]
        best = max(best, float(np.max(np.abs(d2))))
    return ModulusEstimate(best, float(delta), float(step), ModulusKind.SECOND_ORDER)


def lipschitz_constant(f, lip_exponent: float, domain, step: float) -> float:
    """max |f(s) - f(t)| / |s - t|^lip_exponent over distinct grid pairs."""
    if not 0.0 < lip_exponent <= 1.0:
        raise DomainError(f"lip_exponent must lie in (0, 1], got {lip_exponent!r}")
    v = _values(f, _grid(domain, step))
    best = 0.0
    for lag in range(1, len(v)):
        d = np.abs(v[lag:] - v[:-lag])
        best = max(best, float(np.max(d)) / (lag * step) ** lip_exponent)
    return best


def default_window(config: OperatorConfig, x_max: float) -> tuple[float, float]:
    """[0, x_max + 4 sqrt(n L2) / n + L1], holding the operator mass that
    matters for a bound comparison up to x_max."""
    l1 = central_moment_closed(config, 1, x_max)
    l2 = central_moment_closed(config, 2, x_max)
    return 0.0, x_max + 4.0 * math.sqrt(l2 * config.n) / config.n + l1


def bound_theorem6(config: OperatorConfig, x: float, M: float, lip_exponent: float) -> float:
    """M * L2^(lip_exponent / 2), for h in Lip_M(lip_exponent)."""
    if not 0.0 < lip_exponent <= 1.0:
        raise DomainError(f"lip_exponent must lie in (0, 1], got {lip_exponent!r}")
    if not M >= 0.0:
        raise DomainError(f"M must be >= 0, got {M!r}")
    return M * central_moment_closed(config, 2, x) ** (lip_exponent / 2.0)


def theorem7_radicand(config: OperatorConfig, x: float) -> float:
    """x^2/n (4x^2 alpha^2 + 4 lambda alpha + 10 alpha) + 2x (mu r + 1)
    + (lambda+1)(lambda+2)/n, term by term."""
    n, mu, a, lam = config.n, config.mu, config.alpha, config.lam
    r = reflection_ratio(config, x).value
    return (x * x / n * (4.0 * x * x * a * a + 4.0 * lam * a + 10.0 * a)
            + 2.0 * x * (mu * r + 1.0)
            + (lam + 1.0) * (lam + 2.0) / n)


def bound_theorem7(config: OperatorConfig, x: float, omega_at_inv_sqrt_n: float) -> float:
    """(1 + sqrt(n L2)) * omega(g; 1/sqrt(n))."""
    if not omega_at_inv_sqrt_n >= 0.0:
        raise DomainError("omega must be >= 0")
    rad = theorem7_radicand(config, x)
    n_l2 = config.n * central_moment_closed(config, 2, x)
    if abs(rad - n_l2) > RADICAND_TOL * max(1.0, abs(n_l2)):
        raise ArithmeticError(f"radicand {rad!r} differs from n*L2 {n_l2!r}")
    return (1.0 + math.sqrt(rad)) * omega_at_inv_sqrt_n


def bound_lemma8(config: OperatorConfig, x: float, norms: SmoothnessNorms) -> float:
    """(L1 + L2)(|h| + |h'| + |h''|)."""
    l1 = central_moment_closed(config, 1, x)
    l2 = central_moment_closed(config, 2, x)
    return (l1 + l2) * norms.total


def bound_final(config: OperatorConfig, x: float, c: float,
                omega2_at_half_sqrt_upsilon: float, omega_at_lambda1: float) -> float:
    """c * omega_2(f; sqrt(Upsilon) / 2) + omega(f; L1)."""
    if not c > 0.0:
        raise DomainError(f"c must be > 0, got {c!r}")
    if omega2_at_half_sqrt_upsilon < 0.0 or omega_at_lambda1 < 0.0:
        raise DomainError("moduli must be >= 0")
    return c * omega2_at_half_sqrt_upsilon + omega_at_lambda1


def final_deltas(config: OperatorConfig, x: float) -> tuple[float, float]:
    """(sqrt(Upsilon) / 2, L1): the arguments of the two moduli in bound_final."""
    return 0.5 * math.sqrt(upsilon(config, x)), central_moment_closed(config, 1, x)

