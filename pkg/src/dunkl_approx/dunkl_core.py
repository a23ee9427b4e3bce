"""Dunkl special functions: gamma_mu(k), the Dunkl exponential, the reflection
ratio e_mu(-x)/e_mu(x), log-Gamma, and the Dunkl derivative on polynomials.

The coefficients gamma_mu(k) grow factorially, so everything is carried in
log space. gamma_mu is built from the ratio recursion

    gamma_mu(k + 1) / gamma_mu(k) = k + 1 + 2 mu theta_{k+1},

with theta_k = k mod 2, and the closed form through Gamma functions is kept
only as a cross-check (:func:`gamma_nu_log_direct`).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._backend import kernels
from .errors import DomainError, NonConvergence

EPS = np.finfo(float).eps
# cancellation factors (E + xO) / (E - xO) of the even/odd split: past
# SWITCH_FACTOR the positive series is used; past PRECISION_LOSS_FACTOR the
# split is flagged as unusable on its own
SWITCH_FACTOR = 1e3
PRECISION_LOSS_FACTOR = 1e6


@dataclass(frozen=True)
class DunklParam:
    """Dunkl parameter mu >= 0."""

    mu: float

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu >= 0.0):
            raise DomainError(f"mu must be finite and >= 0, got {self.mu!r}")


@dataclass(frozen=True)
class LogValue:
    """Signed scalar stored as (sign, log|value|)."""

    sign: int
    log_abs: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")
        if (self.sign == 0) != (self.log_abs == -math.inf):
            raise ValueError("sign == 0 exactly when log_abs == -inf")

    @classmethod
    def from_float(cls, v: float) -> LogValue:
        if v == 0.0:
            return cls(0, -math.inf)
        return cls(1 if v > 0 else -1, math.log(abs(v)))

    @classmethod
    def one(cls) -> LogValue:
        return cls(1, 0.0)

    def __mul__(self, other: LogValue) -> LogValue:
        sign = self.sign * other.sign
        if sign == 0:
            return LogValue(0, -math.inf)
        return LogValue(sign, self.log_abs + other.log_abs)

    def __truediv__(self, other: LogValue) -> LogValue:
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogValue")
        if self.sign == 0:
            return self
        return LogValue(self.sign * other.sign, self.log_abs - other.log_abs)

    def __neg__(self) -> LogValue:
        return LogValue(-self.sign, self.log_abs)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_abs)
        except OverflowError:
            return self.sign * math.inf

    @property
    def value(self) -> float:
        return float(self)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control: stop once a term past the peak falls below
    ``tail_tol`` times the partial sum; give up after ``max_terms`` terms.
    ``max_terms=None`` lets the caller pick a size-dependent cap."""

    tail_tol: float = 1e-17
    max_terms: int | None = 1_000_000

    def __post_init__(self):
        if not 0.0 < self.tail_tol < 1.0:
            raise ValueError(f"tail_tol must lie in (0, 1), got {self.tail_tol!r}")
        if self.max_terms is not None and self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms!r}")


KERNEL_SERIES = SeriesControl()


@dataclass(frozen=True, init=False)
class Polynomial:
    """Dense real polynomial; ``coeffs[j]`` multiplies x**j.

    Trailing zeros are dropped, so the zero polynomial has ``coeffs == ()``
    and degree -1.
    """

    coeffs: tuple[float, ...]

    def __init__(self, coeffs=()):
        c = [float(v) for v in coeffs]
        while c and c[-1] == 0.0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, n: int, c: float = 1.0) -> Polynomial:
        return cls([0.0] * n + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, j: int) -> float:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0.0

    def __call__(self, x):
        acc = 0.0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial([self.coefficient(j) + other.coefficient(j) for j in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if not self.coeffs or not other.coeffs:
                return Polynomial()
            return Polynomial(np.convolve(self.coeffs, other.coeffs))
        return Polynomial([c * other for c in self.coeffs])

    __rmul__ = __mul__


def theta(k: int) -> int:
    """Parity indicator: 0 for even k, 1 for odd k."""
    if k < 0:
        raise DomainError(f"theta needs k >= 0, got {k}")
    return k % 2


@functools.lru_cache(maxsize=64)
def _lg_cached(mu: float, size: int) -> np.ndarray:
    table = kernels.log_gamma_nu_table(mu, size)
    table.flags.writeable = False
    return table


def log_gamma_nu_table(mu: float, kmax: int) -> np.ndarray:
    """Read-only array of log gamma_mu(k), k = 0..kmax."""
    size = max(64, 1 << int(kmax).bit_length())
    return _lg_cached(float(mu), size)[: kmax + 1]


def gamma_nu_log(p: DunklParam, k: int) -> LogValue:
    """log gamma_mu(k) from the ratio recursion starting at gamma_mu(0) = 1."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    return LogValue(1, float(log_gamma_nu_table(p.mu, k)[k]))


def gamma_nu_log_direct(p: DunklParam, k: int) -> LogValue:
    """log gamma_mu(k) from the Gamma-function closed form."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    half, odd = divmod(k, 2)
    shift = 1.5 if odd else 0.5
    v = (k * math.log(2.0) + log_gamma(half + 1.0)
         + log_gamma(half + p.mu + shift) - log_gamma(p.mu + 0.5))
    return LogValue(1, v)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x), x > 0."""
    if not (x > 0.0 and math.isfinite(x)):
        raise DomainError(f"log_gamma needs a finite x > 0, got {x!r}")
    return float(kernels.log_gamma(float(x)))


def _series_cut(lt: np.ndarray, tail_tol: float) -> int | None:
    """Index past the largest term where two consecutive terms are below
    tail_tol times the partial sum, or None. Two in a row, because series
    with one vanishing parity class have exact zeros between live terms."""
    partial = np.logaddexp.accumulate(lt)
    peak = int(np.argmax(lt))
    tail = lt[peak:]
    below = (tail == -math.inf) | (tail < math.log(tail_tol) + partial[peak:])
    pair = np.nonzero(below[:-1] & below[1:])[0]
    if pair.size == 0:
        return None
    return peak + int(pair[0]) + 1


def _truncated_logterms(make, guess: int, ctrl: SeriesControl, what: str) -> np.ndarray:
    """Grow the term count from ``guess`` until the series cut is found."""
    cap = ctrl.max_terms if ctrl.max_terms is not None else KERNEL_SERIES.max_terms
    kmax = min(max(guess, 8), cap - 1)
    while True:
        lt = make(kmax)
        cut = _series_cut(lt, ctrl.tail_tol)
        if cut is not None and cut < kmax:
            return lt[: cut + 1]
        if kmax >= cap - 1:
            raise NonConvergence(f"{what}: no convergence within {cap} terms")
        kmax = min(2 * kmax, cap - 1)


def dunkl_logterms(mu: float, x: float, ctrl: SeriesControl = KERNEL_SERIES) -> np.ndarray:
    """Truncated log terms k log x - log gamma_mu(k) of e_mu(x), x > 0."""
    log_x = math.log(x)

    def make(kmax):
        return np.arange(kmax + 1) * log_x - log_gamma_nu_table(mu, kmax)

    return _truncated_logterms(make, int(x + 15.0 * math.sqrt(x) + 60.0), ctrl, "e_mu")


class Ratio(NamedTuple):
    """e_mu(-x) / e_mu(x) with its accuracy diagnostic.

    ``method`` is "split" when (E - xO) / (E + xO) was used directly and
    "positive-series" when the split cancelled by more than SWITCH_FACTOR and
    the cancellation-free series for exp(x) e_mu(-x) was used instead.
    ``precision_loss`` records that the split alone would have lost more
    than PRECISION_LOSS_FACTOR * eps relative accuracy.
    """

    value: float
    log_value: float
    precision_loss: bool
    method: str


def _ratio(mu: float, x: float, ctrl: SeriesControl) -> Ratio:
    lt = dunkl_logterms(mu, x, ctrl)
    shift, even, odd = kernels.parity_sums(lt)
    plus = even + odd
    minus = even - odd
    log_plus = shift + math.log(plus)
    loss = not (minus > 0.0 and plus <= PRECISION_LOSS_FACTOR * minus)
    if minus > 0.0 and plus <= SWITCH_FACTOR * minus:
        log_r = math.log(minus) - math.log(plus)
        return Ratio(math.exp(log_r), log_r, loss, "split")

    log_x = math.log(x)

    def make(kmax):
        return kernels.dunkl_neg_logterms(log_gamma_nu_table(mu, kmax), mu, log_x, kmax)

    guess = int(2.0 * x + 15.0 * math.sqrt(2.0 * x) + 60.0)
    lt_g = _truncated_logterms(make, guess, ctrl, "exp(x) e_mu(-x)")
    log_r = -x + float(kernels.log_sum_exp(lt_g)) - log_plus
    return Ratio(math.exp(log_r), log_r, loss, "positive-series")


def dunkl_exp(p: DunklParam, x: float, ctrl: SeriesControl = KERNEL_SERIES) -> LogValue:
    """Dunkl exponential e_mu(x) = sum_k x^k / gamma_mu(k)."""
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    if x == 0.0:
        return LogValue.one()
    if x > 0.0:
        return LogValue(1, float(kernels.log_sum_exp(dunkl_logterms(p.mu, x, ctrl))))
    pos = dunkl_exp(p, -x, ctrl)
    return LogValue(1, pos.log_abs + _ratio(p.mu, -x, ctrl).log_value)


def dunkl_exp_ratio(p: DunklParam, x: float, ctrl: SeriesControl = KERNEL_SERIES) -> Ratio:
    """e_mu(-x) / e_mu(x) for x >= 0."""
    if not (x >= 0.0 and math.isfinite(x)):
        raise DomainError(f"dunkl_exp_ratio needs a finite x >= 0, got {x!r}")
    if x == 0.0:
        return Ratio(1.0, 0.0, False, "split")
    return _ratio(p.mu, x, ctrl)


def dunkl_derivative(p: DunklParam, q: Polynomial) -> Polynomial:
    """Apply D_mu f = f' + (mu/x)(f(x) - f(-x)) to a polynomial.

    On monomials: x^n -> (n + 2 mu theta_n) x^(n-1), constants -> 0.
    """
    return Polynomial([(n + 2.0 * p.mu * (n % 2)) * q.coeffs[n]
                       for n in range(1, len(q.coeffs))])
