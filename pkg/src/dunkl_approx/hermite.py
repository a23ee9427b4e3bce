"""Dunkl two-variable Hermite polynomials.

H_k(xi, alpha) = k! sum_{j <= k/2} alpha^j xi^(k-2j) / (j! gamma_mu(k-2j)),
h_k = gamma_mu(k) H_k / k!, generated by

    sum_k h_k(xi, alpha) t^k / gamma_mu(k) = exp(alpha t^2) e_mu(xi t).

Every consumer needs h_k / gamma_mu(k) = H_k / k!, so that coefficient
(:func:`hermite_term`) is the primitive. All j-terms of a given k share the
sign of xi^k, so the explicit sum never cancels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._backend import kernels
from .dunkl_core import (
    KERNEL_SERIES,
    DunklParam,
    LogValue,
    SeriesControl,
    _truncated_logterms,
    dunkl_exp,
    log_gamma,
    log_gamma_nu_table,
)
from .errors import DomainError


@dataclass(frozen=True)
class HermiteParam:
    mu: float
    alpha: float

    def __post_init__(self):
        for name in ("mu", "alpha"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise DomainError(f"{name} must be finite and >= 0, got {v!r}")

    @property
    def dunkl(self) -> DunklParam:
        return DunklParam(self.mu)


def _log(v: float) -> float:
    return math.log(v) if v > 0.0 else -math.inf


def hermite_log_table(hp: HermiteParam, xi: float, kmax: int) -> np.ndarray:
    """log |H_k(xi, alpha) / k!| for k = 0..kmax."""
    lg = log_gamma_nu_table(hp.mu, kmax)
    return kernels.hermite_log_coeffs(lg, _log(hp.alpha), _log(abs(xi)), kmax)


def _sign(xi: float, k: int, log_abs: float) -> int:
    if log_abs == -math.inf:
        return 0
    return -1 if (xi < 0.0 and k % 2) else 1


def hermite_term(hp: HermiteParam, k: int, xi: float) -> LogValue:
    """H_k(xi, alpha) / k!, the coefficient of t^k in exp(alpha t^2) e_mu(xi t)."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    la = float(hermite_log_table(hp, xi, k)[k])
    return LogValue(_sign(xi, k, la), la)


def hermite_H(hp: HermiteParam, k: int, xi: float) -> LogValue:
    """H_k(xi, alpha) from the explicit finite sum."""
    term = hermite_term(hp, k, xi)
    if term.sign == 0:
        return term
    return LogValue(term.sign, term.log_abs + log_gamma(k + 1.0))


class SeriesSum(NamedTuple):
    value: float
    n_terms: int


def shifted_series_sum(hp: HermiteParam, xi: float, t: float, shift: int,
                       ctrl: SeriesControl = KERNEL_SERIES) -> SeriesSum:
    """sum_k h_{k+shift}(xi, alpha) t^k / gamma_mu(k), shift in {0, 1, 2}.

    h_{k+s} / gamma_mu(k) = [gamma_mu(k+s) / gamma_mu(k)] * H_{k+s} / (k+s)!.
    """
    if shift not in (0, 1, 2):
        raise DomainError(f"shift must be 0, 1 or 2, got {shift}")
    if not (t >= 0.0 and math.isfinite(t)):
        raise DomainError(f"t must be finite and >= 0, got {t!r}")
    log_t = _log(t)

    def make(kmax):
        top = kmax + shift
        lg = log_gamma_nu_table(hp.mu, top)
        lh = kernels.hermite_log_coeffs(lg, _log(hp.alpha), _log(abs(xi)), top)
        k = np.arange(kmax + 1)
        out = lg[k + shift] - lg[k] + lh[k + shift]
        if t > 0.0:
            out[1:] += k[1:] * log_t
        else:
            out[1:] = -math.inf
        return out

    if t == 0.0:
        lt = make(0)
    else:
        scale = abs(xi) * t + 2.0 * hp.alpha * t * t
        lt = _truncated_logterms(make, int(scale + 15.0 * math.sqrt(scale) + 60.0),
                                 ctrl, "shifted Hermite series")
    if xi >= 0.0:
        log_sum = float(kernels.log_sum_exp(lt))
        value = float(LogValue(1, log_sum)) if log_sum > -math.inf else 0.0
        return SeriesSum(value, len(lt))
    k = np.arange(len(lt))
    signs = np.where((k + shift) % 2 == 1, -1.0, 1.0)
    m = float(lt.max())
    value = math.exp(m) * float(kernels.neumaier_sum(signs * np.exp(lt - m)))
    return SeriesSum(value, len(lt))


def shifted_closed_form(hp: HermiteParam, xi: float, t: float, shift: int) -> float:
    """Closed-form right-hand side matching :func:`shifted_series_sum`."""
    if shift not in (0, 1, 2):
        raise DomainError(f"shift must be 0, 1 or 2, got {shift}")
    a = hp.alpha
    p = hp.dunkl
    log_g = a * t * t
    base = float(LogValue(1, log_g) * dunkl_exp(p, xi * t))
    if shift == 0:
        return base
    if shift == 1:
        return (xi + 2.0 * a * t) * base
    poly = xi * xi + 4.0 * xi * a * t + 4.0 * a * a * t * t + 2.0 * a
    if a == 0.0 or hp.mu == 0.0:
        return poly * base
    reflected = float(LogValue(1, log_g) * dunkl_exp(p, -xi * t))
    return poly * base + 4.0 * a * hp.mu * reflected
