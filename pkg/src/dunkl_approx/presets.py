"""Named target functions with analytically known smoothness data.

Each preset carries what the bound checks need: a Lipschitz pair (M, exponent),
the moduli omega(delta) and omega_2(delta) on [0, inf), and sup norms of
f, f', f''. Entries are None where the quantity is infinite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .dunkl_core import Polynomial
from .moduli import SmoothnessNorms
from .operators import Bounded, PolynomialDegree, TargetFunction


@dataclass(frozen=True)
class Preset:
    target: TargetFunction
    lipschitz: tuple[float, float] | None
    omega: Callable[[float], float] | None
    omega2: Callable[[float], float] | None
    norms: SmoothnessNorms | None

    @property
    def name(self) -> str:
        return self.target.label


def _sq_exp(t: float) -> float:
    return t * t * math.exp(-t)


# h = t^2 e^-t: max h = h(2); |h'| = |2t - t^2| e^-t peaks at t = 2 - sqrt 2;
# |h''| = |t^2 - 4t + 2| e^-t peaks at t = 0
_SQ_EXP_NORMS = SmoothnessNorms(
    4.0 * math.exp(-2.0),
    (2.0 * math.sqrt(2.0) - 2.0) * math.exp(-(2.0 - math.sqrt(2.0))),
    2.0,
)

PRESETS: dict[str, Preset] = {
    "identity": Preset(
        TargetFunction.from_polynomial(Polynomial([0.0, 1.0]), "identity"),
        (1.0, 1.0), lambda d: d, lambda d: 0.0, None),
    "square": Preset(
        TargetFunction.from_polynomial(Polynomial([0.0, 0.0, 1.0]), "square"),
        None, None, lambda d: 2.0 * d * d, None),
    "sin": Preset(
        TargetFunction(math.sin, Bounded(1.0), "sin"),
        (1.0, 1.0),
        lambda d: 2.0 * math.sin(min(d, math.pi) / 2.0),
        lambda d: 4.0 * math.sin(min(d, math.pi) / 2.0) ** 2,
        SmoothnessNorms(1.0, 1.0, 1.0)),
    "sqrt": Preset(
        TargetFunction(math.sqrt, PolynomialDegree(0.5, 1.0), "sqrt"),
        (1.0, 0.5),
        math.sqrt,
        lambda d: (2.0 - math.sqrt(2.0)) * math.sqrt(d),
        None),
    "exp_decay": Preset(
        TargetFunction(lambda t: math.exp(-t), Bounded(1.0), "exp_decay"),
        (1.0, 1.0),
        lambda d: -math.expm1(-d),
        lambda d: math.expm1(-d) ** 2,
        SmoothnessNorms(1.0, 1.0, 1.0)),
    "constant": Preset(
        TargetFunction.from_polynomial(Polynomial([1.0]), "constant"),
        (0.0, 1.0), lambda d: 0.0, lambda d: 0.0, SmoothnessNorms(1.0, 0.0, 0.0)),
    "sq_exp_decay": Preset(
        TargetFunction(_sq_exp, Bounded(4.0 * math.exp(-2.0)), "sq_exp_decay"),
        (_SQ_EXP_NORMS.sup_f1, 1.0), None, None, _SQ_EXP_NORMS),
}


def preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown function preset {name!r}; "
                       f"choose from {sorted(PRESETS)}") from None
