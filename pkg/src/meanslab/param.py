"""Trigonometric and hyperbolic parametrization of a pair a > b > 0.

With ``sin x = (a-b)/(a+b)``, x in (0, pi/2), and ``y = log(a/b)/2``::

    P/A = sin(x)/x      G/A = cos(x)      H/A = cos(x)**2   X/A = exp(x cot x - 1)
    L/G = sinh(y)/y     L/A = tanh(y)/y   H/G = 1/cosh(y)   Y/G = exp(tanh(y)/y - 1)

and ``log(I/G) = A/L - 1``.  Below ``SERIES_SWITCH`` the ratios are summed
from the Bernoulli series instead of libm quotients.
"""

from __future__ import annotations

import enum
import math

from .errors import DegenerateInputError, DomainError, InvalidArgumentError
from .kinds import PositivePair
from .series import KernelKind, kernel_eval

SERIES_SWITCH = 1e-2


class RatioKind(enum.Enum):
    P_over_A = "P/A"
    G_over_A = "G/A"
    H_over_A = "H/A"
    X_over_A = "X/A"
    L_over_G = "L/G"
    L_over_A = "L/A"
    H_over_G = "H/G"
    Y_over_G = "Y/G"

    @property
    def trig(self) -> bool:
        return self in _TRIG


_TRIG = {RatioKind.P_over_A, RatioKind.G_over_A, RatioKind.H_over_A, RatioKind.X_over_A}


def _geometric(hi: float, lo: float) -> float:
    prod = hi * lo
    if prod == 0.0 or math.isinf(prod) or prod < 2.2250738585072014e-308:
        return math.sqrt(hi) * math.sqrt(lo)
    return math.sqrt(prod)


def trig_param(pair: PositivePair) -> float:
    """x = arcsin(|a-b|/(a+b)), evaluated as atan2(|a-b|/2, G).

    The atan2 form stays well conditioned as a/b grows, where arcsin of a
    number close to 1 would not.
    """
    hi, lo = pair.hi, pair.lo
    if hi == lo:
        raise DegenerateInputError("trig_param needs a != b")
    return math.atan2((hi - lo) * 0.5, _geometric(hi, lo))


def hyp_param(pair: PositivePair) -> float:
    """y = artanh(|a-b|/(a+b)) = log(max/min) / 2."""
    hi, lo = pair.hi, pair.lo
    if hi == lo:
        raise DegenerateInputError("hyp_param needs a != b")
    t = pair.t
    if t < 0.5:
        return math.atanh(t)
    ratio = hi / lo
    if math.isinf(ratio):
        return 0.5 * (math.log(hi) - math.log(lo))
    return 0.5 * math.log(ratio)


def ratio_eval(kind: RatioKind, param: float) -> float:
    """Evaluate one mean ratio as a function of x (trig kinds) or y (hyperbolic kinds)."""
    kind = RatioKind(kind)
    param = float(param)
    if kind.trig:
        if not 0.0 < param <= math.pi / 2:
            raise DomainError(f"{kind.value} needs x in (0, pi/2), got {param}")
    elif not 0.0 < param < math.inf:
        raise DomainError(f"{kind.value} needs y > 0, got {param}")

    small = param < SERIES_SWITCH
    if kind is RatioKind.G_over_A:
        return math.cos(param)
    if kind is RatioKind.H_over_A:
        return math.cos(param) ** 2
    if kind is RatioKind.H_over_G:
        return 1.0 / math.cosh(param)
    if kind is RatioKind.P_over_A:
        if small:
            return 1.0 / kernel_eval(KernelKind.XOverSinX, param).value
        return math.sin(param) / param
    if kind is RatioKind.X_over_A:
        if small:
            # x cot x - 1 is exactly the summed part of the series
            return math.exp(kernel_eval(KernelKind.XCotX, param).series)
        return math.exp(param / math.tan(param) - 1.0)

    la = _l_over_a(param, small)
    if kind is RatioKind.L_over_A:
        return la
    if kind is RatioKind.L_over_G:
        return la * math.cosh(param) if small else math.sinh(param) / param
    # Y_over_G
    return math.exp(la - 1.0) if not small else math.exp(-_ycoth_excess(param) * la)


def _ycoth_excess(y: float) -> float:
    """y coth y - 1, from the coth series."""
    return y * kernel_eval(KernelKind.Coth, y).series


def _l_over_a(y: float, small: bool) -> float:
    if small:
        return 1.0 / (1.0 + _ycoth_excess(y))
    return math.tanh(y) / y


def identric_from_relation(L: float, A: float, G: float) -> float:
    """I = G exp(A/L - 1)."""
    for name, v in (("L", L), ("A", A), ("G", G)):
        if not math.isfinite(v) or v <= 0:
            raise InvalidArgumentError(f"{name} must be finite and > 0, got {v!r}")
    return G * math.exp(A / L - 1.0)
