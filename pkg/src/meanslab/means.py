"""Double-precision evaluation of the ten bivariate means.

Every mean is symmetric, so the pair is canonicalized to (hi, lo) first and
symmetry holds bit for bit.  On the diagonal the common value is returned
untouched.  For ``t = (hi-lo)/(hi+lo) < SERIES_THRESHOLD`` the L, P, X, Y and
I means are summed from the series kernels in parameter space; above the
threshold they use closed forms arranged so that no two nearly equal
quantities are subtracted.
"""

from __future__ import annotations

import math

from . import kinds
from .errors import InvalidArgumentError
from .kinds import MeanKind, MeanTag, MeanValue, PositivePair
from .param import (
    RatioKind,
    _geometric,
    _ycoth_excess,
    hyp_param,
    ratio_eval,
    trig_param,
)

__all__ = [
    "SERIES_THRESHOLD",
    "P_SMALL",
    "eval_mean",
    "power_mean",
    "heronian_mean",
    "compose_mean",
    "mean",
]

SERIES_THRESHOLD = 1e-4
P_SMALL = 1e-8

_SERIES_TAGS = {
    MeanTag.Logarithmic,
    MeanTag.Identric,
    MeanTag.Seiffert,
    MeanTag.SandorX,
    MeanTag.SandorY,
}


def _clamp(v: float, lo: float, hi: float) -> float:
    return min(max(v, lo), hi)


def _exp_scaled(scale: float, arg: float) -> float:
    """scale * exp(arg) for results in range even when exp(arg) alone is not."""
    if abs(arg) < 700.0:
        return scale * math.exp(arg)
    k = math.ceil(abs(arg) / 700.0)
    f = math.exp(arg / k)
    for _ in range(k):
        scale *= f
    return scale


def _direct(tag: MeanTag, hi: float, lo: float) -> float:
    A = hi * 0.5 + lo * 0.5
    half_diff = (hi - lo) * 0.5
    if tag is MeanTag.Arithmetic:
        return A
    G = _geometric(hi, lo)
    if tag is MeanTag.Geometric:
        return G
    if tag is MeanTag.Harmonic:
        return (hi / A) * lo
    if tag in (MeanTag.Seiffert, MeanTag.SandorX):
        x = math.atan2(half_diff, G)
        if tag is MeanTag.Seiffert:
            return half_diff / x
        return A * math.exp(x * (G / half_diff) - 1.0)
    t = half_diff / A
    y = hyp_param(PositivePair(hi, lo))
    if tag is MeanTag.Logarithmic:
        return half_diff / y
    if tag is MeanTag.SandorY:
        return G * math.exp(t / y - 1.0)
    # Identric: log(I/G) = A/L - 1 = y/t - 1
    return _exp_scaled(G, y / t - 1.0)


def _series(tag: MeanTag, pair: PositivePair) -> float:
    hi, lo = pair.hi, pair.lo
    A = hi * 0.5 + lo * 0.5
    if tag in (MeanTag.Seiffert, MeanTag.SandorX):
        x = trig_param(pair)
        kind = RatioKind.P_over_A if tag is MeanTag.Seiffert else RatioKind.X_over_A
        return A * ratio_eval(kind, x)
    y = hyp_param(pair)
    if tag is MeanTag.Logarithmic:
        return A * ratio_eval(RatioKind.L_over_A, y)
    G = _geometric(hi, lo)
    if tag is MeanTag.SandorY:
        return G * ratio_eval(RatioKind.Y_over_G, y)
    return G * math.exp(_ycoth_excess(y))


def _log_ratio(hi: float, lo: float) -> float:
    """log(hi/lo) >= 0, also when hi/lo overflows."""
    r = hi / lo
    if math.isinf(r):
        return math.log(hi) - math.log(lo)
    return math.log(r)


def _power_core(p: float, hi: float, lo: float, heronian: bool) -> float:
    d = _log_ratio(hi, lo)
    u = 0.5 * p * d
    if abs(u) < 1.0:
        # centred on G: the average of the p-th powers is G**p (1 + k sinh(u/2)**2)
        k = 4.0 / 3.0 if heronian else 2.0
        return _exp_scaled(_geometric(hi, lo), math.log1p(k * math.sinh(0.5 * u) ** 2) / p)
    # factor out whichever endpoint keeps the ratio**p term <= 1
    base = hi if p > 0 else lo
    s = -abs(p) * d
    if heronian:
        inner = (math.expm1(0.5 * s) + math.expm1(s)) / 3.0
    else:
        inner = 0.5 * math.expm1(s)
    return _exp_scaled(base, math.log1p(inner) / p)


def _parametric(kind: MeanKind, hi: float, lo: float) -> float:
    p = kind.p
    heronian = kind.tag is MeanTag.Heronian
    if p == 0.0:
        return _geometric(hi, lo)
    if not heronian and p == 1.0:
        return hi * 0.5 + lo * 0.5
    if not heronian and p == -1.0:
        return _direct(MeanTag.Harmonic, hi, lo)
    if abs(p) < P_SMALL:
        # log M_p = log G + p d**2 / 8 (Heronian: / 12) + O(p**3 d**4)
        d = _log_ratio(hi, lo)
        return _exp_scaled(_geometric(hi, lo), p * d * d / (12.0 if heronian else 8.0))
    return _power_core(p, hi, lo, heronian)


def eval_mean(kind: MeanKind, pair: PositivePair) -> MeanValue:
    """Evaluate ``kind`` at ``pair``.

    Raises:
        InvalidArgumentError: ``kind`` or ``pair`` is not valid.
    """
    if not isinstance(kind, MeanKind):
        raise InvalidArgumentError(f"expected a MeanKind, got {kind!r}")
    if not isinstance(pair, PositivePair):
        pair = PositivePair(*pair)
    hi, lo = pair.hi, pair.lo
    if hi == lo:
        return MeanValue(hi, "direct")
    if kind.tag in (MeanTag.Power, MeanTag.Heronian):
        return MeanValue(_clamp(_parametric(kind, hi, lo), lo, hi), "direct")
    if kind.tag in _SERIES_TAGS and pair.t < SERIES_THRESHOLD:
        return MeanValue(_clamp(_series(kind.tag, pair), lo, hi), "series-fallback")
    return MeanValue(_clamp(_direct(kind.tag, hi, lo), lo, hi), "direct")


def power_mean(p: float, pair: PositivePair) -> MeanValue:
    return eval_mean(kinds.Power(p), pair)


def heronian_mean(p: float, pair: PositivePair) -> MeanValue:
    return eval_mean(kinds.Heronian(p), pair)


def compose_mean(kind: MeanKind, left, right) -> MeanValue:
    """Apply ``kind`` to two mean values, e.g. L(X(a, b), A(a, b))."""
    return eval_mean(kind, PositivePair(float(left), float(right)))


def mean(kind: MeanKind | str, a: float, b: float) -> float:
    """Shorthand returning a bare float; ``kind`` may be a letter such as ``"X"``."""
    if isinstance(kind, str):
        kind = MeanKind.from_letter(kind)
    return eval_mean(kind, PositivePair(a, b)).value
