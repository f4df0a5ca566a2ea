"""Extended-precision means and ratios on gmpy2 ``mpfr`` values.

Claim margins near the diagonal shrink like t**4 or faster, far below double
precision at t = 1e-8, so the claim engine and the sharp-constant analysis
run here at ``PRECISION`` bits.  The formulas are the parametrized closed
forms of ``param``; at this precision they need no series fallback.

All functions use the active gmpy2 context; wrap calls in ``working_precision``.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpfr

from .kinds import MeanKind, MeanTag
from .param import RatioKind

PRECISION = 256


def working_precision(bits: int = PRECISION):
    return gmpy2.context(gmpy2.get_context(), precision=bits)


class PairMeans:
    """Lazily evaluated means of one pair, sharing intermediates."""

    def __init__(self, a, b):
        a, b = mpfr(a), mpfr(b)
        self.hi, self.lo = (a, b) if a >= b else (b, a)
        self.diagonal = self.hi == self.lo
        self._cache: dict = {}

    def _get(self, key, fn):
        v = self._cache.get(key)
        if v is None:
            v = self._cache[key] = fn()
        return v

    @property
    def A(self):
        return self._get("A", lambda: (self.hi + self.lo) / 2)

    @property
    def G(self):
        return self._get("G", lambda: gmpy2.sqrt(self.hi * self.lo))

    @property
    def half_diff(self):
        return self._get("hd", lambda: (self.hi - self.lo) / 2)

    @property
    def x(self):
        return self._get("x", lambda: gmpy2.atan2(self.half_diff, self.G))

    @property
    def y(self):
        return self._get("y", lambda: gmpy2.atanh(self.half_diff / self.A))

    def value(self, kind: MeanKind, p=None):
        """Mean of the pair; ``p`` overrides ``kind.p`` with an exact mpfr exponent."""
        key = kind if p is None else (kind, p)
        return self._get(key, lambda: self._compute(kind, p))

    def _compute(self, kind: MeanKind, p_exact=None):
        tag = kind.tag
        if self.diagonal:
            return +self.hi
        if tag is MeanTag.Arithmetic:
            return self.A
        if tag is MeanTag.Geometric:
            return self.G
        if tag is MeanTag.Harmonic:
            return self.hi * self.lo / self.A
        if tag is MeanTag.Seiffert:
            return self.half_diff / self.x
        if tag is MeanTag.Logarithmic:
            return self.half_diff / self.y
        if tag is MeanTag.SandorX:
            return self.A * gmpy2.exp(self.x * self.G / self.half_diff - 1)
        if tag is MeanTag.SandorY:
            return self.G * gmpy2.exp(self.half_diff / (self.A * self.y) - 1)
        if tag is MeanTag.Identric:
            return self.G * gmpy2.exp(self.A * self.y / self.half_diff - 1)
        p = mpfr(kind.p if p_exact is None else p_exact)
        if p == 0:
            return self.G
        hp, lp = self.hi**p, self.lo**p
        if tag is MeanTag.Power:
            return ((hp + lp) / 2) ** (1 / p)
        return ((hp + gmpy2.sqrt(hp * lp) + lp) / 3) ** (1 / p)


def eval_mean_mp(kind: MeanKind, a, b):
    return PairMeans(a, b).value(kind)


def ratio_eval_mp(kind: RatioKind, param):
    """Mean ratios as functions of x or y, in mpfr."""
    kind = RatioKind(kind)
    z = mpfr(param)
    if kind is RatioKind.P_over_A:
        return gmpy2.sin(z) / z
    if kind is RatioKind.G_over_A:
        return gmpy2.cos(z)
    if kind is RatioKind.H_over_A:
        return gmpy2.cos(z) ** 2
    if kind is RatioKind.X_over_A:
        return gmpy2.exp(z / gmpy2.tan(z) - 1)
    if kind is RatioKind.L_over_G:
        return gmpy2.sinh(z) / z
    if kind is RatioKind.L_over_A:
        return gmpy2.tanh(z) / z
    if kind is RatioKind.H_over_G:
        return 1 / gmpy2.cosh(z)
    return gmpy2.exp(gmpy2.tanh(z) / z - 1)


def is_finite(v) -> bool:
    return bool(gmpy2.is_finite(v))


__all__ = [
    "PRECISION",
    "PairMeans",
    "eval_mean_mp",
    "is_finite",
    "ratio_eval_mp",
    "working_precision",
]

