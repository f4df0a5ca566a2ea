"""Monotone ratio functions and the sharp constants read off their endpoints.

Every function here lives in parameter space: ``x`` in (0, pi/2) for the
trigonometric family (sin x = (a - b)/(a + b)) or ``y`` > 0 for the
hyperbolic one (y = log(a/b)/2).  Evaluation is in gmpy2 ``mpfr`` at
``precise.PRECISION`` bits so that 0/0 forms near the endpoints keep their
digits; callers pass plain floats or mpfr values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import gmpy2
from gmpy2 import mpfr
from scipy.optimize import brentq

from .errors import DomainError, InvalidArgumentError, NumericFailure
from .kinds import Heronian, Power, X as SANDOR_X
from .precise import PairMeans, working_precision

__all__ = [
    "MonotoneFunctionSpec",
    "DirectionReport",
    "ConstantEstimate",
    "Extremum",
    "monotone_specs",
    "get_spec",
    "sample_direction",
    "endpoint_limit",
    "extremize",
    "estimate_constant",
    "estimate_all_constants",
    "CONSTANT_IDS",
]

HALF_PI = math.pi / 2
EXTRAPOLATION_ORDER = 4
EXTRAPOLATION_EPS = 1e-2
ENDPOINT_GUARD = 1e-6


# -- the functions ---------------------------------------------------------


def _xcot_exp(x):
    # e^{x cot x - 1} = X/A
    return gmpy2.exp(x / gmpy2.tan(x) - 1)


def h_fn(x):
    """log(x/sin x) / log(e^{1 - x cot x} sin x / x); decreasing (0, pi/2) onto (beta2, 1)."""
    u = gmpy2.log(x / gmpy2.sin(x))
    return u / (1 - x / gmpy2.tan(x) - u)


def f_fn(x):
    """(1 - e^{x cot x - 1}) / (1 - cos x); decreasing onto ((e-1)/e, 2/3)."""
    return (1 - _xcot_exp(x)) / (2 * gmpy2.sin(x / 2) ** 2)


def f4_fn(x):
    """sin x / (x (1 + cos x - e^{x cot x - 1})); increasing onto (1, c)."""
    return gmpy2.sin(x) / (x * (1 + gmpy2.cos(x) - _xcot_exp(x)))


def f5_fn(x):
    """X/P = x e^{x cot x - 1} / sin x; decreasing onto (pi/(2e), 1)."""
    return x * _xcot_exp(x) / gmpy2.sin(x)


def g_fn(x):
    """log((2 + sec x)/(2 + cos x)) / log(sec x); increasing onto (2/3, 1)."""
    c = gmpy2.cos(x)
    return gmpy2.log((2 + 1 / c) / (2 + c)) / -gmpy2.log(c)


def ratio14_fn(y):
    """Y / sqrt(G H) = e^{tanh y / y - 1} sqrt(cosh y)."""
    return gmpy2.exp(gmpy2.tanh(y) / y - 1) * gmpy2.sqrt(gmpy2.cosh(y))


def ratio26_fn(x):
    """log(sin x / x) / log((1 + cos x)/2): exponent making P/A = ((1 + H/G)/2)^k."""
    return gmpy2.log(gmpy2.sin(x) / x) / (2 * gmpy2.log(gmpy2.cos(x / 2)))


def _pair_at(x):
    """The pair (1 + sin x, 1 - sin x) with the small member computed without cancellation."""
    s = gmpy2.sin(x)
    return 1 + s, 2 * gmpy2.sin((gmpy2.const_pi() / 2 - x) / 2) ** 2


def _exponent_matching_x(x, factory) -> float:
    """The p at which a power-type mean of the pair at ``x`` equals X."""
    a, b = _pair_at(mpfr(x))
    pm = PairMeans(a, b)
    target = gmpy2.log(pm.value(SANDOR_X))

    def gap(p):
        return float(gmpy2.log(pm.value(factory(1.0), mpfr(p))) - target)

    return brentq(gap, 0.05, 2.0, xtol=1e-15, rtol=4 * 2.0**-52)


def qstar_fn(x):
    """Exponent q with M_q = X at the pair parametrized by x."""
    return mpfr(_exponent_matching_x(x, Power))


def hstar_fn(x):
    """Exponent q with N_q (Heronian) = X at the pair parametrized by x."""
    return mpfr(_exponent_matching_x(x, Heronian))


# -- specs -----------------------------------------------------------------


@dataclass(frozen=True)
class MonotoneFunctionSpec:
    """A function claimed strictly monotone on an open interval.

    ``claimed_range`` holds the limits at (lo, hi); ``None`` means the limit is
    not a closed form and is not checked.  ``limit_offsets`` overrides the
    halving sequence at an endpoint for functions whose approach is not
    polynomial (the exponent functions behave like b**q as b -> 0).
    """

    id: str
    evaluator: Callable
    interval: tuple[float, float]
    claimed_direction: str
    claimed_range: tuple[float | None, float | None]
    variable: str = "x"
    limit_offsets: dict = field(default_factory=dict)

    def __post_init__(self):
        lo, hi = self.interval
        if not lo < hi:
            raise InvalidArgumentError(f"{self.id}: need lo < hi, got {self.interval}")
        if self.claimed_direction not in ("increasing", "decreasing"):
            raise InvalidArgumentError(f"{self.id}: bad direction {self.claimed_direction!r}")


_E = math.e
_LOG2 = math.log(2)
# far-endpoint offsets for the exponent functions: b ~ offset**2, error ~ b**q
_TINY_OFFSETS = {"hi": (1e-20, 1e-25, 1e-30)}


def _closed_forms() -> dict[str, float]:
    return {
        "alpha": 2 / 3,
        "beta": (_E - 1) / _E,
        "alpha1": 1.0,
        "beta1": math.pi * (_E - 1) / (2 * _E),
        "alpha2": 2.0,
        "beta2": math.log(math.pi / 2) / math.log(2 * _E / math.pi),
        "c": 2 * _E / (math.pi * (_E - 1)),
        "pi_over_2e": math.pi / (2 * _E),
        "p89": 1 / 3,
        "q89": _LOG2 / (1 + _LOG2),
        "heron_alpha": 0.5,
        "heron_beta": math.log(3) / (1 + _LOG2),
        "c1": _LOG2 / math.log(math.pi / 2),
    }


_Y_SPLIT = None


def _ratio14_argmin() -> float:
    global _Y_SPLIT
    if _Y_SPLIT is None:
        _Y_SPLIT = extremize(ratio14_fn, (0.0, 3.0), 1e-12).arg
    return _Y_SPLIT


def monotone_specs() -> list[MonotoneFunctionSpec]:
    """All monotone functions, including both halves of the Y/sqrt(GH) ratio.

    The ratio falls from 1 to its minimum a near y = 0.82 and then rises, so
    it is checked as two monotone pieces split at the computed minimizer.
    """
    cf = _closed_forms()
    ystar = _ratio14_argmin()
    return [
        MonotoneFunctionSpec("h", h_fn, (0.0, HALF_PI), "decreasing", (1.0, cf["beta2"])),
        MonotoneFunctionSpec("f", f_fn, (0.0, HALF_PI), "decreasing", (2 / 3, cf["beta"])),
        MonotoneFunctionSpec("f4", f4_fn, (0.0, HALF_PI), "increasing", (1.0, cf["c"])),
        MonotoneFunctionSpec("f5", f5_fn, (0.0, HALF_PI), "decreasing", (1.0, cf["pi_over_2e"])),
        MonotoneFunctionSpec("g", g_fn, (0.0, HALF_PI), "increasing", (2 / 3, 1.0)),
        MonotoneFunctionSpec(
            "ratio14-falling", ratio14_fn, (0.0, ystar), "decreasing", (1.0, None), variable="y"
        ),
        MonotoneFunctionSpec(
            "ratio14-rising", ratio14_fn, (ystar, 3.0), "increasing", (None, None), variable="y"
        ),
        MonotoneFunctionSpec("ratio26", ratio26_fn, (0.0, HALF_PI), "decreasing", (2 / 3, 1 / cf["c1"])),
        MonotoneFunctionSpec(
            "qstar", qstar_fn, (0.0, HALF_PI), "increasing", (1 / 3, cf["q89"]), limit_offsets=_TINY_OFFSETS
        ),
        MonotoneFunctionSpec(
            "hstar", hstar_fn, (0.0, HALF_PI), "increasing", (0.5, cf["heron_beta"]), limit_offsets=_TINY_OFFSETS
        ),
    ]


def get_spec(spec_id: str) -> MonotoneFunctionSpec:
    for spec in monotone_specs():
        if spec.id == spec_id:
            return spec
    raise InvalidArgumentError(f"unknown function {spec_id!r}")


# -- direction sampling ----------------------------------------------------


@dataclass
class DirectionReport:
    id: str
    n: int
    direction: str
    monotone: bool
    max_violation: float
    in_range: bool
    min_value: float
    max_value: float
    errors: list[dict] = field(default_factory=list)


def sample_direction(spec: MonotoneFunctionSpec, n: int = 1000) -> DirectionReport:
    """Sample ``n`` interior points and check strict monotonicity and range.

    The grid runs from lo + 1e-6 (hi - lo) to hi - 1e-6 (hi - lo).  A
    violation is a step against the claimed direction, or a tie.
    """
    if n < 3:
        raise InvalidArgumentError(f"need n >= 3, got {n}")
    lo, hi = spec.interval
    sign = 1 if spec.claimed_direction == "increasing" else -1
    errors: list[dict] = []
    values = []
    with working_precision():
        a, b = mpfr(lo), mpfr(hi)
        span = b - a
        start, stop = a + ENDPOINT_GUARD * span, b - ENDPOINT_GUARD * span
        for k in range(n):
            z = start + (stop - start) * k / (n - 1)
            try:
                v = spec.evaluator(z)
            except (ArithmeticError, ValueError) as exc:
                errors.append({"at": float(z), "message": str(exc)})
                continue
            if not gmpy2.is_finite(v):
                errors.append({"at": float(z), "message": "non-finite value"})
                continue
            values.append(v)
        worst = mpfr(0)
        strict = True
        for prev, cur in zip(values, values[1:]):
            step = sign * (cur - prev)
            if step <= 0:
                strict = False
                worst = max(worst, -step)
        lo_lim, hi_lim = spec.claimed_range
        bounds = [v for v in (lo_lim, hi_lim) if v is not None]
        in_range = True
        if values and bounds:
            vmin, vmax = min(values), max(values)
            if lo_lim is not None and hi_lim is not None:
                floor, ceil = min(lo_lim, hi_lim), max(lo_lim, hi_lim)
                in_range = vmin > floor and vmax < ceil
            elif lo_lim is not None:
                # only the limit at lo is known: values move away from it
                in_range = (vmin > lo_lim) if sign > 0 else (vmax < lo_lim)
            else:
                in_range = (vmax < hi_lim) if sign > 0 else (vmin > hi_lim)
    return DirectionReport(
        id=spec.id,
        n=n,
        direction=spec.claimed_direction,
        monotone=strict and not errors,
        max_violation=float(worst),
        in_range=in_range,
        min_value=float(min(values)) if values else math.nan,
        max_value=float(max(values)) if values else math.nan,
        errors=errors,
    )


# -- endpoint limits -------------------------------------------------------


def _neville_at_zero(xs, ys):
    """Value at 0 of the interpolating polynomial through (xs, ys)."""
    table = list(ys)
    n = len(xs)
    for j in range(1, n):
        for i in range(n - j):
            table[i] = (xs[i] * table[i + 1] - xs[i + j] * table[i]) / (xs[i] - xs[i + j])
    return table[0]


def endpoint_limit(
    spec: MonotoneFunctionSpec,
    which: str,
    order: int = EXTRAPOLATION_ORDER,
    eps: float = EXTRAPOLATION_EPS,
    tol: float = 1e-7,
) -> float:
    """Limit of the function at an endpoint by polynomial extrapolation.

    Evaluates at offsets eps, eps/2, ..., eps/2**order from the endpoint and
    extrapolates to offset 0.  An explicit ``limit_offsets`` entry on ``spec``
    replaces this with plain evaluation at tiny offsets.

    Raises:
        NumericFailure: the order-``order`` and order-``order - 1`` estimates
            (or the tiny-offset values) differ by more than ``tol``.
    """
    if which not in ("lo", "hi"):
        raise InvalidArgumentError(f"which must be 'lo' or 'hi', got {which!r}")
    with working_precision():
        end = mpfr(spec.interval[0] if which == "lo" else spec.interval[1])
        if which == "hi" and spec.interval[1] == HALF_PI:
            end = gmpy2.const_pi() / 2
        direction = 1 if which == "lo" else -1

        if which in spec.limit_offsets:
            vals = [spec.evaluator(end + direction * mpfr(o)) for o in spec.limit_offsets[which]]
            spread = max(abs(v - vals[-1]) for v in vals)
            if not gmpy2.is_finite(vals[-1]) or spread > tol:
                raise NumericFailure(f"{spec.id}: {which} limit not converged (spread {float(spread):.3g})")
            return float(vals[-1])

        offsets = [mpfr(eps) / 2**k for k in range(order + 1)]
        try:
            vals = [spec.evaluator(end + direction * o) for o in offsets]
        except (ArithmeticError, ValueError) as exc:
            raise NumericFailure(f"{spec.id}: evaluation near {which} failed: {exc}") from exc
        if not all(gmpy2.is_finite(v) for v in vals):
            raise NumericFailure(f"{spec.id}: non-finite value near {which}")
        best = _neville_at_zero(offsets, vals)
        coarse = _neville_at_zero(offsets[:-1], vals[:-1])
        if abs(best - coarse) > tol:
            raise NumericFailure(
                f"{spec.id}: extrapolation at {which} not converging "
                f"({float(coarse):.12g} vs {float(best):.12g})"
            )
        return float(best)


# -- extremization ---------------------------------------------------------


@dataclass(frozen=True)
class Extremum:
    arg: float
    value: float
    unimodal: bool = True

    def __iter__(self):
        return iter((self.arg, self.value))


PRESCAN = 64
_INVPHI = (math.sqrt(5) - 1) / 2


def extremize(fn: Callable, interval: tuple[float, float], tol: float, maximize: bool = False) -> Extremum:
    """Golden-section minimum (or maximum) of ``fn`` on an open interval.

    A 64-point pre-scan locates the bracket and checks unimodality.  If the
    scan is not unimodal a warning is issued and the best scanned point is
    returned as is.

    Raises:
        InvalidArgumentError: ``tol`` is not positive or the interval is empty.
        NumericFailure: the scan's best point sits on the edge of the
            interval with no interior bracket, or ``fn`` is never finite.
    """
    lo, hi = interval
    if not tol > 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    if not lo < hi:
        raise InvalidArgumentError(f"need lo < hi, got {interval}")
    sign = -1 if maximize else 1
    with working_precision():
        a, b = mpfr(lo), mpfr(hi)

        def obj(z):
            v = mpfr(fn(z))
            return sign * v if gmpy2.is_finite(v) else mpfr("inf")

        grid = [a + (b - a) * (k + 1) / (PRESCAN + 1) for k in range(PRESCAN)]
        vals = [obj(z) for z in grid]
        if not any(gmpy2.is_finite(v) for v in vals):
            raise NumericFailure("objective is not finite anywhere on the scan")
        best = min(range(PRESCAN), key=lambda k: vals[k])
        if all(v == vals[0] for v in vals):
            return Extremum(float(grid[best]), float(sign * vals[best]))
        if best in (0, PRESCAN - 1):
            raise NumericFailure("no interior bracket: the extremum is at the edge of the interval")

        unimodal = all(vals[k] >= vals[k + 1] for k in range(best)) and all(
            vals[k] <= vals[k + 1] for k in range(best, PRESCAN - 1)
        )
        if not unimodal:
            warnings.warn("objective is not unimodal on the pre-scan; returning the scan optimum", RuntimeWarning)
            return Extremum(float(grid[best]), float(sign * vals[best]), unimodal=False)

        left, right = grid[best - 1], grid[best + 1]
        c = right - _INVPHI * (right - left)
        d = left + _INVPHI * (right - left)
        fc, fd = obj(c), obj(d)
        while right - left > tol:
            if fc <= fd:
                right, d, fd = d, c, fc
                c = right - _INVPHI * (right - left)
                fc = obj(c)
            else:
                left, c, fc = c, d, fd
                d = left + _INVPHI * (right - left)
                fd = obj(d)
        arg = (left + right) / 2
        return Extremum(float(arg), float(sign * obj(arg)))


# -- constants table -------------------------------------------------------


@dataclass
class ConstantEstimate:
    """One sharp constant.

    ``abs_error`` is |estimate - closed_form|, or None when no closed form is
    known (then ``published`` is the only reference).
    """

    id: str
    estimate: float | None
    closed_form: float | None
    abs_error: float | None
    method: str
    published: float | None = None
    status: str = "ok"
    message: str = ""


# id -> (function id, endpoint or "min", transform, published approximation)
_RECIPES: dict[str, tuple] = {
    "alpha": ("f", "lo", None, None),
    "beta": ("f", "hi", None, None),
    "alpha1": ("f4", "lo", "reciprocal", None),
    "beta1": ("f4", "hi", "reciprocal", 0.9929),
    "alpha2": ("h", "lo", "one-plus-reciprocal", None),
    "beta2": ("h", "hi", None, 0.8234),
    "c": ("f4", "hi", None, 1.0071),
    "pi_over_2e": ("f5", "hi", None, 0.5779),
    "a": ("ratio14", "min", None, 0.9756),
    "p89": ("qstar", "lo", None, None),
    "q89": ("qstar", "hi", None, 0.4093),
    "heron_alpha": ("hstar", "lo", None, None),
    "heron_beta": ("hstar", "hi", None, 0.6488),
    "c1": ("ratio26", "hi", "reciprocal", None),
}

CONSTANT_IDS = tuple(_RECIPES)


def _spec_without_split(spec_id: str) -> MonotoneFunctionSpec:
    cf = _closed_forms()
    simple = {
        "h": ("decreasing", (1.0, cf["beta2"]), h_fn),
        "f": ("decreasing", (2 / 3, cf["beta"]), f_fn),
        "f4": ("increasing", (1.0, cf["c"]), f4_fn),
        "f5": ("decreasing", (1.0, cf["pi_over_2e"]), f5_fn),
        "ratio26": ("decreasing", (2 / 3, 1 / cf["c1"]), ratio26_fn),
    }
    if spec_id in simple:
        d, rng, fn = simple[spec_id]
        return MonotoneFunctionSpec(spec_id, fn, (0.0, HALF_PI), d, rng)
    fn, rng = (qstar_fn, (1 / 3, cf["q89"])) if spec_id == "qstar" else (hstar_fn, (0.5, cf["heron_beta"]))
    return MonotoneFunctionSpec(spec_id, fn, (0.0, HALF_PI), "increasing", rng, limit_offsets=_TINY_OFFSETS)


def estimate_constant(cid: str) -> ConstantEstimate:
    """Estimate one constant; numeric failures become a failed row."""
    if cid not in _RECIPES:
        raise InvalidArgumentError(f"unknown constant {cid!r}; known: {', '.join(CONSTANT_IDS)}")
    fid, where, transform, published = _RECIPES[cid]
    closed = _closed_forms().get(cid)
    method = "golden-section" if where == "min" else "endpoint-extrapolation"
    try:
        if where == "min":
            est = extremize(ratio14_fn, (0.0, 3.0), 1e-12).value
        else:
            est = endpoint_limit(_spec_without_split(fid), where)
    except (NumericFailure, DomainError) as exc:
        return ConstantEstimate(cid, None, closed, None, method, published, "failed", str(exc))
    if transform == "reciprocal":
        est = 1 / est
    elif transform == "one-plus-reciprocal":
        est = 1 + 1 / est
    err = abs(est - closed) if closed is not None else None
    return ConstantEstimate(cid, est, closed, err, method, published)


def estimate_all_constants(only: list[str] | None = None) -> list[ConstantEstimate]:
    """The constants table, ordered by id."""
    ids = sorted(only) if only else sorted(CONSTANT_IDS)
    return [estimate_constant(cid) for cid in ids]
