"""Bernoulli numbers and the cot/coth/cosec/cosech power series.

All six kernels share the coefficient ``c_n = 2**(2n) |B_2n| / (2n)!``::

    x cot x    = 1    - sum c_n x**(2n)
    cot x      = 1/x  - sum c_n x**(2n-1)
    coth x     = 1/x  + sum (-1)**(n+1) c_n x**(2n-1)
    1/sin(x)^2 = 1/x^2 + sum (2n-1) c_n x**(2n-2)
    1/sinh(x)^2= 1/x^2 + sum (-1)**n (2n-1) c_n x**(2n-2)
    x / sin x  = 1    + sum (1 - 2**(1-2n)) c_n x**(2n)

``series_coefficient`` returns the (positive) magnitude of each coefficient;
the hyperbolic kernels alternate in sign.  All series converge for |x| < pi.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError

__all__ = [
    "N_MAX",
    "BernoulliTable",
    "KernelKind",
    "KernelResult",
    "bernoulli_abs",
    "bernoulli_table",
    "kernel_eval",
    "direct_eval",
    "series_coefficient",
]

N_MAX = 100


class KernelKind(enum.Enum):
    XCotX = "XCotX"
    Cot = "Cot"
    Coth = "Coth"
    InvSinSq = "InvSinSq"
    InvSinhSq = "InvSinhSq"
    XOverSinX = "XOverSinX"


@dataclass(frozen=True)
class BernoulliTable:
    """``entries[n - 1] == |B_2n|`` for n = 1..N_MAX."""

    entries: tuple[Fraction, ...]

    @property
    def floats(self) -> tuple[float, ...]:
        return tuple(float(b) for b in self.entries)

    def __getitem__(self, n: int) -> Fraction:
        # 1-based, matching the usual B_2n indexing
        if not 1 <= n <= len(self.entries):
            raise IndexError(f"n={n} outside 1..{len(self.entries)}")
        return self.entries[n - 1]

    def __len__(self) -> int:
        return len(self.entries)


@lru_cache(maxsize=1)
def bernoulli_table() -> BernoulliTable:
    """Exact |B_2n| from the recurrence sum_{k<=m} C(m+1, k) B_k = 0.

    Only even indices are kept; B_1 = -1/2 enters every equation and all other
    odd Bernoulli numbers vanish.
    """
    even = [Fraction(1)]  # B_0
    for m in range(1, N_MAX + 1):
        n = 2 * m
        s = Fraction(-(n + 1), 2)  # C(n+1, 1) * B_1
        for j in range(m):
            s += math.comb(n + 1, 2 * j) * even[j]
        even.append(-s / (n + 1))
    return BernoulliTable(tuple(abs(b) for b in even[1:]))


def bernoulli_abs(n: int) -> Fraction:
    """Return |B_2n| exactly, 1 <= n <= N_MAX."""
    if not isinstance(n, int) or not 1 <= n <= N_MAX:
        raise IndexError(f"Bernoulli index n={n!r} outside 1..{N_MAX}")
    return bernoulli_table()[n]


@lru_cache(maxsize=None)
def _coefficient_exact(kind: KernelKind, n: int) -> Fraction:
    c = Fraction(2 ** (2 * n), math.factorial(2 * n)) * bernoulli_abs(n)
    if kind in (KernelKind.InvSinSq, KernelKind.InvSinhSq):
        return (2 * n - 1) * c
    if kind is KernelKind.XOverSinX:
        return Fraction(2 ** (2 * n) - 2, math.factorial(2 * n)) * bernoulli_abs(n)
    return c


def series_coefficient(kind: KernelKind, n: int) -> float:
    """Magnitude of the n-th series coefficient of ``kind`` (always > 0)."""
    if not isinstance(n, int) or not 1 <= n <= N_MAX:
        raise IndexError(f"coefficient index n={n!r} outside 1..{N_MAX}")
    return float(_coefficient_exact(KernelKind(kind), n))


def _sign(kind: KernelKind, n: int) -> int:
    if kind in (KernelKind.XCotX, KernelKind.Cot):
        return -1
    if kind is KernelKind.Coth:
        return 1 if n % 2 else -1
    if kind is KernelKind.InvSinhSq:
        return -1 if n % 2 else 1
    return 1


def _power(kind: KernelKind, n: int) -> int:
    if kind in (KernelKind.XCotX, KernelKind.XOverSinX):
        return 2 * n
    if kind in (KernelKind.Cot, KernelKind.Coth):
        return 2 * n - 1
    return 2 * n - 2


def _multiplier_ratio(kind: KernelKind, n: int) -> float:
    """m(n+1)/m(n) for the factor multiplying 2 zeta(2n) / pi**(2n)."""
    if kind in (KernelKind.InvSinSq, KernelKind.InvSinhSq):
        return (2 * n + 1) / (2 * n - 1)
    if kind is KernelKind.XOverSinX:
        return (1 - 2.0 ** (-1 - 2 * n)) / (1 - 2.0 ** (1 - 2 * n))
    return 1.0


def _leading(kind: KernelKind, x: float) -> float:
    if kind in (KernelKind.XCotX, KernelKind.XOverSinX):
        return 1.0
    if kind in (KernelKind.Cot, KernelKind.Coth):
        return 1.0 / x
    return 1.0 / (x * x)


@dataclass(frozen=True)
class KernelResult:
    value: float
    terms_used: int
    truncation_bound: float
    series: float  # the summed part only, so value == leading term + series


def kernel_eval(kind: KernelKind, x: float, terms: int | None = None) -> KernelResult:
    """Partial sum of a kernel's expansion together with a tail bound.

    With ``terms=None`` terms are added until they stop changing the result
    in double precision.

    The tail bound uses ``c_n = 2 zeta(2n) / pi**(2n)``: successive term
    ratios never exceed ``(x/pi)**2 * m(n+1)/m(n)``, and the multiplier
    ratio is decreasing in n, so a geometric series dominates the tail.
    The ratio of the last two computed terms is also taken into account.
    The bound also covers the rounding error of the floating-point sum.

    Raises:
        DomainError: |x| >= pi, or x == 0 for a kernel with a pole there.
        IndexError: terms outside 1..N_MAX.
    """
    kind = KernelKind(kind)
    x = float(x)
    if not math.isfinite(x) or abs(x) >= math.pi:
        raise DomainError(f"{kind.value}: series needs |x| < pi, got {x}")
    if x == 0.0:
        if kind in (KernelKind.XCotX, KernelKind.XOverSinX):
            return KernelResult(1.0, 0, 0.0, 0.0)
        raise DomainError(f"{kind.value} has a pole at x = 0")
    if terms is not None and not 1 <= terms <= N_MAX:
        raise IndexError(f"terms={terms} outside 1..{N_MAX}")

    leading = _leading(kind, x)
    limit = N_MAX if terms is None else terms
    total = 0.0
    abs_total = abs(leading)
    prev = last = 0.0
    used = 0
    for n in range(1, limit + 1):
        term = _sign(kind, n) * float(_coefficient_exact(kind, n)) * x ** _power(kind, n)
        prev, last = last, term
        total += term
        abs_total += abs(term)
        used = n
        if terms is None and abs(term) <= 0.5 * math.ulp(leading + total):
            break

    r = (x / math.pi) ** 2 * _multiplier_ratio(kind, used + 1)
    step = (x / math.pi) ** 2 * _multiplier_ratio(kind, used)
    if used >= 2 and prev != 0.0:
        observed = abs(last / prev)
        r = max(r, observed)
        step = max(step, observed)
    if r >= 1.0:
        raise DomainError(f"{kind.value}: tail ratio {r:.3g} >= 1 at x={x}")
    # tail plus a summation rounding allowance, gamma_{n+1} * sum |terms|
    rounding = (used + 2) * 2.0 ** -53 * abs_total
    bound = abs(last) * step / (1.0 - r) + rounding
    return KernelResult(leading + total, used, bound, total)


def direct_eval(kind: KernelKind, x: float) -> float:
    """The same functions via libm, used as the cross-check route."""
    kind = KernelKind(kind)
    if kind is KernelKind.XCotX:
        return x / math.tan(x) if x else 1.0
    if kind is KernelKind.Cot:
        return 1.0 / math.tan(x)
    if kind is KernelKind.Coth:
        return 1.0 / math.tanh(x)
    if kind is KernelKind.InvSinSq:
        return 1.0 / math.sin(x) ** 2
    if kind is KernelKind.InvSinhSq:
        return 1.0 / math.sinh(x) ** 2
    return x / math.sin(x) if x else 1.0
