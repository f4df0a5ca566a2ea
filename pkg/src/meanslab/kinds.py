"""Value types shared by the evaluators: argument pairs, mean kinds, results."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidArgumentError


class MeanTag(enum.Enum):
    Arithmetic = "A"
    Geometric = "G"
    Harmonic = "H"
    Logarithmic = "L"
    Identric = "I"
    Seiffert = "P"
    SandorX = "X"
    SandorY = "Y"
    Power = "M"
    Heronian = "N"


_LETTER = {tag.value: tag for tag in MeanTag}


@dataclass(frozen=True)
class MeanKind:
    """One of the ten means; ``p`` is used only by Power and Heronian."""

    tag: MeanTag
    p: float | None = None

    def __post_init__(self):
        parametric = self.tag in (MeanTag.Power, MeanTag.Heronian)
        if parametric and (self.p is None or not math.isfinite(self.p)):
            raise InvalidArgumentError(f"{self.tag.name} mean needs a finite p, got {self.p!r}")
        if not parametric and self.p is not None:
            raise InvalidArgumentError(f"{self.tag.name} mean takes no parameter")

    @classmethod
    def from_letter(cls, letter: str, p: float | None = None) -> "MeanKind":
        try:
            tag = _LETTER[letter]
        except KeyError:
            raise InvalidArgumentError(f"unknown mean {letter!r}") from None
        return cls(tag, None if p is None else float(p))

    @property
    def letter(self) -> str:
        return self.tag.value

    def __str__(self) -> str:
        if self.p is None:
            return self.letter
        return f"{self.letter}[{self.p!r}]"


A = MeanKind(MeanTag.Arithmetic)
G = MeanKind(MeanTag.Geometric)
H = MeanKind(MeanTag.Harmonic)
L = MeanKind(MeanTag.Logarithmic)
I = MeanKind(MeanTag.Identric)  # noqa: E741
P = MeanKind(MeanTag.Seiffert)
X = MeanKind(MeanTag.SandorX)
Y = MeanKind(MeanTag.SandorY)


def Power(p: float) -> MeanKind:
    return MeanKind(MeanTag.Power, float(p))


def Heronian(p: float) -> MeanKind:
    return MeanKind(MeanTag.Heronian, float(p))


@dataclass(frozen=True)
class PositivePair:
    a: float
    b: float

    def __post_init__(self):
        for name in ("a", "b"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise InvalidArgumentError(f"{name} must be a real number, got {v!r}")
            if not math.isfinite(v) or v <= 0:
                raise InvalidArgumentError(f"{name} must be finite and > 0, got {v!r}")
            object.__setattr__(self, name, float(v))

    @property
    def hi(self) -> float:
        return max(self.a, self.b)

    @property
    def lo(self) -> float:
        return min(self.a, self.b)

    @property
    def t(self) -> float:
        """|a - b| / (a + b), in [0, 1)."""
        hi, lo = self.hi, self.lo
        return ((hi - lo) * 0.5) / (hi * 0.5 + lo * 0.5)

    def scaled(self, lam: float) -> "PositivePair":
        return PositivePair(self.a * lam, self.b * lam)


@dataclass(frozen=True)
class MeanValue:
    value: float
    method: str = "direct"  # "direct" or "series-fallback"

    def __float__(self) -> float:
        return self.value
