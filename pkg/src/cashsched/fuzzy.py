"""Normalized interval-valued triangular fuzzy (NIVTF) numbers.

A NIVTF number is a pair of triangular fuzzy numbers sharing their modal
point: a narrow *lower* triangle nested inside a wider *upper* triangle,
both with height 1. Only the expected-interval statistics of each triangle
are ever needed by the scheduling model, so no fuzzy arithmetic lives here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

__all__ = [
    "FuzzyError",
    "Triangle",
    "NivtfNumber",
    "MixClass",
    "make_nivtf",
    "crisp",
    "expected_interval",
    "expected_value",
    "mix_coeff",
]


class FuzzyError(ValueError):
    """Raised when a fuzzy number violates its ordering rules."""


@dataclass(frozen=True)
class Triangle:
    """Triangular fuzzy number ``(lo, mid, hi)`` with ``lo <= mid <= hi``."""

    lo: float
    mid: float
    hi: float

    def __post_init__(self) -> None:
        if not (self.lo <= self.mid <= self.hi):
            raise FuzzyError(
                f"triangle ordering lo <= mid <= hi violated: ({self.lo}, {self.mid}, {self.hi})"
            )

    @property
    def is_crisp(self) -> bool:
        return self.lo == self.mid == self.hi

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.lo, self.mid, self.hi)


@dataclass(frozen=True)
class NivtfNumber:
    """Lower triangle nested in the upper one, sharing the modal point.

    Use :func:`make_nivtf` or :func:`crisp` to build validated instances.
    """

    lower: Triangle
    upper: Triangle

    def __post_init__(self) -> None:
        lo, up = self.lower, self.upper
        checks = (
            (up.lo <= lo.lo, "upper.lo <= lower.lo"),
            (lo.mid == up.mid, "lower.mid == upper.mid"),
            (lo.hi <= up.hi, "lower.hi <= upper.hi"),
        )
        for ok, rule in checks:
            if not ok:
                raise FuzzyError(
                    f"NIVTF ordering violated ({rule}): lower={lo.as_tuple()}, upper={up.as_tuple()}"
                )

    @property
    def is_crisp(self) -> bool:
        return self.lower.is_crisp and self.upper.is_crisp

    @property
    def is_triangular(self) -> bool:
        """True when lower and upper coincide (a plain triangular fuzzy number)."""
        return self.lower == self.upper

    @property
    def modal(self) -> float:
        return self.lower.mid

    def triangle(self, which: str) -> Triangle:
        if which == "L":
            return self.lower
        if which == "U":
            return self.upper
        raise ValueError(f"unknown triangle selector {which!r}")

    def scaled(self, factor: float) -> "NivtfNumber":
        if factor < 0:
            raise ValueError("scale factor must be non-negative")
        return NivtfNumber(
            Triangle(*(factor * v for v in self.lower.as_tuple())),
            Triangle(*(factor * v for v in self.upper.as_tuple())),
        )


class MixClass(enum.Enum):
    """Coefficient mixes used by the reformulated fuzzy constraints."""

    GEQ_FULL = "geq_full"
    LEQ_FULL = "leq_full"
    GEQ_HALF = "geq_half"
    LEQ_HALF = "leq_half"


def make_nivtf(lower: Triangle | tuple, upper: Triangle | tuple) -> NivtfNumber:
    """Build a validated NIVTF number from two triangles (or 3-tuples).

    Raises
    ------
    FuzzyError
        If a triangle is malformed or the upper triangle does not contain the
        lower one around a common modal point.
    """
    if not isinstance(lower, Triangle):
        lower = Triangle(*lower)
    if not isinstance(upper, Triangle):
        upper = Triangle(*upper)
    return NivtfNumber(lower, upper)


def crisp(value: float) -> NivtfNumber:
    """Crisp value as a degenerate NIVTF (all six abscissae equal)."""
    t = Triangle(value, value, value)
    return NivtfNumber(t, t)


def expected_interval(t: Triangle) -> tuple[float, float]:
    """Expected interval ``(E1, E2)`` of a triangular fuzzy number."""
    return ((t.lo + t.mid) / 2.0, (t.mid + t.hi) / 2.0)


def expected_value(t: Triangle) -> float:
    return (t.lo + 2.0 * t.mid + t.hi) / 4.0


def mix_coeff(t: Triangle, alpha: float, cls: MixClass) -> float:
    """Alpha-parametric crisp coefficient for one constraint class.

    ``GEQ_FULL`` gives ``a*E2 + (1-a)*E1``, ``LEQ_FULL`` gives
    ``(1-a)*E2 + a*E1``, and the ``*_HALF`` classes use ``a/2`` in place of
    ``a``. The result always lies in ``[E1, E2]``.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    e1, e2 = expected_interval(t)
    if cls is MixClass.GEQ_FULL:
        w2 = alpha
    elif cls is MixClass.LEQ_FULL:
        w2 = 1.0 - alpha
    elif cls is MixClass.GEQ_HALF:
        w2 = alpha / 2.0
    elif cls is MixClass.LEQ_HALF:
        w2 = 1.0 - alpha / 2.0
    else:  # pragma: no cover - enum is closed
        raise ValueError(cls)
    if e1 == e2:
        return e1
    value = w2 * e2 + (1.0 - w2) * e1
    # guard the [E1, E2] envelope against rounding at the end points
    return min(max(value, e1), e2)
