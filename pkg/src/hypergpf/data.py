"""The data sextuple (p, q, r; a, b; x) and its region tags."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exact import AlgebraicReal, as_rational

XValue = Union[Fraction, AlgebraicReal, None]

HALF = Fraction(1, 2)


def _x_in_unit(x: XValue) -> bool:
    if x is None:
        return True
    if isinstance(x, AlgebraicReal):
        return 0 <= x.lo and x.hi <= 1 and not (x.is_rational() and x.lo in (0, 1))
    return 0 < x < 1


@dataclass(frozen=True)
class HyperData:
    """Principal part (p, q, r), parameters a, b and argument x.

    ``x = None`` means x is kept as a free symbol.
    """

    p: int
    q: int
    r: int
    a: Fraction
    b: Fraction
    x: XValue = None

    def __post_init__(self):
        for name in ("p", "q", "r"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} must be an integer")
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        if self.x is not None and not isinstance(self.x, AlgebraicReal):
            object.__setattr__(self, "x", as_rational(self.x))

    @classmethod
    def south(cls, p: int, r: int, a, x: XValue = None) -> "HyperData":
        """(p, 0, r; a, 1/2; x)."""
        return cls(p, 0, r, as_rational(a), HALF, x)

    @property
    def region(self) -> str | None:
        """'I' (0 < p < r, q = 0), 'J' (p < 0 < r, q = 0) or None."""
        if self.q != 0 or not _x_in_unit(self.x):
            return None
        if 0 < self.p < self.r:
            return "I"
        if self.p < 0 < self.r:
            return "J"
        return None

    @property
    def s(self) -> Fraction:
        return Fraction(self.r, self.p)

    def is_integral(self) -> bool:
        """p, r integers of the same parity with b = 1/2."""
        return (self.p - self.r) % 2 == 0 and self.b == HALF

    def with_x(self, x: XValue) -> "HyperData":
        return HyperData(self.p, self.q, self.r, self.a, self.b, x)

    def x_float(self) -> float | None:
        if self.x is None:
            return None
        return float(self.x)

    def label(self) -> str:
        xs = "x" if self.x is None else (str(self.x) if not isinstance(self.x, AlgebraicReal) or self.x.is_rational()
                                          else f"{float(self.x):.6f}")
        return f"({self.p},{self.q},{self.r};{self.a},{self.b};{xs})"
