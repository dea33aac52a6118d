"""Bivariate polynomials and rational functions in (w, x) over Q.

Numerators are dense in both variables. Denominators are kept factored as
products of monic affine factors ``w + c`` and the two x-factors ``x`` and
``x - 1``; those are the only denominators the contiguous matrices and the
truncated products ever produce, so exact cancellation reduces to trial
division by known linear factors.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exact import UniPoly, as_rational


class DegenerateFactor(ZeroDivisionError):
    """A denominator factor vanishes identically."""


@dataclass(frozen=True)
class Lin:
    """The affine expression ``slope * w + const``."""

    slope: Fraction
    const: Fraction

    def __init__(self, slope=0, const=0):
        object.__setattr__(self, "slope", as_rational(slope))
        object.__setattr__(self, "const", as_rational(const))

    @classmethod
    def of(cls, value) -> "Lin":
        if isinstance(value, Lin):
            return value
        return cls(0, value)

    def __add__(self, other) -> "Lin":
        other = Lin.of(other)
        return Lin(self.slope + other.slope, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> "Lin":
        return Lin(-self.slope, -self.const)

    def __sub__(self, other) -> "Lin":
        return self + (-Lin.of(other))

    def __rsub__(self, other) -> "Lin":
        return Lin.of(other) - self

    def __mul__(self, k) -> "Lin":
        k = as_rational(k)
        return Lin(self.slope * k, self.const * k)

    __rmul__ = __mul__

    def is_constant(self) -> bool:
        return self.slope == 0

    def at(self, w):
        return self.slope * w + self.const

    def shift(self, dw) -> "Lin":
        """The expression with w replaced by w + dw."""
        return Lin(self.slope, self.const + self.slope * as_rational(dw))

    def __str__(self) -> str:
        if self.slope == 0:
            return str(self.const)
        head = "w" if self.slope == 1 else f"{self.slope}*w"
        if self.const == 0:
            return head
        sign = "+" if self.const > 0 else "-"
        return f"{head} {sign} {abs(self.const)}"


W = Lin(1, 0)

_X = UniPoly((0, 1))
_X1 = UniPoly((-1, 1))


class WxPoly:
    """Polynomial in w with UniPoly-in-x coefficients, lowest w-degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[UniPoly] = ()):
        c = [q if isinstance(q, UniPoly) else UniPoly.constant(q) for q in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def const(cls, value) -> "WxPoly":
        return cls((UniPoly.constant(value),))

    @classmethod
    def from_x(cls, poly: UniPoly) -> "WxPoly":
        return cls((poly,))

    @classmethod
    def from_lin(cls, lin: Lin) -> "WxPoly":
        return cls((UniPoly.constant(lin.const), UniPoly.constant(lin.slope)))

    @classmethod
    def x(cls) -> "WxPoly":
        return cls((_X,))

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def deg_w(self) -> int:
        return len(self.coeffs) - 1

    @property
    def deg_x(self) -> int:
        return max((c.degree for c in self.coeffs), default=-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WxPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return "WxPoly(" + ", ".join(f"w^{k}: [{c}]" for k, c in enumerate(self.coeffs) if c) + ")"

    def __neg__(self) -> "WxPoly":
        return WxPoly(-c for c in self.coeffs)

    def __add__(self, other: "WxPoly") -> "WxPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return WxPoly(out)

    def __sub__(self, other: "WxPoly") -> "WxPoly":
        return self + (-other)

    def __mul__(self, other) -> "WxPoly":
        if isinstance(other, UniPoly):
            return WxPoly(c * other for c in self.coeffs)
        if not isinstance(other, WxPoly):
            return WxPoly(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return WxPoly()
        out = [UniPoly()] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca.is_zero():
                continue
            for j, cb in enumerate(b):
                if not cb.is_zero():
                    out[i + j] = out[i + j] + ca * cb
        return WxPoly(out)

    __rmul__ = __mul__

    def at_w(self, w) -> UniPoly:
        """Substitute a rational w; the result is a polynomial in x."""
        w = as_rational(w)
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * w + c
        return acc

    def at_x(self, x) -> UniPoly:
        """Substitute a rational x; the result is a polynomial in w."""
        return UniPoly(c(as_rational(x)) for c in self.coeffs)

    def __call__(self, w, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * w + c(x)
        return acc

    def eval_mp(self, w, x, ctx):
        acc = ctx.zero
        for c in reversed(self.coeffs):
            acc = acc * w + c.eval_mp(x, ctx)
        return acc

    def x_coefficient_polys(self) -> tuple[UniPoly, ...]:
        return self.coeffs

    # exact division by the known linear factors ------------------------------
    def try_div_w(self, c: Fraction) -> "WxPoly | None":
        """Quotient by (w + c) when exact, else None."""
        if not self.coeffs:
            return self
        n = len(self.coeffs)
        quo = [UniPoly()] * (n - 1)
        acc = UniPoly()
        for k in range(n - 1, 0, -1):
            acc = self.coeffs[k] + acc * (-c)
            quo[k - 1] = acc
        rem = self.coeffs[0] + acc * (-c)
        if not rem.is_zero():
            return None
        return WxPoly(quo)

    def try_div_x(self) -> "WxPoly | None":
        out = []
        for c in self.coeffs:
            if c.coeffs and c.coeffs[0] != 0:
                return None
            out.append(UniPoly(c.coeffs[1:]))
        return WxPoly(out)

    def try_div_x1(self) -> "WxPoly | None":
        out = []
        for c in self.coeffs:
            q, rem = divmod(c, _X1)
            if not rem.is_zero():
                return None
            out.append(q)
        return WxPoly(out)


# denominator keys: ("w", c) for (w + c), ("x", 0) for x, ("x", 1) for (x - 1)
XKEY = ("x", 0)
X1KEY = ("x", 1)


def _factor_poly(key) -> WxPoly:
    if key[0] == "w":
        return WxPoly((UniPoly.constant(key[1]), UniPoly.constant(1)))
    return WxPoly((_X if key[1] == 0 else _X1,))


class WxRatFunc:
    """numerator / product of known linear factors, kept reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: WxPoly, den: Mapping | None = None, reduce: bool = True):
        self.num = num
        d = Counter({k: e for k, e in (den or {}).items() if e > 0})
        self.den = d
        if reduce:
            self._reduce()

    @classmethod
    def const(cls, value) -> "WxRatFunc":
        return cls(WxPoly.const(value), None, reduce=False)

    @classmethod
    def zero(cls) -> "WxRatFunc":
        return cls(WxPoly(), None, reduce=False)

    @classmethod
    def one(cls) -> "WxRatFunc":
        return cls.const(1)

    @classmethod
    def x(cls) -> "WxRatFunc":
        return cls(WxPoly.x(), None, reduce=False)

    @classmethod
    def of(cls, value) -> "WxRatFunc":
        if isinstance(value, WxRatFunc):
            return value
        if isinstance(value, WxPoly):
            return cls(value, None, reduce=False)
        if isinstance(value, Lin):
            return cls(WxPoly.from_lin(value), None, reduce=False)
        if isinstance(value, UniPoly):
            return cls(WxPoly.from_x(value), None, reduce=False)
        return cls.const(value)

    @classmethod
    def inverse_lin(cls, lin: Lin) -> "WxRatFunc":
        if lin.slope == 0:
            if lin.const == 0:
                raise DegenerateFactor("affine factor vanishes identically")
            return cls.const(1 / lin.const)
        return cls(WxPoly.const(1 / lin.slope), {("w", lin.const / lin.slope): 1}, reduce=False)

    @classmethod
    def inverse_x(cls, power: int = 1) -> "WxRatFunc":
        return cls(WxPoly.const(1), {XKEY: power}, reduce=False)

    @classmethod
    def inverse_x1(cls, power: int = 1) -> "WxRatFunc":
        return cls(WxPoly.const(1), {X1KEY: power}, reduce=False)

    def _reduce(self) -> None:
        if self.num.is_zero():
            self.den = Counter()
            return
        for key in list(self.den):
            while self.den[key] > 0:
                if key[0] == "w":
                    q = self.num.try_div_w(key[1])
                elif key[1] == 0:
                    q = self.num.try_div_x()
                else:
                    q = self.num.try_div_x1()
                if q is None:
                    break
                self.num = q
                self.den[key] -= 1
            if self.den[key] == 0:
                del self.den[key]

    # queries -------------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def w_denominator(self) -> dict:
        return {k: e for k, e in self.den.items() if k[0] == "w"}

    def x_denominator(self) -> tuple[int, int]:
        """Exponents of x and (x - 1) in the denominator."""
        return self.den.get(XKEY, 0), self.den.get(X1KEY, 0)

    def is_w_polynomial(self) -> bool:
        return not self.w_denominator()

    def den_poly(self) -> WxPoly:
        out = WxPoly.const(1)
        for key, e in self.den.items():
            f = _factor_poly(key)
            for _ in range(e):
                out = out * f
        return out

    def __repr__(self) -> str:
        den = " * ".join(
            (f"(w + {k[1]})" if k[0] == "w" else ("x" if k[1] == 0 else "(x - 1)")) + (f"^{e}" if e > 1 else "")
            for k, e in sorted(self.den.items(), key=lambda t: (t[0][0], t[0][1]))
        )
        return f"[{self.num!r}] / [{den or 1}]"

    # arithmetic ----------------------------------------------------------------
    def __neg__(self) -> "WxRatFunc":
        return WxRatFunc(-self.num, self.den, reduce=False)

    def __mul__(self, other) -> "WxRatFunc":
        other = WxRatFunc.of(other)
        return WxRatFunc(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def __add__(self, other) -> "WxRatFunc":
        other = WxRatFunc.of(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        common = self.den | other.den
        na = self.num * _den_product(common - self.den)
        nb = other.num * _den_product(common - other.den)
        return WxRatFunc(na + nb, common)

    __radd__ = __add__

    def __sub__(self, other) -> "WxRatFunc":
        return self + (-WxRatFunc.of(other))

    def __rsub__(self, other) -> "WxRatFunc":
        return WxRatFunc.of(other) - self

    def div_lin(self, lin: Lin) -> "WxRatFunc":
        return self * WxRatFunc.inverse_lin(lin)

    def __eq__(self, other) -> bool:
        if not isinstance(other, (WxRatFunc, WxPoly, Lin, int, Fraction, UniPoly)):
            return NotImplemented
        return (self - WxRatFunc.of(other)).is_zero()

    __hash__ = None  # type: ignore[assignment]

    # evaluation ----------------------------------------------------------------
    def __call__(self, w, x):
        den = 1
        for key, e in self.den.items():
            if key[0] == "w":
                den *= (w + key[1]) ** e
            elif key[1] == 0:
                den *= x**e
            else:
                den *= (x - 1) ** e
        return self.num(w, x) / den

    def eval_mp(self, w, x, ctx):
        den = ctx.one
        for key, e in self.den.items():
            if key[0] == "w":
                den *= (w + ctx.mpf(key[1].numerator) / key[1].denominator) ** e
            elif key[1] == 0:
                den *= x**e
            else:
                den *= (x - 1) ** e
        return self.num.eval_mp(w, x, ctx) / den

    def at_x(self, x) -> "WxRatFunc":
        """Specialize x to a rational, leaving a rational function of w."""
        x = as_rational(x)
        scale = Fraction(1)
        den = Counter()
        for key, e in self.den.items():
            if key[0] == "w":
                den[key] = e
            else:
                v = x if key[1] == 0 else x - 1
                if v == 0:
                    raise DegenerateFactor(f"x-factor vanishes at x = {x}")
                scale /= v**e
        num = WxPoly(UniPoly.constant(c(x) * scale) for c in self.num.coeffs)
        return WxRatFunc(num, den)

    def leading_expansion(self, order: int) -> tuple[int, list["WxRatFunc"]]:
        """Expansion in 1/w as w -> infinity.

        Returns ``(e, [c0, c1, ...])`` with ``self = w^e (c0 + c1/w + ...)``;
        each coefficient is a function of x alone.
        """
        if self.is_zero():
            raise ValueError("zero function has no leading term")
        n = self.num.deg_w
        wden = self.w_denominator()
        m = sum(wden.values())
        # numerator reversed in t = 1/w, denominator prod(1 + c t)^e
        top = [self.num.coeffs[n - k] if k <= n else UniPoly() for k in range(order + 1)]
        dser = [Fraction(1)] + [Fraction(0)] * order
        for key, e in wden.items():
            for _ in range(e):
                for k in range(order, 0, -1):
                    dser[k] += key[1] * dser[k - 1]
        # power-series division top / dser (dser has scalar coefficients, dser[0] = 1)
        out: list[UniPoly] = []
        for k in range(order + 1):
            acc = top[k]
            for i in range(1, k + 1):
                if dser[i]:
                    acc = acc - out[k - i] * dser[i]
            out.append(acc)
        xden = {k: e for k, e in self.den.items() if k[0] == "x"}
        return n - m, [WxRatFunc(WxPoly.from_x(c), xden) for c in out]


def _den_product(den: Mapping) -> WxPoly:
    out = WxPoly.const(1)
    for key, e in den.items():
        f = _factor_poly(key)
        for _ in range(e):
            out = out * f
    return out


def pochhammer_lin(base: Lin, k: int) -> WxRatFunc:
    """(base)_k as a polynomial in w."""
    out = WxRatFunc.one()
    for i in range(k):
        out = out * WxRatFunc.of(base + i)
    return out


def inverse_pochhammer_lin(base: Lin, k: int) -> WxRatFunc:
    out = WxRatFunc.one()
    for i in range(k):
        out = out * WxRatFunc.inverse_lin(base + i)
    return out


def x_power(n: int) -> WxRatFunc:
    """x^n for any integer n."""
    if n >= 0:
        return WxRatFunc.of(UniPoly((0,) * n + (1,)))
    return WxRatFunc.inverse_x(-n)


def x1_power(n: int) -> WxRatFunc:
    """(x - 1)^n for any integer n."""
    if n >= 0:
        return WxRatFunc.of(_X1**n)
    return WxRatFunc.inverse_x1(-n)
