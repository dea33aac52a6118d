"""Truncated hypergeometric products and terminating sums.

Phi(w) and P(w) are built twice: from the series in the complementary
parameters (gamma - alpha, gamma - beta; gamma) and, after Euler's
transformation, from the original parameters with a (1 - z)^k prefactor.
Both routes must return the same polynomial in (w, x).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .data import HALF, HyperData
from .exact import UniPoly, as_rational
from .wx import Lin, W, WxPoly, WxRatFunc, pochhammer_lin


class FormulaInapplicable(ValueError):
    """A side condition of a closed-form evaluation fails."""


class ResidualDenominator(ArithmeticError):
    """Clearing factor did not cancel every denominator."""


def pochhammer(alpha, k: int):
    """Rising factorial (alpha)_k; affine ``Lin`` input gives a polynomial in w."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(alpha, Lin):
        return pochhammer_lin(alpha, k)
    out = 1
    for i in range(k):
        out = out * (alpha + i)
    return out


def F_k(k: int, beta, gamma) -> UniPoly:
    """sum_j (-1)^j C(k, j) (beta)_j (gamma + j)_(k-j) z^j."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    beta, gamma = as_rational(beta), as_rational(gamma)
    return UniPoly(
        (-1) ** j * comb(k, j) * pochhammer(beta, j) * pochhammer(gamma + j, k - j) for j in range(k + 1)
    )


def _is_int(v: Fraction) -> bool:
    return v.denominator == 1


def F_k_vanishes_identically(k: int, beta, gamma) -> bool:
    """True iff beta, gamma are integers with 0 <= -beta <= -gamma <= k - 1."""
    beta, gamma = as_rational(beta), as_rational(gamma)
    verdict = _is_int(beta) and _is_int(gamma) and 0 <= -beta <= -gamma <= k - 1
    if verdict != F_k(k, beta, gamma).is_zero():
        raise AssertionError(f"vanishing criterion disagrees with F_{k}({beta}; {gamma})")
    return verdict


@dataclass(frozen=True)
class SeriesTruncation:
    """Coefficients c_0..c_N of a power series in z, each a function of (w, x)."""

    coeffs: tuple[WxRatFunc, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def gauss(cls, params: Sequence, order: int) -> "SeriesTruncation":
        """2F1(alpha, beta; gamma; z) truncated at z^order, affine parameters in w."""
        al, be, ga = (Lin.of(v) for v in params)
        out = [WxRatFunc.one()]
        for n in range(order):
            nxt = out[-1] * WxRatFunc.of(al + n) * WxRatFunc.of(be + n) * WxRatFunc.inverse_lin(ga + n)
            out.append(nxt * Fraction(1, n + 1))
        return cls(tuple(out))

    @classmethod
    def polynomial(cls, poly: UniPoly, order: int) -> "SeriesTruncation":
        c = list(poly.coeffs[: order + 1]) + [Fraction(0)] * max(0, order + 1 - len(poly.coeffs))
        return cls(tuple(WxRatFunc.const(v) for v in c))


def _binomial_one_minus(k: int) -> UniPoly:
    return UniPoly((1, -1)) ** k


def truncated_product(
    series: Sequence[SeriesTruncation], clearing: WxRatFunc, order: int
) -> WxPoly:
    """clearing * <prod of series>_order, evaluated with z = x.

    Every monomial term is cleared separately, so the assertion that no
    w-denominator survives is checked term by term.
    """
    total = WxPoly()
    # enumerate index tuples with sum <= order
    def rec(i: int, budget: int, term: WxRatFunc, deg: int):
        nonlocal total
        if i == len(series):
            t = term * clearing
            if t.den:
                raise ResidualDenominator(f"term of z-degree {deg} keeps denominator {t!r}")
            total = total + t.num * UniPoly((0,) * deg + (1,))
            return
        for n in range(budget + 1):
            c = series[i].coeffs[n]
            if c.is_zero():
                continue
            rec(i + 1, budget - n, term * c, deg + n)

    rec(0, order, WxRatFunc.one(), 0)
    return total


def _check(lam: HyperData) -> None:
    if lam.q != 0 or lam.b != HALF or not 1 <= lam.p <= lam.r:
        raise ValueError(f"expected (p, 0, r; a, 1/2; x) data with 1 <= p <= r, got {lam.label()}")


def alpha_star(lam: HyperData, shift=0) -> tuple[Lin, Lin, Lin]:
    """((r-p)w - a, rw - 1/2; rw) at w + shift."""
    p, r, a = lam.p, lam.r, lam.a
    t = (W * (r - p) - a, W * r - HALF, W * r)
    return tuple(v.shift(shift) for v in t)  # type: ignore[return-value]


def alpha_plain(lam: HyperData, shift=0) -> tuple[Lin, Lin, Lin]:
    """(pw + a, 1/2; rw) at w + shift."""
    p, r, a = lam.p, lam.r, lam.a
    t = (W * p + a, Lin(0, HALF), W * r)
    return tuple(v.shift(shift) for v in t)  # type: ignore[return-value]


def _minus(vec, lin3):
    return tuple(Lin.of(v) - u for v, u in zip(vec, lin3))


V_VEC = (1, 1, 2)
ONES = (1, 1, 1)
E3 = (0, 0, 1)


def Phi(lam: HyperData) -> WxPoly:
    """(rw)_(r-1) <2F1(alpha*(w)) 2F1(v - alpha*(w+1))>_(r-1)."""
    _check(lam)
    n = lam.r - 1
    s1 = SeriesTruncation.gauss(alpha_star(lam), n)
    s2 = SeriesTruncation.gauss(_minus(V_VEC, alpha_star(lam, 1)), n)
    return truncated_product([s1, s2], pochhammer_lin(W * lam.r, lam.r - 1), n)


def P_poly(lam: HyperData) -> WxPoly:
    """(rw)_r <2F1(alpha*(w)) 2F1(1 - alpha*(w+1))>_(r-1)."""
    _check(lam)
    n = lam.r - 1
    s1 = SeriesTruncation.gauss(alpha_star(lam), n)
    s2 = SeriesTruncation.gauss(_minus(ONES, alpha_star(lam, 1)), n)
    return truncated_product([s1, s2], pochhammer_lin(W * lam.r, lam.r), n)


def Phi_euler(lam: HyperData) -> WxPoly:
    """(rw)_(r-1) <(1-z)^(r-p) 2F1(alpha(w)) 2F1(v - alpha(w+1))>_(r-1)."""
    _check(lam)
    n = lam.r - 1
    pre = SeriesTruncation.polynomial(_binomial_one_minus(lam.r - lam.p), n)
    s1 = SeriesTruncation.gauss(alpha_plain(lam), n)
    s2 = SeriesTruncation.gauss(_minus(V_VEC, alpha_plain(lam, 1)), n)
    return truncated_product([pre, s1, s2], pochhammer_lin(W * lam.r, lam.r - 1), n)


def P_euler(lam: HyperData) -> WxPoly:
    """(rw)_r <(1-z)^(r-p-1) 2F1(alpha(w)) 2F1(e3 - alpha(w+1))>_(r-1)."""
    _check(lam)
    if lam.r == lam.p:
        raise ValueError("Euler route for P needs r > p")
    n = lam.r - 1
    pre = SeriesTruncation.polynomial(_binomial_one_minus(lam.r - lam.p - 1), n)
    s1 = SeriesTruncation.gauss(alpha_plain(lam), n)
    s2 = SeriesTruncation.gauss(_minus(E3, alpha_plain(lam, 1)), n)
    return truncated_product([pre, s1, s2], pochhammer_lin(W * lam.r, lam.r), n)


@dataclass(frozen=True)
class SpecialValues:
    kind: str
    index: int
    point: Fraction
    phi_direct: UniPoly
    phi_closed: UniPoly
    P_direct: UniPoly
    P_closed: UniPoly

    def agree(self) -> bool:
        return self.phi_direct == self.phi_closed and self.P_direct == self.P_closed


def special_point(lam: HyperData, kind: str, index: int) -> Fraction:
    p, r, a = lam.p, lam.r, lam.a
    if kind == "xi":
        if not 0 <= index < r - p:
            raise ValueError(f"xi index must lie in [0, {r - p})")
        return -(index - a) / (r - p)
    if kind == "eta":
        if not 0 <= index < r:
            raise ValueError(f"eta index must lie in [0, {r})")
        return -(index - HALF) / r
    if kind == "zeta":
        if not 0 <= index < p:
            raise ValueError(f"zeta index must lie in [0, {p})")
        return -(a + index) / p
    raise ValueError(f"unknown special point kind {kind!r}")


def closed_form(lam: HyperData, kind: str, index: int) -> tuple[UniPoly, UniPoly]:
    """Closed forms of (Phi, P) at a special point, as polynomials in x."""
    _check(lam)
    p, r, a = lam.p, lam.r, lam.a
    j = index
    t = special_point(lam, kind, index)
    if kind == "xi":
        rt = r * t
        if _is_int(rt):
            raise FormulaInapplicable(f"r*xi_{j} = {rt} is an integer")
        bj = 2 - r * (t + 1)
        sign = (-1) ** (r - p - 1 - j)
        head = F_k(j, rt - HALF, rt)
        phi = F_k(r - p - 1 - j, bj - HALF, bj) * head * (sign * pochhammer(rt + j, p))
        P = F_k(r - p - 1 - j, bj - HALF, bj - 1) * head * (sign * pochhammer(rt + j, p + 1))
        return phi, P
    if kind == "eta":
        rt = r * t
        if _is_int(rt) or _is_int(2 - r * (t + 1)) or _is_int(1 - r * (t + 1)):
            raise FormulaInapplicable(f"integer shift at eta_{j}")
        cj = (r - p) * t - a
        dj = 1 - (r - p) * (t + 1) + a
        sign = (-1) ** (r - 1 - j)
        head = F_k(j, cj, HALF - j)
        phi = head * F_k(r - 1 - j, dj, Fraction(3, 2) + j - r) * sign
        twoP = head * F_k(r - 1 - j, dj, HALF + j - r) * sign
        return phi, twoP * HALF
    if kind == "zeta":
        rt = r * t
        if _is_int(rt):
            raise FormulaInapplicable(f"r*zeta_{j} = {rt} is an integer")
        i = j
        one_minus = UniPoly((1, -1))
        head = F_k(i, HALF, rt) * pochhammer(rt + i, r - p)
        phi = one_minus ** (r - p) * head * F_k(p - 1 - i, HALF, 2 - r * (t + 1)) * (-1) ** (p - 1 - i)
        if r - p - 1 < 0:
            raise FormulaInapplicable("P closed form at zeta needs r > p")
        P = one_minus ** (r - p - 1) * head * F_k(p - i, -HALF, 1 - r * (t + 1)) * (-1) ** (p - i)
        return phi, P
    raise ValueError(f"unknown special point kind {kind!r}")


def eval_special(lam: HyperData, kind: str, index: int, phi: WxPoly | None = None,
                 P: WxPoly | None = None) -> SpecialValues:
    """Direct substitution into Phi, P next to the closed forms at the same point."""
    phi_c, P_c = closed_form(lam, kind, index)
    t = special_point(lam, kind, index)
    phi = Phi(lam) if phi is None else phi
    P = P_poly(lam) if P is None else P
    return SpecialValues(kind, index, t, phi.at_w(t), phi_c, P.at_w(t), P_c)
