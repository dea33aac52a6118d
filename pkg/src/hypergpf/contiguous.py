"""Contiguous matrices for shift vectors (p, 0, r).

The matrix A(a; p) carries the vector (F(a), F(a + e3)) of Gauss functions to
the one at a + p.  Entries live in the field of rational functions of (w, x)
with x kept symbolic; specialization to an algebraic x happens only when a
zero test is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .data import HALF, HyperData
from .exact import AlgebraicReal, UniPoly, alg_is_root, as_rational
from .wx import (
    DegenerateFactor,
    Lin,
    W,
    WxPoly,
    WxRatFunc,
    inverse_pochhammer_lin,
    pochhammer_lin,
    x1_power,
    x_power,
)


class PathError(ValueError):
    """Path does not realize the requested shift vector."""


class ExtractionError(ArithmeticError):
    """A prefactor failed to divide out; indicates an upstream fault."""


@dataclass(frozen=True)
class ShiftVector:
    p: int
    q: int
    r: int

    def __post_init__(self):
        if min(self.p, self.q, self.r) < 0:
            raise ValueError("shift vectors here have nonnegative entries")


@dataclass(frozen=True)
class Mat2:
    a11: WxRatFunc
    a12: WxRatFunc
    a21: WxRatFunc
    a22: WxRatFunc

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )

    def det(self) -> WxRatFunc:
        return self.a11 * self.a22 - self.a12 * self.a21

    def entries(self) -> tuple[WxRatFunc, WxRatFunc, WxRatFunc, WxRatFunc]:
        return (self.a11, self.a12, self.a21, self.a22)

    def equals(self, other: "Mat2") -> bool:
        return all(u == v for u, v in zip(self.entries(), other.entries()))

    def at_x(self, x) -> "Mat2":
        return Mat2(*(e.at_x(x) for e in self.entries()))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(WxRatFunc.one(), WxRatFunc.zero(), WxRatFunc.zero(), WxRatFunc.one())


Triple = tuple  # (alpha, beta, gamma) as Lin or rationals


def _triple(a) -> tuple[Lin, Lin, Lin]:
    if len(a) != 3:
        raise ValueError("parameter triple must have three entries")
    return tuple(Lin.of(v) for v in a)  # type: ignore[return-value]


def _inv(*lins: Lin) -> WxRatFunc:
    out = WxRatFunc.one()
    for lin in lins:
        out = out * WxRatFunc.inverse_lin(lin)
    return out


def _L(lin: Lin) -> WxRatFunc:
    return WxRatFunc.of(lin)


def basic_matrix(kind: str, a, z=None) -> Mat2:
    """A1, A3 or A13 at the parameter triple ``a``.

    ``z=None`` keeps x symbolic; a rational ``z`` specializes it.
    """
    al, be, ga = _triple(a)
    X = WxRatFunc.x()
    Xm1 = X - 1
    try:
        if kind == "A1":
            k = _inv(al + 1) * x1_power(-1)
            m = Mat2(
                WxRatFunc.one(),
                _L(be) * X * _inv(ga),
                -_L(ga) * k,
                (_L(ga - al - 1) - _L(be) * X) * k,
            )
        elif kind == "A3":
            k = _inv(ga - al, ga - be)
            gg = _L(ga) * _L(ga + 1) * k * x_power(-1)
            m = Mat2(
                _L(ga) * _L(ga - al - be) * k,
                -_L(al) * _L(be) * Xm1 * k,
                gg,
                gg * Xm1,
            )
        elif kind == "A13":
            k = _inv(ga - be)
            kk = k * _inv(al + 1) * x_power(-1)
            m = Mat2(
                _L(ga) * k,
                _L(be) * Xm1 * k,
                -_L(ga) * _L(ga + 1) * kk,
                _L(ga + 1) * (_L(ga) - _L(be) * X) * kk,
            )
        else:
            raise ValueError(f"unknown basic matrix {kind!r}")
    except DegenerateFactor as exc:
        raise DegenerateFactor(f"{kind} at ({al}, {be}, {ga}): {exc}") from None
    if z is not None:
        m = m.at_x(z)
    return m


def basic_det(kind: str, a, z=None) -> WxRatFunc:
    """Closed-form determinant of a basic matrix."""
    al, be, ga = _triple(a)
    if kind == "A1":
        d = _L(ga - al - 1) * _inv(al + 1) * x1_power(-1)
    elif kind == "A3":
        d = _L(ga) * _L(ga + 1) * _inv(ga - al, ga - be) * x1_power(1) * x_power(-1)
    elif kind == "A13":
        d = _L(ga) * _L(ga + 1) * _inv(al + 1, ga - be) * x_power(-1)
    else:
        raise ValueError(f"unknown basic matrix {kind!r}")
    return d.at_x(z) if z is not None else d


_UNIT = {1: (1, 0, 0), 3: (0, 0, 1)}


def contig_product(a, shift: ShiftVector, path: Sequence[int], z=None) -> Mat2:
    """Product of unit-step matrices along ``path`` starting at ``a``.

    Each new factor multiplies on the left, so the first step of the path is
    the rightmost matrix.
    """
    if shift.q != 0:
        raise PathError("only shift vectors with q = 0 are supported")
    if any(k not in _UNIT for k in path):
        raise PathError("path entries must be 1 or 3")
    if sum(1 for k in path if k == 1) != shift.p or sum(1 for k in path if k == 3) != shift.r:
        raise PathError(f"path {tuple(path)} does not realize {shift}")
    cur = list(_triple(a))
    out = Mat2.identity()
    for k in path:
        out = basic_matrix("A1" if k == 1 else "A3", cur, z) @ out
        d = _UNIT[k]
        cur = [cur[0] + d[0], cur[1] + d[1], cur[2] + d[2]]
    return out


def canonical_path(p: int, r: int) -> tuple[int, ...]:
    """(3, 1) repeated p times, then 3 repeated r - p times."""
    return (3, 1) * p + (3,) * (r - p)


def _check_south(lam: HyperData) -> None:
    if lam.q != 0 or lam.b != HALF:
        raise ValueError("contiguous engine handles (p, 0, r; a, 1/2; x) only")
    if not 1 <= lam.p <= lam.r:
        raise ValueError("need 1 <= p <= r")


def alpha_of_w(lam: HyperData) -> tuple[Lin, Lin, Lin]:
    return (W * lam.p + lam.a, Lin(0, lam.b), W * lam.r)


def A_of_lambda(lam: HyperData) -> Mat2:
    """A(w; lambda) along the canonical path, x symbolic."""
    _check_south(lam)
    p, r, a = lam.p, lam.r, lam.a
    out = Mat2.identity()
    for j in range(p):
        out = basic_matrix("A13", (W * p + (a + j), HALF, W * r + j)) @ out
    for i in range(r - p):
        out = basic_matrix("A3", (W * p + (a + p), HALF, W * r + (p + i))) @ out
    return out


def det_formula(lam: HyperData) -> WxRatFunc:
    """x^-r (x-1)^(r-p) (rw)_r (rw+1)_r / ((pw+a+1)_p ((r-p)w-a)_(r-p) (rw-1/2)_r)."""
    p, r, a = lam.p, lam.r, lam.a
    out = x_power(-r) * x1_power(r - p)
    out = out * pochhammer_lin(W * r, r) * pochhammer_lin(W * r + 1, r)
    out = out * inverse_pochhammer_lin(W * p + (a + 1), p)
    out = out * inverse_pochhammer_lin(W * (r - p) - a, r - p)
    out = out * inverse_pochhammer_lin(W * r - lam.b, r)
    return out


@dataclass(frozen=True)
class PhiEntries:
    """The four polynomial-in-w factors of A(w; lambda).

    Each is a WxRatFunc whose denominator involves x only.
    """

    phi11: WxRatFunc
    phi12: WxRatFunc
    phi21: WxRatFunc
    phi22: WxRatFunc

    def as_tuple(self):
        return (self.phi11, self.phi12, self.phi21, self.phi22)


DEGREE_BOUNDS = (-1, -1, -1, 0)  # offsets from r: (r-1, r-1, r-1, r)


def extract_phi(A: Mat2, lam: HyperData) -> PhiEntries:
    """Strip the Pochhammer prefactors from each entry of A(w; lambda)."""
    _check_south(lam)
    p, r, a = lam.p, lam.r, lam.a
    D = pochhammer_lin(W * (r - p) - a, r - p) * pochhammer_lin(W * r - lam.b, r)
    up1 = pochhammer_lin(W * p + (a + 1), p - 1)
    up = pochhammer_lin(W * p + (a + 1), p)
    out = (
        A.a11 * up1 * D * inverse_pochhammer_lin(W * r, r),
        A.a12 * up1 * D * inverse_pochhammer_lin(W * r + 1, r - 1),
        A.a21 * up * D * inverse_pochhammer_lin(W * r, r + 1),
        A.a22 * up * D * inverse_pochhammer_lin(W * r + 1, r),
    )
    for idx, (phi, off) in enumerate(zip(out, DEGREE_BOUNDS)):
        if not phi.is_w_polynomial():
            raise ExtractionError(f"phi entry {idx} keeps a w-denominator: {phi!r}")
        if phi.num.deg_w > r + off:
            raise ExtractionError(f"phi entry {idx} has w-degree {phi.num.deg_w} > {r + off}")
    return PhiEntries(*out)


def extract_RQ(A: Mat2) -> tuple[WxRatFunc, WxRatFunc]:
    """R and Q of the three-term relation f(w+1) = R f(w) + Q f~(w)."""
    return A.a11, A.a12


def vanishes_at(func: WxRatFunc, x) -> bool:
    """Exact test that a function of (w, x) vanishes identically in w at x."""
    if func.is_zero():
        return True
    if x is None:
        return False
    if isinstance(x, AlgebraicReal):
        return all(alg_is_root(c, x) for c in func.num.coeffs)
    x = as_rational(x)
    return all(c(x) == 0 for c in func.num.coeffs)


def Q_vanishes(lam: HyperData) -> bool:
    """Q(w; lambda) == 0 identically, decided exactly at lambda's x."""
    _, Q = extract_RQ(A_of_lambda(lam))
    return vanishes_at(Q, lam.x)


def Y_poly(p: int, r: int) -> UniPoly:
    """p^p (r-p)^(r-p) z^r - r^r (1-z)^(r-p)."""
    z = UniPoly.z()
    return z**r * (Fraction(p) ** p * Fraction(r - p) ** (r - p)) - UniPoly((1, -1)) ** (r - p) * (Fraction(r) ** r)


@dataclass(frozen=True)
class LeadingY:
    poly: UniPoly
    value: Fraction | UniPoly | None  # rational value, residue mod the defining poly, or None for symbolic x
    vanishes: bool | None


def leading_Y(lam: HyperData) -> LeadingY:
    if lam.region != "I":
        raise ValueError("leading_Y expects data in region I")
    Y = Y_poly(lam.p, lam.r)
    x = lam.x
    if x is None:
        return LeadingY(Y, None, None)
    if isinstance(x, AlgebraicReal):
        if x.is_rational():
            v = Y(x.lo)
            return LeadingY(Y, v, v == 0)
        return LeadingY(Y, Y % x.defining, alg_is_root(Y, x))
    v = Y(x)
    return LeadingY(Y, v, v == 0)


def leading_terms(A: Mat2, order: int = 1):
    """1/w expansions of the four entries (exponent, coefficient list)."""
    return tuple(e.leading_expansion(order) for e in A.entries())
