"""Deciding solutions in the south region and assembling their Gamma product formulas.

A datum (p, 0, ps; j/s, 1/2; x_s) is decided exactly: x_s enters only through
its defining polynomial, and each terminating sum F_k is tested for vanishing
at x_s with a gcd plus a Sturm count.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .algebraic import InvariantViolation, x_of_s
from .contiguous import A_of_lambda, extract_RQ, vanishes_at
from .data import HALF, HyperData
from .exact import AlgebraicReal, UniPoly, alg_is_root, as_rational
from .kernels import F_k, P_poly, Phi
from .wx import WxPoly


class Classification(str, enum.Enum):
    ELEMENTARY = "elementary"
    CANDIDATE = "nonelementary-candidate"
    EXCLUDED = "excluded"


class TransformKind(str, enum.Enum):
    DUAL = "dual"
    RECIPROCAL = "reciprocal"
    MULTIPLE = "multiple"
    SWAP = "swap"
    EULER = "euler"


def classify(lam: HyperData) -> Classification:
    """Elementary, candidate for a non-elementary solution, or excluded."""
    if lam.region != "I":
        raise ValueError(f"{lam.label()} is not in the south region")
    if lam.b.denominator == 1 and lam.b <= 0:
        return Classification.ELEMENTARY
    if lam.is_integral():
        return Classification.CANDIDATE
    return Classification.EXCLUDED


def chi(j: int, k: int, s: int) -> Fraction:
    """-(j + (s - 1)(k - 1/2)) / s."""
    return -(j + (s - 1) * (k - HALF)) / s


def _check_nsc_args(p: int, s: int, j: int, jp: int) -> None:
    if s < 2:
        raise ValueError("need s >= 2")
    if p < 1:
        raise ValueError("need p >= 1")
    if j < 0 or jp < 0:
        raise ValueError("j and j' must be nonnegative")
    if j + jp != s - 2:
        raise ValueError(f"j + j' must equal s - 2 = {s - 2}")


def _F_factor(k: int, j: int, s: int) -> UniPoly:
    return F_k(k, chi(j, k, s), HALF - k)


@lru_cache(maxsize=None)
def _factor_vanishes(k: int, j: int, s: int) -> bool:
    return alg_is_root(_F_factor(k, j, s), x_of_s(s))


def first_failing_k(p: int, s: int, j: int, jp: int) -> int | None:
    """Smallest k whose F-product is nonzero at x_s, or None when all vanish."""
    r = p * s
    for k in range(r):
        if _factor_vanishes(k, j, s) or _factor_vanishes(r - 1 - k, jp, s):
            continue
        return k
    return None


@lru_cache(maxsize=None)
def nsc_certify(p: int, s: int, j: int, jp: int) -> bool:
    """Exact decision whether (p, 0, ps; j/s, 1/2; x_s) and its dual are solutions."""
    _check_nsc_args(p, s, j, jp)
    if p * (s - 1) % 2:
        return False
    return first_failing_k(p, s, j, jp) is None


# ---------------------------------------------------------------------------
# transforms


def dual(lam: HyperData) -> HyperData:
    """a' = 1 - 2p/r - a, b' = 1 - 2q/r - b, everything else kept."""
    r = Fraction(lam.r)
    return HyperData(lam.p, lam.q, lam.r, 1 - 2 * lam.p / r - lam.a, 1 - 2 * lam.q / r - lam.b, lam.x)


def dual_v(v_star: Iterable[Fraction], r: int) -> tuple[Fraction, ...]:
    return tuple(sorted(1 - Fraction(2, r) - t for t in v_star))


def _one_minus(x):
    if x is None:
        return None
    if isinstance(x, AlgebraicReal):
        return x.one_minus()
    return 1 - x


def reciprocal(lam: HyperData) -> HyperData:
    p, q, r, a, b = lam.p, lam.q, lam.r, lam.a, lam.b
    n = r - p - q
    if n == 0:
        raise ValueError("reciprocal needs r - p - q != 0")
    a_c = ((r - q) * (1 - a) - p * b) / Fraction(n)
    b_c = ((r - p) * (1 - b) - q * a) / Fraction(n)
    return HyperData(-p, -q, n, a_c, b_c, _one_minus(lam.x))


def multiple(lam: HyperData, k: int) -> HyperData:
    if k < 1:
        raise ValueError("multiple needs k >= 1")
    return HyperData(k * lam.p, k * lam.q, k * lam.r, lam.a, lam.b, lam.x)


def square_symmetry(lam: HyperData, kind: str | TransformKind) -> HyperData:
    kind = TransformKind(kind)
    if kind is TransformKind.SWAP:
        return HyperData(lam.q, lam.p, lam.r, lam.b, lam.a, lam.x)
    if kind is TransformKind.EULER:
        return HyperData(lam.r - lam.p, lam.r - lam.q, lam.r, -lam.a, -lam.b, lam.x)
    raise ValueError(f"{kind.value} is not a square symmetry")


def transform(lam: HyperData, kind: str | TransformKind, k: int = 1) -> HyperData:
    kind = TransformKind(kind)
    if kind is TransformKind.DUAL:
        return dual(lam)
    if kind is TransformKind.RECIPROCAL:
        return reciprocal(lam)
    if kind is TransformKind.MULTIPLE:
        return multiple(lam, k)
    return square_symmetry(lam, kind)


# ---------------------------------------------------------------------------
# v-sets


def candidate_multiset(lam: HyperData) -> Counter:
    """Roots (negated) of the right-hand side of the v / v* factorization."""
    p, r, a = lam.p, lam.r, lam.a
    c = Counter()
    c.update((i + a) / p for i in range(p))
    c.update((j - a) / (r - p) for j in range(r - p))
    c.update((j - HALF) / r for j in range(r))
    return c


def _w_derivative(P: WxPoly) -> WxPoly:
    return WxPoly(c * k for k, c in enumerate(P.coeffs) if k > 0)


def _root_multiplicity(P: WxPoly, w0: Fraction, x) -> int:
    m = 0
    cur = P
    while not cur.is_zero() and alg_is_root(cur.at_w(w0), x):
        m += 1
        cur = _w_derivative(cur)
    return m


def _sorted(ms: Iterable[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sorted(ms))


def assemble_v(lam: HyperData, P: WxPoly | None = None) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """(v, v*) with v the negated roots of P(w; lambda) at lambda's x.

    Multiplicities come from successive w-derivatives tested exactly at x.
    """
    if lam.x is None:
        raise ValueError("assemble_v needs a concrete x")
    P = P_poly(lam) if P is None else P
    r = lam.r
    if P.deg_w != r or alg_is_root(P.coeffs[r], lam.x):
        raise InvariantViolation(f"P does not have w-degree {r} at x")
    cands = candidate_multiset(lam)
    v = Counter()
    for c, avail in sorted(cands.items()):
        m = _root_multiplicity(P, -c, lam.x)
        if m > avail:
            raise InvariantViolation(f"root -{c} has multiplicity {m} > candidate multiplicity {avail}")
        if m:
            v[c] = m
    if sum(v.values()) != r:
        raise InvariantViolation(f"candidates account for {sum(v.values())} of {r} roots of P")
    v_star = cands - v
    v_t, vs_t = _sorted(v.elements()), _sorted(v_star.elements())
    if sum(v_t) != Fraction(r - 1, 2):
        raise InvariantViolation(f"sum of v is {sum(v_t)}, expected {Fraction(r - 1, 2)}")
    if not all(0 <= t < 1 for t in v_t):
        raise InvariantViolation("v leaves [0, 1)")
    arrange_for_reciprocal(v_t, lam)
    return v_t, vs_t


def arrange_for_reciprocal(v: Sequence[Fraction], lam: HyperData) -> tuple[Fraction, ...]:
    """v reordered so that its last p entries are (i + a)/p, i = 0..p-1."""
    tail = Counter((i + lam.a) / lam.p for i in range(lam.p))
    have = Counter(v)
    if tail - have:
        raise InvariantViolation("prod (w + (i+a)/p) does not divide prod (w + v_i)")
    head = have - tail
    return _sorted(head.elements()) + _sorted(tail.elements())


def reciprocal_v(v: Sequence[Fraction], lam: HyperData) -> tuple[Fraction, ...]:
    """v_i - (1/2 - a)/(r - p) over the first r - p arranged entries."""
    c = (HALF - lam.a) / (lam.r - lam.p)
    head = arrange_for_reciprocal(v, lam)[: lam.r - lam.p]
    return _sorted(t - c for t in head)


def multiple_v(v: Iterable[Fraction], k: int) -> tuple[Fraction, ...]:
    """Denominator shifts after Gauss multiplication: {(v_i + m)/k}."""
    if k < 1:
        raise ValueError("multiple needs k >= 1")
    return _sorted((t + m) / k for t in v for m in range(k))


def numerator_shifts(n: int) -> tuple[Fraction, ...]:
    """{i/n : i = 0..n-1}."""
    return tuple(Fraction(i, n) for i in range(n))


def cancel_gamma(num: Iterable[Fraction], den: Iterable[Fraction]) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Remove Gamma factors common to numerator and denominator."""
    cn, cd = Counter(num), Counter(den)
    common = cn & cd
    return _sorted((cn - common).elements()), _sorted((cd - common).elements())


def _shift_str(t: Fraction) -> str:
    if t == 0:
        return "w"
    return f"w+{t}" if t > 0 else f"w-{-t}"


def gamma_quotient_str(num: Sequence[Fraction], den: Sequence[Fraction]) -> str:
    top = "".join(f"Γ({_shift_str(t)})" for t in num) or "1"
    bottom = "".join(f"Γ({_shift_str(t)})" for t in den) or "1"
    return f"{top} / {bottom}"


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Constant:
    value: str
    precision_bits: int


@dataclass(frozen=True)
class GpfCertificate:
    lam: HyperData
    s: int
    j: int
    jp: int
    v: tuple[Fraction, ...]
    v_star: tuple[Fraction, ...]
    v_prime: tuple[Fraction, ...]
    v_check: tuple[Fraction, ...]
    sum_check: Fraction
    delta: Fraction
    primitive: bool
    multiple_of: tuple[int, int] | None = None  # (p of the primitive, k)
    constants: dict = field(default_factory=dict, compare=False)

    @property
    def p(self) -> int:
        return self.lam.p

    @property
    def r(self) -> int:
        return self.lam.r

    @property
    def u(self) -> tuple[Fraction, ...]:
        return numerator_shifts(self.r)

    @property
    def dual_lam(self) -> HyperData:
        return dual(self.lam)

    @property
    def reciprocal_lam(self) -> HyperData:
        return reciprocal(self.lam)

    @property
    def v_arranged(self) -> tuple[Fraction, ...]:
        return arrange_for_reciprocal(self.v, self.lam)

    def reduced_formulas(self) -> dict[str, tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
        """Gamma quotients of f(w; lambda), f(w; lambda') and f(w; lambda-check) after cancellation."""
        rp = self.r - self.p
        return {
            "gpf1": cancel_gamma(self.u, self.v),
            "gpf2": cancel_gamma(self.u, self.v_prime),
            "gpf-r": cancel_gamma(numerator_shifts(rp), self.v_check),
        }

    def consistency_errors(self) -> list[str]:
        """Exact internal checks; empty when the certificate is consistent."""
        errs = []
        r, p = self.r, self.p
        half_r = Fraction(r - 1, 2)
        if self.j + self.jp != self.s - 2:
            errs.append("j + j' != s - 2")
        if self.lam.a != Fraction(self.j, self.s) or self.dual_lam.a != Fraction(self.jp, self.s):
            errs.append("a, a' are not j/s, j'/s")
        if len(self.v) != r or len(self.v_prime) != r or len(self.v_check) != r - p:
            errs.append("wrong multiset sizes")
        if sum(self.v) != half_r or sum(self.v_prime) != half_r or self.sum_check != half_r:
            errs.append("sum rule fails")
        if sum(self.u) != sum(self.v):
            errs.append("sum of numerator shifts differs from sum of v")
        if Counter(self.v) + Counter(self.v_star) != candidate_multiset(self.lam):
            errs.append("v and v* do not split the candidate multiset")
        if self.v_prime != dual_v(self.v_star, r):
            errs.append("v' is not 1 - 2/r - v*")
        try:
            if self.v_check != reciprocal_v(self.v, self.lam):
                errs.append("v-check is not v - (1/2 - a)/(r - p)")
        except InvariantViolation as exc:
            errs.append(str(exc))
        if self.delta != Fraction(p**p * (r - p) ** (r - p), r**r):
            errs.append("delta != p^p (r-p)^(r-p) / r^r")
        return errs


def delta_of(p: int, r: int) -> Fraction:
    return Fraction(p**p * (r - p) ** (r - p), r**r)


def south_datum(p: int, s: int, j: int) -> HyperData:
    return HyperData.south(p, p * s, Fraction(j, s), x_of_s(s))


def build_certificate(p: int, s: int, j: int, primitive: bool = True, multiple_of=None,
                      precision: int | None = 256) -> GpfCertificate:
    """Exact v-sets for a certified datum; constants fitted numerically unless precision is None."""
    jp = s - 2 - j
    if not nsc_certify(p, s, j, jp):
        raise ValueError(f"(p, s, j) = ({p}, {s}, {j}) is not a solution")
    lam = south_datum(p, s, j)
    v, v_star = assemble_v(lam)
    cert = GpfCertificate(
        lam=lam, s=s, j=j, jp=jp, v=v, v_star=v_star,
        v_prime=dual_v(v_star, lam.r), v_check=reciprocal_v(v, lam),
        sum_check=sum(v, Fraction(0)), delta=delta_of(p, lam.r),
        primitive=primitive, multiple_of=multiple_of,
    )
    errs = cert.consistency_errors()
    if errs:
        raise InvariantViolation("; ".join(errs))
    if precision is not None:
        from .numeric import fit_gpf_constants

        cert = replace(cert, constants=fit_gpf_constants(cert, precision))
    return cert


def primitive_base(p: int, s: int, j: int) -> int | None:
    """Smallest proper divisor d of p with (d, s, j) certified, else None."""
    jp = s - 2 - j
    for d in range(1, p):
        if p % d == 0 and nsc_certify(d, s, j, jp):
            return d
    return None


def search(s_max: int, p_max: int, precision: int | None = 256) -> list[GpfCertificate]:
    """All certified (p, s, j) on the grid, ordered by (s, p, j)."""
    if s_max < 2 or p_max < 1:
        raise ValueError("need s_max >= 2 and p_max >= 1")
    out = []
    for s in range(2, s_max + 1):
        for p in range(1, p_max + 1):
            for j in range(s - 1):
                if not nsc_certify(p, s, j, s - 2 - j):
                    continue
                base = primitive_base(p, s, j)
                mult = None if base is None else (base, p // base)
                out.append(build_certificate(p, s, j, primitive=base is None, multiple_of=mult,
                                             precision=precision))
    return out


# ---------------------------------------------------------------------------
# refusals and cross-checks


@dataclass(frozen=True)
class Refusal:
    reason: str
    condition: str


def diagnose(p: int, r: int, a) -> Refusal | tuple[int, int, int]:
    """First failed condition for (p, 0, r; a, 1/2), or (p, s, j) when certified."""
    a = as_rational(a)
    if not 0 < p < r:
        return Refusal(f"need 0 < p < r, got p = {p}, r = {r}", "region")
    lam = HyperData.south(p, r, a)
    if classify(lam) is Classification.EXCLUDED:
        return Refusal(f"p = {p} and r = {r} differ mod 2, so p(s-1) is odd", "parity")
    if r % p:
        return Refusal(f"s = r/p = {Fraction(r, p)} is not an integer", "ratio")
    s = r // p
    if p * (s - 1) % 2:
        return Refusal(f"p(s-1) = {p * (s - 1)} is odd", "parity")
    j = a * s
    if j.denominator != 1 or not 0 <= j <= s - 2:
        return Refusal(f"a = {a} is not j/s with 0 <= j <= s-2 (s = {s})", "a-form")
    j = int(j)
    k = first_failing_k(p, s, j, s - 2 - j)
    if k is not None:
        return Refusal(f"F-product nonzero at x_s for k = {k}, k' = {r - 1 - k}", "f-product")
    return (p, s, j)


def _wxpoly_vanishes(P: WxPoly, x) -> bool:
    if not isinstance(x, AlgebraicReal):
        return all(c(x) == 0 for c in P.coeffs)
    return all(alg_is_root(c, x) for c in P.coeffs)


@dataclass(frozen=True)
class ThreeWay:
    p: int
    s: int
    j: int
    jp: int
    nsc: bool
    phi_zero: bool
    q_zero: bool

    @property
    def agree(self) -> bool:
        return self.nsc == self.phi_zero == self.q_zero


def three_way(p: int, s: int, j: int) -> ThreeWay:
    """F-product criterion, Phi == 0 and Q == 0, each decided independently at x_s."""
    jp = s - 2 - j
    lam = south_datum(p, s, j)
    nsc = nsc_certify(p, s, j, jp)
    phi_zero = _wxpoly_vanishes(Phi(lam), lam.x)
    _, Q = extract_RQ(A_of_lambda(lam))
    q_zero = vanishes_at(Q, lam.x)
    return ThreeWay(p, s, j, jp, nsc, phi_zero, q_zero)


def three_way_grid(max_ps: int) -> list[ThreeWay]:
    out = []
    for s in range(2, max_ps + 1):
        for p in range(1, max_ps // s + 1):
            for j in range(s - 1):
                out.append(three_way(p, s, j))
    return out
