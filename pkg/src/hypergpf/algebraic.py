"""The algebraic argument x and the polynomials behind it.

x is the (0, 1)-root of (s-1)^(s-1) z^s - s^s (1-z)^(s-1); writing
x = s/(y + s), y is the positive root of z^(s-1)(z + s) - (s-1)^(s-1).
This module builds both polynomials, locates every root of the second one
(real roots exactly, complex ones through the angular equation), and bounds
the degree of x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from sympy import factorint

from .exact import (
    AlgebraicReal,
    Interval,
    UniPoly,
    alg_is_root,
    irreducibility_certify,
    isolate_root,
    sturm_count,
)
from .mpctx import frac_iv, frac_mp, interval_bounds, iv_context, mp_context


class RootLocalizationError(ArithmeticError):
    """Bisection could not keep a certified sign change."""


class InvariantViolation(AssertionError):
    """A proven property failed to hold; signals a fault."""


def phi_poly(s: int) -> UniPoly:
    """(s-1)^(s-1) z^s - s^s (1-z)^(s-1)."""
    if s < 2:
        raise ValueError("s must be >= 2")
    z = UniPoly.z()
    return z**s * (s - 1) ** (s - 1) - UniPoly((1, -1)) ** (s - 1) * s**s


def psi_poly(s: int) -> UniPoly:
    """z^(s-1) (z + s) - (s-1)^(s-1)."""
    if s < 2:
        raise ValueError("s must be >= 2")
    return UniPoly((0,) * (s - 1) + (s, 1)) - (s - 1) ** (s - 1)


@lru_cache(maxsize=None)
def nontrivial_factor(s: int) -> UniPoly:
    """psi_s for even s; psi_s / (z + s - 1)^2 for odd s."""
    psi = psi_poly(s)
    if s % 2 == 0:
        return psi
    return psi.exact_div(UniPoly((s - 1, 1)) ** 2)


def y_to_x_poly(P: UniPoly, s: int) -> UniPoly:
    """x^d P(s(1 - x)/x): the polynomial satisfied by x = s/(y + s) when P(y) = 0."""
    d = P.degree
    one_minus = UniPoly((1, -1))
    z = UniPoly.z()
    out = UniPoly()
    for k, c in enumerate(P.coeffs):
        out = out + one_minus**k * z ** (d - k) * (c * Fraction(s) ** k)
    return out.primitive()


@lru_cache(maxsize=None)
def positive_root(s: int) -> AlgebraicReal:
    """The positive root y of psi_s."""
    return isolate_root(nontrivial_factor(s), Interval(0, s - 1))


@lru_cache(maxsize=None)
def x_of_s(s: int) -> AlgebraicReal:
    """The unique root of phi_s in (0, 1), as an algebraic real."""
    if s < 2:
        raise ValueError("s must be >= 2")
    Q = y_to_x_poly(nontrivial_factor(s), s)
    x = isolate_root(Q, Interval(0, 1))
    if not alg_is_root(phi_poly(s), x):
        raise InvariantViolation(f"transported root does not satisfy phi_{s}")
    return x


def least_prime_factor(n: int) -> int:
    if n < 2:
        raise ValueError("n must be >= 2")
    return min(factorint(n))


def _delta_interval(s: int, log_base: int, bits: int = 128):
    iv = iv_context(bits)
    t = iv.mpf(s - 1)
    return iv.log(iv.mpf(log_base)) * t / (1 + iv.log(t))


def delta_bound(s: int, variant: str = "exact", bits: int = 128) -> Fraction:
    """Certified rational lower bound on the degree bound.

    ``variant`` is "exact" (uses the least prime factor of s-1), "even"
    (log 3) or "odd" (log 2); "parity" picks by the parity of s.
    """
    if s < 2 or (variant == "exact" and s < 3):
        raise ValueError("degree bound needs s >= 3 (s >= 2 for parity variants)")
    if variant == "parity":
        variant = "even" if s % 2 == 0 else "odd"
    base = {"even": 3, "odd": 2}.get(variant)
    if base is None:
        if variant != "exact":
            raise ValueError(f"unknown variant {variant!r}")
        base = least_prime_factor(s - 1)
    return interval_bounds(_delta_interval(s, base, bits))[0]


def delta0(s: int) -> Fraction:
    return delta_bound(s, "even")


def delta1(s: int) -> Fraction:
    return delta_bound(s, "odd")


@dataclass(frozen=True)
class CValue:
    s: Fraction
    lo: Fraction
    hi: Fraction
    precision_bits: int

    def approx(self):
        ctx = mp_context(self.precision_bits)
        return frac_mp(ctx, (self.lo + self.hi) / 2)


def _u_minus_one(iv, s, t):
    s_iv = frac_iv(iv, s)
    return t * iv.exp((s_iv - 1) * (iv.log(s_iv + t) - iv.log(s_iv - 1))) - 1


@lru_cache(maxsize=512)
def c_of_s(s, precision: int = 128) -> CValue:
    """Root in (0, 1) of t ((s + t)/(s - 1))^(s - 1) = 1, by certified bisection."""
    s = Fraction(s)
    if s <= 1:
        raise ValueError("s must exceed 1")
    iv = iv_context(precision + 32)
    lo, hi = Fraction(0), Fraction(1)
    if not (_u_minus_one(iv, s, frac_iv(iv, lo)) < 0) or not (_u_minus_one(iv, s, frac_iv(iv, hi)) > 0):
        raise RootLocalizationError("c(s) bracket (0, 1) not confirmed")
    target = Fraction(1, 2**precision)
    while hi - lo > target:
        mid = (lo + hi) / 2
        v = _u_minus_one(iv, s, frac_iv(iv, mid))
        if v > 0:
            hi = mid
        elif v < 0:
            lo = mid
        else:
            break  # sign undecidable at this precision; bracket stays certified
    return CValue(s, lo, hi, precision)


C0_LIMIT = "0.278465"


@dataclass(frozen=True)
class ComplexPair:
    j: int
    theta: tuple[Fraction, Fraction]
    r: tuple[Fraction, Fraction]
    rho: tuple[Fraction, Fraction]

    def mid(self, which: str) -> Fraction:
        lo, hi = getattr(self, which)
        return (lo + hi) / 2


@dataclass
class RootReport:
    s: int
    precision_bits: int
    positive_root: AlgebraicReal
    negative_root: AlgebraicReal | int
    negative_multiplicity: int
    complex_pairs: list[ComplexPair]
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.complex_pairs)

    @property
    def root_count(self) -> int:
        return 1 + self.negative_multiplicity + 2 * self.m

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _G_iv(iv, s: int, theta):
    return (
        iv.sin(theta) * iv.mpf(s) ** s * (-1) ** (s - 1) * iv.sin((s - 1) * theta) ** (s - 1)
        - iv.mpf(s - 1) ** (s - 1) * iv.sin(s * theta) ** s
    )


def _theta_bracket(iv, s: int, j: int, precision: int) -> tuple[Fraction, Fraction]:
    pi_lo, pi_hi = interval_bounds(iv.pi)
    # interval I_j = (2 pi j/s, 2 pi j/(s-1)), endpoints as rationals just inside
    lo = pi_hi * 2 * j / s
    hi = pi_lo * 2 * j / (s - 1)
    glo, ghi = _G_iv(iv, s, frac_iv(iv, lo)), _G_iv(iv, s, frac_iv(iv, hi))
    if not (glo > 0 and ghi < 0):
        raise RootLocalizationError(f"G_{s} does not change sign on I_{j}")
    target = Fraction(1, 2**precision)
    while hi - lo > target:
        mid = (lo + hi) / 2
        g = _G_iv(iv, s, frac_iv(iv, mid))
        if g > 0:
            lo = mid
        elif g < 0:
            hi = mid
        else:
            break
    if hi - lo > Fraction(1, 2 ** (precision // 2)):
        raise RootLocalizationError(f"theta_{j} bracket stalled at width {float(hi - lo):.3e}")
    return lo, hi


def _strictly_less(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]) -> bool:
    return a[1] < b[0]


def localize_roots(s: int, precision: int = 256) -> RootReport:
    """Every root of psi_s: exact real roots plus the complex pairs."""
    if s < 2:
        raise ValueError("s must be >= 2")
    psi = psi_poly(s)
    y = positive_root(s)
    checks: dict[str, bool] = {}

    if s % 2 == 0:
        neg: AlgebraicReal | int = isolate_root(psi, Interval(-s - 1, 1 - s))
        neg_mult = 1
        c = c_of_s(s, 64)
        nlo, nhi = neg.lo, neg.hi
        checks["negative_root_in_(-s-1,1-s)"] = -s - 1 < nlo and nhi < 1 - s
        # the bracket -s - c(s) must meet the isolating interval
        checks["negative_root_is_-s-c(s)"] = not (-s - c.hi > nhi or -s - c.lo < nlo)
        checks["negative_root_count"] = sturm_count(psi, Interval(-s - 2, 0)) == 1
    else:
        neg = 1 - s
        neg_mult = 2
        d1, d2 = psi.derivative(), psi.derivative().derivative()
        checks["double_root_at_1-s"] = psi(neg) == 0 and d1(neg) == 0 and d2(neg) != 0
        checks["negative_root_count"] = sturm_count(psi, Interval(-s - 2, 0)) == 1
    checks["positive_root_unique"] = sturm_count(psi, Interval(0, s)) == 1

    iv = iv_context(precision + 32)
    m = s // 2 - 1
    pairs: list[ComplexPair] = []
    for j in range(1, m + 1):
        tlo, thi = _theta_bracket(iv, s, j, precision)
        th = iv.mpf([frac_iv(iv, tlo).a, frac_iv(iv, thi).b])
        r_iv = -s * iv.sin((s - 1) * th) / iv.sin(s * th)
        rho_iv = s * iv.sin(th) / iv.sin(s * th)
        pairs.append(ComplexPair(j, (tlo, thi), interval_bounds(r_iv), interval_bounds(rho_iv)))

    report = RootReport(s, precision, y, neg, neg_mult, pairs, checks)
    checks["root_census"] = report.root_count == s

    # ordering chain r0 < r1 < ... < rm < s-1 and rho0 > ... > rhom > 1
    y_fine = y.refine(Fraction(1, 2 ** (precision // 2)))
    r_list = [(y_fine.lo, y_fine.hi)] + [pr.r for pr in pairs]
    rho_list = [(s + y_fine.lo, s + y_fine.hi)] + [pr.rho for pr in pairs]
    checks["order_r"] = all(_strictly_less(a, b) for a, b in zip(r_list, r_list[1:])) and r_list[-1][1] < s - 1
    checks["order_rho"] = all(_strictly_less(b, a) for a, b in zip(rho_list, rho_list[1:])) and rho_list[-1][0] > 1
    checks["modulus_below_s-1"] = all(hi < s - 1 for _, hi in r_list)
    if s > 3:
        checks["r0_above_1"] = y_fine.lo > 1
    if s >= 26:
        R = _R_bound(iv, s)
        checks["r0_above_R"] = R[1] < y_fine.lo
    if m >= 1:
        checks["rho_m_lower_bound"] = _rho_m_bound_ok(iv, s, pairs[-1].rho)
        checks["theta_in_I_j"] = all(_theta_inside(iv, s, pr) for pr in pairs)
    checks["reconstruction"] = _reconstruction_ok(report, precision)
    return report


def _theta_inside(iv, s: int, pr: ComplexPair) -> bool:
    pi_lo, pi_hi = interval_bounds(iv.pi)
    return pi_hi * 2 * pr.j / s < pr.theta[0] and pr.theta[1] < pi_lo * 2 * pr.j / (s - 1)


def _R_bound(iv, s: int) -> tuple[Fraction, Fraction]:
    t = iv.mpf(s - 1)
    return interval_bounds(t / (1 + (1 + iv.log(t)) / t))


def _rho_m_bound_ok(iv, s: int, rho_m: tuple[Fraction, Fraction]) -> bool:
    if s % 2 == 0:
        b = iv.mpf(s) * iv.sin(iv.pi / (s - 1))
        return interval_bounds(b)[1] < rho_m[0] and interval_bounds(iv.pi)[1] < interval_bounds(b)[0]
    if s == 5:
        b = 5 * iv.sin(2 * iv.pi / 5)
    elif s >= 7:
        b = iv.mpf(s) * iv.sin(2 * iv.pi / (s - 1))
    else:
        return True
    return interval_bounds(b)[1] < rho_m[0]


def _reconstruction_ok(rep: RootReport, precision: int) -> bool:
    ctx = mp_context(precision)
    s = rep.s
    roots = [rep.positive_root.approx(ctx)]
    if isinstance(rep.negative_root, AlgebraicReal):
        roots.append(rep.negative_root.approx(ctx))
    else:
        roots += [ctx.mpf(rep.negative_root)] * rep.negative_multiplicity
    for pr in rep.complex_pairs:
        th = frac_mp(ctx, pr.mid("theta"))
        r = -s * ctx.sin((s - 1) * th) / ctx.sin(s * th)
        a = r * ctx.expj(th)
        roots += [a, ctx.conj(a)]
    coeffs = [ctx.mpc(1)]
    for rt in roots:
        nxt = [ctx.mpc(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= c * rt
        coeffs = nxt
    psi = psi_poly(s)
    if len(coeffs) != len(psi.coeffs):
        return False
    scale = frac_mp(ctx, Fraction(s - 1) ** (s - 1))
    tol = ctx.mpf(2) ** (-(precision // 2))
    return all(abs(c - frac_mp(ctx, t)) <= tol * scale for c, t in zip(coeffs, psi.coeffs))


@dataclass(frozen=True)
class IntegerInvariants:
    s: int
    M: int
    N: int
    n: int
    d: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.M, self.N, self.n, self.d)


def _minimal_factor(s: int) -> UniPoly:
    """Minimal polynomial of y (monic integer): the nontrivial factor if certified irreducible."""
    P = nontrivial_factor(s)
    verdict = irreducibility_certify(P)
    if verdict.status == "irreducible":
        return P
    if verdict.status == "composite":
        from sympy import Poly, factor_list, symbols

        z = symbols("z")
        sp = Poly(list(reversed([int(c) for c in P.coeffs])), z)
        y = positive_root(s)
        for fac, _ in factor_list(sp.as_expr())[1]:
            cand = UniPoly(reversed([int(c) for c in Poly(fac, z).all_coeffs()]))
            if alg_is_root(cand, y):
                return cand.monic()
    return P


def integer_invariants(s: int) -> IntegerInvariants:
    """(M, N, n, d) for the minimal polynomial of the positive root y."""
    if s < 2:
        raise ValueError("s must be >= 2")
    P = _minimal_factor(s)
    d = P.degree
    M = (-1) ** d * P(Fraction(-s))
    N = (-1) ** d * P(Fraction(0))
    if s == 2:
        return IntegerInvariants(2, int(M), int(N), int(Fraction(1) / N), d)
    n = Fraction(s - 1) ** d / N
    if n.denominator != 1:
        raise InvariantViolation(f"n = {n} is not an integer for s = {s}")
    n = int(n)
    if not ((s - 1) % n == 0 and abs(n) >= 2 and M == Fraction(n) ** (s - 1) and n * N == (s - 1) ** d):
        raise InvariantViolation(f"integer invariants fail for s = {s}: M={M}, N={N}, n={n}, d={d}")
    return IntegerInvariants(s, int(M), int(N), n, d)


@dataclass
class DegreeReport:
    s: int
    p_s: int | None
    delta: Fraction | None
    factor_degrees: list[int]
    status: str
    invariants: IntegerInvariants | None = None


def degree_report(s: int, with_invariants: bool = True) -> DegreeReport:
    P = nontrivial_factor(s)
    verdict = irreducibility_certify(P)
    if verdict.status == "irreducible":
        degs = [P.degree]
    else:
        degs = [_minimal_factor(s).degree]
    p_s = least_prime_factor(s - 1) if s >= 3 else None
    delta = delta_bound(s) if s >= 3 else None
    inv = integer_invariants(s) if with_invariants else None
    return DegreeReport(s, p_s, delta, degs, verdict.status, inv)


@dataclass
class DegreeClassification:
    max_deg: int
    candidates: list[int]
    refined: list[int]
    degrees: dict[int, int | None]


def degree_classify(max_deg: int) -> DegreeClassification:
    """Values of s for which deg x <= max_deg is possible.

    Candidates come from the parity bounds (log 3 for even s, log 2 for odd
    s); each candidate is then settled by the degree of the minimal
    polynomial of y, which equals the degree of x.
    """
    if max_deg < 1:
        raise ValueError("max_deg must be >= 1")
    candidates: list[int] = []
    s = 2
    open_parities = {0, 1}
    while open_parities:
        if s % 2 in open_parities:
            bound = delta_bound(s, "parity")
            if bound <= max_deg:
                candidates.append(s)
            else:
                # the parity bounds are increasing in s, so this parity is finished
                open_parities.discard(s % 2)
        s += 1
    degrees: dict[int, int | None] = {}
    refined = []
    for c in sorted(candidates):
        P = nontrivial_factor(c)
        verdict = irreducibility_certify(P)
        deg = P.degree if verdict.status == "irreducible" else (
            _minimal_factor(c).degree if verdict.status == "composite" else None)
        degrees[c] = deg
        if deg is None or deg <= max_deg:
            refined.append(c)
    return DegreeClassification(max_deg, sorted(candidates), refined, degrees)
