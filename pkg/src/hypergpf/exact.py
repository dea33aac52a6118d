"""Exact rational arithmetic: dense univariate polynomials, Sturm counting and
real algebraic numbers with a decidable zero test.

Rationals are :class:`fractions.Fraction` throughout; no floating point enters
this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_ddf_zassenhaus, gf_from_int_poly, gf_monic, gf_sqf_p

Rational = Fraction


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or a 'num/den' string")
    return Fraction(value)


class UniPoly:
    """Dense polynomial over Q, coefficients stored lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def _raw(cls, coeffs: list) -> "UniPoly":
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        p = object.__new__(cls)
        p.coeffs = tuple(coeffs)
        return p

    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def z(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        out = cls((1,))
        for r in roots:
            out = out * cls((-as_rational(r), 1))
        return out

    # -- basic queries ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return self.pretty()

    def pretty(self, var: str = "z") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- ring operations ----------------------------------------------------
    def __neg__(self) -> "UniPoly":
        return UniPoly._raw([-c for c in self.coeffs])

    def __add__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return (-self) + other

    def __mul__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            k = as_rational(other)
            if k == 0:
                return UniPoly()
            return UniPoly._raw([c * k for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return UniPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        if n < 0:
            raise ValueError("negative power")
        out, base = UniPoly((1,)), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "UniPoly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv = 1 / other.lc
        if len(rem) - 1 < db:
            return UniPoly(), self
        quo = [Fraction(0)] * (len(rem) - db)
        bc = other.coeffs
        for k in range(len(rem) - 1 - db, -1, -1):
            q = rem[k + db] * inv
            quo[k] = q
            if q:
                for i, c in enumerate(bc):
                    rem[k + i] -= q * c
        return UniPoly._raw(quo), UniPoly._raw(rem[:db])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return q

    def divides(self, other: "UniPoly") -> bool:
        return (other % self).is_zero()

    # -- evaluation and calculus ---------------------------------------------
    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mp(self, x, ctx):
        """Horner evaluation in an mpmath context (coefficients converted once)."""
        acc = ctx.zero
        for c in reversed(self.coeffs):
            acc = acc * x + ctx.mpf(c.numerator) / c.denominator
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly._raw([k * c for k, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def reflect(self) -> "UniPoly":
        """f(1 - z)."""
        return self.compose(UniPoly((1, -1)))

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def content(self) -> Fraction:
        """Positive rational c with f/c primitive in Z[z]."""
        if self.is_zero():
            return Fraction(0)
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, int(c * den))
        return Fraction(g, den)

    def primitive(self) -> "UniPoly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if self.is_zero():
            return self
        c = self.content()
        if self.lc < 0:
            c = -c
        return self * (1 / c)

    def integer_coeffs(self) -> list[int]:
        prim = self.primitive()
        return [int(c) for c in prim.coeffs]


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def _prim_sign_preserving(f: UniPoly) -> UniPoly:
    """Divide by the positive content only (keeps the sign of every value)."""
    if f.is_zero():
        return f
    return f * (1 / f.content())


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd over Q; gcd(0, 0) is 0."""
    a, b = _prim_sign_preserving(f), _prim_sign_preserving(g)
    while not b.is_zero():
        a, b = b, _prim_sign_preserving(a % b)
    return a.monic()


def squarefree_part(f: UniPoly) -> UniPoly:
    if f.degree <= 0:
        return f.monic()
    return f.exact_div(poly_gcd(f, f.derivative())).monic()


def sturm_chain(f: UniPoly) -> tuple[UniPoly, ...]:
    chain = [_prim_sign_preserving(f), _prim_sign_preserving(f.derivative())]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        chain.append(_prim_sign_preserving(-(chain[-2] % chain[-1])))
    if chain[-1].is_zero():
        chain.pop()
    return tuple(chain)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def chain_variations(chain: Sequence[UniPoly], x: Fraction) -> int:
    return _variations([_sign(p(x)) for p in chain])


def sturm_count(f: UniPoly, iv: Interval) -> int:
    """Number of distinct real roots of ``f`` in the half-open interval (lo, hi]."""
    if f.is_zero():
        raise ValueError("sturm_count of the zero polynomial")
    g = squarefree_part(f)
    if g.degree <= 0:
        return 0
    chain = sturm_chain(g)
    return chain_variations(chain, iv.lo) - chain_variations(chain, iv.hi)


@dataclass(frozen=True)
class AlgebraicReal:
    """Real root of a squarefree polynomial, pinned by an isolating interval.

    Either ``lo == hi`` (the value is that rational) or the defining
    polynomial takes opposite nonzero signs at the two endpoints.
    """

    defining: UniPoly
    lo: Fraction
    hi: Fraction

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)

    @property
    def degree_bound(self) -> int:
        return self.defining.degree

    def is_rational(self) -> bool:
        return self.lo == self.hi

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not (yet) known to be rational")
        return self.lo

    def refine(self, width: Fraction) -> "AlgebraicReal":
        """Bisect on exact rationals until the interval is at most ``width`` wide."""
        if self.is_rational():
            return self
        f, lo, hi = self.defining, self.lo, self.hi
        slo = _sign(f(lo))
        while hi - lo > width:
            mid = (lo + hi) / 2
            sm = _sign(f(mid))
            if sm == 0:
                return AlgebraicReal(f, mid, mid)
            if sm == slo:
                lo = mid
            else:
                hi = mid
        return AlgebraicReal(f, lo, hi)

    def approx(self, ctx):
        """Value as an mpf at the working precision of ``ctx``."""
        if self.is_rational():
            v = self.lo
            return ctx.mpf(v.numerator) / v.denominator
        fine = _refined(self, ctx.prec + 16)
        mid = (fine.lo + fine.hi) / 2
        return ctx.mpf(mid.numerator) / mid.denominator

    def __float__(self) -> float:
        r = self.refine(Fraction(1, 2**60))
        return float((r.lo + r.hi) / 2)

    def one_minus(self) -> "AlgebraicReal":
        """The algebraic number 1 - self."""
        g = self.defining.reflect().primitive()
        return AlgebraicReal(g, 1 - self.hi, 1 - self.lo)

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.lo)
        return f"root of {self.defining} in [{self.lo}, {self.hi}] (~{float(self):.12g})"


@lru_cache(maxsize=256)
def _refined(alpha: AlgebraicReal, bits: int) -> AlgebraicReal:
    return alpha.refine(Fraction(1, 2**bits))


def isolate_root(f: UniPoly, iv: Interval) -> AlgebraicReal:
    """Pin down the unique root of ``f`` in (lo, hi] to width at most 2^-32."""
    if f.is_zero():
        raise ValueError("zero polynomial has no isolated roots")
    g = squarefree_part(f).primitive()
    if g.degree < 1:
        raise ValueError("constant polynomial has no roots")
    chain = sturm_chain(g)
    lo, hi = iv.lo, iv.hi
    v_lo, v_hi = chain_variations(chain, lo), chain_variations(chain, hi)
    if v_lo - v_hi != 1:
        raise ValueError(f"expected exactly one root of {g} in ({lo}, {hi}], found {v_lo - v_hi}")
    if g.degree == 1:
        root = -g.coeffs[0] / g.coeffs[1]
        return AlgebraicReal(g, root, root)
    if g(hi) == 0:
        return AlgebraicReal(g, hi, hi)
    target = Fraction(1, 2**32)
    # keep the root in (lo, hi] with g(lo) != 0 and g(hi) != 0
    while g(lo) == 0 or hi - lo > target:
        mid = (lo + hi) / 2
        if g(mid) == 0:
            return AlgebraicReal(g, mid, mid)
        v_mid = chain_variations(chain, mid)
        if v_lo - v_mid == 1:
            hi, v_hi = mid, v_mid
        else:
            lo, v_lo = mid, v_mid
    return AlgebraicReal(g, lo, hi)


def alg_is_root(g: UniPoly, alpha: AlgebraicReal) -> bool:
    """Exact test of g(alpha) == 0."""
    if g.is_zero():
        return True
    if alpha.is_rational():
        return g(alpha.lo) == 0
    h = poly_gcd(g, alpha.defining)
    if h.degree < 1:
        return False
    return sturm_count(h, alpha.interval) == 1


def rational_roots(f: UniPoly, max_candidates: int = 200_000) -> list[Fraction] | None:
    """All rational roots of f, or None when the candidate set is too large."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    ints = f.integer_coeffs()
    roots: list[Fraction] = []
    while ints and ints[0] == 0:
        roots.append(Fraction(0))
        ints = ints[1:]
    if len(ints) <= 1:
        return sorted(set(roots))
    a0, an = abs(ints[0]), abs(ints[-1])
    num_divs, den_divs = _divisors(a0, max_candidates), _divisors(an, max_candidates)
    if num_divs is None or den_divs is None or len(num_divs) * len(den_divs) > max_candidates:
        return None
    g = UniPoly(ints)
    seen = set(roots)
    for pn in num_divs:
        for qd in den_divs:
            for cand in (Fraction(pn, qd), Fraction(-pn, qd)):
                if cand not in seen and g(cand) == 0:
                    seen.add(cand)
                    roots.append(cand)
    return sorted(set(roots))


def _divisors(n: int, cap: int) -> list[int] | None:
    from sympy import divisors, factorint

    fac = factorint(n)
    count = 1
    for e in fac.values():
        count *= e + 1
    if count > cap:
        return None
    return [int(d) for d in divisors(n)]


@dataclass(frozen=True)
class IrreducibilityVerdict:
    status: str  # "irreducible" | "composite" | "unknown"
    factor: UniPoly | None = None
    primes: tuple[int, ...] = ()
    possible_degrees: tuple[int, ...] = ()


def _small_primes():
    n = 2
    while True:
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            yield n
        n += 1


def factor_degree_pattern(ints_high_first: list[int], prime: int) -> list[int] | None:
    """Degrees of the irreducible factors mod ``prime``; None if unusable there."""
    if ints_high_first[0] % prime == 0:
        return None
    f = gf_from_int_poly(ints_high_first, prime)
    if not gf_sqf_p(f, prime, ZZ):
        return None
    _, monic = gf_monic(f, prime, ZZ)
    degs: list[int] = []
    for g, d in gf_ddf_zassenhaus(monic, prime, ZZ):
        degs.extend([d] * ((len(g) - 1) // d))
    return degs


def _subset_sums(degs: Sequence[int]) -> set[int]:
    sums = {0}
    for d in degs:
        sums |= {s + d for s in sums}
    return sums


def irreducibility_certify(f: UniPoly, max_primes: int = 60, min_primes: int = 3) -> IrreducibilityVerdict:
    """Three-valued irreducibility test over Q.

    ``composite`` always carries an exact proper factor. ``irreducible`` is
    claimed only when rational roots are excluded (degree <= 3) or when the
    modular factor-degree patterns of at least ``min_primes`` primes leave no
    room for a proper factor.
    """
    if f.degree < 1:
        raise ValueError("irreducibility is defined for degree >= 1")
    f = f.primitive()
    d = f.degree
    if d == 1:
        return IrreducibilityVerdict("irreducible")
    sqf_gcd = poly_gcd(f, f.derivative())
    if sqf_gcd.degree >= 1:
        return IrreducibilityVerdict("composite", factor=sqf_gcd.primitive())
    roots = rational_roots(f)
    if roots:
        return IrreducibilityVerdict("composite", factor=UniPoly((-roots[-1], 1)).primitive())
    if d <= 3 and roots is not None:
        return IrreducibilityVerdict("irreducible")

    ints = list(reversed(f.integer_coeffs()))
    possible = set(range(d + 1))
    used: list[int] = []
    for prime in _small_primes():
        if len(used) >= max_primes:
            break
        degs = factor_degree_pattern(ints, prime)
        if degs is None:
            continue
        used.append(prime)
        possible &= _subset_sums(degs)
        if possible == {0, d} and len(used) >= min_primes:
            return IrreducibilityVerdict("irreducible", primes=tuple(used), possible_degrees=(0, d))
    return IrreducibilityVerdict("unknown", primes=tuple(used), possible_degrees=tuple(sorted(possible)))


def minimal_polynomial(alpha: AlgebraicReal) -> UniPoly:
    """Primitive integer minimal polynomial of alpha (positive leading coefficient)."""
    if alpha.is_rational():
        v = alpha.lo
        return UniPoly((-v.numerator, v.denominator))
    f = alpha.defining.primitive()
    if irreducibility_certify(f).status == "irreducible":
        return f
    from sympy import Poly, factor_list, symbols

    z = symbols("z")
    expr = Poly(list(reversed(f.integer_coeffs())), z).as_expr()
    for fac, _ in factor_list(expr)[1]:
        cand = UniPoly(reversed([int(c) for c in Poly(fac, z).all_coeffs()]))
        if alg_is_root(cand, alpha):
            return cand.primitive()
    raise ArithmeticError("no factor of the defining polynomial vanishes at alpha")
