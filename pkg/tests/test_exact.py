from fractions import Fraction as F

import mpmath
import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hypergpf.algebraic import phi_poly, psi_poly
from hypergpf.exact import (
    AlgebraicReal,
    Interval,
    UniPoly,
    alg_is_root,
    irreducibility_certify,
    isolate_root,
    minimal_polynomial,
    poly_gcd,
    sturm_count,
)

Z = sympy.Symbol("z")


def P(*coeffs):
    """Polynomial from coefficients, lowest degree first."""
    return UniPoly(F(c) for c in coeffs)


def to_sympy(f: UniPoly):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in f.coeffs])), Z)


small = st.fractions(min_value=-6, max_value=6, max_denominator=5)
polys = st.lists(small, min_size=1, max_size=6).map(lambda cs: UniPoly(cs)).filter(lambda f: not f.is_zero())


# --- gcd -----------------------------------------------------------------

def test_gcd_coprime():
    assert poly_gcd(P(-1, 2, 1), P(-1, 1)) == P(1)


def test_gcd_psi3_trivial_factor():
    psi3 = psi_poly(3)
    assert psi3 == P(-4, 0, 3, 1)
    assert poly_gcd(psi3, P(2, 1)) == P(2, 1)


def test_gcd_idempotent():
    f = P(6, -4, 2)
    assert poly_gcd(f, f) == f.monic()


@given(polys, polys, polys)
def test_gcd_divides_both(f, g, h):
    fh, gh = f * h, g * h
    d = poly_gcd(fh, gh)
    assert (fh % d).is_zero() and (gh % d).is_zero()
    assert h.monic().divides(d) if h.degree > 0 else True


@given(polys, polys)
def test_gcd_matches_sympy(f, g):
    ours = poly_gcd(f, g)
    ref = sympy.gcd(to_sympy(f), to_sympy(g)).monic()
    assert to_sympy(ours).all_coeffs() == ref.all_coeffs()


# --- Sturm counts ------------------------------------------------------------

def test_sturm_examples():
    assert sturm_count(P(-1, 2, 1), Interval(F(0), F(1))) == 1
    assert sturm_count(phi_poly(3), Interval(F(0), F(1))) == 1
    assert sturm_count(psi_poly(4), Interval(F(0), F(3))) == 1
    assert sturm_count(psi_poly(4), Interval(F(-10), F(10))) == 2


@given(polys, small, small, small)
def test_sturm_additive(f, a, b, c):
    a, b, c = sorted((a, b, c))
    assume(a < b < c and f.degree >= 1 and f(b) != 0)
    total = sturm_count(f, Interval(a, c))
    assert sturm_count(f, Interval(a, b)) + sturm_count(f, Interval(b, c)) == total


@given(polys)
def test_sturm_matches_sympy_root_count(f):
    assume(f.degree >= 1)
    distinct = {r for r in sympy.real_roots(to_sympy(f)) if -7 < r <= 7}
    assert sturm_count(f, Interval(F(-7), F(7))) == len(distinct)


# --- isolation -------------------------------------------------------------

def test_isolate_quadratic_irrational():
    x2 = isolate_root(phi_poly(2), Interval(F(0), F(1)))
    assert not x2.is_rational()
    assert float(x2.lo) < float(2 * mpmath.sqrt(2) - 2) < float(x2.hi)
    assert abs(float(x2) - 0.8284271247461900976) < 1e-15


def test_isolate_collapses_onto_rational():
    x3 = isolate_root(phi_poly(3), Interval(F(0), F(1)))
    assert x3.is_rational() and x3.rational_value() == F(3, 4)
    five = isolate_root(P(-5, 1), Interval(F(0), F(10)))
    assert five.is_rational() and five.rational_value() == 5


def test_isolate_rejects_ambiguous_interval():
    with pytest.raises(ValueError):
        isolate_root(P(-1, 0, 1), Interval(F(-2), F(2)))


def test_refine_halves_and_brackets():
    x = isolate_root(phi_poly(2), Interval(F(0), F(1)))
    f = x.defining
    width = x.hi - x.lo
    for k in range(1, 6):
        y = x.refine(width / 2**k)
        assert y.hi - y.lo <= width / 2**k
        assert x.lo <= y.lo < y.hi <= x.hi
        assert f(y.lo) * f(y.hi) < 0


# --- zero testing ----------------------------------------------------------

def test_alg_is_root_examples():
    x3 = isolate_root(phi_poly(3), Interval(F(0), F(1)))
    x2 = isolate_root(phi_poly(2), Interval(F(0), F(1)))
    assert alg_is_root(P(F(-3, 4), 1), x3)
    assert not alg_is_root(P(F(-1, 2), 1), x3)
    assert alg_is_root(phi_poly(2), x2)
    assert not alg_is_root(P(-2, 0, 1), x2)


@settings(max_examples=1000)
@given(st.integers(2, 7), polys, polys)
def test_alg_is_root_agrees_with_numerics(s, g, h):
    x = isolate_root(psi_poly(s), Interval(F(0), F(s)))
    target = psi_poly(s) * h if h.degree > 0 else g
    exact = alg_is_root(target, x)
    ctx = mpmath.mp.clone()
    ctx.prec = 400
    val = target.eval_mp(x.approx(ctx), ctx)
    scale = 1 + sum(abs(float(c)) for c in target.coeffs) * (s + 1) ** target.degree
    assert exact == (abs(val) < F(1, 10**50) * scale)


# --- irreducibility --------------------------------------------------------

def test_irreducibility_examples():
    assert irreducibility_certify(psi_poly(4)).status == "irreducible"
    v = irreducibility_certify(psi_poly(3))
    assert v.status == "composite" and v.factor.monic() == P(2, 1)
    v = irreducibility_certify(P(-1, 0, 1))
    assert v.status == "composite" and v.factor.degree == 1 and alg_is_root(v.factor, AlgebraicReal(P(-1, 1), F(1), F(1)))


@pytest.mark.parametrize("s", range(2, 13))
def test_irreducibility_agrees_with_sympy(s):
    f = psi_poly(s)
    ours = irreducibility_certify(f)
    ref = to_sympy(f).is_irreducible
    if ours.status == "irreducible":
        assert ref
    elif ours.status == "composite":
        assert not ref
        assert (f % ours.factor).is_zero() and 0 < ours.factor.degree < f.degree


def test_minimal_polynomial():
    x2 = isolate_root(phi_poly(2), Interval(F(0), F(1)))
    x3 = isolate_root(phi_poly(3), Interval(F(0), F(1)))
    assert minimal_polynomial(x2) == P(-4, 4, 1)
    assert minimal_polynomial(x3) == P(-3, 4)
    y3 = isolate_root(psi_poly(3), Interval(F(0), F(3)))
    assert minimal_polynomial(y3) == P(-1, 1)
