from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypergpf.algebraic import x_of_s
from hypergpf.certifier import (
    Classification,
    Refusal,
    assemble_v,
    build_certificate,
    candidate_multiset,
    cancel_gamma,
    chi,
    classify,
    diagnose,
    dual,
    dual_v,
    first_failing_k,
    multiple,
    multiple_v,
    nsc_certify,
    reciprocal,
    reciprocal_v,
    search,
    square_symmetry,
)
from hypergpf.data import HyperData
from hypergpf.kernels import F_k

HALF = F(1, 2)


@pytest.fixture(scope="module")
def certs():
    return search(5, 4, precision=None)


# --- classification and the decision procedure -------------------------------------

def test_classify_examples(x3):
    assert classify(HyperData(1, 0, 3, F(0), F(-2), HALF)) == Classification.ELEMENTARY
    assert classify(HyperData.south(1, 3, 0, x3)) == Classification.CANDIDATE
    assert classify(HyperData.south(1, 2, 0, HALF)) == Classification.EXCLUDED


def test_classify_outside_region():
    with pytest.raises(ValueError):
        classify(HyperData(1, 1, 3, F(0), HALF, HALF))


def test_nsc_examples():
    assert nsc_certify(1, 3, 0, 1)
    assert nsc_certify(2, 2, 0, 0)
    assert not nsc_certify(1, 2, 0, 0)


def test_nsc_spot_factor():
    assert chi(0, 1, 3) == F(-1, 3) and chi(1, 1, 3) == F(-2, 3)
    x = F(3, 4)
    assert F_k(1, chi(0, 1, 3), HALF - 1)(x) == F(-1, 4)
    assert F_k(1, chi(1, 1, 3), HALF - 1)(x) == 0


def test_nsc_rejects_bad_arguments():
    with pytest.raises(ValueError):
        nsc_certify(1, 3, 0, 0)


def test_first_failing_k_on_non_solution():
    assert first_failing_k(1, 4, 0, 2) is not None
    assert first_failing_k(1, 3, 0, 1) is None


# --- search ---------------------------------------------------------------------------

def _labels(cs):
    return [(c.p, c.r, c.lam.a) for c in cs]


def test_search_examples():
    assert _labels(search(3, 1, precision=None)) == [(1, 3, F(0)), (1, 3, F(1, 3))]
    assert _labels(search(2, 2, precision=None)) == [(2, 4, F(0))]
    assert search(2, 1, precision=None) == []


def test_search_primitive_accounting(certs):
    prim = [c for c in certs if c.primitive]
    assert _labels(prim) == [(2, 4, F(0)), (1, 3, F(0)), (1, 3, F(1, 3))]
    for c in certs:
        if not c.primitive:
            base, k = c.multiple_of
            assert c.p == base * k and any(b.p == base and b.s == c.s and b.lam.a == c.lam.a for b in prim)
    assert [c.s for c in certs] == sorted(c.s for c in certs)


# --- v-sets and golden formulas ------------------------------------------------------------

GOLDEN = {
    # solution, dual and reciprocal Gamma quotients after cancellation
    (1, 3, F(0)): {
        "gpf1": ((F(1, 3), F(2, 3)), (HALF, HALF)),
        "gpf2": ((F(0), F(2, 3)), (F(1, 6), HALF)),
        "gpf-r": ((F(0), HALF), (F(1, 4), F(1, 4))),
    },
    (1, 3, F(1, 3)): {
        "gpf1": ((F(0), F(2, 3)), (F(1, 6), HALF)),
        "gpf2": ((F(1, 3), F(2, 3)), (HALF, HALF)),
        "gpf-r": ((F(0), HALF), (F(1, 12), F(5, 12))),
    },
    (2, 4, F(0)): {
        "gpf1": ((F(1, 4), F(3, 4)), (F(3, 8), F(5, 8))),
        "gpf2": ((F(1, 4), F(3, 4)), (F(3, 8), F(5, 8))),
        "gpf-r": ((F(0), HALF), (F(1, 8), F(3, 8))),
    },
}


def test_golden_reduced_formulas(certs):
    got = {(c.p, c.r, c.lam.a): c.reduced_formulas() for c in certs if c.primitive}
    assert got == GOLDEN


def test_assemble_v_examples(lam_r1, lam_ir):
    v, vs = assemble_v(lam_r1)
    assert v == (0, HALF, HALF) and vs == (F(-1, 6), 0, F(1, 6))
    v, vs = assemble_v(lam_ir)
    assert v == (0, F(3, 8), HALF, F(5, 8)) and sum(v) == F(3, 2)
    assert cancel_gamma([F(i, 3) for i in range(3)], assemble_v(lam_r1)[0]) == ((F(1, 3), F(2, 3)), (HALF, HALF))


def test_dual_examples(lam_r1, lam_ir):
    d = dual(lam_r1)
    assert (d.p, d.r, d.a, d.b) == (1, 3, F(1, 3), HALF)
    vp = dual_v(assemble_v(lam_r1)[1], 3)
    assert sorted(vp) == [F(1, 6), F(1, 3), HALF]
    assert dual(lam_ir).a == 0


def test_reciprocal_examples(lam_r1, lam_r2, lam_ir):
    R = reciprocal(lam_r1)
    assert (R.p, R.q, R.r, R.a, R.b) == (-1, 0, 2, F(5, 4), HALF) and R.x.rational_value() == F(1, 4)
    assert sorted(reciprocal_v(assemble_v(lam_r1)[0], lam_r1)) == [F(1, 4), F(1, 4)]
    R2 = reciprocal(lam_r2)
    assert (R2.p, R2.r, R2.a) == (-1, 2, F(3, 4)) and R2.x.rational_value() == F(1, 4)
    R3 = reciprocal(lam_ir)
    assert (R3.p, R3.r, R3.a) == (-2, 2, F(3, 2))
    assert abs(float(R3.x) - (3 - 2 * 2**0.5)) < 1e-15
    assert sorted(reciprocal_v(assemble_v(lam_ir)[0], lam_ir)) == [F(1, 8), F(3, 8)]


def test_involutions(lam_r1, lam_r2, lam_ir):
    for lam in (lam_r1, lam_r2, lam_ir, HyperData.south(3, 7, F(2, 9), F(1, 3))):
        assert dual(dual(lam)) == lam
        assert reciprocal(reciprocal(lam)) == lam
        for kind in ("swap", "euler"):
            assert square_symmetry(square_symmetry(lam, kind), kind) == lam


def test_euler_symmetry_maps_north_to_south():
    north = HyperData(3, 5, 5, F(1, 7), HALF, F(1, 3))
    south = square_symmetry(north, "euler")
    assert (south.p, south.q, south.r) == (2, 0, 5) and south.region == "I"
    assert square_symmetry(HyperData(0, 2, 5, F(1, 3), HALF, F(1, 3)), "swap").region == "I"


def test_multiple_k1_identity(lam_r1):
    assert multiple(lam_r1, 1) == lam_r1
    assert multiple_v((0, HALF, HALF), 1) == (0, HALF, HALF)


@pytest.mark.parametrize("k", [2, 3])
def test_multiple_v_matches_assembly(lam_r1, lam_ir, k):
    for lam in (lam_r1, lam_ir):
        v, _ = assemble_v(lam)
        assert multiple_v(v, k) == assemble_v(multiple(lam, k))[0]


def test_multiple_of_irrational_is_not_primitive(certs):
    four = [c for c in certs if (c.p, c.r) == (4, 8)]
    assert four and not four[0].primitive and four[0].multiple_of == (2, 2)


# --- invariants over every emitted certificate ---------------------------------------------

def test_sum_rules(certs):
    for c in certs:
        half_r = F(c.r - 1, 2)
        assert sum(c.v) == sum(c.v_prime) == half_r == c.sum_check
        assert sum(c.u) == sum(c.v)


def test_membership_and_division(certs):
    for c in certs:
        cand = candidate_multiset(c.lam)
        assert not (Counter(c.v) + Counter(c.v_star) - cand)
        assert Counter(c.v) + Counter(c.v_star) == cand
        assert all(0 <= t < 1 for t in c.v)
        tail = Counter((i + c.lam.a) / c.p for i in range(c.p))
        assert not (tail - Counter(c.v))
        assert c.consistency_errors() == []


def test_dual_certificate_closure(certs):
    for c in certs:
        back = build_certificate(c.p, c.s, c.jp, precision=None)
        assert back.lam == c.dual_lam
        assert back.v == tuple(sorted(c.v_prime))


# --- refusals -------------------------------------------------------------------------------

def test_diagnose():
    ok = diagnose(1, 3, F(0))
    assert ok == (1, 3, 0)
    parity = diagnose(1, 2, F(0))
    assert isinstance(parity, Refusal) and parity.condition == "parity"
    aform = diagnose(1, 3, F(1, 7))
    assert isinstance(aform, Refusal) and aform.condition == "a-form"
    assert isinstance(diagnose(1, 4, F(0)), Refusal)


@given(st.integers(1, 3), st.integers(2, 6), st.integers(0, 6))
def test_certify_agrees_with_search(p, s, j):
    if j > s - 2:
        return
    verdict = diagnose(p, p * s, F(j, s))
    assert (not isinstance(verdict, Refusal)) == nsc_certify(p, s, j, s - 2 - j)
