"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import json
import random
import time
from fractions import Fraction as F

import mpmath
import pytest

from hypergpf.algebraic import (
    c_of_s,
    degree_classify,
    degree_report,
    delta0,
    delta1,
    delta_bound,
    least_prime_factor,
    localize_roots,
    psi_poly,
)
from hypergpf.certifier import build_certificate, search, three_way_grid
from hypergpf.cli import main
from hypergpf.contiguous import A_of_lambda, ShiftVector, canonical_path, contig_product, det_formula, extract_phi
from hypergpf.data import HyperData
from hypergpf.kernels import FormulaInapplicable, P_euler, P_poly, Phi, Phi_euler, eval_special
from hypergpf.numeric import verify_gpf
from hypergpf.serialize import certificate_from
from hypergpf.wx import Lin, WxRatFunc, x1_power, x_power

HALF = F(1, 2)
ORACLE = mpmath.mp.clone()
ORACLE.prec = 400


def _run(capsys, n, title, body):
    """Run body() -> [(name, ok)], print one line, then assert."""
    t0 = time.perf_counter()
    try:
        checks = list(body())
    except Exception as exc:  # a crash is a failed criterion, reported like any other
        checks = [(f"{type(exc).__name__}: {exc}", False)]
    failed = [name for name, ok in checks if not ok]
    line = f"criterion {n}: {'PASS' if not failed else 'FAIL'}  {title}  ({len(checks)} checks, " \
           f"{time.perf_counter() - t0:.1f}s)"
    if failed:
        line += "  failed: " + "; ".join(failed[:5])
    with capsys.disabled():
        print("\n" + line)
    assert not failed, line


# Gamma quotients after cancellation, typed in from the closed forms (numerator, denominator shifts)
SOL_R1 = ((F(1, 3), F(2, 3)), (HALF, HALF))
SOL_R2 = ((F(0), F(2, 3)), (F(1, 6), HALF))
SOL_IR = ((F(1, 4), F(3, 4)), (F(3, 8), F(5, 8)))
RSOL_R1 = ((F(0), HALF), (F(1, 4), F(1, 4)))
RSOL_R2 = ((F(0), HALF), (F(1, 12), F(5, 12)))
RSOL_IR = ((F(0), HALF), (F(1, 8), F(3, 8)))

PRIMITIVES = {(1, 3, F(0)): (1, 3, 0), (1, 3, F(1, 3)): (1, 3, 1), (2, 4, F(0)): (2, 2, 0)}


@pytest.fixture(scope="module")
def primitive_certs():
    return {key: build_certificate(*args) for key, args in PRIMITIVES.items()}


def test_criterion_1_golden_search(capsys, tmp_path):
    def body():
        out = tmp_path / "search.json"
        t0 = time.perf_counter()
        code = main(["search", "--s-max", "3", "--p-max", "2", "--out", str(out)])
        elapsed = time.perf_counter() - t0
        doc = json.loads(out.read_text())
        certs = [certificate_from(d) for d in doc["certificates"]]
        keys = [(c.p, c.r, c.lam.a) for c in certs]
        prim = {(c.p, c.r, c.lam.a) for c in certs if c.primitive}
        yield "exit code 0", code == 0
        yield "primitives are exactly the three golden data", prim == set(PRIMITIVES) and \
            sum(c.primitive for c in certs) == 3
        yield "x values 3/4, 3/4, 2*sqrt(2)-2", all(
            abs(c.lam.x_float() - (0.75 if c.s == 3 else 2 * 2**0.5 - 2)) < 1e-12 for c in certs if c.primitive)
        for c in certs:
            if not c.primitive:
                base, k = c.multiple_of or (None, None)
                ok = base is not None and c.p == base * k and (base, base * c.s, c.lam.a) in prim
                yield f"{c.lam.label()} flagged as a multiple of a primitive", ok
        yield "no certificate for (1,0,2)", not any(p == 1 and r == 2 for p, r, _ in keys)
        yield f"runtime {elapsed:.1f}s < 60s", elapsed < 60

    _run(capsys, 1, "golden search s<=3, p<=2", body)


def test_criterion_2_vset_reproduction(capsys, primitive_certs):
    expected = {
        (1, 3, F(0)): {"gpf1": SOL_R1, "gpf2": SOL_R2, "gpf-r": RSOL_R1},
        (1, 3, F(1, 3)): {"gpf1": SOL_R2, "gpf2": SOL_R1, "gpf-r": RSOL_R2},
        (2, 4, F(0)): {"gpf1": SOL_IR, "gpf2": SOL_IR, "gpf-r": RSOL_IR},
    }

    def body():
        for key, cert in primitive_certs.items():
            got = cert.reduced_formulas()
            for name, want in expected[key].items():
                yield f"{cert.lam.label()} {name}", got[name] == want
        formulas = {f for e in expected.values() for f in e.values()}
        yield "six distinct formulas covered", len(formulas) == 6

    _run(capsys, 2, "assembled v, v', v-check give the six formulas exactly", body)


def _closed_constants():
    s2, s3 = ORACLE.sqrt(2), ORACLE.sqrt(3)
    return [
        ((1, 3, F(0)), "C", 2 / s3),
        ((1, 3, F(1, 3)), "C", 2 / s3),
        ((2, 4, F(0)), "C", 1 / ORACLE.sqrt(2 - s2)),
        ((1, 3, F(1, 3)), "C_check", 2 * s2 / 3),
        ((2, 4, F(0)), "C_check", 1 / ORACLE.sqrt(2 * (2 - s2))),
    ]


def test_criterion_3_numeric_identities(capsys, primitive_certs):
    tol = ORACLE.mpf(10) ** -30
    needed = {"gpf1", "gpf2", "gpf-r", "gpf-g", "gpf-h"}

    def body():
        for cert in primitive_certs.values():
            reps = {r.identity: r for r in verify_gpf(cert, precision=256, recheck=True)}
            yield f"{cert.lam.label()} has gpf1, gpf2, gpf-r, gpf-g, gpf-h", needed <= set(reps)
            for name in sorted(needed & set(reps)):
                r = reps[name]
                yield f"{cert.lam.label()} {name} >= 12 samples", len(r.samples) >= 12
                yield f"{cert.lam.label()} {name} residual < 1e-30", \
                    r.passed and all(ORACLE.mpf(x) < tol for x in r.residuals)
                yield f"{cert.lam.label()} {name} stable under doubling", r.stable_under_doubling
                yield f"{cert.lam.label()} {name} at 256 bits", r.precision_bits == 256
        for key, name, exact in _closed_constants():
            value = ORACLE.mpf(primitive_certs[key].constants[name].value)
            yield f"{key} {name} to 40 digits", abs(value - exact) < ORACLE.mpf(10) ** -40

    _run(capsys, 3, "numeric identity suite at 256 bits", body)


def test_criterion_4_three_way(capsys):
    def body():
        grid = three_way_grid(8)
        want = {(p, s, j) for s in range(2, 9) for p in range(1, 8 // s + 1) for j in range(s - 1)}
        yield "grid covers every (p, s, j) with ps <= 8", {(t.p, t.s, t.j) for t in grid} == want
        yield "j + j' = s - 2", all(t.j + t.jp == t.s - 2 for t in grid)
        for t in grid:
            yield f"(p,s,j)=({t.p},{t.s},{t.j}) nsc={t.nsc} phi={t.phi_zero} q={t.q_zero}", t.agree
        yield "some solutions and some non-solutions", any(t.nsc for t in grid) and not all(t.nsc for t in grid)

    _run(capsys, 4, "F-product, Phi == 0 and Q == 0 agree for ps <= 8", body)


def _random_integral(rng, count, max_r=5):
    out = []
    while len(out) < count:
        r = rng.randint(2, max_r)
        p = rng.randint(1, r - 1)
        if (r - p) % 2:
            continue
        a = F(rng.randint(-20, 20), rng.choice([7, 9, 11, 13]))
        out.append(HyperData.south(p, r, a))
    return out


def test_criterion_5_structural_identities(capsys):
    lams = _random_integral(random.Random(7331), 24)

    def body():
        yield "at least 20 integral data", len(lams) >= 20 and all(l.is_integral() for l in lams)
        applied = 0
        for lam in lams:
            p, r, tag = lam.p, lam.r, lam.label()
            A = A_of_lambda(lam)
            yield f"{tag} det formula", A.det() == det_formula(lam)
            ph = extract_phi(A, lam)
            yield f"{tag} phi12 bridge", ph.phi12 == WxRatFunc.of(Phi(lam)) * x_power(1 - r) * x1_power(1) * \
                F((-1) ** (r - p), 2)
            yield f"{tag} phi22 bridge", ph.phi22 == WxRatFunc.of(P_poly(lam)) * x_power(-r) * x1_power(1) * \
                (-1) ** (r - p - 1)
            start = (Lin(p, lam.a), HALF, Lin(r, 0))
            path = list(canonical_path(p, r))
            random.Random(tag).shuffle(path)
            yield f"{tag} path independence", contig_product(start, ShiftVector(p, 0, r), path).equals(A)
            yield f"{tag} Euler route for Phi", Phi_euler(lam) == Phi(lam)
            yield f"{tag} Euler route for P", P_euler(lam) == P_poly(lam)
            phi, P = Phi(lam), P_poly(lam)
            for kind, n in (("xi", r - p), ("eta", r), ("zeta", p)):
                for idx in range(n):
                    try:
                        sv = eval_special(lam, kind, idx, phi, P)
                    except FormulaInapplicable:
                        continue
                    applied += 1
                    yield f"{tag} {kind}_{idx} closed form", sv.agree()
        yield f"special-point closed forms applied {applied} times", applied >= 20

    _run(capsys, 5, "structural identities on random integral data", body)


def test_criterion_6_sum_rules(capsys):
    def body():
        certs = search(5, 4, precision=None)
        yield "search produced certificates", len(certs) >= 3
        for c in certs:
            half = F(c.r - 1, 2)
            yield f"{c.lam.label()} sum v = sum v' = (r-1)/2", sum(c.v) == sum(c.v_prime) == half == c.sum_check
            yield f"{c.lam.label()} sum u = sum v", sum(c.u) == sum(c.v)

    _run(capsys, 6, "sum rules on every emitted certificate (s<=5, p<=4)", body)


def _numeric_roots(s):
    coeffs = [int(c) for c in reversed(psi_poly(s).coeffs)]
    return mpmath.polyroots(coeffs, maxsteps=400, extraprec=400)


def test_criterion_7_root_suite(capsys):
    def body():
        t0 = time.perf_counter()
        for s in range(2, 26):
            rep = localize_roots(s)
            yield f"s={s} root census {rep.root_count}", rep.root_count == s and rep.checks["root_census"]
            yield f"s={s} ordering chain", rep.checks["order_r"] and rep.checks["order_rho"]
            yield f"s={s} moduli below s-1", rep.checks["modulus_below_s-1"]
            nontrivial = [z for z in _numeric_roots(s) if not (abs(z.imag) < 1e-20 and z.real < 0)]
            yield f"s={s} numeric oracle |alpha| < s-1", all(abs(z) < s - 1 for z in nontrivial)
            if s % 2 == 0:
                yield f"s={s} negative root in (-s-1, 1-s)", rep.checks["negative_root_in_(-s-1,1-s)"]
            yield f"s={s} all root-report checks", rep.ok
            deg = degree_report(s)
            inv = deg.invariants
            if s >= 3:
                n, M, N, d = inv.n, inv.M, inv.N, inv.d
                yield f"s={s} invariants relations", (s - 1) % n == 0 and abs(n) >= 2 and M == n ** (s - 1) and \
                    n * N == (s - 1) ** d
                t = ORACLE.mpf(s - 1)
                delta = ORACLE.log(least_prime_factor(s - 1)) * t / (1 + ORACLE.log(t))
                lower = delta_bound(s)
                yield f"s={s} degree {deg.factor_degrees[0]} >= s-2 >= delta", \
                    deg.factor_degrees[0] >= s - 2 and s - 2 >= delta and ORACLE.mpf(lower.numerator) / lower.denominator <= delta
        yield "invariants at s=3", degree_report(3).invariants.as_tuple() == (4, 1, 2, 1)
        yield "invariants at s=4", degree_report(4).invariants.as_tuple() == (-27, -27, -3, 4)
        yield "delta0(6) > 2.1", delta0(6) > F(21, 10)
        yield "delta1(11) > 2.09", delta1(11) > F(209, 100)
        points = list(range(2, 26)) + [50, 100, 1000, 10**4, 10**5, 10**6]
        cs = [c_of_s(s) for s in points]
        yield "c(s) strictly decreasing", all(b.hi < a.lo for a, b in zip(cs, cs[1:]))
        yield "c(10^6) within 1e-3 of 0.278465", abs(cs[-1].lo - F("0.278465")) < F(1, 1000) and \
            abs(cs[-1].hi - F("0.278465")) < F(1, 1000)
        elapsed = time.perf_counter() - t0
        yield f"runtime {elapsed:.1f}s < 300s", elapsed < 300

    _run(capsys, 7, "root suite for s = 2..25", body)


def test_criterion_8_degree_classification(capsys):
    def body():
        cls = degree_classify(2)
        yield f"refined {cls.refined} == [2, 3]", cls.refined == [2, 3]
        yield "candidates include 2 and 3", {2, 3} <= set(cls.candidates)

    _run(capsys, 8, "degree_classify(2)", body)
