"""JSON encoding of data, certificates and reports.

Integers are written as decimal strings, rationals as {"num", "den"},
algebraic numbers by minimal polynomial (lowest degree first) plus an
isolating interval.  Output is deterministic: keys sorted, multisets sorted.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .certifier import Constant, GpfCertificate, Refusal
from .data import HyperData
from .exact import AlgebraicReal, UniPoly, minimal_polynomial
from .mpctx import decimal_str, mp_context

SCHEMA_VERSION = "1"


class DecodeError(ValueError):
    """A JSON document does not describe the expected object."""


def int_json(n: int) -> str:
    return str(int(n))


def int_from(v) -> int:
    if not isinstance(v, str):
        raise DecodeError(f"integer must be a decimal string, got {v!r}")
    try:
        return int(v)
    except ValueError as exc:
        raise DecodeError(str(exc)) from None


def rat_json(q) -> dict:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def rat_from(d) -> Fraction:
    if not isinstance(d, dict) or set(d) != {"num", "den"}:
        raise DecodeError(f"rational must be {{num, den}}, got {d!r}")
    den = int_from(d["den"])
    if den <= 0:
        raise DecodeError("denominator must be positive")
    return Fraction(int_from(d["num"]), den)


def multiset_json(values) -> list:
    return [rat_json(v) for v in sorted(values)]


def multiset_from(lst) -> tuple[Fraction, ...]:
    if not isinstance(lst, list):
        raise DecodeError("multiset must be a list")
    return tuple(sorted(rat_from(v) for v in lst))


def algebraic_json(x: AlgebraicReal, digits: int = 40) -> dict:
    mp = minimal_polynomial(x)
    fine = x.refine(Fraction(1, 2**64)) if not x.is_rational() else x
    ctx = mp_context(4 * digits)
    return {
        "min_poly": [str(c) for c in mp.integer_coeffs()],
        "interval": {"lo": rat_json(fine.lo), "hi": rat_json(fine.hi)},
        "approx": decimal_str(ctx, x.approx(ctx), digits),
    }


def x_json(x) -> Any:
    if x is None:
        return None
    if isinstance(x, AlgebraicReal):
        if x.is_rational():
            return rat_json(x.lo)
        return algebraic_json(x)
    return rat_json(x)


def x_from(d):
    if d is None:
        return None
    if isinstance(d, dict) and "min_poly" in d:
        poly = UniPoly(int_from(c) for c in d["min_poly"])
        iv = d["interval"]
        lo, hi = rat_from(iv["lo"]), rat_from(iv["hi"])
        if poly.degree < 1 or lo > hi:
            raise DecodeError("bad algebraic number")
        return AlgebraicReal(poly, lo, hi)
    return rat_from(d)


def lambda_json(lam: HyperData) -> dict:
    return {
        "p": int_json(lam.p), "q": int_json(lam.q), "r": int_json(lam.r),
        "a": rat_json(lam.a), "b": rat_json(lam.b), "x": x_json(lam.x),
        "label": lam.label(),
    }


def lambda_from(d) -> HyperData:
    try:
        return HyperData(int_from(d["p"]), int_from(d["q"]), int_from(d["r"]),
                         rat_from(d["a"]), rat_from(d["b"]), x_from(d["x"]))
    except (KeyError, TypeError) as exc:
        raise DecodeError(f"bad data sextuple: {exc}") from None


def constant_json(c: Constant) -> dict:
    return {"value": c.value, "precision_bits": c.precision_bits}


def _quotient_json(pair) -> dict:
    num, den = pair
    return {"num": multiset_json(num), "den": multiset_json(den)}


def certificate_json(cert: GpfCertificate) -> dict:
    return {
        "kind": "gpf-certificate",
        "lambda": lambda_json(cert.lam),
        "dual": lambda_json(cert.dual_lam),
        "reciprocal": lambda_json(cert.reciprocal_lam),
        "s": int_json(cert.s),
        "j": int_json(cert.j),
        "j_prime": int_json(cert.jp),
        "v": multiset_json(cert.v),
        "v_star": multiset_json(cert.v_star),
        "v_prime": multiset_json(cert.v_prime),
        "v_check": multiset_json(cert.v_check),
        "sum_check": rat_json(cert.sum_check),
        "delta": rat_json(cert.delta),
        "primitive": cert.primitive,
        "multiple_of": None if cert.multiple_of is None else {
            "p": int_json(cert.multiple_of[0]), "k": int_json(cert.multiple_of[1])},
        "constants": {k: constant_json(v) for k, v in sorted(cert.constants.items())},
        "reduced": {k: _quotient_json(v) for k, v in cert.reduced_formulas().items()},
    }


def certificate_from(d) -> GpfCertificate:
    if not isinstance(d, dict) or d.get("kind") != "gpf-certificate":
        raise DecodeError("not a gpf-certificate")
    try:
        mult = d["multiple_of"]
        return GpfCertificate(
            lam=lambda_from(d["lambda"]),
            s=int_from(d["s"]), j=int_from(d["j"]), jp=int_from(d["j_prime"]),
            v=multiset_from(d["v"]), v_star=multiset_from(d["v_star"]),
            v_prime=multiset_from(d["v_prime"]), v_check=multiset_from(d["v_check"]),
            sum_check=rat_from(d["sum_check"]), delta=rat_from(d["delta"]),
            primitive=bool(d["primitive"]),
            multiple_of=None if mult is None else (int_from(mult["p"]), int_from(mult["k"])),
            constants={k: Constant(str(v["value"]), int(v["precision_bits"])) for k, v in d["constants"].items()},
        )
    except (KeyError, TypeError) as exc:
        raise DecodeError(f"bad certificate: {exc}") from None


def refusal_json(ref: Refusal, p: int, r: int, a: Fraction) -> dict:
    return {
        "kind": "refusal",
        "request": {"p": int_json(p), "r": int_json(r), "a": rat_json(a)},
        "condition": ref.condition,
        "reason": ref.reason,
    }


def report_json(rep) -> dict:
    return {
        "identity": rep.identity,
        "samples": [rat_json(w) for w in rep.samples],
        "residuals": list(rep.residuals),
        "precision_bits": rep.precision_bits,
        "tolerance": rep.tolerance,
        "verdict": rep.verdict,
        "worst_sample": None if rep.worst_sample is None else rat_json(rep.worst_sample),
        "stable_under_doubling": rep.stable_under_doubling,
        "details": {k: _plain(v) for k, v in sorted(rep.details.items())},
    }


def _plain(v):
    if isinstance(v, Fraction):
        return rat_json(v)
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, int):
        return int_json(v)
    return str(v)


def _interval_json(pair, digits: int = 40) -> dict:
    ctx = mp_context(4 * digits)
    mid = (pair[0] + pair[1]) / 2
    return {"lo": rat_json(pair[0]), "hi": rat_json(pair[1]),
            "approx": decimal_str(ctx, ctx.mpf(mid.numerator) / mid.denominator, digits)}


def root_report_json(rep, deg) -> dict:
    neg = rep.negative_root
    neg_json = rat_json(neg) if isinstance(neg, (int, Fraction)) else x_json(neg)
    inv = deg.invariants
    return {
        "kind": "root-report",
        "s": int_json(rep.s),
        "precision_bits": rep.precision_bits,
        "positive_root": x_json(rep.positive_root),
        "negative_root": neg_json,
        "negative_multiplicity": int_json(rep.negative_multiplicity),
        "complex_pairs": [
            {"j": int_json(c.j), "theta": _interval_json(c.theta), "r": _interval_json(c.r),
             "rho": _interval_json(c.rho)} for c in rep.complex_pairs
        ],
        "root_count": int_json(rep.root_count),
        "checks": dict(sorted(rep.checks.items())),
        "ok": rep.ok,
        "degree": {
            "p_s": None if deg.p_s is None else int_json(deg.p_s),
            "delta": None if deg.delta is None else rat_json(deg.delta),
            "factor_degrees": [int_json(d) for d in deg.factor_degrees],
            "status": deg.status,
            "invariants": None if inv is None else {
                "M": int_json(inv.M), "N": int_json(inv.N), "n": int_json(inv.n), "d": int_json(inv.d)},
        },
    }


def dumps(doc) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
