"""Command-line entry point: search, certify, verify, roots.

Exit codes: 0 success, 1 usage error, 2 mathematical invariant violated or
identity failed, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .algebraic import InvariantViolation, RootLocalizationError, degree_report, localize_roots
from .certifier import (
    Refusal,
    build_certificate,
    cancel_gamma,
    diagnose,
    gamma_quotient_str,
    numerator_shifts,
    primitive_base,
    search,
)
from .numeric import gpf_samples, verify_gpf, verify_three_term
from .serialize import (
    DecodeError,
    certificate_from,
    certificate_json,
    dumps,
    rat_json,
    refusal_json,
    report_json,
    root_report_json,
)

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT, EXIT_IO = 0, 1, 2, 3
DEFAULT_PRECISION = 256
MIN_PRECISION = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed rational {text!r}; use num/den") from None


def _default_precision() -> int:
    env = os.environ.get("GPF_PRECISION_BITS")
    if env is None:
        return DEFAULT_PRECISION
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"GPF_PRECISION_BITS={env!r} is not an integer") from None


@dataclass(frozen=True)
class RunConfig:
    command: str
    precision_bits: int
    seed: int
    fmt: str
    out: str | None

    def as_json(self) -> dict:
        return {"command": self.command, "precision_bits": self.precision_bits, "seed": self.seed}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hypergpf", description="Gamma product formulas for 2F1 on the south side.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=None,
                        help="working precision (default: $GPF_PRECISION_BITS or 256)")
    common.add_argument("--seed", type=int, default=0, help="seed for random sample points")
    common.add_argument("--format", choices=("json", "text"), default="json", dest="fmt")
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("search", parents=[common], help="certify every (p, s, j) on a grid")
    p.add_argument("--s-max", type=int, required=True)
    p.add_argument("--p-max", type=int, required=True)

    p = sub.add_parser("certify", parents=[common], help="decide one datum (p, 0, r; a, 1/2)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--a", type=_rational, required=True, help="rational as num/den")

    p = sub.add_parser("verify", parents=[common], help="numerically verify certificates from a file")
    p.add_argument("certificates", help="JSON file written by search or certify ('-' for stdin)")

    p = sub.add_parser("roots", parents=[common], help="root localization and degree report for psi_s")
    p.add_argument("--s", type=int, required=True)
    return parser


def _config(args) -> RunConfig:
    prec = args.precision_bits if args.precision_bits is not None else _default_precision()
    if prec < MIN_PRECISION:
        raise UsageError(f"precision must be at least {MIN_PRECISION} bits")
    return RunConfig(args.command, prec, args.seed, args.fmt, args.out)


# ---------------------------------------------------------------------------
# text rendering


def _formula_line(name: str, label: str, num, den, const: str | None, symbol: str = "C") -> str:
    n, d = cancel_gamma(num, den)
    c = f"{symbol} ≈ {const[:24]}" if const else symbol
    return f"  {name:<11}{label}:  f(w) = {c} · {gamma_quotient_str(n, d)}"


def certificate_text(cert) -> str:
    rp = cert.r - cert.p
    tag = "primitive" if cert.primitive else f"{cert.multiple_of[1]}-multiple of p = {cert.multiple_of[0]}"
    get = lambda k: cert.constants[k].value if k in cert.constants else None  # noqa: E731
    lines = [
        f"{cert.lam.label()}  s={cert.s} j={cert.j} j'={cert.jp}  [{tag}]",
        _formula_line("solution", cert.lam.label(), cert.u, cert.v, get("C")),
        _formula_line("dual", cert.dual_lam.label(), cert.u, cert.v_prime, get("C_prime"), "C'"),
        _formula_line("reciprocal", cert.reciprocal_lam.label(), numerator_shifts(rp), cert.v_check,
                      get("C_check"), "Č"),
        f"  v  = {{{', '.join(map(str, cert.v))}}}   sum = {cert.sum_check}",
        f"  v* = {{{', '.join(map(str, cert.v_star))}}}",
        f"  delta = {cert.delta}",
    ]
    return "\n".join(lines)


def report_text(rep) -> str:
    worst = max(rep.residuals, key=float) if rep.residuals else "-"
    return f"  {rep.identity:<9} {rep.verdict:<5} max residual {worst} (tol {rep.tolerance}, {rep.precision_bits} bits)"


# ---------------------------------------------------------------------------
# commands


def cmd_search(args, cfg: RunConfig):
    if args.s_max < 2 or args.p_max < 1:
        raise UsageError("need --s-max >= 2 and --p-max >= 1")
    certs = search(args.s_max, args.p_max, precision=cfg.precision_bits)
    doc = {
        "kind": "search",
        "config": dict(cfg.as_json(), s_max=str(args.s_max), p_max=str(args.p_max)),
        "certificates": [certificate_json(c) for c in certs],
    }
    if cfg.fmt == "text":
        head = f"search s <= {args.s_max}, p <= {args.p_max}: {len(certs)} certificate(s), " \
               f"{sum(c.primitive for c in certs)} primitive (seed {cfg.seed})"
        return EXIT_OK, "\n".join([head] + [certificate_text(c) for c in certs]) + "\n"
    return EXIT_OK, dumps(doc)


def cmd_certify(args, cfg: RunConfig):
    verdict = diagnose(args.p, args.r, args.a)
    config = dict(cfg.as_json(), p=str(args.p), r=str(args.r), a=rat_json(args.a))
    if isinstance(verdict, Refusal):
        doc = dict(refusal_json(verdict, args.p, args.r, args.a), config=config)
        text = f"refused ({verdict.condition}): {verdict.reason}\n"
    else:
        p, s, j = verdict
        base = primitive_base(p, s, j)
        cert = build_certificate(p, s, j, primitive=base is None,
                                 multiple_of=None if base is None else (base, p // base),
                                 precision=cfg.precision_bits)
        doc = {"kind": "certify", "config": config, "certificates": [certificate_json(cert)]}
        text = certificate_text(cert) + "\n"
    return EXIT_OK, (text if cfg.fmt == "text" else dumps(doc))


def _load_certificates(path: str):
    try:
        raw = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise IOError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"{path} is not JSON: {exc}") from None
    if isinstance(doc, dict) and doc.get("kind") == "gpf-certificate":
        items = [doc]
    elif isinstance(doc, dict) and isinstance(doc.get("certificates"), list):
        items = doc["certificates"]
    else:
        raise DecodeError("expected a certificate or a document with a 'certificates' list")
    return [certificate_from(d) for d in items]


def _consistency_report(cert, precision: int):
    from .numeric import VerificationReport

    errs = cert.consistency_errors()
    return VerificationReport("consistency", [], [], precision, "exact", "fail" if errs else "pass",
                              details={"errors": "; ".join(errs)} if errs else {})


def _failed_report(identity: str, exc: Exception, precision: int):
    from .numeric import VerificationReport

    return VerificationReport(identity, [], [], precision, "-", "fail", details={"error": f"{type(exc).__name__}: {exc}"})


def verify_certificate(cert, precision: int, seed: int) -> list:
    reports = [_consistency_report(cert, precision)]
    try:
        samples = gpf_samples(cert, seed)
        reports += verify_gpf(cert, samples, precision)
        reports += verify_three_term(cert.lam, samples, precision, cert=cert)
    except (ArithmeticError, ValueError, InvariantViolation) as exc:
        reports.append(_failed_report("evaluation", exc, precision))
    return reports


def cmd_verify(args, cfg: RunConfig):
    certs = _load_certificates(args.certificates)
    results = []
    all_ok = True
    text = []
    for cert in certs:
        reps = verify_certificate(cert, cfg.precision_bits, cfg.seed)
        ok = all(r.verdict == "pass" for r in reps)
        all_ok &= ok
        results.append({"lambda": cert.lam.label(), "verdict": "pass" if ok else "fail",
                        "reports": [report_json(r) for r in reps]})
        text.append(f"{cert.lam.label()}: {'pass' if ok else 'FAIL'}")
        text += [report_text(r) for r in reps]
    doc = {"kind": "verification", "config": dict(cfg.as_json(), certificates=args.certificates),
           "verdict": "pass" if all_ok else "fail", "results": results}
    code = EXIT_OK if all_ok else EXIT_INVARIANT
    return code, ("\n".join(text) + "\n" if cfg.fmt == "text" else dumps(doc))


def cmd_roots(args, cfg: RunConfig):
    if args.s < 2:
        raise UsageError("need --s >= 2")
    rep = localize_roots(args.s, precision=cfg.precision_bits)
    deg = degree_report(args.s)
    doc = dict(root_report_json(rep, deg), config=dict(cfg.as_json(), s=str(args.s)))
    code = EXIT_OK if rep.ok else EXIT_INVARIANT
    if cfg.fmt == "text":
        inv = deg.invariants
        lines = [
            f"psi_{args.s}: {rep.root_count} roots with multiplicity, {rep.m} complex pair(s)",
            f"  positive root  {rep.positive_root}",
            f"  negative root  {rep.negative_root} (multiplicity {rep.negative_multiplicity})",
            f"  degree report  {deg.status}, factor degrees {deg.factor_degrees}"
            + (f", (M, N, n, d) = {inv.as_tuple()}" if inv else ""),
        ] + [f"  {k:<24} {'ok' if v else 'FAILED'}" for k, v in sorted(rep.checks.items())]
        return code, "\n".join(lines) + "\n"
    return code, dumps(doc)


COMMANDS = {"search": cmd_search, "certify": cmd_certify, "verify": cmd_verify, "roots": cmd_roots}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        code, output = COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"hypergpf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DecodeError as exc:
        print(f"hypergpf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IOError as exc:
        print(f"hypergpf: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvariantViolation, RootLocalizationError) as exc:
        print(f"hypergpf: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    try:
        if cfg.out:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(output)
        else:
            sys.stdout.write(output)
    except OSError as exc:
        print(f"hypergpf: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
