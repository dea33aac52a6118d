"""Explicit-precision mpmath contexts.

Every numeric routine takes its precision as an argument and works in a
context created for that precision; the global ``mpmath.mp`` is never touched.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath.ctx_iv import MPIntervalContext


@lru_cache(maxsize=None)
def mp_context(bits: int) -> mpmath.MPContext:
    if bits < 16:
        raise ValueError("precision below 16 bits")
    ctx = mpmath.MPContext()
    ctx.prec = int(bits)
    return ctx


@lru_cache(maxsize=None)
def iv_context(bits: int) -> MPIntervalContext:
    if bits < 16:
        raise ValueError("precision below 16 bits")
    ctx = MPIntervalContext()
    ctx.prec = int(bits)
    return ctx


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    if not man:
        if raw not in (mpmath.libmp.fzero,):
            raise ValueError("non-finite binary float")
        return Fraction(0)
    man = -int(man) if sign else int(man)
    exp = int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


def mpf_to_fraction(v) -> Fraction:
    """Exact rational value of a finite binary float."""
    return _raw_to_fraction(v._mpf_)


def interval_bounds(iv_value) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an mpmath interval."""
    a, b = iv_value._mpi_
    return _raw_to_fraction(a), _raw_to_fraction(b)


def frac_mp(ctx, q: Fraction):
    q = Fraction(q)
    return ctx.mpf(q.numerator) / q.denominator


def frac_iv(ivctx, q: Fraction):
    """Enclosure of a rational in an interval context."""
    q = Fraction(q)
    return ivctx.mpf(q.numerator) / ivctx.mpf(q.denominator)


def decimal_str(ctx, v, digits: int | None = None) -> str:
    """Deterministic decimal rendering at the context precision."""
    if digits is None:
        digits = max(15, int(ctx.prec * 0.30103))
    return mpmath.libmp.to_str(ctx.mpf(v)._mpf_, digits)
