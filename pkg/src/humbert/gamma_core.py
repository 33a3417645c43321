"""Complex log-gamma, Pochhammer symbols and explicit gamma-ratio bounds.

``log_gamma`` is a Stirling series with upward argument shifting and reflection
for ``Re z < 1/2``; it returns the principal branch (continuous off the
negative real axis, matching ``mpmath.loggamma``). Gamma ratios elsewhere in
the package go through :func:`gamma_ratio`, which works in log space and treats
poles in the denominator as zeros of ``1/Gamma``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ExclusionZoneError, GammaPoleError, PreconditionError
from .scalars import GUARD_BITS, context, cx, is_nonpositive_integer

# rounding allowance used by every BoundReport
BOUND_SLACK = 1e-12

DEFAULT_EXCLUSION_RADIUS = 0.125


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    holds: bool

    @classmethod
    def compare(cls, lhs: float, rhs: float) -> "BoundReport":
        return cls(lhs, rhs, bool(lhs <= rhs * (1 + BOUND_SLACK)))


@lru_cache(maxsize=None)
def _stirling_coefficients(count: int) -> tuple[Fraction, ...]:
    """B_{2k} / (2k (2k-1)) for k = 1..count (Akiyama-Tanigawa for B_n)."""
    n_max = 2 * count
    bern = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        bern.append(a[0])
    # Akiyama-Tanigawa yields B_1 = +1/2; only even indices are used
    return tuple(bern[2 * k] / (2 * k * (2 * k - 1)) for k in range(1, count + 1))


def _stirling_radius(bits: int) -> float:
    # optimally truncated error is about exp(-2 pi |z|)
    return 0.12 * bits + 6.0


def _log_gamma_right(z):
    """Principal log-gamma for Re z >= 1/2 at the current precision."""
    ctx = context()
    bits = ctx.prec
    r = _stirling_radius(bits)
    shift = 0
    if abs(z) < r:
        need = math.sqrt(max(r * r - float(z.imag) ** 2, 0.0)) - float(z.real)
        shift = max(0, math.ceil(need))
    correction = ctx.mpc(0)
    if shift:
        # one log of the product; the float sum of arguments fixes the branch
        prod = ctx.mpc(1)
        arg_sum = 0.0
        zr, zi = float(z.real), float(z.imag)
        for k in range(shift):
            prod *= z + k
            arg_sum += math.atan2(zi, zr + k)
        correction = ctx.log(prod)
        turns = round((arg_sum - float(correction.imag)) / (2 * math.pi))
        correction += 2j * ctx.pi * turns
    w = z + shift
    total = (w - 0.5) * ctx.log(w) - w + ctx.log(2 * ctx.pi) / 2
    inv = 1 / w
    inv2 = inv * inv
    power = inv
    eps = ctx.ldexp(ctx.mpf(1), -bits)
    count = 8
    coeffs = _stirling_coefficients(count)
    k = 0
    prev = None
    while True:
        if k == len(coeffs):
            count *= 2
            coeffs = _stirling_coefficients(count)
        c = coeffs[k]
        term = power * (ctx.mpf(c.numerator) / c.denominator)
        size = abs(term)
        if prev is not None and size > prev:
            break
        total += term
        if size <= eps * abs(total):
            break
        prev = size
        power *= inv2
        k += 1
    return total - correction


def log_gamma(z):
    """Principal branch of ``log Gamma(z)``.

    Raises :class:`GammaPoleError` at non-positive integers.
    """
    ctx = context()
    z = cx(z)
    if is_nonpositive_integer(z):
        raise GammaPoleError(f"log_gamma pole at z = {ctx.nstr(z.real, 10)}")
    target = ctx.prec
    with ctx.workprec(target + GUARD_BITS):
        if z.real < 0.5:
            sgn = 1 if z.imag >= 0 else -1
            turns = sgn * int(ctx.floor(z.real / 2 + ctx.mpf(0.25)))
            value = (
                ctx.log(ctx.pi)
                - ctx.log(ctx.sinpi(z))
                - _log_gamma_right(1 - z)
                + 2j * ctx.pi * turns
            )
        else:
            value = _log_gamma_right(z)
    return +value


def gamma(z):
    return context().exp(log_gamma(z))


def gamma_ratio(numer: Iterable, denom: Iterable = ()):
    """``prod Gamma(numer) / prod Gamma(denom)`` evaluated as exp of a log-gamma sum.

    A pole in ``denom`` makes the ratio zero; a pole in ``numer`` raises.
    """
    ctx = context()
    numer = [cx(v) for v in numer]
    denom = [cx(v) for v in denom]
    for v in numer:
        if is_nonpositive_integer(v):
            raise GammaPoleError(f"gamma pole at {ctx.nstr(v, 10)} in numerator")
    if any(is_nonpositive_integer(v) for v in denom):
        return ctx.mpc(0)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        s = ctx.mpc(0)
        for v in numer:
            s += log_gamma(v)
        for v in denom:
            s -= log_gamma(v)
    return ctx.exp(s)


@lru_cache(maxsize=4096)
def _cached_gamma_ratio(numer: tuple, denom: tuple, bits: int, thread: int):
    ctx = context()
    with ctx.workprec(bits):
        return gamma_ratio(numer, denom)


def gamma_ratio_exact(numer: Sequence, denom: Sequence = ()):
    """:func:`gamma_ratio` for exact (hashable) arguments, memoized per precision."""
    ctx = context()
    # numbers belong to a thread's context, so the thread is part of the key
    return +_cached_gamma_ratio(tuple(numer), tuple(denom), ctx.prec, threading.get_ident())


def log_gamma_ratio(numer: Iterable, denom: Iterable = ()):
    """Log of :func:`gamma_ratio`; ``None`` when the ratio vanishes."""
    ctx = context()
    numer = [cx(v) for v in numer]
    denom = [cx(v) for v in denom]
    for v in numer:
        if is_nonpositive_integer(v):
            raise GammaPoleError(f"gamma pole at {ctx.nstr(v, 10)} in numerator")
    if any(is_nonpositive_integer(v) for v in denom):
        return None
    with ctx.workprec(ctx.prec + GUARD_BITS):
        s = ctx.mpc(0)
        for v in numer:
            s += log_gamma(v)
        for v in denom:
            s -= log_gamma(v)
    return +s


def pochhammer(a, n: int):
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)``, with ``(a)_0 = 1``."""
    if n < 0:
        raise ValueError("pochhammer order must be non-negative")
    ctx = context()
    a = cx(a)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        p = ctx.mpc(1)
        for k in range(n):
            p *= a + k
    return +p


def pochhammer_ratio(a, b, n: int) -> float:
    """``|(a)_n / (b)_n|``."""
    ctx = context()
    a, b = cx(a), cx(b)
    if is_nonpositive_integer(b) and n > -int(b.real):
        raise GammaPoleError("(b)_n vanishes: b is a non-positive integer")
    with ctx.workprec(ctx.prec + GUARD_BITS):
        r = ctx.mpf(1)
        for k in range(n):
            r *= abs((a + k) / (b + k))
    return float(r)


def pochhammer_ratio_profile(a, b, n_max: int) -> np.ndarray:
    """``|(a)_n/(b)_n|`` for ``n = 0..n_max`` in double precision (log-sum form)."""
    a, b = complex(a), complex(b)
    k = np.arange(n_max)
    den = np.abs(b + k)
    if np.any(den == 0):
        raise GammaPoleError("(b)_n vanishes: b is a non-positive integer")
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(a + k)) - np.log(den)
    return np.exp(np.concatenate(([0.0], np.cumsum(logs))))


def gamma_ratio_bound(z, a, b) -> BoundReport:
    """Compare ``|Gamma(z+a)/Gamma(z+b)|`` with the explicit bound

    ``Gamma(Re(b-a))/|Gamma(b-a)| * exp(pi/2 |Im(a-b)|) * (|z| + Re(a) cos t + Im(a) sin t)^Re(a-b)``

    with ``t = arg z``. Preconditions: ``Re b > Re a >= 0`` and ``Re z > |Im a|``.
    """
    ctx = context()
    z, a, b = cx(z), cx(a), cx(b)
    failed = []
    if not b.real > a.real:
        failed.append("Re(b) > Re(a)")
    if not a.real >= 0:
        failed.append("Re(a) >= 0")
    if not z.real > abs(a.imag):
        failed.append("Re(z) > |Im(a)|")
    if failed:
        raise PreconditionError("gamma ratio bound hypotheses fail", failed)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        lhs = abs(gamma_ratio([z + a], [z + b]))
        theta = ctx.arg(z)
        d = b - a
        base = abs(z) + a.real * ctx.cos(theta) + a.imag * ctx.sin(theta)
        log_rhs = (
            log_gamma(d.real).real
            - log_gamma(d).real
            + ctx.pi / 2 * abs(d.imag)
            - d.real * ctx.log(base)
        )
        rhs = ctx.exp(log_rhs)
    return BoundReport.compare(float(lhs), float(rhs))


def _check_exclusion(b, z, n: int, radius: float) -> None:
    ctx = context()
    # nearest j in [1, n] to Re(z + b)
    w = z + b
    j = min(max(int(ctx.nint(w.real)), 1), max(n, 1))
    if n >= 1 and float(abs(w - j)) < radius:
        raise ExclusionZoneError(
            f"z is within {radius} of the excluded point -b + {j}"
        )


def shifted_ratio_product(a, b, z, n: int, radius: float = DEFAULT_EXCLUSION_RADIUS) -> float:
    """``prod_{j=1..n} |(-a + j - z)/(-b + j - z)|``.

    Raises :class:`ExclusionZoneError` if ``z`` lies within ``radius`` of any
    of ``-b + 1, ..., -b + n``.
    """
    ctx = context()
    a, b, z = cx(a), cx(b), cx(z)
    _check_exclusion(b, z, n, radius)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        p = ctx.mpf(1)
        for j in range(1, n + 1):
            p *= abs((j - a - z) / (j - b - z))
    return float(p)


def shifted_ratio_profile(a, b, z, n_max: int, radius: float = DEFAULT_EXCLUSION_RADIUS) -> np.ndarray:
    """:func:`shifted_ratio_product` for ``n = 0..n_max`` in double precision."""
    a, b, z = complex(a), complex(b), complex(z)
    j = np.arange(1, n_max + 1)
    den = np.abs(j - b - z)
    if n_max >= 1 and den.min() < radius:
        raise ExclusionZoneError(f"z is within {radius} of an excluded point -b + j")
    logs = np.log(np.abs(j - a - z)) - np.log(den)
    return np.exp(np.concatenate(([0.0], np.cumsum(logs))))


def fit_growth_constant(values: Sequence[float], n: Sequence[float], exponent: float) -> float:
    """Empirical constant ``C = sup values / (n+1)^exponent``."""
    v = np.asarray(values, dtype=float)
    nn = np.asarray(n, dtype=float)
    return float(np.max(v / (nn + 1.0) ** exponent))
