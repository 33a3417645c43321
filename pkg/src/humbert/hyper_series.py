"""Direct summation of generalized hypergeometric series and of the Psi_1 double series.

Terms are produced by the running ratio ``t[n+1] = t[n] * prod(a_i+n) / prod(b_j+n) * z/(n+1)``.
A series is declared converged once ``stagnation_window`` consecutive terms are
below ``rel_tol * |partial sum|`` *and* the error estimate (twice the window
sum, or a geometric majorant of the tail when one is available) is itself below
``rel_tol * |sum|``. When the largest term dwarfs the result, the sum is redone
with enough extra bits to absorb the cancellation.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping

from .errors import (
    ConvergenceError,
    DivergentSeriesError,
    DomainError,
    GammaPoleError,
    PreconditionError,
)
from .params import Psi1Params
from .scalars import GUARD_BITS, Exact, context, cx, exact

NEAR_POLE = 1e-6


@dataclass(frozen=True)
class TruncationPolicy:
    rel_tol: float = 1e-12
    max_terms: int = 100_000
    stagnation_window: int = 5

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.stagnation_window < 2:
            raise ValueError("stagnation_window must be at least 2")
        if self.max_terms < self.stagnation_window:
            raise ValueError("max_terms must be at least stagnation_window")

    def tightened(self, factor: float) -> "TruncationPolicy":
        return TruncationPolicy(self.rel_tol * factor, self.max_terms, self.stagnation_window)


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class ApproxResult:
    """A value with an error estimate and summation diagnostics."""

    value: object
    err_estimate: object
    terms_used: int
    converged: bool
    method: str
    warnings: tuple[str, ...] = ()
    details: Mapping[str, object] = field(default_factory=dict, compare=False)

    @property
    def rel_err(self) -> float:
        v = abs(self.value)
        if v == 0:
            return math.inf if self.err_estimate else 0.0
        return float(self.err_estimate / v)

    def __complex__(self) -> complex:
        return complex(self.value)


@dataclass(frozen=True)
class HypParams:
    """Upper and lower parameter lists of a ``pFq`` series."""

    upper: tuple[Exact, ...]
    lower: tuple[Exact, ...]

    def __post_init__(self):
        upper = tuple(exact(v) for v in self.upper)
        lower = tuple(exact(v) for v in self.lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "lower", lower)
        stop = self.terminating_index()
        for b in lower:
            if b.is_nonpositive_integer() and (stop is None or stop > -b.re):
                raise GammaPoleError(
                    "lower parameter is a non-positive integer reached before termination",
                    [f"lower parameter {b}"],
                )

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    def terminating_index(self) -> int | None:
        """Smallest ``j`` with ``-j`` among the upper parameters, if any."""
        js = [int(-a.re) for a in self.upper if a.is_nonpositive_integer()]
        return min(js) if js else None

    def near_pole_warnings(self, reach: int | None = None) -> list[str]:
        out = []
        for b in self.lower:
            if b.is_nonpositive_integer():
                continue
            k = min(0, round(b.re))
            if reach is not None and -k >= reach:
                continue
            if math.hypot(float(b.re - k), float(b.im)) < NEAR_POLE:
                out.append(f"lower parameter {b} within {NEAR_POLE} of pole {k}")
        return out


def _ratio_majorant(upper_abs, lower_abs, zabs, n) -> float:
    """Upper bound on ``|t[k+1]/t[k]|`` valid for every ``k >= n``.

    Each factor is nonincreasing in ``n`` once ``n`` exceeds every ``|b_j|``.
    """
    bound = zabs
    lows = [n - b for b in lower_abs] + [n + 1.0]
    ups = [n + a for a in upper_abs]
    for i, lo in enumerate(lows):
        if i < len(ups):
            bound *= max(1.0, ups[i] / lo)
        else:
            bound /= lo
    for up in ups[len(lows):]:
        bound *= up
    return bound


def _sum_series(upper, lower, z, policy: TruncationPolicy, limit: int | None):
    """Sum at the current precision. Returns (sum, err, n_terms, max_mag, converged)."""
    ctx = context()
    tol = policy.rel_tol
    window = policy.stagnation_window
    term = ctx.mpc(1)
    s = ctx.mpc(1)
    max_mag = 1
    if limit is not None:
        for n in range(limit):
            num = z
            for a in upper:
                num *= a + n
            den = n + 1
            for b in lower:
                den *= b + n
            term = term * num / den
            s += term
            if term:
                max_mag = max(max_mag, ctx.mag(term))
        return s, ctx.mpf(0), limit + 1, max_mag, True

    upper_abs = [float(abs(a)) for a in upper]
    lower_abs = [float(abs(b)) for b in lower]
    zabs = float(abs(z))
    n_safe = 2 * max(upper_abs + lower_abs + [0.0]) + 2
    recent: deque = deque(maxlen=window)
    small = 0
    n = 0
    while n < policy.max_terms:
        num = z
        for a in upper:
            num *= a + n
        den = n + 1
        for b in lower:
            den *= b + n
        term = term * num / den
        n += 1
        s += term
        if not term:
            # only possible for a zero upper factor, i.e. a terminating series
            return s, ctx.mpf(0), n + 1, max_mag, True
        mag = ctx.mag(term)
        max_mag = max(max_mag, mag)
        at = abs(term)
        recent.append(at)
        sabs = abs(s)
        small = small + 1 if at <= tol * sabs else 0
        if small >= window and n >= n_safe:
            rho = _ratio_majorant(upper_abs, lower_abs, zabs, n)
            if rho < 1:
                err = max(2 * sum(recent), at * rho / (1 - rho))
                if err <= tol * sabs:
                    return s, err, n + 1, max_mag, True
    return s, 2 * sum(recent), n + 1, max_mag, False


def _predicted_loss(params: HypParams, z, stop: int | None, max_terms: int) -> int:
    """Bits likely lost to cancellation when ``Re z < 0``: log2 of the largest term.

    A double-precision pass over the term magnitudes; it only sets the first
    attempt's precision, the retry loop in :func:`pfq` still checks the outcome.
    """
    if z.real >= 0:
        return 0
    ups = [complex(a) for a in params.upper]
    lows = [complex(b) for b in params.lower]
    zabs = abs(complex(z))
    log_t = 0.0
    best = 0.0
    limit = stop if stop is not None else max_terms
    for n in range(limit):
        r = zabs / (n + 1)
        for a in ups:
            r *= abs(a + n)
        for b in lows:
            d = abs(b + n)
            r /= d if d > 0 else 1.0
        if r == 0:
            break
        log_t += math.log2(r)
        best = max(best, log_t)
        if r < 0.5 and log_t < best - 60:
            break
    return int(best) if best > 30 else 0


def pfq(params: HypParams, z, policy: TruncationPolicy = DEFAULT_POLICY) -> ApproxResult:
    """Evaluate ``pFq[upper; lower; z]`` by direct summation.

    Terminating series (an upper parameter ``-j``) are summed exactly through
    index ``j``. Otherwise the series must converge: ``p <= q``, or ``p = q+1``
    with ``|z| < 1``.
    """
    ctx = context()
    target = ctx.prec
    z = cx(z)
    stop = params.terminating_index()
    warnings = params.near_pole_warnings(stop)
    if stop is None:
        if z == 0:
            return ApproxResult(ctx.mpc(1), ctx.mpf(0), 1, True, "pfq_series", tuple(warnings))
        if params.p > params.q + 1:
            raise DivergentSeriesError(f"{params.p}F{params.q} diverges for z != 0")
        if params.p == params.q + 1 and abs(z) >= 1:
            raise DivergentSeriesError(f"{params.p}F{params.q} diverges for |z| >= 1")

    extra = _predicted_loss(params, z, stop, policy.max_terms)
    for _ in range(8):
        bits = target + GUARD_BITS + extra
        with ctx.workprec(bits):
            upper = [a.mpc() for a in params.upper]
            lower = [b.mpc() for b in params.lower]
            zz = ctx.mpc(z)
            s, err, n, max_mag, converged = _sum_series(upper, lower, zz, policy, stop)
            s_mag = ctx.mag(s) if s else max_mag - bits
            lost = max(0, max_mag - s_mag)
            if GUARD_BITS + extra - lost >= 12 or extra > 64 * target:
                rounding = ctx.ldexp(ctx.mpf(n), max_mag - bits + 1)
                err = err + rounding
                break
        extra = lost + 16
    if not converged:
        raise ConvergenceError(
            f"{params.p}F{params.q} series not converged after {policy.max_terms} terms"
        )
    method = "pfq_terminating" if stop is not None else "pfq_series"
    return ApproxResult(+s, +err, n, True, method, tuple(warnings), {"lost_bits": lost})


def f3f2_unity_terminating(params: HypParams):
    """Exact finite sum of a ``3F2[-j, ...; ...; 1]`` series."""
    if params.p != 3 or params.q != 2:
        raise PreconditionError("expected 3 upper and 2 lower parameters")
    if params.terminating_index() is None:
        raise PreconditionError("an upper parameter must be a non-positive integer")
    return pfq(params, 1).value


def psi1_double_series(
    params: Psi1Params,
    x,
    y,
    policy: TruncationPolicy = DEFAULT_POLICY,
    radius: float = 0.95,
) -> ApproxResult:
    """Sum the defining double series of ``Psi_1`` for ``|x| < 1``.

    The inner sum over ``m`` is a Gauss series ``2F1[a+n, b; c; x]``; the outer
    sum over ``n`` carries ``(a)_n y^n / ((c')_n n!)``.
    """
    ctx = context()
    target = ctx.prec
    xe, ye = exact(x), exact(y)
    if abs(xe) >= 1:
        raise DomainError("double series requires |x| < 1", [f"|x| = {abs(xe):.6g}"])
    if abs(xe) > radius:
        raise PreconditionError(
            "x too close to the unit circle for the double series",
            [f"|x| = {abs(xe):.6g} exceeds radius {radius}"],
        )
    a, b, c, cp = params.a, params.b, params.c, params.cp
    window = policy.stagnation_window
    n_safe = 2 * abs(a) + 2 * abs(cp) + 2 * abs(ye) / abs(1 - xe) + 2
    inner_tol = policy.rel_tol * 0.1
    extra = 0
    for _ in range(8):
        bits = target + GUARD_BITS + extra
        inner_policy = TruncationPolicy(inner_tol, policy.max_terms, window)
        with ctx.workprec(bits):
            s, outer_err, inner_err, n, total, max_mag = _double_sum(
                params, xe, ye, policy, inner_policy, n_safe
            )
            s_mag = ctx.mag(s) if s else max_mag - bits
            lost = max(0, max_mag - s_mag)
            sabs = abs(s)
        if GUARD_BITS + extra - lost < 12:
            extra = lost + 16
            continue
        if inner_err > policy.rel_tol * sabs / 2 and inner_tol > 1e-60:
            # cancellation between outer terms magnifies the inner errors
            inner_tol = inner_tol * float(policy.rel_tol * sabs / (4 * inner_err))
            continue
        break
    with ctx.workprec(bits):
        err = outer_err + inner_err + ctx.ldexp(ctx.mpf(n), max_mag - bits + 1)
    return ApproxResult(+s, +err, total, True, "double_series", (), {"outer_terms": n})


def _double_sum(params, xe, ye, policy, inner_policy, n_safe):
    """Row-by-row summation; row ``n`` is ``(a)_n y^n/((c')_n n!) * 2F1[a+n, b; c; x]``.

    The factor ``(b+m) x / ((c+m)(m+1))`` of the inner ratio does not depend on
    ``n`` and is computed once.
    """
    ctx = context()
    a, b, c = params.a, params.b, params.c
    x = xe.mpc()
    yy = ye.mpc()
    am, bm, cm, cpm = a.mpc(), b.mpc(), c.mpc(), params.cp.mpc()
    steps: list = []
    xabs, babs, cabs = abs(xe), abs(b), abs(c)
    inner_log_tol = math.log2(inner_policy.rel_tol)
    coef = ctx.mpc(1)
    s = ctx.mpc(0)
    inner_err = ctx.mpf(0)
    recent: deque = deque(maxlen=policy.stagnation_window)
    small = 0
    total = 0
    max_mag = None
    n = 0
    while n < policy.max_terms:
        an = am + n
        aabs = float(abs(a + n))
        m_safe = 2 * max(aabs, babs, cabs) + 2
        term = ctx.mpc(1)
        row = ctx.mpc(1)
        row_max = 1
        run = 0
        m = 0
        while True:
            if m == len(steps):
                steps.append((bm + m) * x / ((cm + m) * (m + 1)))
            term = term * (an + m) * steps[m]
            row += term
            m += 1
            if not term:
                tail = ctx.mpf(0)
                break
            tm = ctx.mag(term)
            row_max = max(row_max, tm)
            if row and tm <= ctx.mag(row) + inner_log_tol - 2:
                run += 1
            else:
                run = 0
            if run >= inner_policy.stagnation_window and m >= m_safe:
                rho = _ratio_majorant([aabs, babs], [cabs], xabs, m)
                if rho < 1:
                    tail = abs(term) * rho / (1 - rho)
                    if tail <= inner_policy.rel_tol * abs(row):
                        break
            if m >= policy.max_terms:
                raise ConvergenceError("inner Gauss series not converged within max_terms")
        total += m + 1
        t = coef * row
        s += t
        inner_err += abs(coef) * tail
        n += 1
        if coef:
            # the largest term anywhere in the row bounds the cancellation
            mag = ctx.mag(coef) + row_max
            max_mag = mag if max_mag is None else max(max_mag, mag)
        at = abs(t)
        recent.append(at)
        sabs = abs(s)
        small = small + 1 if at <= policy.rel_tol * sabs else 0
        if yy == 0:
            return s, ctx.mpf(0), inner_err, n, total, max_mag or 0
        if small >= policy.stagnation_window and n >= n_safe:
            outer_err = 2 * sum(recent)
            if outer_err <= policy.rel_tol * sabs:
                return s, outer_err, inner_err, n, total, max_mag or 0
        coef = coef * (am + n - 1) * yy / ((cpm + n - 1) * n)
    raise ConvergenceError("double series not converged within max_terms")
