"""Reference evaluators for Psi_1 and a region-aware dispatcher.

Four routes are available:

* the defining double series (``|x| < 1``),
* the convergent series in ``2F2`` functions valid for ``|x - 1| > 1``,
* the Kummer-type transformation
  ``Psi_1[a,b;c,c';x,y] = (1-x)^-a Psi_1[a,c-b;c,c';x/(x-1),y/(1-x)]``,
* the Laplace integral
  ``Gamma(a)^-1 int_0^inf e^-u u^(a-1) 1F1[b;c;xu] 0F1[;c';yu] du``.
"""

from __future__ import annotations

import cmath
import math
from collections import deque

from .confluent import _hyp0f1, _hyp1f1
from .errors import ConvergenceError, DomainError, NoMethodError, PreconditionError
from .gamma_core import gamma_ratio_exact, log_gamma
from .hyper_series import (
    DEFAULT_POLICY,
    ApproxResult,
    HypParams,
    TruncationPolicy,
    pfq,
    psi1_double_series,
)
from .params import EvalPoint, Psi1Params
from .quadrature import integrate
from .scalars import GUARD_BITS, context

SERIES_RADIUS = 0.95
OUTER_RADIUS = 1.2


class DivergentIntegralError(DomainError):
    """The Laplace integral does not converge for ``Re x >= 1``."""


def _pow(base, expo):
    ctx = context()
    return ctx.exp(expo * ctx.log(base))


def psi1_kummer(params: Psi1Params, pt: EvalPoint) -> tuple[Psi1Params, EvalPoint, object]:
    """Return ``(params', pt', prefactor)`` with ``Psi_1[params](pt) = prefactor * Psi_1[params'](pt')``."""
    x, y = pt.x, pt.y
    one_minus = 1 - x
    if one_minus.re == 0 and one_minus.im == 0:
        raise DomainError("point outside Psi_1 domain", ["x = 1"])
    new_params = Psi1Params(params.a, params.c - params.b, params.c, params.cp)
    new_pt = EvalPoint(x / (x - 1), y / one_minus)
    prefactor = _pow(one_minus.mpc(), -params.a.mpc())
    return new_params, new_pt, prefactor


def _scaled(result: ApproxResult, factor, method: str) -> ApproxResult:
    return ApproxResult(
        result.value * factor,
        result.err_estimate * abs(factor),
        result.terms_used,
        result.converged,
        method,
        result.warnings,
        result.details,
    )


# -- convergent 2F2 series (|x - 1| > 1) ------------------------------------


def _outer_sum(make_term, policy: TruncationPolicy, what: str):
    """Sum ``make_term(n)`` (returning ``(value, err, terms)``) with the stagnation rule."""
    ctx = context()
    s = ctx.mpc(0)
    inner_err = ctx.mpf(0)
    recent: deque = deque(maxlen=policy.stagnation_window)
    small = 0
    terms = 0
    for n in range(policy.max_terms):
        t, e, used = make_term(n)
        s += t
        inner_err += e
        terms += used
        at = abs(t)
        recent.append(at)
        small = small + 1 if at <= policy.rel_tol * abs(s) else 0
        if small >= policy.stagnation_window:
            return s, 2 * sum(recent) + inner_err, terms, n + 1
    raise ConvergenceError(f"{what} not converged within max_terms")


def _merge(into: list, new) -> None:
    into.extend(w for w in new if w not in into)


def psi1_series_thm11(
    params: Psi1Params, pt: EvalPoint, policy: TruncationPolicy = DEFAULT_POLICY
) -> ApproxResult:
    """``Psi_1`` through the two series ``V1``, ``V2`` of ``2F2`` functions.

    Valid for ``|x - 1| > 1`` when ``a - b`` and ``a - c`` are not integers.
    """
    failed = params.series_failures()
    if failed:
        raise PreconditionError("series representation hypotheses fail", failed)
    x, y = pt.x, pt.y
    if abs(x - 1) <= 1:
        raise DomainError("series representation requires |x - 1| > 1", [f"|x - 1| = {abs(x - 1):.6g}"])
    warnings = []
    if abs(x - 1) < OUTER_RADIUS:
        warnings.append(f"slow convergence: |x - 1| = {abs(x - 1):.4g} < {OUTER_RADIUS}")
    if (params.a - params.c).distance_to_integers() < 1e-3:
        warnings.append("a - c within 1e-3 of an integer: large intermediate terms")

    ctx = context()
    target = ctx.prec
    a, b, c, cp = params.a, params.b, params.c, params.cp
    inner_policy = policy.tightened(0.01)
    with ctx.workprec(target + GUARD_BITS):
        one_minus = (1 - x).mpc()
        r = 1 / one_minus
        gam = (y / (1 - x))
        am, bm, cm = a.mpc(), b.mpc(), c.mpc()

        def v1_term(n):
            nonlocal coef1
            f = pfq(HypParams((a - c + 1, a + n), (cp, a - b + 1 + n)), gam, inner_policy)
            t = coef1 * f.value
            e = abs(coef1) * f.err_estimate
            coef1 = coef1 * (am + n) * (cm - bm + n) / ((am - bm + 1 + n) * (n + 1)) * r
            _merge(warnings, f.warnings)
            return t, e, f.terms_used

        def v2_term(n):
            nonlocal coef2
            f = pfq(HypParams((a - c + 1, a - b - n), (cp, a - c + 1 - n)), y, inner_policy)
            t = coef2 * f.value
            e = abs(coef2) * f.err_estimate
            coef2 = coef2 * (bm + n) * (cm - am + n) / ((bm - am + 1 + n) * (n + 1)) * r
            _merge(warnings, f.warnings)
            return t, e, f.terms_used

        coef1 = coef2 = ctx.mpc(1)
        v1, e1, n1, o1 = _outer_sum(v1_term, policy, "V1 series")
        v2, e2, n2, o2 = _outer_sum(v2_term, policy, "V2 series")
        p1 = gamma_ratio_exact([c, b - a], [b, c - a]) * _pow(one_minus, -am)
        p2 = gamma_ratio_exact([c, a - b], [a, c - b]) * _pow(one_minus, -bm)
        value = p1 * v1 + p2 * v2
        err = abs(p1) * e1 + abs(p2) * e2
        # cancellation between the two halves
        scale = max(abs(p1 * v1), abs(p2 * v2))
        err += scale * ctx.ldexp(1, -(target + GUARD_BITS) + 4)
    return ApproxResult(
        +value,
        +err,
        n1 + n2,
        True,
        "thm11_series",
        tuple(warnings),
        {"outer_terms": (o1, o2)},
    )


# -- Laplace integral ---------------------------------------------------------


def _laplace_setup(params: Psi1Params, pt: EvalPoint):
    """Envelope ``exp(-lam u + 2 rho sqrt(u))`` of the integrand and its peak."""
    x, y = complex(pt.x), complex(pt.y)
    lam = 1.0 - max(x.real, 0.0)
    rho = abs(cmath.sqrt(y).real)
    peak = (rho / lam) ** 2
    return lam, rho, peak


def laplace_peak(params: Psi1Params, pt: EvalPoint) -> float:
    """Location of the integrand's envelope maximum (a cost proxy for the quadrature)."""
    if pt.x.re >= 1:
        return math.inf
    return _laplace_setup(params, pt)[2]


def psi1_laplace(
    params: Psi1Params, pt: EvalPoint, policy: TruncationPolicy = DEFAULT_POLICY
) -> ApproxResult:
    """``Psi_1`` from its Laplace integral by adaptive Gauss-Legendre quadrature.

    Requires ``Re a > 0`` and ``Re x < 1``. The integration range is cut where
    the envelope has fallen below the working precision, and the tail beyond the
    cut is bounded analytically.
    """
    if not params.laplace_ok:
        raise PreconditionError("Laplace integral requires Re(a) > 0", [f"a = {params.a}"])
    if pt.x.re >= 1:
        raise DivergentIntegralError("Laplace integral diverges for Re(x) >= 1", [f"x = {pt.x}"])
    ctx = context()
    target = ctx.prec
    extra = 0
    inner_tol = policy.rel_tol * 1e-3
    for _ in range(6):
        bits = target + GUARD_BITS + extra
        with ctx.workprec(bits):
            res, evals, cut, tail = _laplace_once(params, pt, policy.rel_tol, inner_tol)
            total = abs(res.value)
            lost = 0 if total == 0 else max(0, int(ctx.log(res.abs_integral / total, 2)))
        if GUARD_BITS + extra - lost >= 12 or total == 0:
            break
        extra = lost + 16
        inner_tol = min(inner_tol, policy.rel_tol * 1e-3 * 2.0 ** (-lost))
    with ctx.workprec(bits):
        err = res.err + tail + res.abs_integral * inner_tol
    return ApproxResult(
        +res.value,
        +err,
        evals,
        True,
        "laplace",
        (),
        {"panels": res.panels, "cutoff": float(cut), "lost_bits": lost},
    )


def _laplace_once(params: Psi1Params, pt: EvalPoint, rel_tol: float, inner_tol: float):
    ctx = context()
    a, b, c, cp = params.a, params.b, params.c, params.cp
    x, y = pt.x.mpc(), pt.y.mpc()
    am = a.mpc()
    log_norm = -log_gamma(am)
    lam, rho, peak = _laplace_setup(params, pt)
    xabs, yabs = abs(complex(pt.x)), abs(complex(pt.y))

    # first panel [0, h0] in the variable s with u = h0 s^m, smoothing u^(a-1)
    ra = float(a.re)
    m = max(1, math.ceil(1 / ra)) if ra < 1 else 1
    h0 = min(1.0, 1.0 / (1.0 + xabs + yabs))
    h0m = ctx.mpf(h0)
    counter = [0]

    def g(u):
        counter[0] += 1
        if u == 0:
            return ctx.mpc(1) if ra == 1 else ctx.mpc(0)
        f1 = _hyp1f1(b, c, x * u, inner_tol)[0]
        f0 = _hyp0f1(cp, y * u, inner_tol)[0]
        return ctx.exp(-u + (am - 1) * ctx.log(u) + log_norm) * f1 * f0

    def f(v):
        if v <= 1:
            if m == 1:
                return g(h0m * v) * h0m
            return g(h0m * v**m) * (m * h0m * v ** (m - 1))
        return g(h0m + (v - 1))

    # breakpoints in v (v = 1 corresponds to u = h0)
    sigma = math.sqrt(2 * peak**1.5 / rho) if rho > 0 and peak > 0 else 1.0 / lam
    osc = abs(complex(pt.x).imag) + abs(complex(ctx.sqrt(y)).imag)
    bits = ctx.prec
    drop = bits * math.log(2) + 20 + 2 * (abs(b) + abs(c) + abs(cp) + abs(a))

    def log_env(u):
        return -lam * u + 2 * rho * math.sqrt(u) + (ra - 1) * math.log(u) + 2 * math.log1p(u)

    top = log_env(max(peak, 1.0))
    cut = max(2 * peak, 4.0 / lam, 1.0)
    while log_env(cut) > top - drop:
        cut *= 1.5

    points = [0.0, 1.0]
    u = h0
    while u < cut:
        if u < max(peak - 3 * sigma, 1.0):
            width = u
        elif u < peak + 6 * sigma:
            width = 2 * sigma
        else:
            # past the peak the envelope falls at least like exp(-lam u / 2)
            width = max(2 * sigma, 6 / lam, u / 4)
        if osc > 0:
            rate = abs(complex(pt.x).imag) + abs(complex(ctx.sqrt(y)).imag) / math.sqrt(u)
            width = min(width, 6 * math.pi / rate)
        width = max(width, h0)
        u = min(u + width, cut)
        points.append(1.0 + (u - h0))
        if len(points) > 3000:
            points.append(1.0 + (cut - h0))
            break
    breakpoints = [ctx.mpf(p) for p in points]
    res = integrate(f, breakpoints, rel_tol / 4)

    # tail beyond the cut: |g(u)| <= |g(U)| exp(-(lam - rho/sqrt(U)) (u - U))
    U = ctx.mpf(cut)
    decay = lam - rho / math.sqrt(cut)
    tail = abs(g(U)) / ctx.mpf(decay) if decay > 0 else ctx.inf
    return res, counter[0], cut, tail


# -- dispatcher ---------------------------------------------------------------


def psi1_eval(
    params: Psi1Params,
    pt: EvalPoint,
    policy: TruncationPolicy = DEFAULT_POLICY,
    series_radius: float = SERIES_RADIUS,
    outer_radius: float = OUTER_RADIUS,
) -> ApproxResult:
    """Evaluate ``Psi_1`` by the first applicable route.

    1. ``|x| <= series_radius``: double series (on the Kummer image when that
       is closer to the origin).
    2. ``|x - 1| >= outer_radius`` and no integer ``a-b``, ``a-c``: the ``2F2`` series.
    3. The Kummer image, re-dispatched through rules 1 and 2.
    4. The Laplace integral (``Re a > 0``, ``Re x < 1``) on whichever of the
       original and transformed tasks has the nearer integrand peak.
    """
    failed = []
    k_params, k_pt, pref = psi1_kummer(params, pt)
    x, xk = abs(pt.x), abs(k_pt.x)
    if x <= series_radius:
        if xk < x:
            r = psi1_double_series(k_params, k_pt.x, k_pt.y, policy, series_radius)
            return _scaled(r, pref, "kummer+double_series")
        return psi1_double_series(params, pt.x, pt.y, policy, series_radius)
    failed.append(f"|x| = {x:.4g} > {series_radius}")

    if abs(pt.x - 1) >= outer_radius:
        if params.thm11_ok:
            return psi1_series_thm11(params, pt, policy)
        failed.extend(params.series_failures())
    else:
        failed.append(f"|x - 1| = {abs(pt.x - 1):.4g} < {outer_radius}")

    if xk <= series_radius:
        r = psi1_double_series(k_params, k_pt.x, k_pt.y, policy, series_radius)
        return _scaled(r, pref, "kummer+double_series")
    if abs(k_pt.x - 1) >= outer_radius:
        if k_params.thm11_ok:
            return _scaled(psi1_series_thm11(k_params, k_pt, policy), pref, "kummer+thm11_series")
        failed.extend(f"transformed: {f}" for f in k_params.series_failures())

    if params.laplace_ok:
        direct = laplace_peak(params, pt)
        image = laplace_peak(k_params, k_pt)
        if image < direct:
            return _scaled(psi1_laplace(k_params, k_pt, policy), pref, "kummer+laplace")
        if direct < math.inf:
            return psi1_laplace(params, pt, policy)
        failed.append("Re(x) >= 1 for both the point and its Kummer image")
    else:
        failed.append("Re(a) <= 0 rules out the Laplace integral")
    raise NoMethodError("no evaluation route applies", failed)
