"""Confluent functions ``1F1`` and ``0F1`` at arbitrary complex argument.

Small arguments go through the power series (after Kummer's transformation
``1F1[b; c; z] = e^z 1F1[c-b; c; -z]`` when ``Re z < 0``). Large arguments use
the two-sided asymptotic expansion, truncated at its smallest term, with a
fallback to the series when the truncation error is not small enough.
"""

from __future__ import annotations

import math

from .gamma_core import gamma_ratio_exact
from .hyper_series import ApproxResult, HypParams, TruncationPolicy, pfq
from .scalars import GUARD_BITS, Exact, context, cx, exact


def _asymptotic_sum(p, q, w, limit: int = 400):
    """``sum_s (p)_s (q)_s / s! * w^-s`` truncated before its smallest term.

    Returns (sum, first omitted term magnitude).
    """
    ctx = context()
    term = ctx.mpc(1)
    s = ctx.mpc(1)
    inv = 1 / w
    prev = ctx.mpf(1)
    eps = ctx.ldexp(ctx.mpf(1), -ctx.prec)
    for k in range(limit):
        nxt = term * (p + k) * (q + k) / (k + 1) * inv
        size = abs(nxt)
        if size == 0:
            return s, ctx.mpf(0)
        if size >= prev:
            return s, size
        if size < eps:
            # the omitted tail is below rounding; |s| is close to 1
            return s + nxt, size
        s += nxt
        term = nxt
        prev = size
    return s, abs(term)


def _principal_pow(w, p):
    ctx = context()
    return ctx.exp(p * ctx.log(w))


def _neg_pow(z, p):
    """``(-z)^p`` on the principal branch; for real positive ``z`` the average of both sides."""
    ctx = context()
    if z.imag == 0 and z.real > 0:
        return _principal_pow(ctx.mpc(z.real), p) * ctx.cospi(p)
    return _principal_pow(-z, p)


def _asymptotic_ok(z, params, bits) -> bool:
    return float(abs(z)) >= 0.7 * bits + 2 * sum(abs(p) for p in params) + 10


def _hyp1f1_asymptotic(b, c, z):
    """Two-sided expansion of ``1F1[b; c; z]`` for large ``|z|``. Returns (value, err)."""
    ctx = context()
    bm, cm = b.mpc(), c.mpc()
    s1, e1 = _asymptotic_sum(cm - bm, 1 - bm, z)
    s2, e2 = _asymptotic_sum(bm, bm - cm + 1, -z)
    f1 = gamma_ratio_exact([c], [b])
    f2 = gamma_ratio_exact([c], [c - b])
    if f1 != 0:
        f1 = f1 * ctx.exp(z) * _principal_pow(z, bm - cm)
    if f2 != 0:
        f2 = f2 * _neg_pow(z, -bm)
    value = f1 * s1 + f2 * s2
    err = abs(f1) * e1 + abs(f2) * e2
    return value, err


def _hyp1f1_series(b, c, z, tol: float):
    ctx = context()
    policy = TruncationPolicy(tol)
    if z.real < 0:
        r = pfq(HypParams((c - b,), (c,)), -z, policy)
        scale = ctx.exp(z)
        return r.value * scale, r.err_estimate * abs(scale), r.terms_used
    r = pfq(HypParams((b,), (c,)), z, policy)
    return r.value, r.err_estimate, r.terms_used


def hyp1f1(b, c, z, tol: float = 1e-15) -> ApproxResult:
    """Kummer's function ``1F1[b; c; z]``."""
    ctx = context()
    b, c = exact(b), exact(c)
    z = cx(z)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        value, err, terms, method = _hyp1f1(b, c, z, tol)
    return ApproxResult(+value, +err, terms, True, method)


def _hyp1f1(b: Exact, c: Exact, z, tol: float):
    ctx = context()
    if z == 0:
        return ctx.mpc(1), ctx.mpf(0), 1, "series"
    terminating = b.is_nonpositive_integer() or (c - b).is_nonpositive_integer()
    if not terminating and _asymptotic_ok(z, (b, c), ctx.prec):
        value, err = _hyp1f1_asymptotic(b, c, z)
        if err <= tol * abs(value):
            return value, err, 0, "asymptotic"
    value, err, terms = _hyp1f1_series(b, c, z, tol)
    return value, err, terms, "series"


def _hyp0f1_asymptotic(c: Exact, v):
    """Large-``|v|`` expansion of ``0F1[; c; v]`` in ``zeta = 4 sqrt(v)``.

    Both exponential parts share the coefficients ``(c-1/2)_s (3/2-c)_s / s!``
    and stay regular at ``c = 1/2, 0, -1/2, ...``.
    """
    ctx = context()
    cm = c.mpc()
    zeta = 4 * ctx.sqrt(v)
    p = cm - ctx.mpf(0.5)
    q = ctx.mpf(1.5) - cm
    s1, e1 = _asymptotic_sum(p, q, zeta)
    s2, e2 = _asymptotic_sum(p, q, -zeta)
    pre = gamma_ratio_exact([c]) * ctx.power(2, 2 * cm - 2) / ctx.sqrt(ctx.pi)
    f1 = pre * ctx.exp(zeta / 2) * _principal_pow(zeta, -p)
    f2 = pre * ctx.exp(-zeta / 2) * _neg_pow(zeta, -p)
    return f1 * s1 + f2 * s2, abs(f1) * e1 + abs(f2) * e2


def hyp0f1(c, v, tol: float = 1e-15) -> ApproxResult:
    """The confluent limit function ``0F1[; c; v]``."""
    ctx = context()
    c = exact(c)
    v = cx(v)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        value, err, terms, method = _hyp0f1(c, v, tol)
    return ApproxResult(+value, +err, terms, True, method)


def _hyp0f1(c: Exact, v, tol: float):
    ctx = context()
    if v == 0:
        return ctx.mpc(1), ctx.mpf(0), 1, "series"
    zeta_abs = 4 * math.sqrt(float(abs(v)))
    if _asymptotic_ok(zeta_abs, (c,), ctx.prec):
        value, err = _hyp0f1_asymptotic(c, v)
        if err <= tol * abs(value):
            return value, err, 0, "asymptotic"
    r = pfq(HypParams((), (c,)), v, TruncationPolicy(tol))
    return r.value, r.err_estimate, r.terms_used, "series"

