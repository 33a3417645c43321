"""Complete asymptotic expansions of ``Psi_1`` when ``x`` and ``y`` grow together.

Both expansions assume ``y / |1 - x|`` stays in a fixed band ``[g1, g2]``.
For ``y -> +inf`` the function is exponentially large,

    Psi_1 ~ Gamma(c)Gamma(c') / (Gamma(a)Gamma(c-b)) y^(a-2b-c') e^y sum_k a_k(x, y) y^-k,

and in general the expansion has three blocks: ``A1`` (powers of ``1-x``),
``A2`` (powers of ``-y``) and the exponential block ``A3`` built from the
same coefficients ``a_k``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ExclusionZoneError, GammaPoleError, PreconditionError
from .gamma_core import DEFAULT_EXCLUSION_RADIUS, gamma_ratio_exact
from .hyper_series import ApproxResult, HypParams, TruncationPolicy, f3f2_unity_terminating, pfq
from .params import EvalPoint, Psi1Params, distance_to_lattice
from .psi1_eval import psi1_kummer
from .scalars import GUARD_BITS, Exact, context, cx, exact
from .two_f_two import as_fraction, scan_w

NEAR_POLE = 1e-6
ARG_TOL = 1e-8
INNER_POLICY = TruncationPolicy(1e-20)


class HypothesisWarning(UserWarning):
    """An expansion was used outside the hypotheses it is proven under."""


@dataclass(frozen=True)
class RayScaling:
    """The ray ``(x, y) = (t x0, t y0)``."""

    x0: Exact
    y0: Exact
    t: float

    def __post_init__(self):
        object.__setattr__(self, "x0", exact(self.x0))
        object.__setattr__(self, "y0", exact(self.y0))
        if not self.t > 0:
            raise ValueError("scale t must be positive")

    @property
    def x(self):
        return cx(self.x0) * self.t

    @property
    def y(self):
        return cx(self.y0) * self.t

    @property
    def gamma_ratio(self):
        return self.y / (1 - self.x)

    def point(self) -> EvalPoint:
        t = as_fraction(self.t)
        return EvalPoint(self.x0 * t, self.y0 * t)

    def in_band(self, g1: float, g2: float) -> bool:
        return g1 <= abs(self.gamma_ratio) <= g2


@dataclass(frozen=True)
class Expansion13Config:
    w: Fraction
    eps: float
    M: int
    N: int = 1
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.M < 1:
            raise PreconditionError("M = floor(w + Re(b - a)) must be at least 1")
        if self.N < 1:
            raise ValueError("N must be at least 1")


def _pow(base, expo):
    ctx = context()
    return ctx.exp(expo * ctx.log(base))


def _rf(a, n: int):
    ctx = context()
    out = ctx.mpc(1)
    for j in range(n):
        out *= a + j
    return out


def _check_hypotheses(failed: list[str], strict: bool) -> list[str]:
    if failed and strict:
        raise PreconditionError("expansion hypotheses fail", failed)
    for msg in failed:
        warnings.warn(msg, HypothesisWarning, stacklevel=3)
    return failed


def _gamma_of(x, y):
    return y / (1 - x)


def coeff_a_k(params: Psi1Params, k: int, x, y):
    """``a_k(x, y)``: a finite sum over ``j`` of terminating ``3F2`` values times ``(y/(1-x))^(b+j)``."""
    ctx = context()
    if k < 0:
        raise ValueError("k must be non-negative")
    x, y = cx(x), cx(y)
    if x == 1:
        raise PreconditionError("x must differ from 1")
    a, b, c, cp = params.a, params.b, params.c, params.cp
    with ctx.workprec(ctx.prec + GUARD_BITS):
        g = _gamma_of(x, y)
        bm = b.mpc()
        u = (b - a + cp).mpc()
        total = ctx.mpc(0)
        for j in range(k + 1):
            coef = _rf(bm, j) * _rf(u, k - j) * _rf((b - a + 1).mpc() + j, k - j)
            coef /= ctx.factorial(j) * ctx.factorial(k - j)
            f = f3f2_unity_terminating(HypParams((-j, j - k, c + cp - a - 1), (b - a + cp, a - b - k)))
            total += coef * f * _pow(g, bm + j)
    return +total


def _y_ok(y) -> bool:
    return y.real > 0 and abs(y.imag) <= ARG_TOL * abs(y)


def _band_warnings(x, y, band) -> list[str]:
    if band is None:
        return []
    r = float(abs(y / (1 - x)))
    if not band[0] <= r <= band[1]:
        return [f"|y/(1-x)| = {r:.4g} outside [{band[0]}, {band[1]}]"]
    return []


def _thm12_parts(params: Psi1Params, x, y, K: int):
    ctx = context()
    a, b, c, cp = params.a, params.b, params.c, params.cp
    pre = gamma_ratio_exact([c, cp], [a, c - b])
    pre = pre * ctx.exp(y) * _pow(y, (a - 2 * b - cp).mpc())
    terms = [coeff_a_k(params, k, x, y) * _pow(y, -k) for k in range(K + 1)]
    return pre, terms


def psi1_asym_thm12(params: Psi1Params, x, y, K: int, band=None, strict: bool = True) -> ApproxResult:
    """``K``-term expansion for real ``y -> +inf``; the error is the first omitted term."""
    if K < 1:
        raise ValueError("K must be at least 1")
    ctx = context()
    x, y = cx(x), cx(y)
    if x.imag == 0 and x.real >= 1:
        raise PreconditionError("|arg(1 - x)| < pi is required")
    if not _y_ok(y):
        raise PreconditionError("y must be real and positive")
    notes = _check_hypotheses(params.series_failures(), strict)
    notes += _band_warnings(x, y, band)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        pre, terms = _thm12_parts(params, x, y, K)
        value = pre * ctx.fsum(terms[:K])
        err = abs(pre * terms[K])
    return ApproxResult(+value, +err, K, True, "thm12", tuple(notes))


def choose_w_thm13(params: Psi1Params, target_order: float, eps: float = 0.1, N: int = 1) -> Expansion13Config:
    """``w > max(Re(a-b)+1, Re(a-c)+2)`` with ``frac(w - Re(a-b))`` and
    ``frac(w - Re(a-c) - 1)`` in ``(eps, 1)``; ``M = floor(w + Re(b-a))``."""
    amb = (params.a - params.b).re
    amc = (params.a - params.c).re
    lower = max(amb + 1, amc + 2)
    target = as_fraction(target_order)
    if target <= lower:
        raise PreconditionError(
            "target order must exceed max(Re(a-b)+1, Re(a-c)+2)",
            [f"target {float(target):g} <= {float(lower):g}"],
        )
    w, used, notes = scan_w(target, eps, (amb, amc + 1), lower)
    return Expansion13Config(w, used, math.floor(w - amb), N, tuple(notes))


def _inner_2f2(upper, lower, g):
    for p in lower:
        if p.distance_to_nonpositive_integers() < NEAR_POLE:
            raise GammaPoleError(f"lower parameter {p} within {NEAR_POLE} of a pole")
    return pfq(HypParams(upper, lower), g, INNER_POLICY).value


def _thm13_blocks(params: Psi1Params, x, y, M: int, N: int):
    """Prefactor-weighted blocks ``(A1, A2, A3)``."""
    ctx = context()
    a, b, c, cp = params.a, params.b, params.c, params.cp
    g = _gamma_of(x, y)
    one_minus_x = 1 - x
    a1 = ctx.mpc(0)
    for k in range(M + 1):
        coef = _rf(a.mpc(), k) * _rf((c - b).mpc(), k) / (_rf((a - b + 1).mpc(), k) * ctx.factorial(k))
        f = _inner_2f2((a - c + 1, a + k), (cp, a - b + 1 + k), g)
        a1 += coef * f * _pow(one_minus_x, -(a.mpc() + k))
    a2 = ctx.mpc(0)
    base = _pow(y / (x - 1), b.mpc())
    for k in range(M + 1):
        coef = _rf((a - b).mpc(), k) * _rf((a - b - cp + 1).mpc(), k) / ctx.factorial(k)
        f = _inner_2f2((b, b - c + 1 - k), (b - a + 1 - k, b - a + cp - k), g)
        a2 += coef * f * base * _pow(-y, -(a.mpc() + k))
    pre3, terms = _thm12_parts(params, x, y, N - 1)
    a3 = pre3 * ctx.fsum(terms[:N])
    a1 *= gamma_ratio_exact([c, b - a], [b, c - a])
    a2 *= gamma_ratio_exact([c, cp, a - b], [a, c - b, b - a + cp])
    return a1, a2, a3


def _thm13_checks(params: Psi1Params, x, y, radius: float, strict: bool) -> list[str]:
    if x.imag == 0 and x.real >= 1:
        raise PreconditionError("|arg(1 - x)| < pi is required")
    if y == 0 or (y.imag == 0 and y.real > 0):
        raise PreconditionError("|arg(-y)| < pi is required")
    notes = _check_hypotheses(params.remaining_case_failures(), strict)
    if distance_to_lattice(exact(y), params.b - params.a) < radius:
        msg = f"y within {radius} of the points b - a + k"
        if strict:
            raise ExclusionZoneError(msg)
        warnings.warn(msg, HypothesisWarning, stacklevel=3)
        notes.append(msg)
    return notes


def psi1_asym_thm13(
    params: Psi1Params,
    x,
    y,
    cfg: Expansion13Config,
    band=None,
    radius: float = DEFAULT_EXCLUSION_RADIUS,
    strict: bool = True,
) -> ApproxResult:
    """Three-block expansion with ``M + 1`` terms in ``A1``/``A2`` and ``N`` in ``A3``.

    The error estimate is ``|y|^(-Re b - w) + |y|^(Re(a-2b-c') - N) e^(Re y)``,
    the remainder orders with unit constants.
    """
    ctx = context()
    x, y = cx(x), cx(y)
    notes = _thm13_checks(params, x, y, radius, strict)
    notes += _band_warnings(x, y, band)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        a1, a2, a3 = _thm13_blocks(params, x, y, cfg.M, cfg.N)
        value = a1 + a2 + a3
        ly = ctx.log(abs(y))
        b_re = float(params.b.re)
        err = ctx.exp(-(b_re + ctx.mpf(cfg.w.numerator) / cfg.w.denominator) * ly)
        err += ctx.exp(float((params.a - 2 * params.b - params.cp).re - cfg.N) * ly + y.real)
    return ApproxResult(
        +value, +err, cfg.M + 1, True, "thm13", tuple(notes) + cfg.warnings,
        {"A1": +a1, "A2": +a2, "A3": +a3},
    )


def leading_term(params: Psi1Params, x, y, cfg: Expansion13Config | None = None, strict: bool = False):
    """The lowest-order truncation ``L`` used for ratio tests.

    For ``|x - 1| < 1`` the Kummer image is used. Real positive ``y`` takes the
    one-term ``y -> +inf`` expansion; otherwise the three-block expansion with
    ``N = 1`` and ``M`` from ``cfg`` (zero when ``cfg`` is omitted).
    """
    ctx = context()
    pt = EvalPoint(exact(x), exact(y))
    xm, ym = cx(pt.x), cx(pt.y)
    if abs(xm - 1) < 1:
        p2, pt2, factor = psi1_kummer(params, pt)
        with ctx.workprec(ctx.prec + GUARD_BITS):
            inner = leading_term(p2, pt2.x, pt2.y, cfg, strict)
            value = factor * inner
        return +value
    if ym == 0:
        raise PreconditionError("regime undetermined at y = 0")
    with ctx.workprec(ctx.prec + GUARD_BITS):
        if _y_ok(ym):
            _check_hypotheses(params.series_failures(), strict)
            pre, terms = _thm12_parts(params, xm, ym, 0)
            value = pre * terms[0]
        else:
            _thm13_checks(params, xm, ym, DEFAULT_EXCLUSION_RADIUS, strict)
            M = cfg.M if cfg is not None else 0
            value = ctx.fsum(_thm13_blocks(params, xm, ym, M, 1))
    return +value
