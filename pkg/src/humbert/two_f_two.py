"""Large-argument behaviour of ``2F2[a, b-n; c, d-n; .]`` uniformly in the shift ``n``.

For ``|arg z| < pi`` the algebraic expansion reads

    2F2[a, b-n; c, d-n; -z] = G_n (S_n(z) + T_n(z) + R),   G_n = Gamma(c)Gamma(d-n) / (Gamma(a)Gamma(b-n)),

with ``S_n`` a sum of ``floor(w - Re a) + 1`` inverse powers ``z^(-a-k)`` and ``T_n``
a sum of ``floor(w - Re b) + n + 1`` powers ``z^(n-b-k)``. At arguments with
positive real part the exponentially large part

    G_n e^y sum_k c_{k,n} y^(a+b-c-d-k)

dominates; its coefficients are terminating ``3F2`` sums at unit argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ExclusionZoneError, GammaPoleError, PreconditionError
from .gamma_core import DEFAULT_EXCLUSION_RADIUS, gamma_ratio, log_gamma_ratio, BoundReport
from .hyper_series import ApproxResult, HypParams, TruncationPolicy, f3f2_unity_terminating, pfq
from .params import distance_to_lattice
from .scalars import GUARD_BITS, Exact, context, cx, exact

NEAR_POLE = 1e-6
MIN_EPS = 1e-3


@dataclass(frozen=True)
class TwoF2Family:
    """Parameters of ``2F2[a, b-n; c, d-n; .]``."""

    a: Exact
    b: Exact
    c: Exact
    d: Exact
    n: int = 0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, exact(getattr(self, name)))
        if self.n < 0:
            raise ValueError("shift index n must be non-negative")
        if self.c.is_nonpositive_integer():
            raise PreconditionError("c must not be a non-positive integer", [f"c = {self.c}"])

    def shifted(self, n: int) -> "TwoF2Family":
        return TwoF2Family(self.a, self.b, self.c, self.d, n)

    def expansion_failures(self) -> list[str]:
        """Hypotheses of the algebraic expansion that do not hold."""
        out = []
        if self.d.is_integer():
            out.append("d must not be an integer")
        if (self.a - self.b).is_integer():
            out.append("a - b must not be an integer")
        return out

    def hyp_params(self, sign: int = -1) -> HypParams:
        """``HypParams`` of ``2F2[a, b -/+ n; c, d -/+ n]``."""
        s = self.n if sign > 0 else -self.n
        return HypParams((self.a, self.b + s), (self.c, self.d + s))


@dataclass(frozen=True)
class WSelection:
    w: Fraction
    eps: float
    floor_a: int
    floor_b: int
    warnings: tuple[str, ...] = field(default=(), compare=False)


def as_fraction(v) -> Fraction:
    """Decimal reading of a float, so ``10.2`` becomes ``51/5``."""
    return v if isinstance(v, Fraction) else Fraction(repr(v) if isinstance(v, float) else v)


def _frac(q: Fraction) -> Fraction:
    return q - math.floor(q)


def scan_w(
    target: Fraction, eps: float, offsets: Sequence[Fraction], lower: Fraction
) -> tuple[Fraction, float, list[str]]:
    """Smallest ``w >= target`` on the grid ``target + j eps/2`` with ``w > lower``
    and ``frac(w - o)`` in ``(eps, 1)`` for every offset ``o``.

    The scan covers one unit; if the window is empty ``eps`` is halved (not below
    ``1e-3``) and a warning is recorded.
    """
    if not 0 < eps < 0.5:
        raise ValueError("eps must lie in (0, 1/2)")
    warnings: list[str] = []
    while True:
        e = as_fraction(eps)
        step = e / 2
        j = 0
        while step * j < 1:
            w = target + step * j
            if w > lower and all(e < _frac(w - o) for o in offsets):
                return w, eps, warnings
            j += 1
        if eps / 2 < MIN_EPS:
            raise PreconditionError(f"no admissible w within one unit of {float(target)}")
        warnings.append(f"no admissible w at eps = {eps:g}; eps halved to {eps / 2:g}")
        eps /= 2


def choose_w(fam: TwoF2Family, target_order: float, eps: float = 0.1) -> WSelection:
    """Pick ``w`` for the algebraic expansion: ``w > max(Re a, Re b, Re d)`` with
    ``frac(w - Re a)`` and ``frac(w - Re b)`` in ``(eps, 1)``."""
    lower = max(fam.a.re, fam.b.re, fam.d.re)
    target = as_fraction(target_order)
    if target <= lower:
        raise PreconditionError(
            "target order must exceed max(Re a, Re b, Re d)",
            [f"target {float(target):g} <= {float(lower):g}"],
        )
    w, used, warnings = scan_w(target, eps, (fam.a.re, fam.b.re), lower)
    return WSelection(w, used, math.floor(w - fam.a.re), math.floor(w - fam.b.re), tuple(warnings))


def _check_numerator(args) -> None:
    for v in args:
        if v.distance_to_nonpositive_integers() < NEAR_POLE and v.re <= 0.5:
            raise GammaPoleError(f"gamma argument {v} within {NEAR_POLE} of a pole")


def _power(z, s):
    ctx = context()
    return ctx.exp(s * ctx.log(z))


def _power_on_cut(z, s):
    """``z^s`` averaged over the two sides of the negative real axis."""
    ctx = context()
    if z.imag == 0 and z.real < 0:
        r = ctx.log(-z.real)
        return (ctx.exp(s * (r + 1j * ctx.pi)) + ctx.exp(s * (r - 1j * ctx.pi))) / 2
    return _power(z, s)


def _algebraic_terms(fam: TwoF2Family, z, count: int, which: str):
    """Terms ``k = 0..count`` of S_n ("s") or T_n ("t"); the last is the first omitted one."""
    ctx = context()
    a, b, c, d, n = fam.a, fam.b, fam.c, fam.d, fam.n
    out = []
    for k in range(count + 1):
        if which == "s":
            numer = [a + k, b - a - n - k]
            denom = [c - a - k, d - a - n - k]
            expo = -a - k
        else:
            numer = [b - n + k, a - b + n - k]
            denom = [d - b - k, c - b + n - k]
            expo = n - b - k
        _check_numerator(numer)
        lg = log_gamma_ratio(numer, denom)
        if lg is None:
            out.append(ctx.mpc(0))
            continue
        sign = -1 if k % 2 else 1
        lfact = ctx.log(ctx.factorial(k))
        out.append(sign * ctx.exp(lg - lfact) * _power_on_cut(z, expo.mpc()))
    return out


def s_n_sum(fam: TwoF2Family, z, sel: WSelection):
    """``S_n(z)``: the ``floor(w - Re a) + 1`` inverse-power terms."""
    ctx = context()
    z = cx(z)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        terms = _algebraic_terms(fam, z, sel.floor_a, "s")
        total = ctx.fsum(terms[: sel.floor_a + 1])
    return +total


def t_n_sum(fam: TwoF2Family, z, sel: WSelection):
    """``T_n(z)``: the ``floor(w - Re b) + n + 1`` powers ``z^(n-b-k)``."""
    ctx = context()
    z = cx(z)
    upper = sel.floor_b + fam.n
    with ctx.workprec(ctx.prec + GUARD_BITS):
        terms = _algebraic_terms(fam, z, upper, "t")
        total = ctx.fsum(terms[: upper + 1])
    return +total


def coeff_c_kn(a, b, c, d, k: int, n: int):
    """``c_{k,n} = (c+d-a-b)_k (n+1-b)_k / k! * 3F2[-k, c-a, d-a-n; c+d-a-b, b-n-k; 1]``."""
    ctx = context()
    a, b, c, d = exact(a), exact(b), exact(c), exact(d)
    if k == 0:
        return ctx.mpc(1)
    s = c + d - a - b
    with ctx.workprec(ctx.prec + GUARD_BITS):
        params = HypParams((-k, c - a, d - a - n), (s, b - n - k))
        f = f3f2_unity_terminating(params)
        coef = ctx.mpc(1)
        sm, bm = s.mpc(), (n + 1 - b).mpc()
        for j in range(k):
            coef *= (sm + j) * (bm + j) / (j + 1)
        value = coef * f
    return +value


def f2f2_large_z(
    fam: TwoF2Family,
    z,
    sel: WSelection,
    n_exp_terms: int = 6,
    radius: float = DEFAULT_EXCLUSION_RADIUS,
) -> ApproxResult:
    """Asymptotic value of ``2F2[a, b-n; c, d-n; -z]`` for large ``|z|``.

    The algebraic parts ``S_n + T_n`` are always included. The exponential
    series in ``y = -z`` with ``n_exp_terms`` coefficients ``c_{k,n}`` is added
    off the negative real ``y`` axis; on that axis it is below ``e^-|z|`` and
    the algebraic powers are averaged over the two sides of the cut.
    """
    failed = fam.expansion_failures()
    if failed:
        raise PreconditionError("expansion hypotheses fail", failed)
    if n_exp_terms < 1:
        raise ValueError("n_exp_terms must be at least 1")
    ctx = context()
    z = cx(z)
    if z == 0:
        raise PreconditionError("z must be non-zero")
    zb = exact(z)
    if distance_to_lattice(zb, -fam.b) < radius:
        raise ExclusionZoneError(f"z within {radius} of the points -b + k")
    a, b, c, d, n = fam.a, fam.b, fam.c, fam.d, fam.n
    warnings = list(sel.warnings)
    with ctx.workprec(ctx.prec + GUARD_BITS):
        pre = gamma_ratio([c, d - n], [a, b - n])
        s_terms = _algebraic_terms(fam, z, sel.floor_a + 1, "s")
        t_terms = _algebraic_terms(fam, z, sel.floor_b + n + 1, "t")
        value = ctx.fsum(s_terms[:-1]) + ctx.fsum(t_terms[:-1])
        err = abs(s_terms[-1]) + abs(t_terms[-1])
        y = -z
        method = "f2f2_algebraic"
        if not (y.imag == 0 and y.real < 0):
            expo = (a + b - c - d).mpc()
            ey = ctx.exp(y)
            part = ctx.mpc(0)
            for k in range(n_exp_terms):
                part += coeff_c_kn(a, b, c, d, k, n) * _power(y, expo - k)
            value += ey * part
            err += abs(ey * coeff_c_kn(a, b, c, d, n_exp_terms, n) * _power(y, expo - n_exp_terms))
            method = "f2f2_algebraic+exponential"
        value *= pre
        err *= abs(pre)
    return ApproxResult(+value, +err, 0, True, method, tuple(warnings))


def theorem26_shape(fam: TwoF2Family, z: float) -> float:
    """``(n+1)^(2|b-d|) z^p e^z`` with ``p = Re(a-c) + max(0, Re(b-d))``, in log form."""
    p = float((fam.a - fam.c).re) + max(0.0, float((fam.b - fam.d).re))
    return 2 * abs(fam.b - fam.d) * math.log(fam.n + 1) + p * math.log(z) + z


def theorem25_shape(fam: TwoF2Family, z) -> float:
    """``(n+1)^max(0, Re(d-b)) + (n+1)^(2|b-d|) |z|^Re(a+b-c-d) e^(-Re z)``."""
    zc = complex(z)
    n1 = fam.n + 1
    first = n1 ** max(0.0, float((fam.d - fam.b).re))
    log_second = (
        2 * abs(fam.b - fam.d) * math.log(n1)
        + float((fam.a + fam.b - fam.c - fam.d).re) * math.log(abs(zc))
        - zc.real
    )
    return math.log(first + math.exp(min(log_second, 700.0)))


def f2f2_growth_check_plus_n(
    fam: TwoF2Family,
    z,
    n: int,
    kind: str = "2.6",
    sign: int = +1,
    constant: float = 1.0,
) -> BoundReport:
    """Compare ``|2F2[a, b+-n; c, d+-n; .]|`` with a growth shape.

    ``kind="2.6"``: argument ``z`` real and positive, shape
    ``(n+1)^(2|b-d|) z^p e^z``. ``kind="2.5"``: argument ``-z`` with
    ``|arg z| < pi`` and ``sign=+1``, shape
    ``(n+1)^max(0, Re(d-b)) + (n+1)^(2|b-d|) |z|^Re(a+b-c-d) e^(-Re z)``.
    The report's ``rhs`` is ``constant`` times the shape.
    """
    ctx = context()
    shifted = fam.shifted(n)
    params = shifted.hyp_params(sign)
    with ctx.workprec(max(ctx.prec, 113)):
        if kind == "2.6":
            zf = float(cx(z).real)
            if zf <= 0 or cx(z).imag != 0:
                raise PreconditionError("growth bound applies to real positive z")
            value = pfq(params, z, TruncationPolicy(1e-15))
            log_rhs = theorem26_shape(shifted, zf)
        elif kind == "2.5":
            if sign < 0:
                raise PreconditionError("the argument -z bound applies to the +n family")
            value = pfq(params, -cx(z), TruncationPolicy(1e-15))
            log_rhs = theorem25_shape(shifted, z)
        else:
            raise ValueError(f"unknown bound {kind!r}")
        lhs = abs(value.value)
        # compare in log space: e^z overflows a double for z ~ 700
        log_lhs = float(ctx.log(lhs)) if lhs > 0 else -math.inf
    log_c = math.log(constant)
    holds = log_lhs <= log_rhs + log_c + math.log1p(1e-12)
    return BoundReport(_safe_exp(log_lhs), _safe_exp(log_rhs + log_c), holds)


def _safe_exp(v: float) -> float:
    return math.exp(v) if v < 709 else math.inf
