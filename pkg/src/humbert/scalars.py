"""Complex scalars at configurable working precision.

Every numerical routine in the package works on ``mpmath`` complex numbers drawn
from a thread-local context, so that raising the precision inside one thread
never affects another. Parameters are kept as exact rationals (:class:`Exact`)
until the moment they are evaluated, which keeps values such as 1/3 exact at any
working precision and makes integrality tests on parameter differences exact.
"""

from __future__ import annotations

import math
import re
import threading
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import mpmath
from mpmath.libmp import to_rational

from .errors import NonFiniteError

STANDARD_BITS = 53
EXTENDED_BITS = 113
PRECISION_MODES = {"standard": STANDARD_BITS, "extended": EXTENDED_BITS}

# extra bits carried by every routine on top of the caller's precision
GUARD_BITS = 24

_local = threading.local()


def context() -> mpmath.ctx_mp.MPContext:
    """Return this thread's arithmetic context (created on first use)."""
    ctx = getattr(_local, "ctx", None)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.prec = STANDARD_BITS
        _local.ctx = ctx
    return ctx


def working_bits() -> int:
    return context().prec


@contextmanager
def precision(mode: Union[str, int]) -> Iterator[mpmath.ctx_mp.MPContext]:
    """Temporarily set the working precision of this thread.

    ``mode`` is ``"standard"``, ``"extended"`` or a bit count.
    """
    bits = PRECISION_MODES[mode] if isinstance(mode, str) else int(mode)
    ctx = context()
    with ctx.workprec(bits):
        yield ctx


@dataclass(frozen=True)
class Exact:
    """Exact complex rational, used for parameters."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __add__(self, other: object) -> "Exact":
        o = exact(other)
        return Exact(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: object) -> "Exact":
        o = exact(other)
        return Exact(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: object) -> "Exact":
        return exact(other) - self

    def __neg__(self) -> "Exact":
        return Exact(-self.re, -self.im)

    def __mul__(self, other: object) -> "Exact":
        o = exact(other)
        return Exact(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Exact":
        o = exact(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by zero")
        return Exact(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )

    def __rtruediv__(self, other: object) -> "Exact":
        return exact(other) / self

    def __abs__(self) -> float:
        return math.hypot(float(self.re), float(self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    def is_nonpositive_integer(self) -> bool:
        return self.is_integer() and self.re <= 0

    def distance_to_integers(self) -> float:
        return math.hypot(float(self.re - round(self.re)), float(self.im))

    def distance_to_nonpositive_integers(self) -> float:
        k = min(0, round(self.re))
        return math.hypot(float(self.re - k), float(self.im))

    def mpc(self) -> mpmath.mpc:
        ctx = context()
        return ctx.mpc(_frac_to_mpf(ctx, self.re), _frac_to_mpf(ctx, self.im))

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _frac_to_mpf(ctx, q: Fraction):
    if q.denominator == 1:
        return ctx.mpf(q.numerator)
    return ctx.mpf(q.numerator) / q.denominator


def _mpf_to_fraction(x) -> Fraction:
    p, q = to_rational(x._mpf_)
    return Fraction(int(p), int(q))


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?(?:(?P<im>[+-]?(?:{_NUM})?)[ij])?$"
)


def parse_scalar(text: str) -> Exact:
    """Parse ``"re[+im i]"`` where each part may be an int, decimal or fraction.

    >>> parse_scalar("1/3")
    Exact(re=Fraction(1, 3), im=Fraction(0, 1))
    >>> parse_scalar("0.5-2i")
    Exact(re=Fraction(1, 2), im=Fraction(-2, 1))
    """
    s = text.strip().replace(" ", "")
    m = _COMPLEX_RE.match(s)
    if not s or m is None or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"cannot parse complex scalar {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_text = m.group("im")
    if im_text is None:
        im_part = Fraction(0)
    elif im_text in ("", "+"):
        im_part = Fraction(1)
    elif im_text == "-":
        im_part = Fraction(-1)
    else:
        im_part = Fraction(im_text)
    return Exact(re_part, im_part)


def exact(value: object) -> Exact:
    """Convert ``value`` to an :class:`Exact` without rounding."""
    if isinstance(value, Exact):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        return Exact(Fraction(value))
    if isinstance(value, float):
        if not math.isfinite(value):
            raise NonFiniteError(f"non-finite parameter {value!r}")
        return Exact(Fraction(value))
    if isinstance(value, complex):
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise NonFiniteError(f"non-finite parameter {value!r}")
        return Exact(Fraction(value.real), Fraction(value.imag))
    if isinstance(value, str):
        return parse_scalar(value)
    if hasattr(value, "_mpf_"):
        return Exact(_mpf_to_fraction(value))
    if hasattr(value, "_mpc_"):
        return Exact(_mpf_to_fraction(value.real), _mpf_to_fraction(value.imag))
    raise TypeError(f"cannot interpret {type(value).__name__} as a scalar")


def cx(value: object) -> mpmath.mpc:
    """Convert to a complex number of this thread's context at working precision."""
    ctx = context()
    if isinstance(value, Exact):
        return value.mpc()
    if isinstance(value, Fraction):
        return ctx.mpc(_frac_to_mpf(ctx, value))
    if isinstance(value, str):
        return parse_scalar(value).mpc()
    if hasattr(value, "_mpc_"):
        return ctx.mpc(value.real, value.imag)
    return ctx.mpc(value)


def ensure_finite(value, what: str = "value"):
    ctx = context()
    z = ctx.mpc(value)
    if not (ctx.isfinite(z.real) and ctx.isfinite(z.imag)):
        raise NonFiniteError(f"{what} is not finite")
    return value


def is_nonpositive_integer(z) -> bool:
    """Exact test on a context number."""
    ctx = context()
    z = ctx.mpc(z)
    return z.imag == 0 and z.real <= 0 and ctx.isint(z.real)


def distance_to_nonpositive_integers(z) -> float:
    ctx = context()
    z = ctx.mpc(z)
    k = min(0, int(ctx.nint(z.real)))
    return float(abs(z - k))


def log_abs(z) -> float:
    """``log|z|`` as a float, ``-inf`` for zero; safe for huge exponents."""
    ctx = context()
    a = abs(ctx.mpc(z))
    if a == 0:
        return -math.inf
    return float(ctx.log(a))


def to_complex(z) -> complex:
    """Round to a Python complex; raises if the magnitude overflows a double."""
    ctx = context()
    z = ctx.mpc(z)
    out = complex(float(z.real), float(z.imag))
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise NonFiniteError("value exceeds double range; use log-magnitude output")
    return out
