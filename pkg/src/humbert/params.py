"""Parameter quadruples and evaluation points for Psi_1."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError, PreconditionError
from .scalars import Exact, exact

REGIONS = ("unit_disc", "outer", "kummer_image", "boundary")


@dataclass(frozen=True)
class Psi1Params:
    """The parameters ``(a, b; c, c')`` of ``Psi_1[a, b; c, c'; x, y]``.

    Values are stored exactly so that the integrality hypotheses behind each
    evaluation route can be decided without rounding.
    """

    a: Exact
    b: Exact
    c: Exact
    cp: Exact

    def __post_init__(self):
        for name in ("a", "b", "c", "cp"):
            object.__setattr__(self, name, exact(getattr(self, name)))
        bad = [n for n in ("c", "cp") if getattr(self, n).is_nonpositive_integer()]
        if bad:
            raise PreconditionError(
                "lower parameters of Psi_1 must avoid non-positive integers",
                [f"{n} = {getattr(self, n)}" for n in bad],
            )

    @classmethod
    def reference(cls) -> "Psi1Params":
        """The parameter set ``(1, 1/2; 1/3, 1/4)`` used for the tabulated checks."""
        return cls(1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))

    @property
    def thm11_ok(self) -> bool:
        return not (self.a - self.b).is_integer() and not (self.a - self.c).is_integer()

    @property
    def thm13_ok(self) -> bool:
        return self.thm11_ok and not (self.b - self.c).is_integer()

    @property
    def laplace_ok(self) -> bool:
        return self.a.re > 0

    def series_failures(self) -> list[str]:
        out = []
        if (self.a - self.b).is_integer():
            out.append("a - b must not be an integer")
        if (self.a - self.c).is_integer():
            out.append("a - c must not be an integer")
        return out

    def remaining_case_failures(self) -> list[str]:
        out = self.series_failures()
        if (self.b - self.c).is_integer():
            out.append("b - c must not be an integer")
        return out

    def flags(self) -> dict[str, bool]:
        return {"thm11_ok": self.thm11_ok, "thm13_ok": self.thm13_ok, "laplace_ok": self.laplace_ok}

    def __str__(self) -> str:
        return f"({self.a}, {self.b}; {self.c}, {self.cp})"


def classify_region(x: Exact) -> str:
    """``unit_disc`` (|x| < 1), ``kummer_image`` (Re x < 1/2, so that
    ``|x/(x-1)| < 1``), ``outer`` (|x - 1| > 1) or ``boundary``."""
    if abs(x) < 1:
        return "unit_disc"
    if x.re < Fraction(1, 2):
        return "kummer_image"
    if abs(x - 1) > 1:
        return "outer"
    return "boundary"


@dataclass(frozen=True)
class EvalPoint:
    """An argument pair ``(x, y)`` inside the cut domain ``x`` not in ``[1, inf)``."""

    x: Exact
    y: Exact
    region: str = field(init=False)

    def __post_init__(self):
        x, y = exact(self.x), exact(self.y)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if x.im == 0 and x.re >= 1:
            raise DomainError(
                "point outside Psi_1 domain",
                ["x must differ from 1 and avoid the cut [1, inf)"],
            )
        object.__setattr__(self, "region", classify_region(x))

    def __str__(self) -> str:
        return f"(x={self.x}, y={self.y}) [{self.region}]"


def distance_to_lattice(y: Exact, origin: Exact) -> float:
    """Distance from ``y`` to the lattice ``origin + Z``."""
    d = y - origin
    return math.hypot(float(d.re - round(d.re)), float(d.im))
