from fractions import Fraction as F

import pytest

from humbert.errors import DomainError, PreconditionError
from humbert.params import EvalPoint, Psi1Params, classify_region, distance_to_lattice
from humbert.scalars import exact


def test_reference_flags():
    p = Psi1Params.reference()
    assert (p.a, p.b, p.c, p.cp) == tuple(exact(v) for v in (1, F(1, 2), F(1, 3), F(1, 4)))
    assert p.flags() == {"thm11_ok": True, "thm13_ok": True, "laplace_ok": True}


def test_flags_follow_integrality():
    p = Psi1Params(1, 1, F(3, 2), F(1, 2))
    assert not p.thm11_ok
    assert p.series_failures() == ["a - b must not be an integer"]
    q = Psi1Params(F(1, 2), F(1, 3), F(4, 3), 1)
    assert q.thm11_ok and not q.thm13_ok
    assert not Psi1Params(-1, F(1, 2), F(1, 3), 1).laplace_ok


@pytest.mark.parametrize("c, cp", [(0, 1), (1, -2)])
def test_lower_parameter_poles(c, cp):
    with pytest.raises(PreconditionError):
        Psi1Params(1, 1, c, cp)


@pytest.mark.parametrize(
    "x, region",
    [(0.5, "unit_disc"), (-10, "kummer_image"), (0.3 + 0.98j, "kummer_image"), (2 + 3j, "outer"), (1 + 0.5j, "boundary")],
)
def test_classify_region(x, region):
    assert classify_region(exact(x)) == region


@pytest.mark.parametrize("x", [1, 1.5, 40])
def test_point_on_cut(x):
    with pytest.raises(DomainError, match="outside Psi_1 domain"):
        EvalPoint(x, 0)


def test_point_off_cut():
    assert EvalPoint(exact("2+1e-9i"), 0).region == "boundary"


def test_distance_to_lattice():
    assert distance_to_lattice(exact(F(3, 2)), exact(F(-1, 2))) == 0
    assert distance_to_lattice(exact("0.1+0.2i"), exact(0)) == pytest.approx((0.01 + 0.04) ** 0.5)
