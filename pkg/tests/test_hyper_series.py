from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from humbert.errors import ConvergenceError, DivergentSeriesError, DomainError, GammaPoleError, PreconditionError
from humbert.hyper_series import (
    ApproxResult,
    HypParams,
    TruncationPolicy,
    f3f2_unity_terminating,
    pfq,
    psi1_double_series,
)
from humbert.params import Psi1Params
from humbert.scalars import context, precision

REF = Psi1Params.reference()


def rel(a, b):
    return abs(complex(a) - complex(b)) / abs(complex(b))


def test_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(0)
    with pytest.raises(ValueError):
        TruncationPolicy(1e-10, stagnation_window=1)
    with pytest.raises(ValueError):
        TruncationPolicy(1e-10, max_terms=3)
    assert TruncationPolicy(1e-10).tightened(0.1).rel_tol == pytest.approx(1e-11)


def test_hyp_params_pole_before_termination():
    with pytest.raises(GammaPoleError):
        HypParams((1, 2), (-3,))
    # terminates at index 2 before the zero denominator at index 4
    HypParams((-2, 1), (-3,))
    assert HypParams((-2, 1), (-3,)).terminating_index() == 2


def test_near_pole_warning():
    r = pfq(HypParams((1,), (-2 + 1e-9,)), 0.1)
    assert any("pole" in w for w in r.warnings)


# frozen from mpmath at 40 digits
@pytest.mark.parametrize(
    "upper, lower, z, expected",
    [
        ((F(1, 2),), (F(3, 2),), -30, 0.1618021593796400696905132),
        ((F(1, 3), F(1, 2)), (F(5, 4),), 0.7, 1.147425312518162169364077),
        ((F(1, 2), 1.5 + 1j), (2, F(1, 3)), -30,
         complex(-0.06529176188264188608569705, 0.05211868000542108970251712)),
        ((1, F(1, 2)), (F(1, 3), F(1, 4)), 40, 37980348094714184479.51913),
        ((), (F(1, 3),), -400, -2.087780996696337504755154),
    ],
)
def test_pfq_oracle(upper, lower, z, expected):
    r = pfq(HypParams(upper, lower), z)
    assert r.converged
    assert rel(r.value, expected) < 1e-12
    assert r.err_estimate <= 1e-11 * abs(r.value)


def test_pfq_cancellation_reports_lost_bits():
    r = pfq(HypParams((F(1, 2),), (F(3, 2),)), -30)
    assert r.details["lost_bits"] > 30


def test_pfq_terminating_is_exact_polynomial():
    # 2F1[-3, b; c; z] = sum_{k<=3} (-3)_k (b)_k / ((c)_k k!) z^k
    r = pfq(HypParams((-3, F(1, 2)), (F(5, 2),)), 2)
    b, c, z = F(1, 2), F(5, 2), 2
    exact = 1 + (-3) * b / c * z + (-3) * (-2) * b * (b + 1) / (c * (c + 1) * 2) * z**2 \
        + (-3) * (-2) * (-1) * b * (b + 1) * (b + 2) / (c * (c + 1) * (c + 2) * 6) * z**3
    assert r.method == "pfq_terminating"
    assert r.terms_used == 4
    assert abs(complex(r.value) - float(exact)) < 1e-14


def test_pfq_divergence():
    with pytest.raises(DivergentSeriesError):
        pfq(HypParams((1, 1, 1), (2,)), 0.1)
    with pytest.raises(DivergentSeriesError):
        pfq(HypParams((1, 1), (2,)), 1.5)
    assert pfq(HypParams((1, 1, 1), (2,)), 0).value == 1


def test_pfq_budget():
    with pytest.raises(ConvergenceError):
        pfq(HypParams((F(1, 2),), (F(3, 2),)), 200, TruncationPolicy(1e-12, max_terms=20))


def test_pfq_extended_precision():
    with precision("extended"):
        r = pfq(HypParams((F(1, 2),), (F(3, 2),)), -30, TruncationPolicy(1e-30))
        mpmath.mp.dps = 40
        try:
            ref = mpmath.hyp1f1(0.5, 1.5, -30)
        finally:
            mpmath.mp.dps = 15
        assert abs(r.value - ref) / abs(ref) < 1e-30


@given(st.integers(0, 12), st.fractions(F(-3), F(3), max_denominator=7), st.fractions(F(-3), F(3), max_denominator=7),
       st.fractions(F(1, 3), F(4), max_denominator=5))
def test_saalschutz(n, a, b, c):
    # 3F2[-n, a, b; c, 1+a+b-c-n; 1] = (c-a)_n (c-b)_n / ((c)_n (c-a-b)_n)
    d = 1 + a + b - c - n
    try:
        params = HypParams((-n, a, b), (c, d))
    except GammaPoleError:
        return

    def poch(x, k):
        out = F(1)
        for j in range(k):
            out *= x + j
        return out

    den = poch(c, n) * poch(c - a - b, n)
    if den == 0:
        return
    expected = poch(c - a, n) * poch(c - b, n) / den
    got = complex(f3f2_unity_terminating(params))
    assert abs(got - float(expected)) <= 1e-9 * max(1, abs(float(expected)))


def test_f3f2_requires_shape():
    with pytest.raises(PreconditionError):
        f3f2_unity_terminating(HypParams((-1, 1), (2,)))
    with pytest.raises(PreconditionError):
        f3f2_unity_terminating(HypParams((F(1, 2), 1, 1), (2, 3)))


# reference values from mpmath: sum_n (a)_n y^n/((c')_n n!) 2F1[a+n, b; c; x]
@pytest.mark.parametrize(
    "x, y, expected",
    [
        (0.5, 2, 2162.628815268359311324043),
        (0.3 + 0.4j, -3 + 1j, complex(-0.589917823798791166158143, -0.03374997567611815867131886)),
    ],
)
def test_double_series_oracle(x, y, expected):
    r = psi1_double_series(REF, x, y)
    assert r.method == "double_series"
    assert rel(r.value, expected) < 1e-12


def test_double_series_domain():
    with pytest.raises(DomainError):
        psi1_double_series(REF, 1.2, 0)
    with pytest.raises(PreconditionError):
        psi1_double_series(REF, 0.97, 0)


def test_double_series_origin():
    r = psi1_double_series(REF, 0, 0)
    assert complex(r.value) == 1


@given(st.floats(-0.9, 0.9), st.floats(-0.5, 0.5))
def test_double_series_reduces_to_gauss(xr, xi):
    x = complex(xr, xi)
    if abs(x) > 0.9:
        return
    r = psi1_double_series(REF, x, 0)
    ctx = context()
    ref = mpmath.hyp2f1(1, 0.5, mpmath.mpf(1) / 3, x)
    assert abs(complex(r.value) - complex(ref)) <= 1e-11 * abs(complex(ref))


@given(st.floats(-20, 20), st.floats(-5, 5))
def test_double_series_reduces_to_kummer(yr, yi):
    y = complex(yr, yi)
    r = psi1_double_series(REF, 0, y)
    ref = complex(mpmath.hyp1f1(1, 0.25, y))
    assert abs(complex(r.value) - ref) <= 1e-11 * abs(ref)


def test_approx_result_helpers():
    r = ApproxResult(2, 1e-3, 5, True, "x")
    assert r.rel_err == pytest.approx(5e-4)
    assert complex(r) == 2
