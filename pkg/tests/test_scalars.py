from fractions import Fraction

import pytest

from humbert.errors import NonFiniteError
from humbert.scalars import Exact, context, cx, exact, parse_scalar, precision, to_complex, working_bits


@pytest.mark.parametrize(
    "text, re, im",
    [
        ("1", 1, 0),
        ("1/3", Fraction(1, 3), 0),
        ("-0.25", Fraction(-1, 4), 0),
        ("2+3i", 2, 3),
        ("0.5-2i", Fraction(1, 2), -2),
        ("-i", 0, -1),
        ("1e-3", Fraction(1, 1000), 0),
        ("1/2+1/3j", Fraction(1, 2), Fraction(1, 3)),
    ],
)
def test_parse_scalar(text, re, im):
    assert parse_scalar(text) == Exact(Fraction(re), Fraction(im))


@pytest.mark.parametrize("text", ["", "abc", "1+", "1//2", "i+1"])
def test_parse_scalar_rejects(text):
    with pytest.raises(ValueError):
        parse_scalar(text)


def test_exact_arithmetic_is_exact():
    a = exact("1/3+1/7i")
    assert (a * 3 - a * 2) == a
    assert (a / a) == Exact(Fraction(1))
    assert (exact("1/3") - exact("1/3")).is_integer()
    assert exact(-2).is_nonpositive_integer()
    assert not exact("-2+1e-30i").is_nonpositive_integer()


def test_exact_rejects_non_finite():
    with pytest.raises(NonFiniteError):
        exact(float("nan"))
    with pytest.raises(NonFiniteError):
        exact(complex(1, float("inf")))


def test_mpc_roundtrip_keeps_every_bit():
    with precision("extended"):
        v = cx(exact(0.1))
        assert exact(v) == exact(0.1)


def test_precision_is_scoped():
    base = working_bits()
    with precision("extended"):
        assert working_bits() == 113
        with precision(200):
            assert working_bits() == 200
        assert working_bits() == 113
    assert working_bits() == base == 53


def test_context_is_per_thread():
    import threading

    seen = []

    def worker():
        with precision(300):
            seen.append(context().prec)

    t = threading.Thread(target=worker)
    with precision("extended"):
        t.start()
        t.join()
        assert context().prec == 113
    assert seen == [300]


def test_to_complex_overflow_is_an_error():
    ctx = context()
    with pytest.raises(NonFiniteError):
        to_complex(ctx.exp(2000))
