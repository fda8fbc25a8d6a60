from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pslinear.certreal import (
    PREC_CAP_ENV,
    AlphaSpec,
    CertifiedReal,
    ExactInteger,
    PowerExpr,
    certified_floor,
    eval_pow,
    frac,
    parse_alpha,
    prec_cap,
)
from pslinear.errors import InvalidParams, PrecisionOverflow

from conftest import mp_to_fraction, ref_floor, ref_pow

ALPHAS = ["1.5", "1.1", "rat:7/3", "logquot:2:4:3", "surd:1:1/2:2", "surd:1:1:2", "2.75"]

alphas = st.sampled_from(ALPHAS).map(parse_alpha)


def test_eval_pow_one_is_exact():
    enc = eval_pow(1, parse_alpha("logquot:2:4:3"), 64)
    assert enc.is_point and enc.lower() == 1


def test_eval_pow_exact_power():
    enc = eval_pow(4, parse_alpha("3/2"), 64)
    assert enc.lower() == enc.upper() == 8


def test_eval_pow_five_three_halves():
    enc = eval_pow(5, parse_alpha("1.5"), 64)
    with mpmath.workprec(256):
        ref = mp_to_fraction(mpmath.mpf(5) * mpmath.sqrt(5))
    assert enc.lower() <= ref <= enc.upper()
    assert float(enc.upper() - enc.lower()) < 1e-15


@pytest.mark.parametrize("n,expected", [(2, 2), (8, 22), (5, 11)])
def test_floor_examples(n, expected):
    assert PowerExpr(n, parse_alpha("1.5")).floor() == expected


def test_floor_exact_integer_flag():
    k = PowerExpr(4, parse_alpha("1.5")).floor()
    assert isinstance(k, ExactInteger) and k == 8
    assert not isinstance(PowerExpr(8, parse_alpha("1.5")).floor(), ExactInteger)


def test_frac_examples():
    alpha = parse_alpha("1.5")
    assert PowerExpr(4, alpha).frac().upper() == 0
    f5 = PowerExpr(5, alpha).frac()
    assert abs(float(f5.mid) - 0.18033988749894848) < 1e-15 and f5.lower() >= 0
    f2 = PowerExpr(2, alpha).frac()
    assert abs(float(f2.mid) - 0.8284271247461903) < 1e-15


def test_frac_of_scaled_exact_value():
    # 0.7 * 100**1.5 = 700 exactly
    f = PowerExpr(100, parse_alpha("1.5"), Fraction(7, 10)).frac()
    assert f.lower() == f.upper() == 0


def test_undecidable_floor_raises_at_cap():
    # a point enclosure of 2 "pretending" to be an open ball around 2
    x = CertifiedReal.from_bounds(Fraction(2) - Fraction(1, 2**80), Fraction(2) + Fraction(1, 2**80), 64)
    with pytest.raises(PrecisionOverflow):
        certified_floor(x)
    with pytest.raises(PrecisionOverflow):
        certified_floor(x, refine=lambda prec: x)


def test_prec_cap_env(monkeypatch):
    monkeypatch.setenv(PREC_CAP_ENV, "128")
    assert prec_cap() == 128
    with pytest.raises(PrecisionOverflow):
        eval_pow(3, parse_alpha("1.5"), 256)


@given(alphas, st.integers(1, 10**30), st.sampled_from([64, 128, 256]))
def test_enclosure_contains_reference(alpha, n, prec):
    enc = eval_pow(n, alpha, prec)
    ref = mp_to_fraction(ref_pow(n, alpha, 4 * prec + 4 * n.bit_length()))
    assert enc.lower() <= ref <= enc.upper()


@given(alphas, st.integers(2, 10**20))
def test_refinement_does_not_widen(alpha, n):
    a, b = eval_pow(n, alpha, 64), eval_pow(n, alpha, 128)
    assert b.width <= a.width


@given(alphas, st.integers(1, 10**40))
def test_floor_matches_reference(alpha, n):
    assert PowerExpr(n, alpha).floor() == ref_floor(n, alpha)


@given(st.integers(1, 10**6), st.sampled_from([(3, 2), (5, 3), (7, 4)]))
def test_exact_integer_detection(m, rs):
    r, s = rs
    alpha = AlphaSpec.rational(r, s)
    n = m**s  # perfect power: n**(r/s) = m**r
    k = PowerExpr(n, alpha).floor()
    assert isinstance(k, ExactInteger) and k == m**r
    k2 = PowerExpr(n + 1, alpha).floor()
    assert not isinstance(k2, ExactInteger)


@pytest.mark.parametrize(
    "text,canon",
    [("1.5", "1.5"), ("rat:3/2", "rat:3/2"), ("logquot:2:4:3", "logquot:2:4:3"), ("surd:1:1/2:2", "surd:1:1/2:2")],
)
def test_alpha_round_trip(text, canon):
    alpha = parse_alpha(text)
    assert str(alpha) == canon
    assert parse_alpha(str(alpha)) == alpha


def test_decimal_is_exact_rational():
    assert parse_alpha("1.5").ratio == Fraction(3, 2)
    assert parse_alpha("1.2").ratio == Fraction(6, 5)


@pytest.mark.parametrize("bad", ["2", "rat:4/2", "0.5", "1", "logquot:4:2:1", "surd:1:0:2", "surd:2:1:4", "x"])
def test_alpha_rejections(bad):
    with pytest.raises(InvalidParams):
        parse_alpha(bad)


@given(st.fractions(min_value=-5, max_value=5), st.fractions(min_value=-5, max_value=5))
def test_interval_arithmetic_contains_exact(x, y):
    a, b = CertifiedReal.exact(x, 64), CertifiedReal.exact(y, 64)
    assert (a + b).contains(x + y)
    assert (a - b).contains(x - y)
    assert (a * b).contains(x * y)
    if y != 0:
        assert (a / b).contains(x / y)


def test_three_valued_comparison():
    a = CertifiedReal.from_bounds(1, 2, 64)
    assert a.lt(3) is True
    assert a.lt(Fraction(3, 2)) is None
    assert a.le(Fraction(1, 2)) is False
