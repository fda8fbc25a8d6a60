import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pslinear.certreal import CertifiedReal
from pslinear.disc import (
    bracket_holds,
    choose_k,
    compute_exponents,
    discrepancy_bruteforce,
    discrepancy_report,
    erdos_turan_bound,
    exact_discrepancy,
    lemma31_bound,
    power_sequence_fracs,
    van_der_corput_shape,
    xi_threshold,
)
from pslinear.errors import InvalidParams

unit = st.fractions(min_value=0, max_value=1, max_denominator=1000).filter(lambda x: x < 1)


def golden_rotation(n):
    phi = (CertifiedReal.exact(5, 128).sqrt() + 1) / 2
    out = []
    for k in range(1, n + 1):
        x = phi * k
        out.append((x - int(math.floor(float(x.mid)))).intersect(0, 1))
    return out


@pytest.mark.parametrize(
    "points,expected",
    [
        ([0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)], Fraction(1, 4)),
        ([Fraction(1, 2)], Fraction(1)),
        ([Fraction(1, 4), Fraction(3, 4)], Fraction(1, 2)),
    ],
)
def test_discrepancy_examples(points, expected):
    assert exact_discrepancy(points) == expected
    assert discrepancy_bruteforce(points) == expected


def test_discrepancy_rejects_bad_points():
    with pytest.raises(InvalidParams):
        exact_discrepancy([])
    with pytest.raises(InvalidParams):
        exact_discrepancy([Fraction(1)])


@given(st.lists(unit, min_size=1, max_size=40))
def test_closed_formula_matches_bruteforce(points):
    d = exact_discrepancy(points)
    assert d == discrepancy_bruteforce(points)
    assert Fraction(1, len(points)) <= d <= 1


def test_certified_sequences_match_bruteforce():
    for pts in (golden_rotation(300), power_sequence_fracs(Fraction(7, 10), "1.5", 300)):
        d = exact_discrepancy(pts)
        ref = discrepancy_bruteforce([float(p.mid) for p in pts])
        assert float(d.upper() - d.lower()) < 1e-15
        assert abs(float(d.mid) - ref) < 1e-12


def test_erdos_turan_constant_sequence():
    assert abs(erdos_turan_bound([0] * 10, 1) - (3 + 1 / math.pi)) < 1e-12


@pytest.mark.parametrize("m", [1, 4, 10, 100])
def test_erdos_turan_dominates(m):
    rng = random.Random(5)
    seqs = [
        [Fraction(k, 4) for k in range(4)],
        power_sequence_fracs(Fraction(7, 10), "1.5", 1000),
        golden_rotation(200),
        [Fraction(rng.randrange(10**6), 10**6) for _ in range(300)],
    ]
    for pts in seqs:
        d = exact_discrepancy(pts)
        upper = d.upper() if isinstance(d, CertifiedReal) else d
        assert erdos_turan_bound(pts, m) >= float(upper)


def test_report():
    rep = discrepancy_report([Fraction(1, 4), Fraction(3, 4)], ms=(1, 10))
    assert rep.exact_d == Fraction(1, 2) and [m for m, _ in rep.et_bounds] == [1, 10]


def test_choose_k_examples():
    assert choose_k(1.5, 2) == 7
    assert choose_k(2.5, 2.6) == 66
    assert choose_k(1.01, 2) == 4


@given(
    st.fractions(min_value=Fraction(101, 100), max_value=5, max_denominator=1000),
    st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(999, 1000), max_denominator=1000),
)
def test_choose_k_bracket(alpha, gap):
    k = choose_k(alpha, alpha + gap)
    assert k >= 4 and bracket_holds(alpha, alpha + gap, k)
    if k > 4:
        assert not bracket_holds(alpha, alpha + gap, k - 1)


def test_compute_exponents_example():
    ex = compute_exponents(1.5, 2, 0.01, 7)
    assert abs(float(ex.psi1) + 0.2967) < 1e-4
    assert abs(float(ex.psi2) + 0.00785) < 1e-5
    assert abs(float(ex.psi) + 0.00234) < 1e-5
    assert ex.negative


def test_compute_exponents_invalid():
    with pytest.raises(InvalidParams):
        compute_exponents(1.5, 2, 0.5, 7)
    with pytest.raises(InvalidParams):
        compute_exponents(1.5, 2, 0.01, 4)


def test_xi_threshold_is_sign_boundary():
    t = xi_threshold(1.5, 2)
    assert 0 < t < Fraction(1, 2)
    assert compute_exponents(1.5, 2, t, 7).negative
    assert not compute_exponents(1.5, 2, t * Fraction(101, 100), 7).negative


def test_lemma31_shape():
    with pytest.raises(InvalidParams):
        lemma31_bound(1.0, 1.0, 1.5, 7)  # eta * V**(alpha - k) = 1 exactly
    b4 = lemma31_bound(1.0, 1e4, 1.5, 7)
    b6 = lemma31_bound(1.0, 1e6, 1.5, 7)
    first = (1e4 ** (1.5 - 7)) ** (1 / 127)
    second = 1e4 ** ((7 - 1.5) / 126 - 2.0 ** (2 - 7))
    assert math.isclose(b4.value, first + second, rel_tol=1e-12)
    assert b4.m == math.ceil((1e4 ** (7 - 1.5)) ** (1 / 127))
    assert b6.value < b4.value


def test_van_der_corput_shape_positive():
    assert van_der_corput_shape(100.0, 0.5, 4) > 0
    with pytest.raises(InvalidParams):
        van_der_corput_shape(100.0, 0.5, 3)
