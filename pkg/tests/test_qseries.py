from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from modular_ode.qseries import (
    NoRationalRoot,
    QSeries,
    d_q,
    delta_and_j,
    eisenstein,
    eta_pow,
    evaluate,
    hauptmodul,
    rankin_cohen2,
    ramanujan_check,
    schwarzian_normalized,
)


def brute_sigma(k, n):
    return sum(d**k for d in range(1, n + 1) if n % d == 0)


def naive_euler_power(e, order):
    """Multiply out prod (1 - q^n)^e factor by factor."""
    poly = [1] + [0] * order
    for n in range(1, order + 1):
        for _ in range(e):
            new = poly[:]
            for i in range(n, order + 1):
                new[i] -= poly[i - n]
            poly = new
    return poly


def test_eisenstein_examples():
    assert eisenstein(6, 1).coeffs == (1, -504)
    assert eisenstein(4, 0).coeffs == (1,)
    assert eisenstein(4, 2).coeffs == (1, 240, 2160)
    assert eisenstein(4, 2).denom == 1


@pytest.mark.parametrize("k,c,p", [(2, -24, 1), (4, 240, 3), (6, -504, 5)])
def test_eisenstein_against_divisor_oracle(k, c, p):
    f = eisenstein(k, 40)
    assert [f[n] for n in range(1, 41)] == [c * brute_sigma(p, n) for n in range(1, 41)]


def test_eisenstein_errors():
    with pytest.raises(ValueError):
        eisenstein(8, 5)
    with pytest.raises(ValueError):
        eisenstein(4, -1)


def test_delta_and_j():
    d, j = delta_and_j(2)
    assert d.terms() == [(1, 1), (2, -24)]
    d, j = delta_and_j(10)
    assert j.valuation == -1
    assert j[0] == 744
    assert j[1] == 196884


def test_eta_powers():
    assert eta_pow(24, 30) == delta_and_j(30)[0]
    e4 = eta_pow(4, 12)
    assert e4.valuation == Fraction(1, 6)
    naive = naive_euler_power(4, 12)
    assert [e4[Fraction(1, 6) + m] for m in range(13)] == naive
    assert eta_pow(12, 5).denom == 2
    with pytest.raises(ValueError):
        eta_pow(6, 5)


def test_hauptmoduln():
    J2 = hauptmodul(2, 12)
    J3 = hauptmodul(3, 12)
    assert J2.valuation == Fraction(1, 2) and J2.leading() == 24
    assert J3.valuation == Fraction(1, 3) and J3.leading() == 12
    # j_3 = 12/J_3 satisfies j_3^3 = j
    _, j = delta_and_j(14)
    j3 = J3.inverse().scale(12)
    assert (j3**3 - j).is_zero()
    with pytest.raises(ValueError):
        hauptmodul(5, 4)


def test_root_and_arith():
    d, _ = delta_and_j(20)
    s = d.sqrt()
    assert s.valuation == Fraction(1, 2)
    assert [s[Fraction(1, 2) + m] for m in range(3)] == [1, -12, 54]
    assert (s**2 - d).is_zero()
    assert (d / d - 1).is_zero()
    e4, e6 = eisenstein(4, 50), eisenstein(6, 50)
    assert (e4**3 - e6 * e6 - d.scale(1728)).truncate(20).is_zero()
    with pytest.raises(ZeroDivisionError):
        d / QSeries([], 5)
    with pytest.raises(NoRationalRoot):
        QSeries([2, 1]).sqrt()


def test_root_branch_is_positive():
    f = QSeries([9, 6, 1]).sqrt()
    assert f.coeffs[:2] == (3, 1)


def test_precision_bookkeeping():
    a = QSeries([1, 2, 3])  # known through q^2
    b = QSeries([1, 1, 1, 1, 1])
    assert (a + b).prec == 3
    assert (a * b).prec == 3
    c = QSeries([0, 1, 1], 0)  # q + q^2 + O(q^3)
    assert (a * c).prec == 3  # the O(q^3) of a survives multiplication by a unit
    assert (a / c).prec == 1


def test_d_q_and_ramanujan():
    f = QSeries([0, 1, -24])
    assert d_q(f).coeffs == (1, -48)
    assert ramanujan_check(50)
    e2, e4, e6 = (eisenstein(k, 5) for k in (2, 4, 6))
    assert d_q(e4)[1] == 240
    assert ((e2 * e4 - e6) / 3)[1] == 240


def test_rankin_cohen():
    assert rankin_cohen2(QSeries.constant(5, 10)).is_zero()
    r = rankin_cohen2(QSeries.monomial(1, 1, 10))
    assert r.terms() == [(2, 1)]


def test_schwarzian_mobius_invariance():
    J = hauptmodul(2, 25)
    lhs = schwarzian_normalized((J.scale(2) + 1) / (J + 1))
    assert (lhs - schwarzian_normalized(J)).is_zero()
    with pytest.raises(ValueError):
        schwarzian_normalized(QSeries.constant(3, 5))


@mpmath.workdps(30)
def test_evaluate_e4_at_i_matches_direct_sum():
    val, tail = evaluate(eisenstein(4, 60), 1j, 30)
    direct = 1 + 240 * mpmath.fsum(brute_sigma(3, n) * mpmath.exp(-2 * mpmath.pi * n) for n in range(1, 40))
    assert abs(val - direct) < 1e-25
    assert abs(val.real - 1.4557628922687) < 1e-12
    assert tail < 1e-20


@mpmath.workdps(30)
def test_evaluate_e6_near_i_and_e4_at_rho():
    y = mpmath.mpf("1.0001")
    v6, t6 = evaluate(eisenstein(6, 60), mpmath.mpc(0, y), 30)
    direct = 1 - 504 * mpmath.fsum(brute_sigma(5, n) * mpmath.exp(-2 * mpmath.pi * n * y) for n in range(1, 40))
    assert abs(v6 - direct) < 1e-20
    rho = mpmath.mpc(0.5, mpmath.sqrt(3) / 2)
    v4, t4 = evaluate(eisenstein(4, 60), rho, 30)
    assert abs(v4) < 1e-20
    assert evaluate(QSeries.constant(7, 4), 2j)[0] == 7
    with pytest.raises(ValueError):
        evaluate(eisenstein(4, 5), -1j)


def test_record_roundtrip():
    f = hauptmodul(3, 6)
    rec = f.to_record()
    assert all("/" in c for c in rec["coeffs"])
    assert QSeries.from_record(rec) == f


fracs = st.fractions(min_value=-50, max_value=50, max_denominator=20)
series = st.lists(fracs, min_size=1, max_size=8).map(lambda cs: QSeries(cs))


@settings(max_examples=60, deadline=None)
@given(series, series, series)
def test_ring_laws(f, g, h):
    assert ((f + g) * h - (f * h + g * h)).is_zero()
    assert ((f * g) * h - f * (g * h)).is_zero()
    assert (f * g - g * f).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.lists(fracs, min_size=1, max_size=8), st.integers(min_value=1, max_value=4))
def test_root_then_power_is_identity(cs, n):
    c0 = Fraction(math.prod(range(1, n + 1))) ** n  # an exact n-th power
    f = QSeries([c0] + cs)
    assert (f.root(n) ** n - f).is_zero()
