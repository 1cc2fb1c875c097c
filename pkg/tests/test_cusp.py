from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from modular_ode.cusp import (
    NotApplicable,
    ObstructionNonzero,
    cusp_obstruction,
    make_cusp_ode,
    q3_over_pi2,
    r_inf_of,
    residual,
    solve_frobenius,
    wronskian,
)
from modular_ode.monodromy import triple_condition
from modular_ode.qseries import QSeries, eisenstein


def test_make_cusp_ode():
    ode = make_cusp_ode(eisenstein(4, 10).scale(-1))
    assert ode.kappa_inf == Fraction(1, 2)
    assert ode.B[1] == 60
    ok, (r, s, t) = triple_condition(1, 2, 2)
    assert r + s + t == -4
    assert make_cusp_ode(q3_over_pi2(r, s, t, 5)).kappa_inf == 1
    with pytest.raises(ValueError):
        make_cusp_ode(QSeries([], 5))
    with pytest.raises(ValueError):
        make_cusp_ode(eisenstein(4, 5))  # B(0) < 0


def test_obstruction_value_60():
    ode = make_cusp_ode(eisenstein(4, 10).scale(-1))
    with pytest.raises(ObstructionNonzero) as err:
        solve_frobenius(ode, -1, 5)
    assert err.value.index == 1 and err.value.value == 60
    assert cusp_obstruction(ode) == 60


def test_constant_potential():
    k = Fraction(3, 4)
    ode = make_cusp_ode(QSeries.constant(-4 * k * k, 10))
    for sign in (1, -1):
        sol = solve_frobenius(ode, sign, 8)
        assert all(c == 0 for c in sol.coeffs[1:])
    yp = solve_frobenius(ode, 1, 8).as_series()
    ym = solve_frobenius(ode, -1, 8).as_series()
    W = wronskian(yp, ym)
    assert W.terms() == [(0, -2 * k)]
    assert wronskian(yp, yp).is_zero()


def test_q3_111_apparent_and_solutions():
    ok, (r, s, t) = triple_condition(1, 1, 1)
    assert (r, s, t) == (Fraction(23, 36), Fraction(-8, 9), Fraction(-3, 4))
    ode = make_cusp_ode(q3_over_pi2(r, s, t, 21))
    assert cusp_obstruction(ode) == 0
    sol = solve_frobenius(ode, -1, 20)
    assert sol.free_index == 1
    yp = solve_frobenius(ode, 1, 20).as_series()
    ym = sol.as_series()
    for y in (yp, ym):
        assert residual(ode, y).is_zero()
    W = wronskian(yp, ym)
    assert len(W.terms()) == 1 and W.terms()[0] == (0, -1)


def test_family_1nn_and_negative_e4():
    for n in range(1, 6):
        _, (r, s, t) = triple_condition(1, n, n)
        assert cusp_obstruction(make_cusp_ode(q3_over_pi2(r, s, t, 2 * n + 1))) == 0
        assert cusp_obstruction(make_cusp_ode(eisenstein(4, 2 * n + 1).scale(-n * n))) != 0


def test_not_applicable_quarter():
    ode = make_cusp_ode(eisenstein(4, 10).scale(Fraction(-1, 4)))
    assert ode.kappa_inf == Fraction(1, 4)
    with pytest.raises(NotApplicable):
        cusp_obstruction(ode)


@pytest.mark.parametrize("n", [1, 3, 5, 7, 9])
def test_weight_family_never_obstructed(n):
    ode = make_cusp_ode(eisenstein(4, 30).scale(Fraction(-(n * n), 4)))
    sol = solve_frobenius(ode, -1, 29)
    assert residual(ode, sol.as_series()).is_zero()


def test_numeric_mode():
    q = eisenstein(4, 10).map_coeffs(lambda c: -mpmath.mpf(c.numerator) / c.denominator * 0.7)
    ode = make_cusp_ode(q)
    assert abs(ode.kappa_inf - mpmath.sqrt(0.7) / 2) < 1e-12
    sol = solve_frobenius(ode, 1, 5)
    assert len(sol.coeffs) == 6


def test_r_inf_of():
    assert r_inf_of(Fraction(1, 12)) == (Fraction(1, 12), 1)
    assert r_inf_of(Fraction(11, 12)) == (Fraction(1, 12), -1)
    r, b = r_inf_of(1.3)
    assert abs(r - 0.3) < 1e-12 and b == 1
    with pytest.raises(ValueError):
        r_inf_of(Fraction(3, 2))
