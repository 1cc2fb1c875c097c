from __future__ import annotations

import cmath
from fractions import Fraction as F

import mpmath
import pytest

from modular_ode.elliptic import (
    I,
    RHO,
    apparentness_polynomial,
    expand_at,
    indicial_at,
    maass_tower,
    point_value,
    predicted_roots,
    quotient_expansion,
    root_report,
    s_of_kappa,
    t_of_kappa,
    w_coordinate_identities,
)
from modular_ode.qseries import NearlyHolo, QSeries, delta_and_j, eisenstein, evaluate


def test_point_values():
    assert abs(point_value(I) - 1j) < 1e-30
    rho = point_value(RHO)
    assert abs(rho - (0.5 + 0.5j * 3**0.5)) < 1e-15


def test_maass_tower_shapes():
    tower = maass_tower(NearlyHolo.holomorphic(eisenstein(4, 20), 4), 3)
    assert [f.weight for f in tower] == [4, 6, 8, 10]
    assert not NearlyHolo.holomorphic(QSeries.constant(1, 10), 0).maass().parts


@pytest.mark.parametrize("z", [1j, mpmath.mpc("0.3", "1.2")])
def test_maass_of_e4_matches_completed_e2(z):
    """del E4 = (E2* E4 - E6)/3 with E2* = E2 - 3/(pi Im z)."""
    with mpmath.workdps(30):
        d4 = NearlyHolo.holomorphic(eisenstein(4, 60), 4).maass()
        lhs, _ = d4.evaluate(z, 30)
        e2, e4, e6 = (evaluate(eisenstein(k, 60), z, 30)[0] for k in (2, 4, 6))
        e2s = e2 - 3 / (mpmath.pi * mpmath.mpc(z).imag)
        assert abs(lhs - (e2s * e4 - e6) / 3) < 1e-20


def test_vanishing_patterns():
    e4r = expand_at(eisenstein(4, 60), 4, RHO, 12)
    assert e4r.leading_index == 1 and e4r.vanish_mod == 3
    nz = [n for n in range(1, 13) if abs(e4r.coeff(n)) > 1e-20]
    assert all((n + 2) % 3 == 0 for n in nz)
    e6i = expand_at(eisenstein(6, 60), 6, I, 12)
    assert e6i.leading_index == 1
    d, _ = delta_and_j(60)
    for pt in (RHO, I):
        assert expand_at(d, 12, pt, 12).max_violation < 1e-20
    c = expand_at(QSeries.constant(5, 20), 0, I, 6)
    assert c.leading_index == 0 and all(abs(x) < 1e-30 for x in c.coeffs[1:])


def test_expansion_reproduces_q_series_near_point():
    with mpmath.workdps(40):
        exp = expand_at(eisenstein(4, 80), 4, RHO, 40)
        z = point_value(RHO) + mpmath.mpc("0.01", "0.02")
        direct, _ = evaluate(eisenstein(4, 80), z, 40)
        assert abs(exp.evaluate(z) - direct) < 1e-25


def test_quotient_leading_coefficients():
    qr = quotient_expansion("rho", 10)
    assert qr.leading_index == -2 and abs(qr.coeff(-2) - 0.75) < 1e-25
    assert all(abs(qr.coeff(n)) < 1e-20 for n in range(-2, 8) if (n - 1) % 3)
    qi = quotient_expansion("i", 10)
    assert qi.leading_index == -2 and abs(qi.coeff(-2) - 0.25) < 1e-25


def test_indicial():
    assert indicial_at(RHO, F(-8, 9)) == (-1, 2)
    assert indicial_at(I, F(-3, 4)) == (F(-1, 2), F(3, 2))
    assert indicial_at(RHO, F(1, 9)) == (F(1, 2), F(1, 2))
    for k in (F(1, 3), F(3, 2), F(7, 2)):
        a, b = indicial_at(RHO, s_of_kappa(k))
        assert a + b == 1 and a * b == F(9, 4) * s_of_kappa(k)
        a, b = indicial_at(I, t_of_kappa(k))
        assert a + b == 1 and a * b == t_of_kappa(k)


def test_predicted_roots():
    assert predicted_roots("q1", F(3, 2)) == [F(23, 36)]
    assert predicted_roots("q2", 1) == [F(23, 36)]
    assert sorted(predicted_roots("q2", 2)) == [F(71, 36), F(119, 36)]
    assert sorted(predicted_roots("q1", 3)) == [F(59, 36), F(131, 36)]


@pytest.mark.parametrize("fam,k", [("q1", F(3, 2)), ("q1", F(3)), ("q2", F(2)), ("q2", F(3))])
def test_apparentness_roots_match(fam, k):
    rep = root_report(fam, k, 40)
    assert rep["degree"] == rep["expected_degree"]
    assert rep["max_distance"] < 1e-6


def test_degree_one_root_value():
    p = apparentness_polynomial("q1", F(3, 2))
    assert p.degree == 1
    assert abs(p.roots()[0] - mpmath.mpf(23) / 36) < 1e-20


def test_rescaling_invariance():
    lam = cmath.exp(2.1j)
    assert root_report("q2", F(2), 40, rescale=lam)["max_distance"] < 1e-8


def test_w_identities():
    rep = w_coordinate_identities([2j, 1j, mpmath.mpc("0.2", "0.9"), point_value(RHO) + 0.01j])
    assert rep["ok"]
    with pytest.raises(ValueError):
        w_coordinate_identities([-1j])
