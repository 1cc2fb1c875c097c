from __future__ import annotations

from fractions import Fraction as Fr

import mpmath
import pytest

from modular_ode.reproductions import (
    compute_F,
    determine_Q_examples,
    folded_eta4_integral,
    format_poly,
    verify_S_antisymmetry_numeric,
    verify_T_antisymmetry,
    verify_example1,
    verify_example2,
    verify_schwarzian_tables,
)


def test_weight_neg2_small_cases():
    w1 = compute_F(1, 20)
    assert w1.c == 192 and w1.P == [1]
    w3 = compute_F(3, 30)
    assert w3.c == 3 * 2**24
    assert format_poly(w3.P) == "j - 1536"
    assert w3.verified_orders >= 5


def test_weight_neg2_ninth_case_table_scale():
    w = compute_F(9, 60)
    assert w.table_scale == 7
    assert format_poly(w.table_P) == "49j^4 - 192192j^3 + 253034496j^2 - 125954949120j + 19346680184832"


def test_weight_neg2_truncation_too_short():
    with pytest.raises(ArithmeticError):
        compute_F(9, 6)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_weight_neg2_symmetries(n):
    w = compute_F(n, 40)
    assert verify_T_antisymmetry(w.F)
    assert verify_S_antisymmetry_numeric(w.F, [1.3j, 0.25 + 1.2j, -0.4 + 1.1j]) < 1e-15


def test_weight_neg2_constant_positive_and_p_monic():
    for n in (1, 3, 5, 7):
        w = compute_F(n, 40)
        assert w.c > 0 and w.P[-1] == 1 and len(w.P) == (n + 1) // 2


def test_format_poly():
    assert format_poly([Fr(-3), Fr(0), Fr(1)]) == "j^2 - 3"
    assert format_poly([Fr(0)]) == "0"
    assert format_poly([Fr(1, 2), Fr(-1)], "x") == "-x + 1/2"


def test_schwarzian_tables():
    rows = verify_schwarzian_tables(30)
    assert len(rows) == 6 and all(r["ok"] for r in rows)
    got = {(r["point"], r["r"], r["param"]) for r in rows}
    assert ("rho", Fr(23, 36), Fr(-8, 9)) in got
    assert ("i", Fr(71, 36), Fr(-15, 4)) in got


def test_example1():
    rep = verify_example1(30)
    assert rep["ok"]
    assert rep["y_plus_sq_lattice_1/6+Z"] and rep["y_minus_sq_lattice_-1/6+Z"]


def test_folded_integral_matches_independent_quadrature():
    with mpmath.workdps(30):
        def eta4(t):
            q = mpmath.exp(-2 * mpmath.pi * t)
            return mpmath.exp(-mpmath.pi * t / 3) * mpmath.qp(q) ** 4

        ref = 2 * mpmath.quad(eta4, [1, 3, mpmath.inf])
        assert abs(folded_eta4_integral(60, 30) - ref) < 1e-20
        assert abs(ref - mpmath.mpf("0.66949263953264")) < 1e-13


def test_example2():
    rep = verify_example2(40, 30)
    assert rep["ok"]
    assert rep["C_nonzero"] and rep["C"] < 0
    assert rep["order_stability"] < 1e-10
    assert rep["x_over_y3_S_residual"] < 1e-10


def test_determine_q_examples():
    ex1 = determine_Q_examples(1, Fr(1, 2))
    assert (ex1["r"], ex1["s"], ex1["t"]) == (-1, 0, 0)
    ex2 = determine_Q_examples(2, Fr(1, 2), n=2)
    assert ex2["s"] == Fr(-8, 9) and ex2["r"] == Fr(-1, 9)
    ex4 = determine_Q_examples(4, Fr(1, 3), n=2, m=1)
    assert ex4["thetas"] == (1, 1, Fr(2, 3))
    assert ex4["r"] + ex4["s"] + ex4["t"] == -4 * Fr(1, 9)
    with pytest.raises(ValueError):
        determine_Q_examples(5, Fr(1, 2))


def test_q0_constant_term_in_example1():
    # h ~ q^(1/6), and the normalized Schwarzian of q^a is -a^2/2
    rep = verify_example1(10)
    assert Fr(rep["h_leading"]) == Fr(1, 6)
    assert Fr(rep["Q0_constant"]) == -Fr(1, 6) ** 2 / 2
