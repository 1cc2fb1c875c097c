from __future__ import annotations

from fractions import Fraction as F

import mpmath
import pytest
import sympy as sp

from modular_ode.cusp import q3_over_pi2
from modular_ode.sphere import (
    ModularFamily,
    SphereODE,
    build_modular_Q,
    build_sphere_Q,
    double_pole,
    double_pole_at,
    exponents_at_infinity,
    fuchs_relations,
    local_expansion,
    modular_constant_term,
    r2_of,
    solve_apparent_system,
    sphere_apparentness_polynomial,
)

z = sp.Symbol("z")


def test_double_poles():
    assert double_pole(1) == sp.Rational(3, 4)
    assert double_pole(F(1, 2)) == sp.Rational(5, 16)
    for n in range(1, 6):
        lam = sp.Symbol("lam")
        roots = set(sp.solve(lam * (lam - 1) - double_pole(n), lam))
        assert roots == {sp.Rational(-n, 2), 1 + sp.Rational(n, 2)}


def test_hypergeometric_case():
    ode = SphereODE((F(1, 2), F(1, 2), F(1, 3)))
    Q = build_sphere_Q(ode, z)
    r1, r2 = sp.symbols("r1 r2")
    expected = sp.Rational(5, 16) / z**2 + r1 / z + sp.Rational(5, 16) / (z - 1) ** 2 + r2 / (z - 1)
    assert sp.simplify(Q - expected) == 0
    sol = sp.solve(fuchs_relations(ode), [r1, r2], dict=True)
    assert len(sol) == 1
    ex = exponents_at_infinity(ode, sol[0])
    assert set(ex) == {sp.Rational(-1, 6), sp.Rational(7, 6)}


def test_fuchs_with_movable_point():
    ode = SphereODE((F(1, 2), F(1, 3), F(1, 5)), (2,), (1,))
    first, second = fuchs_relations(ode)
    s1 = sp.Symbol("s1")
    assert first.coeff(s1) == 1
    assert second.coeff(s1) == 2


def test_local_expansion_against_sympy_series():
    ode = SphereODE((F(1, 2), F(1, 3), F(1, 5)), (F(3, 7),), (2,), params={"r1": F(1, 3), "r2": F(-2, 5), "s1": F(5, 4)})
    Q = build_sphere_Q(ode, z)
    p = sp.Rational(3, 7)
    x = sp.Symbol("x")
    ser = sp.series(Q.subs(z, p + x), x, 0, 4).removeO()
    coeffs = local_expansion(ode, 1, 6)
    for ell in range(-2, 4):
        assert sp.simplify(ser.coeff(x, ell) - coeffs[ell + 2]) == 0


def test_apparentness_n1_is_quadratic_in_s():
    ode = SphereODE((F(1, 2), F(1, 3), F(1, 5)), (F(3, 7),), (1,))
    r1, r2, s1 = sp.symbols("r1 r2 s1")
    sol = sp.solve(fuchs_relations(ode), [r1, r2], dict=True)[0]
    P = sp.Poly(sp.expand(sphere_apparentness_polynomial(ode, 1).subs(sol)), s1)
    assert P.degree() == 2
    with pytest.raises(ValueError):
        sphere_apparentness_polynomial(ode, 2)


def _series_solution_exists(ode, sol, n):
    """Independent check: y = x^(-n/2) sum d_k x^k solves y'' = Q y to order n + 3."""
    params = {"r1": sol["r1"], "r2": sol["r2"], "s1": sol["s1"]}
    ode2 = SphereODE(ode.alphas, ode.points, ode.orders, params=params)
    x = sp.Symbol("x")
    N = n + 4
    Q = build_sphere_Q(ode2, z).subs(z, ode.points[0] + x)
    ds = sp.symbols(f"d1:{N}")
    y = x ** sp.Rational(-n, 2) * (1 + sum(d * x ** (k + 1) for k, d in enumerate(ds)))
    expr = sp.expand(sp.series((sp.diff(y, x, 2) - Q * y) * x ** (sp.Rational(n, 2) + 2), x, 0, N).removeO())
    eqs = [expr.coeff(x, k) for k in range(N)]
    return bool(sp.solve(eqs, ds, dict=True))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_apparent_system_bound(n):
    ode = SphereODE((F(1, 2), F(1, 3), F(1, 5)), (F(3, 7),), (n,))
    rep = solve_apparent_system(ode)
    assert rep["within_bound"] and rep["degree"] <= n + 1
    assert rep["distinct_roots"] <= rep["degree"]


def test_rational_solutions_are_apparent():
    found = 0
    for a3, pt in ((F(1, 2), F(1, 2)), (F(3, 2), -1), (F(3, 2), 2)):
        ode = SphereODE((F(1, 4), F(1, 4), a3), (pt,), (1,))
        rep = solve_apparent_system(ode)
        for sol in rep["rational_solutions"]:
            assert _series_solution_exists(ode, sol, 1)
            found += 1
    assert found == 6


def test_apparent_system_requires_one_point():
    with pytest.raises(ValueError):
        solve_apparent_system(SphereODE((F(1, 2), F(1, 3), F(1, 5))))


def test_invalid_inputs():
    with pytest.raises(ValueError):
        SphereODE((1, F(1, 2), F(1, 3)))
    with pytest.raises(ValueError):
        SphereODE((F(1, 2), F(1, 3), F(1, 5)), (1,), (1,))


def test_modular_family_reduces_to_three_term():
    fam = ModularFamily(F(3, 2), 1)
    assert fam.s == F(-8, 9) and fam.t == F(-3, 4)
    assert (build_modular_Q(fam, F(23, 36), [], 12) - q3_over_pi2(F(23, 36), F(-8, 9), F(-3, 4), 12)).is_zero()


def test_modular_constant_term():
    fam = ModularFamily(F(1, 2), F(1, 2), (F(3, 2),), (F(1, 3),))
    Q = build_modular_Q(fam, F(2, 5), [F(-1, 7)], 8)
    assert Q[0] == modular_constant_term(fam, F(2, 5), [F(-1, 7)])
    assert r2_of(F(1, 3), F(3, 2)) == F(1, 3) * F(4, 9) * (1 - 9)


def test_local_exponents_at_generic_point():
    """Coefficient of (z - z_j)^-2 is kappa^2 - 1/4, giving exponents 1/2 +- kappa."""
    zj = mpmath.mpc("0.3", "1.1")
    for kappa in (F(1), F(3, 2)):
        fam = ModularFamily(F(1, 2), F(1, 2), (kappa,), points=(zj,))
        c = double_pole_at(fam, 1, zj, r=F(1, 3), r1s=[F(2, 3)])
        assert abs(c - (kappa**2 - F(1, 4))) < 1e-6
