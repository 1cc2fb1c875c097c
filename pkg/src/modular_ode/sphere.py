"""Fuchsian equations ``y'' = Q y`` on the sphere and the modular ``Q`` family.

Sphere potentials have singular points ``0, 1, infinity`` with angles
``alpha_1, alpha_2, alpha_3`` and extra points ``p_j`` carrying integers
``n_j``; the double-pole coefficient at a point of parameter ``a`` is
``(a/2)(a/2 + 1)`` so the local exponents are ``-a/2`` and ``1 + a/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import sympy as sp

from .qseries import QSeries, eisenstein, evaluate

__all__ = [
    "SphereODE",
    "ModularFamily",
    "double_pole",
    "build_sphere_Q",
    "fuchs_relations",
    "local_expansion",
    "sphere_apparentness_polynomial",
    "solve_apparent_system",
    "exponents_at_infinity",
    "r2_of",
    "build_modular_Q",
    "modular_constant_term",
    "double_pole_at",
]


def _rat(x):
    """Exact sympy number from int, Fraction, str or complex-rational input."""
    if isinstance(x, Fraction):
        return sp.Rational(x.numerator, x.denominator)
    if isinstance(x, complex):
        return sp.nsimplify(x.real, rational=True) + sp.I * sp.nsimplify(x.imag, rational=True)
    return sp.nsimplify(x, rational=True) if not isinstance(x, sp.Basic) else x


def double_pole(a) -> sp.Expr:
    a = _rat(a)
    return a / 2 * (a / 2 + 1)


@dataclass
class SphereODE:
    alphas: tuple
    points: tuple = ()
    orders: tuple = ()
    params: Optional[dict] = None  # keys "r1", "r2", "s1", ...; missing -> symbol

    def __post_init__(self):
        self.alphas = tuple(_rat(a) for a in self.alphas)
        self.points = tuple(_rat(p) for p in self.points)
        self.orders = tuple(int(n) for n in self.orders)
        if len(self.alphas) != 3:
            raise ValueError("three angles are required")
        if any(a.is_integer for a in self.alphas):
            raise ValueError("angles must not be integers")
        if len(self.points) != len(self.orders):
            raise ValueError("points and orders differ in length")
        if any(n <= 0 for n in self.orders):
            raise ValueError("orders must be positive")
        pts = list(self.points) + [sp.Integer(0), sp.Integer(1)]
        if len(set(pts)) != len(pts):
            raise ValueError("singular points coincide")

    @property
    def m(self) -> int:
        return len(self.points)

    def symbols(self) -> dict:
        out = {"r1": sp.Symbol("r1"), "r2": sp.Symbol("r2")}
        for j in range(1, self.m + 1):
            out[f"s{j}"] = sp.Symbol(f"s{j}")
        if self.params:
            for k, v in self.params.items():
                out[k] = _rat(v) if not isinstance(v, sp.Basic) else v
        return out

    def singularities(self) -> list:
        """``[(point, double_pole_coefficient, residue), ...]`` at finite points."""
        sym = self.symbols()
        out = [
            (sp.Integer(0), double_pole(self.alphas[0]), sym["r1"]),
            (sp.Integer(1), double_pole(self.alphas[1]), sym["r2"]),
        ]
        for j, (p, n) in enumerate(zip(self.points, self.orders), start=1):
            out.append((p, double_pole(n), sym[f"s{j}"]))
        return out


def build_sphere_Q(ode: SphereODE, z=None) -> sp.Expr:
    """``Q(z)`` as a sympy expression in partial fractions."""
    z = z if z is not None else sp.Symbol("z")
    return sum(A / (z - p) ** 2 + R / (z - p) for p, A, R in ode.singularities())


def fuchs_relations(ode: SphereODE) -> list:
    """The two linear conditions for the prescribed behaviour at infinity."""
    sing = ode.singularities()
    first = sp.Add(*[R for _, _, R in sing])
    second = sp.Add(*[R * p + A for p, A, R in sing]) - double_pole(ode.alphas[2])
    return [sp.expand(first), sp.expand(second)]


def exponents_at_infinity(ode: SphereODE, solution: dict):
    """Roots of ``lam(lam - 1) = c`` for ``Q ~ c/z^2``; ``None`` if ``Q`` decays slower."""
    z = sp.Symbol("z")
    Q = build_sphere_Q(ode, z).subs(solution)
    t = sp.Symbol("t")
    lead = sp.series(sp.together(Q.subs(z, 1 / t)), t, 0, 3).removeO()
    c1 = sp.simplify(lead.coeff(t, 1))
    if c1 != 0:
        return None
    c = sp.simplify(lead.coeff(t, 2))
    lam = sp.Symbol("lam")
    return sorted(sp.solve(lam * (lam - 1) - c, lam), key=sp.default_sort_key)


def local_expansion(ode: SphereODE, j: int, length: int) -> list:
    """Coefficients ``A_l`` of ``Q`` at ``p_j`` for ``l = -2 .. length - 3``."""
    sing = ode.singularities()
    p, A, R = sing[j + 1]
    out = [A, R] + [sp.Integer(0)] * (length - 2)
    for q, B, S in sing:
        if q == p:
            continue
        c = q - p
        for ell in range(length - 2):
            # B/(x - c)^2 + S/(x - c) expanded in x = z - p
            out[ell + 2] += B * (ell + 1) / c ** (ell + 2) - S / c ** (ell + 1)
    return [sp.expand(x) for x in out]


def sphere_apparentness_polynomial(ode: SphereODE, j: int) -> sp.Expr:
    """Obstruction at ``p_j`` (1-based) for the exponent ``-n_j/2``."""
    if not 1 <= j <= ode.m:
        raise ValueError("no such movable point")
    n = ode.orders[j - 1]
    two_k = n + 1
    A = local_expansion(ode, j, two_k + 1)  # A[l + 2] is A_l
    d = [sp.Integer(1)]
    for idx in range(1, two_k + 1):
        acc = sp.Integer(0)
        for k in range(idx):
            ell = idx - 2 - k
            if ell >= -1:
                acc += d[k] * A[ell + 2]
        acc = sp.expand(acc)
        if idx == two_k:
            return acc
        d.append(sp.expand(acc / (idx * (idx - two_k))))
    raise AssertionError("unreachable")


def solve_apparent_system(ode: SphereODE) -> dict:
    """Solve the Fuchs relations plus apparentness at ``p_1`` (``m = 1``)."""
    if ode.m != 1:
        raise ValueError("exactly one movable point is supported")
    sym = ode.symbols()
    r1, r2, s1 = sym["r1"], sym["r2"], sym["s1"]
    sol = sp.solve(fuchs_relations(ode), [r1, r2], dict=True)
    if len(sol) != 1:
        raise ArithmeticError("Fuchs relations are degenerate")
    P = sp.expand(sphere_apparentness_polynomial(ode, 1).subs(sol[0]))
    poly = sp.Poly(P, s1)
    bound = ode.orders[0] + 1
    if poly.degree() > bound:
        raise ArithmeticError(f"eliminated degree {poly.degree()} exceeds {bound}")
    total = poly.degree()
    distinct = sum(p.degree() for p, _ in poly.sqf_list()[1])
    rational = []
    real_intervals = []
    exact_field = all(c.is_rational for c in poly.all_coeffs())
    if exact_field and total > 0:
        for root, mult in sp.roots(poly, filter="Q").items():
            rational.append((root, mult))
        for (lo, hi), mult in poly.intervals():
            real_intervals.append(((lo, hi), mult))
    solutions = []
    for root, mult in rational:
        params = {s1: root}
        params[r1] = sol[0][r1].subs(params)
        params[r2] = sol[0][r2].subs(params)
        solutions.append({"r1": params[r1], "r2": params[r2], "s1": root, "multiplicity": mult})
    return {
        "polynomial": poly,
        "degree": total,
        "distinct_roots": distinct,
        "bezout_bound": bound,
        "rational_solutions": solutions,
        "real_root_intervals": real_intervals,
        "within_bound": total <= bound,
    }


# ------------------------------------------------------------ modular family
def r2_of(t_j, kappa_j):
    """Coefficient making the local exponents at ``z_j`` equal ``1/2 +- kappa_j``."""
    k = Fraction(kappa_j)
    return t_j * (t_j - 1) ** 2 * (1 - 4 * k * k)


@dataclass
class ModularFamily:
    kappa_rho: Fraction
    kappa_i: Fraction
    kappas: tuple = ()
    ts: tuple = ()  # t_j = E6(z_j)^2 / E4(z_j)^3, exact or complex
    points: tuple = ()  # optional z_j, used to compute ts

    def __post_init__(self):
        self.kappa_rho = Fraction(self.kappa_rho)
        self.kappa_i = Fraction(self.kappa_i)
        self.kappas = tuple(Fraction(k) for k in self.kappas)
        if self.points and not self.ts:
            self.ts = tuple(t_at(z) for z in self.points)
        if len(self.ts) != len(self.kappas):
            raise ValueError("one t_j per kappa_j is required")
        for t in self.ts:
            if t == 0 or t == 1:
                raise ValueError("z_j is equivalent to rho or i")

    @property
    def s(self) -> Fraction:
        return (1 - 4 * self.kappa_rho**2) / 9

    @property
    def t(self) -> Fraction:
        return (1 - 4 * self.kappa_i**2) / 4

    @property
    def r2s(self) -> tuple:
        return tuple(r2_of(t, k) for t, k in zip(self.ts, self.kappas))

    @property
    def flags(self) -> dict:
        return {
            "rho_integral": (2 * self.kappa_rho / 3).denominator == 1,
            "i_integral": self.kappa_i.denominator == 1,
        }


def t_at(z, dps: int = 30, order: int = 80):
    with mpmath.workdps(dps):
        e4 = evaluate(eisenstein(4, order), z, dps)[0]
        e6 = evaluate(eisenstein(6, order), z, dps)[0]
        return e6**2 / e4**3


def _to_numeric(f: QSeries) -> QSeries:
    return f.map_coeffs(lambda c: mpmath.mpc(c.numerator) / c.denominator if isinstance(c, Fraction) else mpmath.mpc(c))


def build_modular_Q(fam: ModularFamily, r, r1s: Sequence, order: int) -> QSeries:
    """``Q/pi^2`` as a q-series; exact when all ``t_j`` and parameters are rational."""
    exact = all(isinstance(x, (int, Fraction)) for x in list(fam.ts) + [r] + list(r1s))
    e4 = eisenstein(4, order)
    e6 = eisenstein(6, order)
    if not exact:
        e4, e6 = _to_numeric(e4), _to_numeric(e6)
    e42 = e4 * e4
    e62 = e6 * e6
    e43 = e42 * e4
    out = e4.scale(r) + (e62 / e42).scale(fam.s) + ((e42 * e42) / e62).scale(fam.t)
    for t_j, r1, r2 in zip(fam.ts, r1s, fam.r2s):
        F = e62 - e43.scale(t_j)
        num = (e42 * e42 * F).scale(r1) + (e43 * e42 * e42).scale(r2)
        out = out + num / (F * F)
    return out


def modular_constant_term(fam: ModularFamily, r, r1s):
    """``r + s + t + sum(r1/(1-t_j) + r2/(1-t_j)^2)``, the q^0 term of ``Q/pi^2``."""
    total = r + fam.s + fam.t
    for t_j, r1, r2 in zip(fam.ts, r1s, fam.r2s):
        total = total + r1 / (1 - t_j) + r2 / (1 - t_j) ** 2
    return total


def double_pole_at(fam: ModularFamily, j: int, z_j, r=0, r1s=None, dps: int = 40, eps: float = 1e-8):
    """Numeric coefficient of ``(z - z_j)^-2`` in ``Q`` (symmetric limit)."""
    r1s = list(r1s) if r1s is not None else [0] * len(fam.ts)
    with mpmath.workdps(dps):
        e4s = eisenstein(4, 120)
        e6s = eisenstein(6, 120)

        def Q(z):
            e4 = evaluate(e4s, z, dps)[0]
            e6 = evaluate(e6s, z, dps)[0]
            val = r * e4 + fam.s * e6**2 / e4**2 + fam.t * e4**4 / e6**2
            for t_j, r1, r2 in zip(fam.ts, r1s, fam.r2s):
                F = e6**2 - t_j * e4**3
                val += (r1 * e4**4 * F + r2 * e4**7) / F**2
            return mpmath.pi**2 * val

        z0 = mpmath.mpc(z_j)
        h = mpmath.mpf(eps)
        return (h**2 * Q(z0 + h) + h**2 * Q(z0 - h)) / 2
