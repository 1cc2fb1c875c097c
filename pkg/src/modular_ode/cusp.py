"""Frobenius analysis at the cusp for ``(q d/dq)^2 y = B(q) y``.

The equation ``y'' = Q(z) y`` becomes the cusp form above with
``B = -Q / (4 pi^2)``.  Inputs are therefore given as ``Q/pi^2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .qseries import QSeries, _is_exact, _rational_root, NoRationalRoot, d_q, eisenstein

__all__ = [
    "CuspODE",
    "FrobeniusSolution",
    "ObstructionNonzero",
    "NotApplicable",
    "make_cusp_ode",
    "solve_frobenius",
    "cusp_obstruction",
    "wronskian",
    "r_inf_of",
    "q3_over_pi2",
    "residual",
]


class ObstructionNonzero(ArithmeticError):
    """The recursion hits a vanishing left factor with a nonzero right side."""

    def __init__(self, index: int, value):
        super().__init__(f"obstruction at index {index} is {value}")
        self.index = index
        self.value = value


class NotApplicable(ValueError):
    """No obstruction index exists (the exponent difference is not integral)."""


@dataclass(frozen=True)
class CuspODE:
    B: QSeries
    kappa_inf: object  # Fraction in exact mode, mpf otherwise

    @property
    def exact(self) -> bool:
        return _is_exact(self.kappa_inf) and self.B.is_exact()

    @property
    def step(self) -> Fraction:
        """Exponent increment between consecutive recursion indices."""
        return Fraction(1, self.B.denom)


@dataclass
class FrobeniusSolution:
    exponent: object
    coeffs: list
    denom: int = 1
    free_index: Optional[int] = None

    def as_series(self) -> QSeries:
        """``q^exponent * sum c_j q^(j/denom)`` as an exact QSeries."""
        e = Fraction(self.exponent)
        n = self.denom * e.denominator // _gcd(self.denom, e.denominator)
        k = n // self.denom
        out = [0] * (len(self.coeffs) * k)
        for j, c in enumerate(self.coeffs):
            out[j * k] = c
        return QSeries(out, int(e * n), n)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def make_cusp_ode(Q_over_pi2: QSeries) -> CuspODE:
    """Cusp equation for ``y'' = Q y`` given the series ``Q/pi^2``."""
    if Q_over_pi2.is_zero() or Q_over_pi2.valuation > 0:
        raise ValueError("B(0) = 0: repeated exponent 0 at the cusp is not supported")
    if Q_over_pi2.valuation < 0:
        raise ValueError("potential is not Fuchsian at the cusp (negative exponent)")
    B = Q_over_pi2.scale(Fraction(-1, 4)) if Q_over_pi2.is_exact() else Q_over_pi2.map_coeffs(lambda c: -c / 4)
    b0 = B.coeffs[0]
    if _is_exact(b0):
        if b0 < 0:
            raise ValueError("B(0) < 0 gives non-real exponents at the cusp; rejected")
        try:
            kappa = _rational_root(Fraction(b0), 2)
        except NoRationalRoot:
            kappa = mpmath.sqrt(mpmath.mpf(b0.numerator) / b0.denominator)
    else:
        if mpmath.re(b0) < 0:
            raise ValueError("B(0) < 0 gives non-real exponents at the cusp; rejected")
        kappa = mpmath.sqrt(b0)
    return CuspODE(B, kappa)


def _obstruction_index(ode: CuspODE) -> Optional[int]:
    k2 = 2 * ode.kappa_inf * ode.B.denom
    if _is_exact(k2):
        k2 = Fraction(k2)
        return int(k2) if k2.denominator == 1 and k2 > 0 else None
    near = int(mpmath.nint(k2))
    return near if near > 0 and abs(k2 - near) < mpmath.mpf(10) ** (-mpmath.mp.dps // 2) else None


def _rhs(ode: CuspODE, coeffs: list, j: int):
    B = ode.B
    s = 0
    for k in range(1, j + 1):
        bk = B.coeffs[k] if k < len(B.coeffs) else None
        if bk is None:
            raise ValueError(f"potential known only to {B.prec}; need index {j}")
        if bk != 0:
            s += bk * coeffs[j - k]
    return s


def solve_frobenius(ode: CuspODE, sign: int, order: int, tol=None) -> FrobeniusSolution:
    """Normalized solution ``q^(sign*kappa)(1 + sum c_j q^(j/N))`` through index ``order``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    N = ode.B.denom
    if order >= len(ode.B.coeffs):
        raise ValueError(f"order {order} exceeds the potential truncation ({len(ode.B.coeffs) - 1})")
    kap = ode.kappa_inf
    exact = ode.exact
    one = Fraction(1) if exact else mpmath.mpf(1)
    coeffs = [one]
    free = None
    obst = _obstruction_index(ode) if sign == -1 else None
    if tol is None and not exact:
        tol = mpmath.mpf(10) ** (-(mpmath.mp.dps * 2) // 3)
    for j in range(1, order + 1):
        e = sign * kap + Fraction(j, N) if exact else sign * kap + mpmath.mpf(j) / N
        left = e * e - kap * kap
        rhs = _rhs(ode, coeffs, j)
        if j == obst:
            if (rhs != 0) if exact else (abs(rhs) > tol):
                raise ObstructionNonzero(j, rhs)
            coeffs.append(0 * one)
            free = j
            continue
        coeffs.append(rhs / left)
    exponent = sign * kap
    return FrobeniusSolution(exponent, coeffs, N, free)


def cusp_obstruction(ode: CuspODE):
    """Right side of the recursion at the resonant index, exponent ``-kappa``."""
    idx = _obstruction_index(ode)
    if idx is None:
        raise NotApplicable(f"2*kappa_inf = {2 * ode.kappa_inf} is not a positive lattice integer")
    exact = ode.exact
    one = Fraction(1) if exact else mpmath.mpf(1)
    N = ode.B.denom
    kap = ode.kappa_inf
    coeffs = [one]
    for j in range(1, idx):
        e = -kap + Fraction(j, N) if exact else -kap + mpmath.mpf(j) / N
        coeffs.append(_rhs(ode, coeffs, j) / (e * e - kap * kap))
    value = _rhs(ode, coeffs, idx)
    return Fraction(value) if exact else value


def wronskian(y1: QSeries, y2: QSeries) -> QSeries:
    """``y1 D_q y2 - y2 D_q y1``."""
    return y1 * d_q(y2) - y2 * d_q(y1)


def residual(ode: CuspODE, y: QSeries) -> QSeries:
    """``D_q^2 y - B y``; the zero series for a true solution."""
    return d_q(d_q(y)) - ode.B * y


def r_inf_of(kappa_inf):
    """``(r, branch)`` with ``r`` in ``(0, 1/2)`` and ``kappa = branch*r mod 1``."""
    if _is_exact(kappa_inf):
        k = Fraction(kappa_inf)
        if (2 * k).denominator == 1:
            raise ValueError("kappa_inf lies in (1/2)Z")
        frac = k - (k.numerator // k.denominator)
    else:
        k = mpmath.mpf(kappa_inf)
        if abs(2 * k - mpmath.nint(2 * k)) < 1e-12:
            raise ValueError("kappa_inf lies in (1/2)Z")
        frac = k - mpmath.floor(k)
    if 2 * frac < 1:
        return frac, +1
    return 1 - frac, -1


def q3_over_pi2(r, s, t, order: int) -> QSeries:
    """``r E4 + s E6^2/E4^2 + t E4^4/E6^2`` through ``q^order``."""
    e4 = eisenstein(4, order)
    e6 = eisenstein(6, order)
    e42 = e4 * e4
    e62 = e6 * e6
    out = e4.scale(r)
    if s:
        out = out + (e62 / e42).scale(s)
    if t:
        out = out + ((e42 * e42) / e62).scale(t)
    return out
