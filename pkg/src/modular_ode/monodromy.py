"""Closed-form unitarity and existence criteria for three-point monodromy."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from numbers import Rational

import cmath

__all__ = [
    "AngleData",
    "MonodromyTriple",
    "EXISTS",
    "NOT_EXISTS",
    "BOUNDARY",
    "THRESHOLD",
    "theta_of_alpha",
    "unitarity_discriminant",
    "s_matrix_entry",
    "monodromy_triple",
    "metric_exists",
    "modular_threshold",
    "integer_angle_condition",
    "triple_condition",
    "count_integer_angle_solutions",
    "angle_from_kappa",
]

EXISTS = "exists"
NOT_EXISTS = "not_exists"
BOUNDARY = "boundary"
THRESHOLD = "threshold"

TOL = 1e-9


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction)) or isinstance(x, Rational)


def _is_integer(x) -> bool:
    if _exact(x):
        return Fraction(x).denominator == 1
    return abs(x - round(x)) < TOL


def _floor(x) -> int:
    return math.floor(Fraction(x)) if _exact(x) else math.floor(x)


@dataclass(frozen=True)
class AngleData:
    thetas: tuple
    ells: tuple
    signs: tuple
    parity: int

    def alphas(self) -> tuple:
        return tuple(l + s * t for t, l, s in zip(self.thetas, self.ells, self.signs))


@dataclass
class MonodromyTriple:
    deltas: tuple
    a_entry: complex
    T: tuple
    R: tuple
    S: tuple


def theta_of_alpha(alpha):
    """``(theta, ell, sign)`` with ``alpha = ell + sign*theta`` and ``theta`` in ``(0, 1/2]``."""
    if _is_integer(alpha):
        raise ValueError(f"alpha = {alpha} is an integer")
    fl = _floor(alpha)
    frac = (Fraction(alpha) if _exact(alpha) else alpha) - fl
    if frac <= Fraction(1, 2):
        return frac, fl, +1
    return 1 - frac, fl + 1, -1


def _cospi(x) -> float:
    return math.cos(math.pi * float(x))


def unitarity_discriminant(thetas):
    """Expanded and factored discriminant after sorting so ``theta3`` is largest.

    Returns ``(delta, factored, permutation)`` where ``permutation`` lists the
    original positions in sorted order.
    """
    order = sorted(range(3), key=lambda k: thetas[k])
    t1, t2, t3 = (thetas[k] for k in order)
    c1, c2, c3 = _cospi(t1), _cospi(t2), _cospi(t3)
    delta = c1 * c1 + c2 * c2 + c3 * c3 - (1 + 2 * c1 * c2 * c3)
    factored = (c3 - _cospi(Fraction(t1) + Fraction(t2) if _exact(t1) and _exact(t2) else t1 + t2)) * (
        c3 - _cospi(Fraction(t1) - Fraction(t2) if _exact(t1) and _exact(t2) else t1 - t2)
    )
    return delta, factored, tuple(order)


def _max_last(thetas) -> tuple:
    """Move the largest angle to the end, keeping the other two in input order."""
    k = max(range(3), key=lambda j: (thetas[j], j))
    return tuple(thetas[j] for j in range(3) if j != k) + (thetas[k],)


def s_matrix_entry(thetas) -> complex:
    """The entry ``a`` of the normalized ``S`` matrix (largest angle last)."""
    t1, t2, t3 = _max_last(thetas)
    if _is_integer(t3):
        raise ValueError("theta3 must not be an integer")
    e = cmath.exp(1j * math.pi * float(t3))
    return (2 * _cospi(t2) - 2 * e.conjugate() * _cospi(t1)) / (e - e.conjugate())


def monodromy_triple(thetas) -> MonodromyTriple:
    """Matrices in the basis diagonalizing ``T``.

    ``T = diag(d3, 1/d3)``, ``R = [[a, b], [c, d]]`` with ``tr R = 2cos(pi t1)``
    and ``det R = 1``; ``S = T R`` realises ``tr S = 2cos(pi t2)``.
    """
    t1, t2, t3 = _max_last(thetas)
    d = tuple(cmath.exp(1j * math.pi * float(t)) for t in (t1, t2, t3))
    a = s_matrix_entry((t1, t2, t3))
    dd = 2 * _cospi(t1) - a
    bc = a * dd - 1
    b = 1.0 if abs(bc) < 1e-300 else bc
    c = bc / b
    T = ((d[2], 0), (0, 1 / d[2]))
    R = ((a, b), (c, dd))
    S = tuple(
        tuple(sum(T[i][k] * R[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )
    return MonodromyTriple(d, a, T, R, S)


def _strict_triangle(t) -> bool:
    return all(t[i] + t[j] > t[k] for i, j, k in permutations(range(3)))


def _alpha_degenerate(alphas) -> bool:
    a1, a2, a3 = alphas
    if any(_is_integer(a) for a in alphas):
        return True
    for s2 in (1, -1):
        for s3 in (1, -1):
            if _is_integer(a1 + s2 * a2 + s3 * a3):
                return True
    return False


def metric_exists(alphas, parity: int) -> dict:
    """Verdict for the three-point problem with angles ``alphas`` and parity.

    ``parity`` is ``sum n_j mod 2``; the total parity adds the ``ell_k`` of the
    angle normalization.  The theta criterion and the cosine inequality are
    both evaluated and must agree.
    """
    alphas = tuple(alphas)
    if _alpha_degenerate(alphas):
        return {"verdict": BOUNDARY, "reason": "an alpha or alpha1+-alpha2+-alpha3 is an integer"}
    data = [theta_of_alpha(a) for a in alphas]
    thetas = tuple(d[0] for d in data)
    ells = tuple(d[1] for d in data)
    sigma = (parity + sum(ells)) % 2
    if sigma == 0:
        by_theta = _strict_triangle(thetas)
    else:
        by_theta = sum(thetas) > 1
    c = [_cospi(a) for a in alphas]
    lhs = c[0] ** 2 + c[1] ** 2 + c[2] ** 2 + 2 * (-1) ** (sigma + 1) * c[0] * c[1] * c[2]
    by_cos = lhs < 1
    if abs(lhs - 1) < TOL:
        return {"verdict": BOUNDARY, "reason": "cosine expression at 1", "thetas": thetas}
    if by_theta != by_cos:
        raise ArithmeticError(f"criteria disagree for alphas={alphas}, parity={parity}")
    return {
        "verdict": EXISTS if by_theta else NOT_EXISTS,
        "thetas": thetas,
        "ells": ells,
        "sigma": sigma,
        "theta_criterion": by_theta,
        "cosine_value": lhs,
        "cosine_criterion": by_cos,
    }


def modular_threshold(kappa_i, kappa_rho, r_inf) -> dict:
    """Classification by ``r_inf`` for non-integral elliptic angles."""
    ki = Fraction(kappa_i)
    kr = Fraction(kappa_rho)
    if ki.denominator == 1 or (2 * kr / 3).denominator == 1:
        raise ValueError("kappa_i must be non-integral and 2 kappa_rho/3 non-integral")
    r = Fraction(r_inf) if _exact(r_inf) else r_inf
    if not 0 < r < Fraction(1, 2):
        raise ValueError("r_inf must lie in (0, 1/2)")
    lo, hi = Fraction(1, 12), Fraction(5, 12)
    if r == lo or r == hi:
        return {
            "verdict": THRESHOLD,
            "character": {"chi(T)": "exp(2 pi i/6)", "chi(S)": "-1"},
        }
    return {"verdict": EXISTS if lo < r < hi else NOT_EXISTS}


def integer_angle_condition(thetas) -> bool:
    """Existence condition for angle triples with at least one integer entry."""
    ints = [k for k in range(3) if _is_integer(thetas[k])]
    if not ints:
        raise ValueError("at least one angle must be an integer")
    if len(ints) == 3:
        t = [int(round(Fraction(x))) if _exact(x) else int(round(x)) for x in thetas]
        return sum(t) % 2 == 1 and _strict_triangle(t)
    if len(ints) == 2:
        return False
    k = ints[0]
    t1 = int(round(thetas[k]))
    others = [thetas[j] for j in range(3) if j != k]
    for m in (others[0] + others[1], abs(others[0] - others[1])):
        if _is_integer(m):
            mi = int(round(m))
            if (mi - t1) % 2 == 1 and mi <= t1 - 1:
                return True
    return False


def triple_condition(n_i: int, n_rho: int, n_inf: int):
    """``(ok, (r, s, t))`` for an integer triple."""
    if min(n_i, n_rho, n_inf) <= 0:
        raise ValueError("entries must be positive")
    ok = (n_i + n_rho + n_inf) % 2 == 1 and _strict_triangle((n_i, n_rho, n_inf))
    r = Fraction(-(n_inf**2) + n_rho**2 + n_i**2) - Fraction(13, 36)
    s = Fraction(1, 9) - n_rho**2
    t = Fraction(1, 4) - n_i**2
    return ok, (r, s, t)


def count_integer_angle_solutions(theta1, theta2) -> int:
    """Number of admissible third angles under the integer-angle condition.

    Supported: both integers, or ``theta1 = 1/2`` with integral ``theta2``.
    The count enumerates candidates ``theta3`` and tests them individually.
    """
    t1 = Fraction(theta1)
    t2 = Fraction(theta2)
    if t1.denominator == 1 and t2.denominator == 1:
        a, b = int(t1), int(t2)
        return sum(
            1 for c in range(1, a + b + 1) if integer_angle_condition((a, b, c))
        )
    if t1 == Fraction(1, 2) and t2.denominator == 1:
        b = int(t2)
        # theta3 in 1/2 + Z makes the pair (1/2, theta3) the non-integer one
        count = 0
        for twice in range(1, 4 * b + 2, 2):
            c = Fraction(twice, 2)
            if integer_angle_condition((b, t1, c)):
                count += 1
        return count
    raise NotImplementedError("configuration not covered by the counting argument")


def angle_from_kappa(kappa, location) -> Fraction:
    """``theta = 2 kappa / e_p`` with ``e_i = 2``, ``e_rho = 3``, otherwise 1."""
    k = Fraction(kappa) if _exact(kappa) else kappa
    if k <= 0:
        raise ValueError("kappa must be positive")
    e = {"i": 2, "rho": 3}.get(location, 1)
    return 2 * k / e
