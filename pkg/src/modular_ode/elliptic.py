"""Expansions at the elliptic points in ``w = (z - z0)/(z - conj(z0))``.

A weight ``k`` form is written ``f = (1 - w)^k * sum_n a_n w^n`` with
``a_n = b_n / n!`` and ``b_n = (d_k^n f)(z0) * (-4 pi Im z0)^n``.  Only the
"reduced" sequence ``a_n`` is stored; for forms of equal weight the reduced
sequences multiply and divide like ordinary power series.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .qseries import NearlyHolo, QSeries, eisenstein

__all__ = [
    "RHO",
    "point_value",
    "I",
    "EllipticExpansion",
    "ParamPoly",
    "maass_tower",
    "expand_at",
    "quotient_expansion",
    "indicial_at",
    "apparentness_polynomial",
    "predicted_roots",
    "root_report",
    "w_coordinate_identities",
    "s_of_kappa",
    "t_of_kappa",
]

RHO = "rho"
I = "i"

_POINTS = {RHO: 3, I: 2}


def point_value(point):
    """``z0`` as an mpc; rho is ``(1 + sqrt(-3))/2``."""
    if point == RHO:
        return mpmath.mpc(0.5, mpmath.sqrt(3) / 2)
    if point == I:
        return mpmath.mpc(0, 1)
    return mpmath.mpc(point)


def s_of_kappa(kappa) -> Fraction:
    return (1 - 4 * Fraction(kappa) ** 2) / 9


def t_of_kappa(kappa) -> Fraction:
    return (1 - 4 * Fraction(kappa) ** 2) / 4


@dataclass
class EllipticExpansion:
    """Reduced coefficients ``coeffs[m]`` of ``w^(leading_index + m)``."""

    point: object
    weight: int
    leading_index: int
    coeffs: list
    vanish_mod: int = 1
    max_violation: float = 0.0

    def coeff(self, n: int):
        m = n - self.leading_index
        if m < 0:
            return mpmath.mpc(0)
        if m >= len(self.coeffs):
            raise IndexError(f"coefficient {n} beyond truncation")
        return self.coeffs[m]

    @property
    def top(self) -> int:
        """Largest stored index."""
        return self.leading_index + len(self.coeffs) - 1

    def rescaled(self, lam) -> "EllipticExpansion":
        return EllipticExpansion(
            self.point,
            self.weight,
            self.leading_index,
            [c * lam ** (self.leading_index + m) for m, c in enumerate(self.coeffs)],
            self.vanish_mod,
            self.max_violation,
        )

    def evaluate(self, z):
        """Value at ``z`` from the truncated expansion."""
        z0 = point_value(self.point)
        w = (z - z0) / (z - mpmath.conj(z0))
        s = mpmath.fsum(c * w ** (self.leading_index + m) for m, c in enumerate(self.coeffs))
        return (1 - w) ** self.weight * s


class ParamPoly:
    """Polynomial in the parameter ``r``; coefficients lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "ParamPoly") -> "ParamPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [0] * (n - len(self.coeffs))
        b = other.coeffs + [0] * (n - len(other.coeffs))
        return ParamPoly([x + y for x, y in zip(a, b)])

    def scale(self, c) -> "ParamPoly":
        return ParamPoly([c * x for x in self.coeffs])

    def mul_linear(self, a, b) -> "ParamPoly":
        """Product with ``a + b r``."""
        out = [0] * (len(self.coeffs) + 1)
        for i, x in enumerate(self.coeffs):
            out[i] += a * x
            out[i + 1] += b * x
        return ParamPoly(out)

    def __call__(self, r):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * r + c
        return acc

    def trimmed(self, rel_tol) -> "ParamPoly":
        """Drop top coefficients below ``rel_tol`` times the largest one."""
        if not self.coeffs:
            return self
        scale = max(abs(c) for c in self.coeffs)
        cs = list(self.coeffs)
        while cs and abs(cs[-1]) <= rel_tol * scale:
            cs.pop()
        return ParamPoly(cs)

    def monic(self) -> "ParamPoly":
        lead = self.coeffs[-1]
        return ParamPoly([c / lead for c in self.coeffs])

    def roots(self):
        if self.degree < 1:
            return []
        return mpmath.polyroots(list(reversed(self.coeffs)), maxsteps=200, extraprec=200)

    def __repr__(self) -> str:
        return f"ParamPoly(degree={self.degree}, coeffs={self.coeffs})"


# ------------------------------------------------------------ Maass towers
def maass_tower(f: NearlyHolo, n_max: int) -> list:
    """``[f, d f, d^2 f, ..., d^n_max f]`` with the Shimura-Maass operator."""
    out = [f]
    for _ in range(n_max):
        out.append(out[-1].maass())
    return out


def _vanishes(n: int, k: int, mod: int) -> bool:
    return mod > 1 and ((2 * n + k) % (2 * mod)) != 0


def expand_at(f, k: int, point, order: int, dps: int = 40, enforce: bool = True) -> EllipticExpansion:
    """Reduced expansion of a holomorphic weight ``k`` form at ``point``.

    ``f`` is a QSeries or a holomorphic NearlyHolo.  The q-truncation of ``f``
    must be long enough for the evaluation tail bound at ``point``.
    """
    if isinstance(f, QSeries):
        f = NearlyHolo.holomorphic(f, k)
    mod = _POINTS.get(point, 1)
    with mpmath.workdps(dps):
        z0 = point_value(point)
        y0 = z0.imag
        scale = -4 * mpmath.pi * y0
        tower = maass_tower(f, order)
        vals = []
        tails = []
        for n, g in enumerate(tower):
            v, tail = g.evaluate(z0, dps)
            vals.append(v * scale**n / mpmath.factorial(n))
            tails.append(tail * abs(scale) ** n / mpmath.factorial(n))
        mags = [abs(v) for v in vals]
        big = max(mags) if mags else mpmath.mpf(0)
        viol = mpmath.mpf(0)
        if enforce and mod > 1:
            for n in range(len(vals)):
                if _vanishes(n, k, mod):
                    if big > 0:
                        viol = max(viol, mags[n] / big)
                    vals[n] = mpmath.mpc(0)
        # tail-limited precision check
        worst = max(tails) if tails else 0
        if big > 0 and worst > big * mpmath.mpf(10) ** (-dps // 2):
            raise ArithmeticError("q-truncation too short for the requested precision")
        lead = 0
        tiny = big * mpmath.mpf(10) ** (-dps // 2)
        while lead < len(vals) and abs(vals[lead]) <= tiny:
            lead += 1
        if lead == len(vals):
            return EllipticExpansion(point, k, len(vals), [], mod, float(viol))
        return EllipticExpansion(point, k, lead, vals[lead:], mod, float(viol))


def _series_div(num: EllipticExpansion, den: EllipticExpansion, length: int) -> list:
    a = num.coeffs
    b = den.coeffs
    out = []
    for n in range(length):
        s = a[n] if n < len(a) else None
        if s is None:
            raise IndexError("numerator truncation too short")
        for j in range(1, n + 1):
            if j < len(b):
                s -= b[j] * out[n - j]
            else:
                raise IndexError("denominator truncation too short")
        out.append(s / b[0])
    return out


def _series_mul(a: list, b: list, length: int) -> list:
    return [
        mpmath.fsum(a[i] * b[n - i] for i in range(n + 1) if i < len(a) and n - i < len(b))
        for n in range(length)
    ]


def _q_order(dps: int) -> int:
    # |q| <= exp(-pi sqrt 3) ~ 0.0043 at rho and i; generous margin for derivatives
    return max(40, int(dps * 0.9) + 30)


def quotient_expansion(kind: str, order: int, dps: int = 40) -> EllipticExpansion:
    """Laurent expansion of ``pi^2 E6^2/E4^2`` at rho or ``pi^2 E4^4/E6^2`` at i.

    Returned coefficients are reduced (the weight 4 factor ``(1-w)^4``
    is implicit) and run from ``w^-2`` through ``w^order``.
    """
    M = _q_order(dps)
    need = order + 3
    with mpmath.workdps(dps):
        if kind in ("rho", "E6^2/E4^2"):
            point, tol_lead = RHO, mpmath.mpf(3) / 4
            e4 = expand_at(eisenstein(4, M), 4, RHO, need + 2, dps)
            e6 = expand_at(eisenstein(6, M), 6, RHO, need + 2, dps)
            num = _series_mul(e6.coeffs, e6.coeffs, need)
            den = _series_mul(e4.coeffs, e4.coeffs, need)
            shift = e6.leading_index * 2 - e4.leading_index * 2
            mod = 3
        elif kind in ("i", "E4^4/E6^2"):
            point, tol_lead = I, mpmath.mpf(1) / 4
            e4 = expand_at(eisenstein(4, M), 4, I, need + 2, dps)
            e6 = expand_at(eisenstein(6, M), 6, I, need + 2, dps)
            e42 = _series_mul(e4.coeffs, e4.coeffs, need)
            num = _series_mul(e42, e42, need)
            den = _series_mul(e6.coeffs, e6.coeffs, need)
            shift = e4.leading_index * 4 - e6.leading_index * 2
            mod = 2
        else:
            raise ValueError(f"unknown quotient kind {kind!r}")
        if shift != -2:
            raise ArithmeticError(f"unexpected pole order {-shift}")
        q = _series_div(
            EllipticExpansion(point, 0, 0, num), EllipticExpansion(point, 0, 0, den), need
        )
        q = [mpmath.pi**2 * c for c in q]
        if abs(q[0] - tol_lead) > mpmath.mpf(10) ** (-dps // 2):
            raise ArithmeticError(f"leading coefficient {q[0]} differs from {tol_lead}")
        exp = EllipticExpansion(point, 4, -2, q[: order + 3], mod)
        big = max(abs(c) for c in exp.coeffs)
        viol = 0.0
        for m in range(len(exp.coeffs)):
            if _vanishes(m - 2, 4, mod):
                viol = max(viol, float(abs(exp.coeffs[m]) / big))
                exp.coeffs[m] = mpmath.mpc(0)
        exp.max_violation = viol
        return exp


def indicial_at(point, value):
    """Roots of ``x^2 - x + 9s/4`` (rho) or ``x^2 - x + t`` (i), as ``(1/2 - kappa, 1/2 + kappa)``."""
    if point == RHO:
        c = Fraction(9, 4) * Fraction(value)
    elif point == I:
        c = Fraction(value)
    else:
        raise ValueError("point must be rho or i")
    disc = Fraction(1, 4) - c
    num, den = disc.numerator, disc.denominator
    if disc >= 0:
        from .qseries import _rational_root, NoRationalRoot

        try:
            kap = _rational_root(disc, 2) if disc else Fraction(0)
            return (Fraction(1, 2) - kap, Fraction(1, 2) + kap)
        except NoRationalRoot:
            pass
    kap = mpmath.sqrt(mpmath.mpf(num) / den)
    return (mpmath.mpf(1) / 2 - kap, mpmath.mpf(1) / 2 + kap)


def _family_data(family: str, kappa: Fraction):
    kappa = Fraction(kappa)
    if family == "q1":
        k2 = 2 * kappa
        applies = k2.denominator == 1 and k2 > 0 and k2.numerator % 3 == 0
        return RHO, s_of_kappa(kappa), applies, (int(k2) // 3 if applies else 0)
    if family == "q2":
        applies = kappa.denominator == 1 and kappa > 0
        return I, t_of_kappa(kappa), applies, (int(kappa) if applies else 0)
    raise ValueError("family must be q1 or q2")


def apparentness_polynomial(family: str, kappa, dps: int = 40, rescale=1, raw: bool = False) -> ParamPoly:
    """Monic obstruction polynomial ``P(r)`` for the family at its elliptic point.

    ``q1``: ``Q = pi^2 (r E4 + s E6^2/E4^2)`` at rho.
    ``q2``: ``Q = pi^2 (r E4 + t E4^4/E6^2)`` at i.
    ``rescale`` replaces ``w`` by ``rescale * w`` throughout (a consistency probe).
    """
    point, param, applies, expected = _family_data(family, kappa)
    if not applies:
        return ParamPoly([Fraction(1)])
    kappa = Fraction(kappa)
    n_obs = int(2 * kappa)
    with mpmath.workdps(dps):
        M = _q_order(dps)
        quot = quotient_expansion("rho" if point == RHO else "i", n_obs, dps)
        e4 = expand_at(eisenstein(4, M), 4, point, n_obs + 2, dps)
        lam = mpmath.mpc(rescale)
        if rescale != 1:
            quot = quot.rescaled(lam)
            e4 = e4.rescaled(lam)
        z0 = point_value(point)
        factor = (z0 - mpmath.conj(z0)) ** 2 * lam**2
        pi2 = mpmath.pi**2
        p = mpmath.mpf(param.numerator) / param.denominator

        def V(m):  # coefficient of w^m in V as a linear polynomial (const, r-coeff)
            return p * quot.coeff(m), pi2 * e4.coeff(m)

        c = [ParamPoly([mpmath.mpc(1)])]
        obstruction = None
        for n in range(1, n_obs + 1):
            acc = ParamPoly([])
            for j in range(n):
                a, b = V(n - j - 2)
                if a == 0 and b == 0:
                    continue
                acc = acc + c[j].mul_linear(a * factor, b * factor)
            if n == n_obs:
                obstruction = acc
                break
            c.append(acc.scale(1 / mpmath.mpf(n * (n - n_obs))))
        if raw:
            return obstruction
        poly = obstruction.trimmed(mpmath.mpf(10) ** (-dps // 2))
        if poly.degree != expected:
            raise ArithmeticError(f"obstruction degree {poly.degree}, expected {expected}")
        return poly.monic()


def predicted_roots(family: str, kappa) -> list:
    """Closed-form roots for ``q1`` at rho or ``q2`` at i."""
    point, param, applies, expected = _family_data(family, kappa)
    if not applies:
        return []
    kappa = Fraction(kappa)
    out = []
    if family == "q1":
        for ell in range(expected):
            out.append(-(ell + Fraction(1, 2)) ** 2 - param)
        return out
    ki = int(kappa)
    start = 0 if ki % 2 == 1 else 1
    for ell in range(start, ki, 2):
        for sgn in (1, -1):
            r = -(ell + sgn * Fraction(1, 3)) ** 2 - param
            if r not in out:
                out.append(r)
    return out


def root_report(family: str, kappa, dps: int = 40, rescale=1) -> dict:
    """Computed roots versus the closed forms, with residuals."""
    poly = apparentness_polynomial(family, kappa, dps, rescale)
    pred = predicted_roots(family, kappa)
    with mpmath.workdps(dps):
        roots = poly.roots()
        unmatched = list(roots)
        dist = 0.0
        for r in pred:
            if not unmatched:
                dist = float("inf")
                break
            best = min(unmatched, key=lambda x: abs(x - mpmath.mpf(r.numerator) / r.denominator))
            dist = max(dist, float(abs(best - mpmath.mpf(r.numerator) / r.denominator)))
            unmatched.remove(best)
        scale = max(abs(c) for c in poly.coeffs)
        resid = max((float(abs(poly(mpmath.mpf(r.numerator) / r.denominator)) / scale) for r in pred), default=0.0)
    return {
        "degree": poly.degree,
        "expected_degree": len(pred),
        "roots": [complex(r) for r in roots],
        "predicted": pred,
        "max_distance": dist if not unmatched else float("inf"),
        "max_residual": resid,
    }


def w_coordinate_identities(z_samples, dps: int = 30) -> dict:
    """Numerically check the transformation rules of ``w_i`` and ``w_rho``."""
    with mpmath.workdps(dps):
        zi = point_value(I)
        zr = point_value(RHO)

        def wi(z):
            return (z - zi) / (z - mpmath.conj(zi))

        def wr(z):
            return (z - zr) / (z - mpmath.conj(zr))

        worst = mpmath.mpf(0)
        omega = mpmath.exp(2j * mpmath.pi / 3)
        for z in z_samples:
            z = mpmath.mpc(z)
            if z.imag <= 0:
                raise ValueError("samples must lie in the upper half-plane")
            sz = -1 / z
            g = -1 / (z - 1)  # [[0,-1],[1,-1]] z
            worst = max(
                worst,
                abs(wi(sz) + wi(z)),
                abs((1 - wi(sz)) + 1j * z * (1 - wi(z))),
                abs(wr(g) - omega * wr(z)),
            )
        return {"samples": len(z_samples), "max_error": float(worst), "ok": worst < mpmath.mpf(10) ** (-dps // 2)}
