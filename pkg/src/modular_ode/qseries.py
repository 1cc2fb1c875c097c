"""Exact truncated q-expansions with fractional exponents.

A :class:`QSeries` stores coefficients on the exponent lattice ``(1/N)Z``:
the stored entry ``coeffs[m]`` is the coefficient of ``q**((offset + m)/N)``.
Every entry that is stored is reliable; the first unknown exponent is
``(offset + len(coeffs))/N`` (see :attr:`QSeries.prec`).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import mpmath

__all__ = [
    "QSeries",
    "NearlyHolo",
    "NoRationalRoot",
    "eisenstein",
    "delta_and_j",
    "eta_pow",
    "euler_product",
    "hauptmodul",
    "d_q",
    "ramanujan_check",
    "schwarzian_normalized",
    "rankin_cohen2",
    "evaluate",
    "divisor_sigma",
]


class NoRationalRoot(ArithmeticError):
    """Leading coefficient has no exact rational n-th root."""


def _is_exact(c) -> bool:
    return isinstance(c, (int, Fraction)) or isinstance(c, Rational)


def _exact(c):
    if isinstance(c, bool):
        return Fraction(int(c))
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    return c


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _rational_root(c: Fraction, n: int) -> Fraction:
    """Exact positive n-th root of a positive rational, or raise."""
    c = Fraction(c)
    if c <= 0:
        if n % 2 == 1 and c < 0:
            return -_rational_root(-c, n)
        raise NoRationalRoot(f"no real {n}-th root of {c}")
    num = _int_root(c.numerator, n)
    den = _int_root(c.denominator, n)
    if num is None or den is None:
        raise NoRationalRoot(f"{c} is not an exact {n}-th power")
    return Fraction(num, den)


def _int_root(a: int, n: int):
    r = round(a ** (1.0 / n)) if a < 2**1000 else None
    if r is not None:
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**n == a:
                return cand
    # integer Newton iteration for big values
    x = 1 << ((a.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    return x if x**n == a else None


class QSeries:
    """Truncated series ``sum_m coeffs[m] q^((offset+m)/denom)``.

    Values are immutable; arithmetic returns new series whose stored length
    is the pessimistic reliable truncation of the operands.
    """

    __slots__ = ("denom", "offset", "coeffs")

    def __init__(self, coeffs: Iterable, offset: int = 0, denom: int = 1):
        if denom <= 0:
            raise ValueError("denom must be positive")
        cs = [_exact(c) for c in coeffs]
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        self.denom = int(denom)
        self.offset = int(offset) + lead
        self.coeffs = tuple(cs[lead:])

    # ---------------------------------------------------------------- basics
    @classmethod
    def constant(cls, c, prec: Fraction | int, denom: int = 1) -> "QSeries":
        """The constant ``c`` known for all exponents below ``prec``."""
        top = math.ceil(Fraction(prec) * denom)
        if top <= 0:
            return cls([], top, denom)
        return cls([c] + [0] * (top - 1), 0, denom)

    @classmethod
    def monomial(cls, c, exponent, prec, denom: int | None = None) -> "QSeries":
        e = Fraction(exponent)
        n = denom or e.denominator
        if (e * n).denominator != 1:
            raise ValueError("exponent not on lattice")
        start = int(e * n)
        top = math.ceil(Fraction(prec) * n)
        if top <= start:
            return cls([], top, n)
        return cls([c] + [0] * (top - start - 1), start, n)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def prec(self) -> Fraction:
        """First exponent whose coefficient is unknown."""
        return Fraction(self.offset + len(self.coeffs), self.denom)

    @property
    def valuation(self) -> Fraction:
        """Leading exponent (``prec`` for the zero series)."""
        return Fraction(self.offset, self.denom)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs)

    def exponents(self):
        return [Fraction(self.offset + m, self.denom) for m in range(len(self.coeffs))]

    def terms(self):
        """Nonzero ``(exponent, coefficient)`` pairs."""
        return [
            (Fraction(self.offset + m, self.denom), c)
            for m, c in enumerate(self.coeffs)
            if c != 0
        ]

    def __getitem__(self, exponent) -> object:
        e = Fraction(exponent)
        if e >= self.prec:
            raise IndexError(f"coefficient of q^{e} is beyond the truncation {self.prec}")
        k = e * self.denom
        if k.denominator != 1:
            return 0
        m = int(k) - self.offset
        if m < 0:
            return 0
        return self.coeffs[m]

    def leading(self):
        if not self.coeffs:
            raise ZeroDivisionError("zero series has no leading coefficient")
        return self.coeffs[0]

    def with_denom(self, n: int) -> "QSeries":
        """Same series on the refined lattice ``(1/n)Z`` (``denom | n``)."""
        if n % self.denom:
            raise ValueError(f"{n} is not a multiple of {self.denom}")
        k = n // self.denom
        if k == 1:
            return self
        out = [0] * (len(self.coeffs) * k)
        for m, c in enumerate(self.coeffs):
            out[m * k] = c
        return QSeries(out, self.offset * k, n)

    def truncate(self, prec) -> "QSeries":
        """Drop everything at exponents ``>= prec``."""
        top = math.ceil(Fraction(prec) * self.denom) - self.offset
        if top >= len(self.coeffs):
            return self
        top = max(top, 0)
        return QSeries(self.coeffs[:top], self.offset, self.denom) if top else QSeries(
            [], math.ceil(Fraction(prec) * self.denom), self.denom
        )

    def __repr__(self) -> str:
        shown = []
        for e, c in self.terms()[:6]:
            shown.append(f"{c}*q^{e}")
        body = " + ".join(shown) if shown else "0"
        return f"QSeries({body} + O(q^{self.prec}))"

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    # ------------------------------------------------------------ arithmetic
    def _aligned(self, other: "QSeries"):
        n = _lcm(self.denom, other.denom)
        return self.with_denom(n), other.with_denom(n), n

    def _coerce(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return other
        return QSeries.constant(other, self.prec, self.denom)

    def __add__(self, other) -> "QSeries":
        other = self._coerce(other)
        a, b, n = self._aligned(other)
        stop = min(a.offset + len(a.coeffs), b.offset + len(b.coeffs))
        start = min(a.offset, b.offset)
        if stop <= start:
            return QSeries([], stop, n)
        out = [0] * (stop - start)
        for m, c in enumerate(a.coeffs):
            i = a.offset + m - start
            if i >= len(out):
                break
            out[i] = c
        for m, c in enumerate(b.coeffs):
            i = b.offset + m - start
            if i >= len(out):
                break
            out[i] = out[i] + c
        res = QSeries(out, start, n)
        if res.is_zero():
            return QSeries([], stop, n)
        return res

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self.coeffs], self.offset, self.denom)

    def __sub__(self, other) -> "QSeries":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QSeries":
        return self._coerce(other) - self

    def scale(self, c) -> "QSeries":
        c = _exact(c)
        if c == 0:
            return QSeries([], self.offset + len(self.coeffs), self.denom)
        return QSeries([c * x for x in self.coeffs], self.offset, self.denom)

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        a, b, n = self._aligned(other)
        # relative lengths: f = q^va (known to la terms), g = q^vb (lb terms)
        if a.is_zero() or b.is_zero():
            stop = a.offset + len(a.coeffs) + b.offset + len(b.coeffs)
            if a.is_zero() and b.is_zero():
                return QSeries([], stop, n)
            if a.is_zero():
                return QSeries([], a.offset + b.offset, n)
            return QSeries([], a.offset + b.offset, n)
        length = min(len(a.coeffs), len(b.coeffs))
        return QSeries(_convolve(a.coeffs, b.coeffs, length), a.offset + b.offset, n)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        if self.is_zero():
            raise ZeroDivisionError("division by the zero series")
        inv = _series_inverse(self.coeffs, len(self.coeffs))
        return QSeries(inv, -self.offset, self.denom)

    def __truediv__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = _exact(other)
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / other if not _is_exact(other) else Fraction(1) / other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "QSeries":
        return self.inverse().scale(other)

    def __pow__(self, e: int) -> "QSeries":
        if not isinstance(e, int):
            raise TypeError("use root() for fractional powers")
        if e < 0:
            return (self.inverse()) ** (-e)
        if e == 0:
            return QSeries.constant(1, self.prec - self.valuation, self.denom)
        if self.is_zero():
            return QSeries([], self.offset * e, self.denom)
        body = _series_power(self.coeffs, Fraction(e), len(self.coeffs))
        return QSeries([self.coeffs[0] ** e * x for x in body], self.offset * e, self.denom)

    def root(self, n: int) -> "QSeries":
        """Principal n-th root; the leading coefficient's root is positive real."""
        if n <= 0:
            raise ValueError("root index must be positive")
        if self.is_zero():
            raise ZeroDivisionError("root of the zero series")
        lead = self.coeffs[0]
        if _is_exact(lead):
            lead_root = _rational_root(lead, n)
        else:
            lead_root = mpmath.root(lead, n)
        # exponents of the result: valuation/n + k/denom
        new_denom = _lcm(self.denom, (self.valuation / n).denominator)
        body = _series_power(self.coeffs, Fraction(1, n), len(self.coeffs))
        k = new_denom // self.denom
        out = [0] * (len(body) * k)
        for m, c in enumerate(body):
            out[m * k] = lead_root * c
        start = self.valuation / n * new_denom
        return QSeries(out, int(start), new_denom)

    def sqrt(self) -> "QSeries":
        return self.root(2)

    def map_coeffs(self, fn) -> "QSeries":
        return QSeries([fn(c) for c in self.coeffs], self.offset, self.denom)

    # --------------------------------------------------------------- I/O
    def to_record(self) -> dict:
        """JSON-ready record; rationals as ``"p/q"`` strings."""
        if not self.is_exact():
            raise TypeError("only exact series serialize to p/q records")
        return {
            "denom": self.denom,
            "offset": self.offset,
            "coeffs": [_frac_str(c) for c in self.coeffs],
            "order": self.order,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "QSeries":
        coeffs = [Fraction(c) for c in rec["coeffs"]]
        s = cls(coeffs, rec.get("offset", 0), rec.get("denom", 1))
        if "order" in rec and rec["order"] != len(rec["coeffs"]) - 1:
            raise ValueError("order field disagrees with the coefficient list")
        return s


def _frac_str(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


# ------------------------------------------------------------------ kernels
def _common_denominator(cs: Sequence[Fraction]) -> int:
    d = 1
    for c in cs:
        den = c.denominator
        if den != 1 and d % den:
            d = _lcm(d, den)
    return d


def _convolve(a: Sequence, b: Sequence, length: int) -> list:
    """First ``length`` coefficients of the product of two power series."""
    if all(type(x) is Fraction for x in a) and all(type(x) is Fraction for x in b):
        da = _common_denominator(a[:length])
        db = _common_denominator(b[:length])
        ia = [(x.numerator * (da // x.denominator)) for x in a[:length]]
        ib = [(x.numerator * (db // x.denominator)) for x in b[:length]]
        nz_b = [(j, v) for j, v in enumerate(ib) if v]
        out = [0] * length
        for i, u in enumerate(ia):
            if not u:
                continue
            lim = length - i
            for j, v in nz_b:
                if j >= lim:
                    break
                out[i + j] += u * v
        d = da * db
        return [Fraction(x, d) for x in out]
    out = [0] * length
    nz_b = [(j, v) for j, v in enumerate(b[:length]) if v != 0]
    for i, u in enumerate(a[:length]):
        if u == 0:
            continue
        lim = length - i
        for j, v in nz_b:
            if j >= lim:
                break
            out[i + j] = out[i + j] + u * v
    return out


def _series_inverse(a: Sequence, length: int) -> list:
    a0 = a[0]
    inv0 = Fraction(1) / a0 if _is_exact(a0) else 1 / a0
    out = [inv0]
    nz = [(j, v) for j, v in enumerate(a[1:length], start=1) if v != 0]
    for k in range(1, length):
        s = 0
        for j, v in nz:
            if j > k:
                break
            s += v * out[k - j]
        out.append(-s * inv0)
    return out


def _series_power(a: Sequence, alpha: Fraction, length: int) -> list:
    """Coefficients of ``(a/a0)**alpha`` via the J.C.P. Miller recurrence."""
    a0 = a[0]
    inv0 = Fraction(1) / a0 if _is_exact(a0) else 1 / a0
    u = [x * inv0 for x in a[:length]]
    g = [Fraction(1) if _is_exact(a0) else mpmath.mpf(1)]
    nz = [(j, v) for j, v in enumerate(u[1:], start=1) if v != 0]
    for k in range(1, length):
        s = 0
        for j, v in nz:
            if j > k:
                break
            s += ((alpha + 1) * j - k) * v * g[k - j]
        g.append(s / k if not _is_exact(s) else Fraction(s) / k)
    return g


# ------------------------------------------------------------ constructors
@lru_cache(maxsize=64)
def divisor_sigma(k: int, n_max: int) -> tuple:
    """``sigma_k(n)`` for ``0 <= n <= n_max`` (entry 0 is 0)."""
    sig = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dk = d**k
        for m in range(d, n_max + 1, d):
            sig[m] += dk
    return tuple(sig)


_EIS = {2: (-24, 1), 4: (240, 3), 6: (-504, 5)}


def eisenstein(k: int, order: int) -> QSeries:
    """Normalized Eisenstein series ``E_k`` through ``q**order``."""
    if k not in _EIS:
        raise ValueError(f"unsupported weight {k}; choose 2, 4 or 6")
    if order < 0:
        raise ValueError("order must be nonnegative")
    c, p = _EIS[k]
    sig = divisor_sigma(p, order)
    return QSeries([1] + [c * sig[n] for n in range(1, order + 1)])


def delta_and_j(order: int) -> tuple[QSeries, QSeries]:
    """``(Delta, j)``; Delta through ``q**order``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    e4 = eisenstein(4, order)
    e6 = eisenstein(6, order)
    e43 = e4**3
    delta = (e43 - e6 * e6) / 1728
    return delta, e43 / delta


def euler_product(order: int) -> list[int]:
    """``prod_{n>=1} (1 - q^n)`` through ``q**order`` (pentagonal numbers)."""
    out = [0] * (order + 1)
    k = 0
    while True:
        sign = -1 if k % 2 else 1
        hit = False
        for g in {k * (3 * k - 1) // 2, k * (3 * k + 1) // 2}:
            if g <= order:
                out[g] += sign
                hit = True
        if not hit:
            break
        k += 1
    return out


def eta_pow(e: int, order: int) -> QSeries:
    """``eta(z)**e`` for ``4 | e``, through ``order`` integer steps past the lead."""
    if e <= 0 or e % 4:
        raise ValueError("exponent must be a positive multiple of 4")
    base = QSeries(euler_product(order)) ** e
    lead = Fraction(e, 24)
    n = lead.denominator
    return QSeries(base.with_denom(n).coeffs, lead.numerator, n)


def hauptmodul(level: int, order: int) -> QSeries:
    """``J_2 = 24 eta^12/E_6`` or ``J_3 = 12 eta^8/E_4``."""
    if level == 2:
        return eta_pow(12, order).scale(24) / eisenstein(6, order)
    if level == 3:
        return eta_pow(8, order).scale(12) / eisenstein(4, order)
    raise ValueError(f"unsupported level {level}")


def d_q(f: QSeries) -> QSeries:
    """``q d/dq``: multiply each coefficient by its exponent."""
    out = [
        c * Fraction(f.offset + m, f.denom) if c != 0 else 0
        for m, c in enumerate(f.coeffs)
    ]
    res = QSeries(out, f.offset, f.denom)
    if res.is_zero():
        return QSeries([], f.offset + len(f.coeffs), f.denom)
    return res


def ramanujan_check(order: int = 50) -> bool:
    """The three Ramanujan derivative identities hold to ``order``."""
    e2, e4, e6 = (eisenstein(k, order) for k in (2, 4, 6))
    return (
        (d_q(e2) - (e2 * e2 - e4) / 12).is_zero()
        and (d_q(e4) - (e2 * e4 - e6) / 3).is_zero()
        and (d_q(e6) - (e2 * e6 - e4 * e4) / 2).is_zero()
    )


def schwarzian_normalized(h: QSeries) -> QSeries:
    """``{h, z} / (2 pi i)^2``, i.e. ``D g - g^2/2`` with ``g = D^2 h / D h``.

    ``{h, z} = -4 pi^2`` times the returned series.
    """
    dh = d_q(h)
    if dh.is_zero():
        raise ValueError("Schwarzian of a constant series")
    g = d_q(dh) / dh
    return d_q(g) - (g * g) / 2


def rankin_cohen2(f: QSeries) -> QSeries:
    """``3 (D f)^2 - 2 f D^2 f``."""
    df = d_q(f)
    return (df * df).scale(3) - (f * d_q(df)).scale(2)


# --------------------------------------------------------------- evaluation
def evaluate(f: QSeries, z0, dps: int = 15, tol: float | None = None):
    """Numeric value of ``f`` at ``z0`` plus an estimated tail bound.

    The tail estimate assumes the unknown coefficients grow no faster than
    the largest stored coefficient times a polynomial factor; it is the
    geometric bound ``C |t|^(M+1) / (1 - |t|)`` with ``t = q^(1/N)``.
    """
    with mpmath.workdps(dps):
        z0 = mpmath.mpc(z0)
        if z0.imag <= 0:
            raise ValueError("z0 must lie in the upper half-plane")
        two_pi_i = 2j * mpmath.pi
        t = mpmath.exp(two_pi_i * z0 / f.denom)
        at = abs(t)
        total = mpmath.mpc(0)
        for m, c in enumerate(f.coeffs):
            if c == 0:
                continue
            cc = mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else c
            total += cc * t ** (f.offset + m)
        tail = mpmath.mpf(0)
        if f.coeffs:
            mags = [abs(mpmath.mpf(c.numerator) / c.denominator) if isinstance(c, Fraction) else abs(c)
                    for c in f.coeffs[-8:]]
            top = len(f.coeffs)
            # polynomial growth allowance: scale by (2)^{deg} through the next terms
            cmax = max(mags) * mpmath.mpf(2) ** 8
            if at >= 1:
                raise ArithmeticError("q-expansion does not converge at this point")
            tail = cmax * at ** (f.offset + top) / (1 - at)
        if tol is not None and tail > tol:
            raise ArithmeticError(f"tail bound {mpmath.nstr(tail, 5)} exceeds tolerance {tol}")
        return total, tail


# ---------------------------------------------------------- nearly holomorphic
class NearlyHolo:
    """``sum_d f_d(z) * Y**d`` with ``Y = 1/(2 pi i (z - zbar))``.

    The ``2 pi i`` normalization of ``Y`` keeps every ``f_d`` an exact
    rational q-series under the Shimura-Maass derivative:
    ``del_k (f_d Y^d) = (D_q f_d) Y^d + (k - d) f_d Y^(d+1)``.
    At ``z0`` one has ``Y = -1/(4 pi Im z0)``.
    """

    def __init__(self, weight: int, parts: dict[int, QSeries]):
        if any(d < 0 for d in parts):
            raise ValueError("part indices must be nonnegative")
        self.weight = int(weight)
        self.parts = {d: s for d, s in sorted(parts.items()) if not s.is_zero()}
        # keep the truncation even when every part vanishes
        self._prec = min((s.prec for s in parts.values()), default=Fraction(0))

    @classmethod
    def holomorphic(cls, f: QSeries, weight: int) -> "NearlyHolo":
        return cls(weight, {0: f})

    def maass(self) -> "NearlyHolo":
        new: dict[int, QSeries] = {}
        k = self.weight
        for d, f in self.parts.items():
            df = d_q(f)
            new[d] = new[d] + df if d in new else df
            if k - d:
                g = f.scale(k - d)
                new[d + 1] = new[d + 1] + g if d + 1 in new else g
        return NearlyHolo(k + 2, new)

    def max_depth(self) -> int:
        return max(self.parts, default=-1)

    def evaluate(self, z0, dps: int = 15):
        """Value at ``z0`` with the summed tail estimate."""
        with mpmath.workdps(dps):
            z0 = mpmath.mpc(z0)
            y_val = -1 / (4 * mpmath.pi * z0.imag)
            total = mpmath.mpc(0)
            tail = mpmath.mpf(0)
            for d, f in self.parts.items():
                v, t = evaluate(f, z0, dps)
                total += v * y_val**d
                tail += t * abs(y_val) ** d
            return total, tail

    def __repr__(self) -> str:
        return f"NearlyHolo(weight={self.weight}, depths={list(self.parts)})"
