"""Permutation certificates for branched covers of the sphere.

Points are labelled ``1..d``.  A product ``s2 * s1`` applies ``s1`` first,
so ``(3,2)*(1,2) == (1,3,2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .monodromy import triple_condition

__all__ = [
    "Permutation",
    "CoverSpec",
    "cycle_type",
    "is_transitive",
    "riemann_hurwitz",
    "triangle_cover_data",
    "overlap_cover_data",
    "three_cycle_cover_data",
    "sweep",
]


@dataclass(frozen=True)
class Permutation:
    images: tuple  # images[k-1] is the image of k

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError("not a bijection on 1..d")

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(tuple(range(1, d + 1)))

    @classmethod
    def from_cycles(cls, d: int, *cycles) -> "Permutation":
        img = list(range(1, d + 1))
        for cyc in cycles:
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc}")
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return cls(tuple(img))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self(other(k)) for k in range(1, self.degree + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for k, v in enumerate(self.images, start=1):
            inv[v - 1] = k
        return Permutation(tuple(inv))

    def cycles(self) -> list:
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            k = self(start)
            while k != start:
                cyc.append(k)
                seen.add(k)
                k = self(k)
            out.append(tuple(cyc))
        return out

    def __repr__(self) -> str:
        cyc = [c for c in self.cycles() if len(c) > 1]
        return "".join(str(c).replace(" ", "") for c in cyc) or "()"


@dataclass
class CoverSpec:
    degree: int
    branch_types: list

    def __post_init__(self):
        for p in self.branch_types:
            if sum(p) != self.degree or any(x <= 0 for x in p):
                raise ValueError(f"{p} is not a partition of {self.degree}")


def cycle_type(p: Permutation) -> tuple:
    return tuple(sorted((len(c) for c in p.cycles()), reverse=True))


def is_transitive(perms) -> bool:
    perms = list(perms)
    d = perms[0].degree
    if any(p.degree != d for p in perms):
        raise ValueError("degree mismatch")
    reached = {1}
    frontier = [1]
    while frontier:
        k = frontier.pop()
        for p in perms:
            for m in (p(k), p.inverse()(k)):
                if m not in reached:
                    reached.add(m)
                    frontier.append(m)
    return len(reached) == d


def riemann_hurwitz(spec: CoverSpec) -> int:
    g = 1 - spec.degree + Fraction(sum(sum(x - 1 for x in p) for p in spec.branch_types), 2)
    if g.denominator != 1:
        raise ValueError(f"non-integral genus {g}")
    return int(g)


def _report(gens, product, claimed) -> dict:
    implied = product.inverse()
    types = [cycle_type(g) for g in gens] + [cycle_type(implied)]
    d = product.degree
    genus = riemann_hurwitz(CoverSpec(d, [list(t) for t in types]))
    return {
        "degree": d,
        "cycles": [repr(g) for g in gens],
        "product": repr(product),
        "product_type": list(cycle_type(product)),
        "claimed_type": list(claimed),
        "type_ok": tuple(cycle_type(product)) == tuple(sorted(claimed, reverse=True)),
        "transitive": is_transitive(gens),
        "genus": genus,
    }


def triangle_cover_data(n_i: int, n_rho: int, n_inf: int):
    """An ``n_i``-cycle and an ``n_rho``-cycle whose product is an ``n_inf``-cycle."""
    ok, _ = triple_condition(n_i, n_rho, n_inf)
    if not ok:
        raise ValueError(f"({n_i},{n_rho},{n_inf}) fails the odd-sum/triangle condition")
    d = (n_i + n_rho + n_inf - 1) // 2
    s1 = Permutation.from_cycles(d, range(1, n_i + 1))
    s2 = Permutation.from_cycles(d, range(d, d - n_rho, -1))
    prod = s2 * s1
    claimed = [n_inf] + [1] * (d - n_inf)
    return s1, s2, prod, _report([s1, s2], prod, claimed)


def overlap_cover_data(l0: int, ell: int):
    """Two ``l0``-cycles overlapping in ``l0 - ell`` points."""
    if not 0 <= ell < l0:
        raise ValueError("need 0 <= ell < l0")
    d = l0 + ell
    s1 = Permutation.from_cycles(d, range(1, l0 + 1))
    s2 = Permutation.from_cycles(d, range(l0 + ell, ell, -1))
    prod = s2 * s1
    claimed = [2 * ell + 1] + [1] * (d - 2 * ell - 1)
    return s1, s2, prod, _report([s1, s2], prod, claimed)


def three_cycle_cover_data(kappa_i: int, ell: int, sign: int):
    """Product of ``m`` 3-cycles with a ``kappa_i``-cycle, ``sign`` = +1 or -1."""
    if kappa_i <= 0 or (kappa_i + ell) % 2 == 0 or ell < 0 or ell > kappa_i - 1:
        raise ValueError("ell must have parity opposite to kappa_i and lie in [0, kappa_i - 1]")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    m = (kappa_i + ell - 1) // 2
    mp = (kappa_i - ell - 1) // 2
    if sign == 1:
        d = 3 * m + 1
        s_inf = Permutation.from_cycles(d, *[(3 * k - 1, 3 * k, 3 * k + 1) for k in range(1, m + 1)])
        cyc = [1] + list(range(2, 3 * m, 3)) + list(range(3 * mp + 1, 3, -3))
        claimed = [3 * ell + 1] + [3] * mp
    else:
        if ell == 0:
            raise ValueError("the minus branch needs ell >= 1")
        d = 3 * m
        s_inf = Permutation.from_cycles(d, *[(3 * k - 2, 3 * k - 1, 3 * k) for k in range(1, m + 1)])
        cyc = list(range(1, 3 * m - 1, 3)) + list(range(3 * m, 3 * ell - 1, -3))
        claimed = [3 * ell - 1] + [3] * mp + [1]
    if len(cyc) != kappa_i:
        raise ArithmeticError(f"constructed cycle has length {len(cyc)}, expected {kappa_i}")
    s1 = Permutation.from_cycles(d, cyc)
    prod = s1 * s_inf
    claimed = claimed + [1] * (d - sum(claimed))
    return s_inf, s1, prod, _report([s_inf, s1], prod, claimed)


def sweep(max_degree: int = 12) -> list:
    """All constructions with degree at most ``max_degree``."""
    out = []
    for l0 in range(1, max_degree + 1):
        for ell in range(l0):
            if l0 + ell <= max_degree:
                out.append(("overlap", (l0, ell), overlap_cover_data(l0, ell)[3]))
    for a in range(1, 2 * max_degree + 2):
        for b in range(1, 2 * max_degree + 2):
            for c in range(1, 2 * max_degree + 2):
                ok, _ = triple_condition(a, b, c)
                if ok and (a + b + c - 1) // 2 <= max_degree:
                    out.append(("triangle", (a, b, c), triangle_cover_data(a, b, c)[3]))
    for ki in range(1, 2 * max_degree):
        for ell in range(0, ki):
            if (ki + ell) % 2 == 0:
                continue
            for sign in (1, -1):
                if sign == -1 and ell == 0:
                    continue
                m = (ki + ell - 1) // 2
                d = 3 * m + 1 if sign == 1 else 3 * m
                if d <= max_degree:
                    out.append(("three-cycle", (ki, ell, sign), three_cycle_cover_data(ki, ell, sign)[3]))
    return out
