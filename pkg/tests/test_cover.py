from __future__ import annotations

import itertools

import pytest

from modular_ode.cover import (
    CoverSpec,
    Permutation,
    cycle_type,
    is_transitive,
    riemann_hurwitz,
    sweep,
    triangle_cover_data,
    overlap_cover_data,
    three_cycle_cover_data,
)


def compose_oracle(p, q, d):
    """Images of ``p * q`` (apply ``q`` first) from plain tuples."""
    return tuple(p[q[k] - 1] for k in range(d))


def test_composition_convention():
    d = 3
    s1 = Permutation.from_cycles(d, (1, 2))
    s2 = Permutation.from_cycles(d, (3, 2))
    assert (s2 * s1).cycles() == Permutation.from_cycles(d, (1, 3, 2)).cycles()
    for p, q in itertools.product(itertools.permutations(range(1, 5)), repeat=2):
        P, Q = Permutation(p), Permutation(q)
        assert (P * Q).images == compose_oracle(p, q, 4)
        assert (P * P.inverse()).images == tuple(range(1, 5))


def test_cycle_type_and_transitivity():
    p = Permutation.from_cycles(4, (1, 2), (3, 4))
    assert cycle_type(p) == (2, 2)
    assert not is_transitive([p])
    q = Permutation.from_cycles(3, (1, 2, 3))
    assert cycle_type(q) == (3,) and is_transitive([q])


def test_riemann_hurwitz():
    assert riemann_hurwitz(CoverSpec(1, [[1], [1], [1]])) == 0
    assert riemann_hurwitz(CoverSpec(2, [[2], [2], [1, 1]])) == 0
    with pytest.raises(ValueError):
        CoverSpec(3, [[2]])
    with pytest.raises(ValueError):
        riemann_hurwitz(CoverSpec(2, [[2], [1, 1], [1, 1]]))


def test_triangle_constructions():
    s1, s2, prod, rep = triangle_cover_data(2, 2, 3)
    assert rep["degree"] == 3 and cycle_type(prod) == (3,)
    assert rep["degree"] == 3 and triangle_cover_data(1, 1, 1)[3]["degree"] == 1
    for n in range(1, 7):
        s1, s2, prod, rep = triangle_cover_data(1, n, n)
        assert rep["degree"] == n and cycle_type(s1) == (1,) * n
        assert cycle_type(s2) == (n,) and cycle_type(prod) == (n,)
    with pytest.raises(ValueError):
        triangle_cover_data(2, 2, 2)


def test_overlap_constructions():
    assert overlap_cover_data(2, 0)[2].images == (1, 2)
    assert cycle_type(overlap_cover_data(2, 1)[2]) == (3,)
    for l0 in range(1, 9):
        for ell in range(l0):
            rep = overlap_cover_data(l0, ell)[3]
            assert rep["transitive"] and rep["type_ok"] and rep["genus"] == 0


def test_three_cycle_constructions():
    rep = three_cycle_cover_data(2, 1, 1)[3]
    assert rep["degree"] == 4 and rep["product_type"] == [4]
    rep = three_cycle_cover_data(1, 0, 1)[3]
    assert rep["degree"] == 1
    rep = three_cycle_cover_data(3, 2, -1)[3]
    assert rep["degree"] == 6 and rep["product_type"] == [5, 1]
    with pytest.raises(ValueError):
        three_cycle_cover_data(3, 1, 1)
    with pytest.raises(ValueError):
        three_cycle_cover_data(3, 0, -1)


def test_sweep_all_good():
    rows = sweep(12)
    assert len(rows) > 300
    for kind, params, rep in rows:
        assert rep["type_ok"] and rep["transitive"] and rep["genus"] == 0, (kind, params)
