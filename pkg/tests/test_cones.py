from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toricmld.cones import (
    barycentric,
    box_points,
    contains,
    covered_by,
    cut,
    extreme_rays,
    hrep,
    is_pointed,
    relint_contains,
    relint_point,
    triangulate,
)
from toricmld.errors import NotACone
from toricmld.intlinalg import dot
from toricmld.ratlp import Optimal, cone_lp, solve_min


def in_cone_lp(gens, x):
    """Independent membership test: feasibility of x = G lam, lam >= 0."""
    dim = len(x)
    eq = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    # constraint matrix applied to points of the cone: identity => G lam = x
    p = cone_lp(gens, eq, [Fraction(c) for c in x], [Fraction(0)] * dim)
    return isinstance(solve_min(p), Optimal)


small = st.integers(min_value=-4, max_value=4)


def gen_sets(dim_max=3, n_max=4):
    return st.integers(min_value=1, max_value=dim_max).flatmap(
        lambda d: st.lists(
            st.lists(small, min_size=d, max_size=d).map(tuple).filter(lambda v: any(v)),
            min_size=1,
            max_size=n_max,
        ).map(tuple)
    )


@settings(max_examples=120, deadline=None)
@given(gen_sets(), st.data())
def test_hrep_matches_lp_membership(gens, data):
    dim = len(gens[0])
    eqs, ineqs = hrep(gens, dim)
    for g in gens:
        assert contains(gens, dim, g)
    x = tuple(data.draw(st.lists(small, min_size=dim, max_size=dim)))
    assert contains(gens, dim, x) == in_cone_lp(gens, x)


@settings(max_examples=100, deadline=None)
@given(gen_sets(), st.data())
def test_cut_is_intersection(gens, data):
    dim = len(gens[0])
    m = tuple(data.draw(st.lists(small, min_size=dim, max_size=dim)))
    if all(x == 0 for x in m):
        m = (1,) + (0,) * (dim - 1)
    half = cut(gens, dim, m, 1)
    x = tuple(data.draw(st.lists(small, min_size=dim, max_size=dim)))
    lhs = bool(half) and in_cone_lp(half, x)
    rhs = in_cone_lp(gens, x) and dot(m, x) >= 0
    if not any(x):
        lhs = True
    assert lhs == rhs


def test_relint():
    quad = ((1, 0), (0, 1))
    assert relint_contains(quad, 2, (1, 1))
    assert not relint_contains(quad, 2, (1, 0))
    assert relint_point(quad) == (1, 1)
    ray = ((1, 0),)
    assert relint_contains(ray, 2, (3, 0))
    assert not relint_contains(ray, 2, (0, 0))
    assert not relint_contains(ray, 2, (1, 1))


def test_pointedness():
    assert is_pointed(((1, 0), (0, 1)), 2)
    assert not is_pointed(((1, 0), (-1, 0)), 2)
    assert is_pointed(((1, 0, 0), (0, 0, 1), (-1, 0, 5)), 3)


def test_extreme_rays_drop_redundant():
    gens = ((1, 0), (1, 1), (0, 1), (2, 2))
    assert extreme_rays(gens, 2) == ((0, 1), (1, 0))


def test_covered_by_complete_fan():
    p2 = (((1, 0), (0, 1)), ((0, 1), (-1, -1)), ((-1, -1), (1, 0)))
    assert covered_by(((1, 1), (-1, 0)), 2, p2) is None
    assert covered_by(((1, 0), (0, 1)), 2, [((1, 0), (1, 1))]) is not None


def test_triangulate_square_cone():
    sq = ((1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1))
    tri = triangulate(sq, 3)
    assert all(len(t) == 3 for t in tri)
    eqs, ineqs = hrep(sq, 3)
    for t in tri:
        for i in t:
            assert contains(sq, 3, sq[i])


def test_triangulate_rejects_lines():
    with pytest.raises(NotACone):
        triangulate(((1, 0), (-1, 0)), 2)


@settings(max_examples=80, deadline=None)
@given(gen_sets(), st.data())
def test_triangulation_covers(gens, data):
    dim = len(gens[0])
    if not is_pointed(gens, dim):
        return
    tri = triangulate(gens, dim)
    x = tuple(data.draw(st.lists(st.integers(min_value=0, max_value=5), min_size=dim, max_size=dim)))
    inside = contains(gens, dim, x)
    in_simplex = any(
        (b := barycentric(tuple(gens[i] for i in t), x)) is not None and all(c >= 0 for c in b)
        for t in tri
        if t
    )
    if not any(x):
        in_simplex = True
    assert inside == in_simplex


def test_box_points_example():
    pts = box_points(((1, 0), (1, 2)), 2)
    assert sorted(p for p, _ in pts) == [(0, 0), (1, 1)]
    for p, c in pts:
        assert all(0 <= t < 1 for t in c)


def test_box_points_lower_dimensional():
    pts = box_points(((1, 1, 0), (1, -1, 0)), 3)
    assert sorted(p for p, _ in pts) == [(0, 0, 0), (1, 0, 0)]


@settings(max_examples=80, deadline=None)
@given(gen_sets(dim_max=3, n_max=3))
def test_box_count_is_index(gens):
    from toricmld.intlinalg import rank

    dim = len(gens[0])
    if rank(gens) != len(gens):
        return
    pts = box_points(gens, dim)
    assert len(set(p for p, _ in pts)) == len(pts)
    for p, c in pts:
        assert all(0 <= t < 1 for t in c)
        assert tuple(sum(c[i] * g[j] for i, g in enumerate(gens)) for j in range(dim)) == p
