import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import helpers
from toricmld.cones import covered_by
from toricmld.errors import (
    NonSimplicialCone,
    NotARay,
    OutsideSupport,
    QuotientNotAFan,
    ValidationError,
)
from toricmld.fans import (
    Fan,
    fan,
    is_complete,
    is_cone_of,
    locate,
    point_fan,
    quotient_fan,
    star_subdivision,
    support_contains,
    validate_fan,
)
from toricmld.intlinalg import mat_vec


def codes(violations):
    return {code for code, _ in violations}


def test_p2_validates():
    assert validate_fan(helpers.p2()) == ()


def test_duplicate_ray():
    f = fan(2, [(1, 0), (1, 0), (0, 1)], [(0, 2), (1, 2)], check=False)
    assert "DuplicateRay" in codes(validate_fan(f))


def test_non_primitive_ray():
    f = fan(2, [(2, 4), (0, 1)], [(0, 1)], check=False)
    assert "NonPrimitiveRay" in codes(validate_fan(f))


def test_bad_intersection():
    f = fan(2, [(1, 0), (1, 2), (1, 1), (0, 1)], [(0, 1), (2, 3)], check=False)
    assert "BadIntersection" in codes(validate_fan(f))


def test_not_pointed_cone():
    f = fan(2, [(1, 0), (-1, 0)], [(0, 1)], check=False)
    assert "NotPointed" in codes(validate_fan(f))


def test_redundant_generator():
    f = fan(2, [(1, 0), (1, 1), (0, 1)], [(0, 1, 2)], check=False)
    assert "RedundantGenerator" in codes(validate_fan(f))


def test_unused_ray():
    f = fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1)], check=False)
    assert "UnusedRay" in codes(validate_fan(f))


def test_constructor_raises_on_invalid():
    with pytest.raises(ValidationError):
        fan(2, [(2, 4), (0, 1)], [(0, 1)])


def test_locate_interior_point():
    f = helpers.p2()
    loc = locate(f, (2, 3))
    assert loc is not None
    gens = f.cone_gens(loc.cone)
    assert set(gens) == {(1, 0), (0, 1)}
    recon = tuple(
        sum(c * g[j] for c, g in zip(loc.coefficients, gens)) for j in range(2)
    )
    assert recon == (2, 3)
    assert all(c > 0 for c in loc.coefficients)


def test_locate_outside_support():
    assert locate(helpers.ex13_r1_q2(), (0, -1)) is None


def test_locate_zero():
    loc = locate(helpers.p2(), (0, 0))
    assert loc.cone == () and loc.coefficients == ()


def test_locate_on_ray():
    f = helpers.p2()
    loc = locate(f, (3, 0))
    assert f.cone_gens(loc.cone) == ((1, 0),)
    assert loc.coefficients == (3,)


def test_locate_consistency_with_membership():
    f = helpers.blowup_p2()
    for v in [(1, 2), (-3, 1), (5, 5), (2, -2), (-1, -4)]:
        loc = locate(f, v)
        assert loc is not None
        for c in f.max_cones:
            from toricmld.cones import contains

            in_cone = contains(f.cone_gens(c), 2, v)
            face_of_c = set(loc.cone) <= set(c)
            assert in_cone == face_of_c or in_cone


def test_is_complete():
    assert is_complete(helpers.p2())
    assert is_complete(helpers.p1())
    assert is_complete(helpers.p3())
    assert not is_complete(helpers.a2())
    assert not is_complete(helpers.ex13_r1_q2())
    assert not is_complete(helpers.a1())


def test_star_subdivision_blowup():
    assert star_subdivision(helpers.p2(), (1, 1)) == helpers.blowup_p2()


def test_star_subdivision_existing_ray():
    f = helpers.p2()
    assert star_subdivision(f, (1, 0)) == f


def test_star_subdivision_outside():
    with pytest.raises(OutsideSupport):
        star_subdivision(helpers.a2(), (-1, 0))


def test_star_subdivision_rejects_non_primitive():
    with pytest.raises(NotARay):
        star_subdivision(helpers.p2(), (2, 2))


def test_star_subdivision_non_simplicial():
    with pytest.raises(NonSimplicialCone):
        star_subdivision(helpers.cone_over_square(), (0, 0, 1))


def test_quotient_blowup_gives_p1():
    proj, q = quotient_fan(helpers.blowup_p2(), (1, 1))
    assert q == helpers.p1()
    assert mat_vec(proj, (1, 1)) == (0,)


def test_quotient_rank_one_gives_point():
    proj, q = quotient_fan(helpers.a1(), (1,))
    assert q == point_fan()
    assert validate_fan(q) == ()


def test_quotient_not_a_fan():
    # two cones around (0,0,1) with partially overlapping shadows; such a
    # configuration is itself an invalid fan, so skip input validation
    f = fan(
        3,
        [(0, 0, 1), (1, 0, 0), (0, 1, 0), (1, 1, 5), (-1, 1, 5)],
        [(0, 1, 2), (0, 3, 4)],
        check=False,
    )
    with pytest.raises(QuotientNotAFan):
        quotient_fan(f, (0, 0, 1))


def test_quotient_requires_ray():
    with pytest.raises(NotARay):
        quotient_fan(helpers.p2(), (1, 1))


def test_is_cone_of():
    f = helpers.p2()
    i10 = f.rays.index((1, 0))
    i01 = f.rays.index((0, 1))
    im = f.rays.index((-1, -1))
    assert is_cone_of(f, (i10, i01))
    assert is_cone_of(f, (i10,))
    assert is_cone_of(f, ())
    assert not is_cone_of(f, (i10, i01, im))


def support_equal(a: Fan, b: Fan) -> bool:
    ac = [a.cone_gens(c) for c in a.max_cones]
    bc = [b.cone_gens(c) for c in b.max_cones]
    return all(covered_by(c, a.rank, bc) is None for c in ac) and all(
        covered_by(c, b.rank, ac) is None for c in bc
    )


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_star_subdivision_properties(seed):
    rng = random.Random(seed)
    f = helpers.random_fan(rng)
    v = helpers.random_support_point(rng, f)
    g = star_subdivision(f, v)
    assert validate_fan(g) == ()
    assert len(g.rays) - len(f.rays) in (0, 1)
    assert support_contains(g, v)
    assert support_equal(f, g)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_random_fans_are_valid(seed):
    rng = random.Random(seed)
    f = helpers.random_fan(rng)
    assert validate_fan(f) == ()
