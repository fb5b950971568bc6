"""Shared fixture builders for the test suite."""

import random

from toricmld.fans import Fan, fan, star_subdivision
from toricmld.fibration import ToricMorphism, morphism
from toricmld.intlinalg import identity, mat_vec, primitive


def p2() -> Fan:
    return fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)])


def p112() -> Fan:
    return fan(2, [(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (2, 0)])


def p123() -> Fan:
    # weights (2, 3, 1) as listed: the weighted plane P(1,2,3)
    return fan(2, [(1, 0), (0, 1), (-2, -3)], [(0, 1), (1, 2), (2, 0)])


def p1() -> Fan:
    return fan(1, [(1,), (-1,)], [(0,), (1,)])


def a1() -> Fan:
    return fan(1, [(1,)], [(0,)])


def a2() -> Fan:
    return fan(2, [(1, 0), (0, 1)], [(0, 1)])


def a3() -> Fan:
    return fan(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2)])


def p3() -> Fan:
    rays = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]
    return fan(3, rays, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def blowup_p2() -> Fan:
    return fan(
        2,
        [(1, 0), (0, 1), (-1, -1), (1, 1)],
        [(0, 3), (1, 3), (1, 2), (2, 0)],
    )


def cone_over_square() -> Fan:
    return fan(3, [(1, 0, 1), (0, 1, 1), (-1, 0, 1), (0, -1, 1)], [(0, 1, 2, 3)])


def ex13_r1_q2() -> Fan:
    return fan(2, [(1, 0), (-1, 0), (-2, 5)], [(0, 2), (1, 2)])


def ex13_r2_q2() -> Fan:
    rays = [(1, -2, 0), (-2, 5, 0), (-1, -1, 0), (-2, -2, 41)]
    return fan(3, rays, [(0, 1, 3), (0, 2, 3), (1, 2, 3)])


def product_fan(a: Fan, b: Fan) -> Fan:
    rays = [r + (0,) * b.rank for r in a.rays] + [(0,) * a.rank + s for s in b.rays]
    cones = []
    for ca in a.max_cones:
        for cb in b.max_cones:
            cones.append(tuple(ca) + tuple(len(a.rays) + j for j in cb))
    return fan(a.rank + b.rank, rays, cones)


def to_a1(src: Fan) -> ToricMorphism:
    """Projection to the last coordinate, over the fan of the affine line."""
    row = (0,) * (src.rank - 1) + (1,)
    return morphism((row,), src, a1())


def identity_morphism(f: Fan) -> ToricMorphism:
    return morphism(identity(f.rank), f, f)


def random_unimodular(rng: random.Random, n: int):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice([-2, -1, 1, 2])
        m[j] = [a + c * b for a, b in zip(m[j], m[i])]
    return tuple(tuple(row) for row in m)


def random_support_point(rng: random.Random, f: Fan):
    cone = rng.choice([c for c in f.max_cones if c])
    while True:
        coeffs = [rng.randrange(0, 4) for _ in cone]
        v = tuple(
            sum(c * f.rays[i][j] for c, i in zip(coeffs, cone)) for j in range(f.rank)
        )
        if any(v):
            return primitive(v)


def random_wps_fan(rng: random.Random, rank: int) -> Fan:
    """A random fake weighted projective fan: rank+1 rays, all rank-subsets
    as maximal cones, twisted by a unimodular matrix."""
    import math

    weights = [rng.randrange(1, 5) for _ in range(rank)]
    g = math.gcd(*weights)
    weights = [w // g for w in weights]
    rays = [tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)]
    rays.append(tuple(-w for w in weights))
    u = random_unimodular(rng, rank)
    cones = [tuple(j for j in range(rank + 1) if j != i) for i in range(rank + 1)]
    return fan(rank, [mat_vec(u, r) for r in rays], cones)


def random_fan(rng: random.Random, max_rank: int = 3, subdivisions: int = 3) -> Fan:
    """A random valid simplicial fan: seed fixture, a few star subdivisions,
    then a unimodular change of coordinates."""
    seeds2 = [p2, p112, p123, a2, blowup_p2]
    seeds3 = [p3, a3, lambda: product_fan(p2(), a1()), lambda: product_fan(p1(), a2())]
    seeds1 = [p1, a1]
    pool = seeds1 + seeds2 + (seeds3 if max_rank >= 3 else [])
    f = rng.choice(pool)()
    for _ in range(rng.randrange(subdivisions + 1)):
        f = star_subdivision(f, random_support_point(rng, f))
    u = random_unimodular(rng, f.rank)
    return fan(f.rank, [mat_vec(u, r) for r in f.rays], f.max_cones)
