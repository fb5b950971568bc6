"""Structure of toric Mori fiber spaces.

A complete simplicial fiber fan with one ray more than its rank carries a
unique positive primitive relation among the rays; that q-vector encodes
the extremal log discrepancies, and picking the ray with the largest
weight factors the fibration through a divisorial extraction followed by
a rank-one-lower fibration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .divisors import boundary_divisor, is_ample_over, zero_divisor
from .errors import (
    NoPositiveRelation,
    NotComplete,
    NotMfsShape,
    NotRelativelyAmple,
    RelativeDimensionTooSmall,
    WrongRayCount,
)
from .fans import Fan, is_complete, quotient_fan, star_subdivision
from .fibration import ToricMorphism, generic_fiber_fan, morphism, validate_morphism
from .intlinalg import (
    Vec,
    identity,
    kernel_basis,
    mat_mul,
    primitive,
    rank,
    solve_exact,
    transpose,
    vec_scale,
)
from .singularities import log_discrepancy


@dataclass(frozen=True)
class QVector:
    q: tuple[int, ...]  # aligned with the fiber fan's rays


def q_vector(fiber: Fan) -> QVector:
    """The positive primitive relation sum q_i v_i = 0 among the rays."""
    r = fiber.rank
    if len(fiber.rays) != r + 1:
        raise WrongRayCount(f"{len(fiber.rays)} rays for rank {r}, expected {r + 1}")
    if not is_complete(fiber):
        raise NotComplete("the fiber fan does not cover the fiber lattice")
    rel = kernel_basis(transpose(fiber.rays))
    if len(rel) != 1:
        raise NoPositiveRelation("the rays admit no one-dimensional relation space")
    q = rel[0]
    if all(x < 0 for x in q):
        q = vec_scale(-1, q)
    if any(x <= 0 for x in q):
        raise NoPositiveRelation(f"relation {q} is not positive")
    assert all(
        sum(qi * v[j] for qi, v in zip(q, fiber.rays)) == 0 for j in range(r)
    )
    return QVector(q=q)


def extremal_log_discrepancies(fiber: Fan) -> tuple[Fraction, ...]:
    """a_i = (sum of the other weights)/q_i, the log discrepancy of the
    divisor over the fiber corresponding to -v_i."""
    q = q_vector(fiber).q
    s = sum(q)
    return tuple(Fraction(s - qi, qi) for qi in q)


@dataclass(frozen=True)
class FactorizationResult:
    w: Fan
    e_ray: Vec
    a_e: Fraction
    pi: ToricMorphism  # W -> X, identity on lattices
    g: ToricMorphism  # W -> Y
    h: ToricMorphism  # Y -> Z
    e: int


def factor_mfs(f: ToricMorphism) -> FactorizationResult:
    """Factor a Mori-fiber-space-shaped contraction of relative dimension
    r >= 2 through the extraction of the ray -v_e of largest weight."""
    diag = validate_morphism(f)
    if diag.relative_dimension <= 1:
        raise RelativeDimensionTooSmall(
            f"relative dimension {diag.relative_dimension}, need >= 2"
        )
    if not (diag.compatible and diag.is_contraction and diag.is_proper):
        raise NotMfsShape("the morphism is not a proper toric contraction")
    src = f.source
    for c in src.max_cones:
        gens = src.cone_gens(c)
        if rank(gens) != len(gens):
            raise NotMfsShape(f"source cone {c} is not simplicial")
    basis, fiber = generic_fiber_fan(f)
    try:
        q = q_vector(fiber).q
    except (WrongRayCount, NotComplete, NoPositiveRelation) as exc:
        raise NotMfsShape(str(exc)) from exc
    if not is_ample_over(f, boundary_divisor(src)):
        raise NotRelativelyAmple("-K is not ample over the base")

    e = max(range(len(q)), key=lambda i: (q[i], -i))
    v_e = fiber.rays[e]
    embedded = tuple(
        sum(c * basis[k][j] for k, c in enumerate(v_e)) for j in range(src.rank)
    )
    e_ray = primitive(vec_scale(-1, embedded))
    a_e = Fraction(sum(q) - q[e], q[e])
    assert a_e <= diag.relative_dimension
    assert a_e == log_discrepancy(src, zero_divisor(src), e_ray)

    w = star_subdivision(src, e_ray)
    proj, y = quotient_fan(w, e_ray)
    pi = morphism(identity(src.rank), w, src)
    g = morphism(proj, w, y)
    hmat = _factor_through(f.matrix, proj)
    h = morphism(hmat, y, f.target)
    assert mat_mul(h.matrix, g.matrix) == f.matrix
    dg, dh = validate_morphism(g), validate_morphism(h)
    assert dg.is_contraction and dg.is_proper and dg.relative_dimension == 1
    assert dh.is_contraction and dh.is_proper
    assert dh.relative_dimension == diag.relative_dimension - 1
    assert validate_morphism(pi).is_proper
    return FactorizationResult(w=w, e_ray=e_ray, a_e=a_e, pi=pi, g=g, h=h, e=e)


def _factor_through(fm, proj):
    """Integer h with h . proj = fm; exists since fm kills ker(proj)."""
    pt = transpose(proj)
    rows = []
    for row in fm:
        sol = solve_exact(pt, row)
        assert sol is not None, "the morphism does not factor through the quotient"
        assert all(x.denominator == 1 for x in sol)
        rows.append(tuple(int(x) for x in sol))
    return tuple(rows)
