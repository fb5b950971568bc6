"""Polyhedral cone primitives shared by the fan and singularity modules.

A cone is passed around as a tuple of integer generator vectors together
with the ambient dimension (generators alone cannot tell the dimension when
the tuple is empty).  H-representations are {x : E x = 0, F x >= 0} with
integer primitive rows, computed by facet enumeration inside the span, and
cached on the (gens, dim) key.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations, product

from .errors import NotACone
from .intlinalg import (
    Mat,
    Vec,
    dot,
    identity,
    invert_rational,
    is_zero,
    kernel_basis,
    mat_vec,
    primitive,
    rank,
    scale_to_integer,
    smith_normal_form,
    solve_exact,
    transpose,
    unimodular_inverse,
    vec_sub,
)


def _kernel(rows, dim: int) -> tuple[Vec, ...]:
    if not rows:
        return identity(dim)
    return kernel_basis(tuple(rows))


def span_equations(gens, dim: int) -> tuple[Vec, ...]:
    """Functionals vanishing on the linear span of gens."""
    return _kernel(gens, dim)


def span_lattice_basis(gens, dim: int) -> tuple[Vec, ...]:
    """Basis of span(gens) ∩ Z^dim (a saturated sublattice)."""
    eqs = span_equations(gens, dim)
    return _kernel(eqs, dim)


def span_coordinates(basis: Mat, v) -> Vec:
    """Coordinates of v in a saturated lattice basis (rows of basis)."""
    sol = solve_exact(transpose(basis), v)
    if sol is None or any(x.denominator != 1 for x in sol):
        raise NotACone(f"{v} is not in the sublattice spanned by {basis}")
    return tuple(int(x) for x in sol)


def _full_dim_facets(gens_d, d: int) -> tuple[Vec, ...]:
    """Facet normals of a cone spanning all of R^d, inward, primitive."""
    out = set()
    for subset in combinations(gens_d, d - 1):
        ker = _kernel(subset, d)
        if len(ker) != 1:
            continue
        m = ker[0]
        pos = any(dot(m, g) > 0 for g in gens_d)
        neg = any(dot(m, g) < 0 for g in gens_d)
        if pos and neg:
            continue
        if neg:
            m = tuple(-x for x in m)
        out.add(primitive(m))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def hrep(gens: tuple[Vec, ...], dim: int) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    """(equations, inequalities) with cone(gens) = {E x = 0, F x >= 0}."""
    gens = tuple(g for g in gens if not is_zero(g))
    eqs = span_equations(gens, dim)
    if not gens:
        return eqs, ()
    basis = span_lattice_basis(gens, dim)
    d = len(basis)
    gens_d = tuple(span_coordinates(basis, g) for g in gens)
    facets_d = _full_dim_facets(gens_d, d)
    # lift a span functional m_d back to Z^dim: m(x) = m_d(coords(x)), and
    # coords(x) = (B B^T)^{-1} B x on the span
    bbt_inv = invert_rational(tuple(tuple(dot(r1, r2) for r2 in basis) for r1 in basis))
    lifted = []
    for m_d in facets_d:
        w = mat_vec(transpose(bbt_inv), m_d)
        row = tuple(sum(w[i] * basis[i][j] for i in range(d)) for j in range(dim))
        lifted.append(primitive(scale_to_integer(row)))
    return eqs, tuple(sorted(lifted))


def contains(gens: tuple[Vec, ...], dim: int, x) -> bool:
    eqs, ineqs = hrep(gens, dim)
    return all(dot(m, x) == 0 for m in eqs) and all(dot(m, x) >= 0 for m in ineqs)


def relint_contains(gens: tuple[Vec, ...], dim: int, x) -> bool:
    eqs, ineqs = hrep(gens, dim)
    return all(dot(m, x) == 0 for m in eqs) and all(dot(m, x) > 0 for m in ineqs)


def lineality_dimension(gens: tuple[Vec, ...], dim: int) -> int:
    eqs, ineqs = hrep(gens, dim)
    return dim - rank(eqs + ineqs) if (eqs or ineqs) else dim


def is_pointed(gens: tuple[Vec, ...], dim: int) -> bool:
    return lineality_dimension(gens, dim) == 0


def relint_point(gens: tuple[Vec, ...]) -> Vec:
    """A lattice point in the relative interior (the sum of the generators)."""
    if not gens:
        raise NotACone("the zero cone has no nonzero relative interior point")
    return tuple(sum(col) for col in zip(*gens))


def extreme_rays(gens: tuple[Vec, ...], dim: int) -> tuple[Vec, ...]:
    """Primitive extreme rays of a pointed cone, sorted; junk if non-pointed."""
    cand = sorted({primitive(g) for g in gens if not is_zero(g)})
    out = []
    for i, g in enumerate(cand):
        others = tuple(h for j, h in enumerate(cand) if j != i)
        if not others or not contains(others, dim, g):
            out.append(g)
    return tuple(out)


def cut(gens: tuple[Vec, ...], dim: int, m: Vec, sense: int) -> tuple[Vec, ...]:
    """Generators of cone(gens) ∩ {sense * <m, x> >= 0} (double description step)."""
    vals = [sense * dot(m, g) for g in gens]
    kept = [g for g, s in zip(gens, vals) if s >= 0]
    for (gp, sp), (gn, sn) in product(zip(gens, vals), repeat=2):
        if sp > 0 and sn < 0:
            w = tuple(sp * b - sn * a for a, b in zip(gp, gn))
            if not is_zero(w):
                kept.append(primitive(w))
    return tuple(sorted(set(kept)))


def _canonical_sign(m: Vec) -> Vec:
    lead = next((x for x in m if x != 0), 0)
    return m if lead > 0 else tuple(-x for x in m)


def covered_by(target: tuple[Vec, ...], dim: int, cover) -> Vec | None:
    """None if cone(target) ⊆ ∪ cone(c) for c in cover, else an uncovered point.

    The target is split by every defining hyperplane of the covering cones;
    each resulting piece lies in a member of the cover iff its relative
    interior point does, so testing that point per piece is exact.
    """
    normals = set()
    for c in cover:
        eqs, ineqs = hrep(tuple(c), dim)
        for m in eqs + ineqs:
            normals.add(_canonical_sign(m))
    pieces = [tuple(g for g in target if not is_zero(g))]
    for m in sorted(normals):
        nxt = []
        for piece in pieces:
            vals = [dot(m, g) for g in piece]
            if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
                nxt.append(piece)
            else:
                for sense in (1, -1):
                    half = cut(piece, dim, m, sense)
                    if half:
                        nxt.append(half)
        pieces = nxt
    for piece in pieces:
        if not piece:
            continue
        p = relint_point(piece)
        if not any(contains(tuple(c), dim, p) for c in cover):
            return p
    return None


def triangulate(gens: tuple[Vec, ...], dim: int) -> tuple[tuple[int, ...], ...]:
    """Index tuples of simplicial subcones covering a pointed cone(gens).

    Placing triangulation pulling at the lexicographically smallest
    generator; only existing generators are used.
    """
    if not is_pointed(gens, dim):
        raise NotACone("cannot triangulate a cone containing a line")

    def go(idxs):
        sub = tuple(gens[i] for i in idxs)
        if len(idxs) == rank(sub):
            return [tuple(sorted(idxs))]
        apex = min(idxs, key=lambda i: gens[i])
        _, ineqs = hrep(sub, dim)
        out = []
        for m in ineqs:
            if dot(m, gens[apex]) > 0:
                face = tuple(i for i in idxs if dot(m, gens[i]) == 0)
                for s in go(face):
                    out.append(tuple(sorted(s + (apex,))))
        return out

    if not gens:
        return ((),)
    return tuple(sorted(set(go(tuple(range(len(gens)))))))


def barycentric(gens: tuple[Vec, ...], x):
    """Coefficients t with x = sum t_i gens_i, or None; gens must be independent."""
    if not gens:
        return () if all(c == 0 for c in x) else None
    sol = solve_exact(transpose(tuple(gens)), x)
    if sol is None:
        return None
    recon = tuple(sum(sol[i] * g[j] for i, g in enumerate(gens)) for j in range(len(x)))
    if any(recon[j] != x[j] for j in range(len(x))):
        return None
    return sol


def _box_points_full(vmat: Mat):
    """Lattice points of {V t : t ∈ [0,1)^d} for nonsingular square V (columns)."""
    d = len(vmat)
    dmat, u, _ = smith_normal_form(vmat)
    diag = [dmat[i][i] for i in range(d)]
    uinv = unimodular_inverse(u)
    vinv = invert_rational(vmat)
    pts = []
    for s in product(*(range(di) for di in diag)):
        x = mat_vec(uinv, s)
        t = mat_vec(vinv, x)
        shift = mat_vec(vmat, tuple(math.floor(ti) for ti in t))
        pts.append(vec_sub(x, shift))
    expected = 1
    for di in diag:
        expected *= di
    if len(set(pts)) != expected:
        raise AssertionError("parallelepiped enumeration lost coset representatives")
    return pts


def box_points(gens: tuple[Vec, ...], dim: int):
    """Lattice points of the half-open parallelepiped {Σ t_i g_i : t ∈ [0,1)},
    as (point, coefficients) pairs; gens must be linearly independent."""
    d = len(gens)
    if d == 0:
        return (((0,) * dim, ()),)
    if rank(tuple(gens)) != d:
        raise NotACone("parallelepiped needs independent generators")
    basis = span_lattice_basis(gens, dim)
    gens_d = tuple(span_coordinates(basis, g) for g in gens)
    vmat = transpose(gens_d)
    out = []
    for x_d in _box_points_full(vmat):
        x = tuple(sum(x_d[i] * basis[i][j] for i in range(d)) for j in range(dim))
        coeffs = barycentric(gens, x)
        if coeffs is None or any(c < 0 or c >= 1 for c in coeffs):
            raise AssertionError("box point fell outside the half-open box")
        out.append((x, coeffs))
    return tuple(out)
