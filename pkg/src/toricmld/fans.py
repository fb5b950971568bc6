"""Rational polyhedral fans: validation, location, completeness, star
subdivision and quotient fans.

A Fan stores the lattice rank, the primitive ray generators (sorted, so a
fan has one canonical presentation) and the maximal cones as ray-index
tuples.  Faces are never stored; they are recovered through the cone
toolkit on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import cones
from .errors import (
    NonSimplicialCone,
    NotARay,
    OutsideSupport,
    QuotientNotAFan,
    ValidationError,
)
from .intlinalg import (
    Mat,
    Vec,
    content,
    dot,
    is_zero,
    mat_vec,
    quotient_projection,
    rank,
)


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[Vec, ...]
    max_cones: tuple[tuple[int, ...], ...]

    def cone_gens(self, cone: tuple[int, ...]) -> tuple[Vec, ...]:
        return tuple(self.rays[i] for i in cone)


def point_fan() -> Fan:
    """The fan of a point (lattice rank 0)."""
    return Fan(rank=0, rays=(), max_cones=((),))


def fan(rank: int, rays, max_cones, check: bool = True) -> Fan:
    """Build a Fan in canonical form (rays sorted, cone indices remapped)."""
    rays = tuple(tuple(int(x) for x in r) for r in rays)
    order = sorted(range(len(rays)), key=lambda i: rays[i])
    sorted_rays = tuple(rays[i] for i in order)
    remap = {old: new for new, old in enumerate(order)}
    cones_out = sorted({tuple(sorted(remap[i] for i in set(cone))) for cone in max_cones})
    f = Fan(rank=rank, rays=sorted_rays, max_cones=tuple(cones_out))
    if check:
        violations = validate_fan(f)
        if violations:
            raise ValidationError(violations)
    return f


def validate_fan(f: Fan) -> tuple[tuple[str, str], ...]:
    """All fan-axiom violations, empty when the fan is valid."""
    out = []
    if f.rank < 0:
        return (("BadRank", f"rank {f.rank}"),)
    if f.rank == 0:
        if f.rays or any(c != () for c in f.max_cones):
            out.append(("BadRank", "a rank-0 fan has no rays"))
        return tuple(out)
    for i, r in enumerate(f.rays):
        if len(r) != f.rank:
            out.append(("BadDimension", f"ray {i} has length {len(r)}"))
            return tuple(out)
        if is_zero(r):
            out.append(("ZeroRay", f"ray {i}"))
        elif content(r) != 1:
            out.append(("NonPrimitiveRay", f"ray {i} = {r}"))
    seen = {}
    for i, r in enumerate(f.rays):
        if r in seen:
            out.append(("DuplicateRay", f"rays {seen[r]} and {i}"))
        seen[r] = i
    used = set()
    for cone in f.max_cones:
        for i in cone:
            if not 0 <= i < len(f.rays):
                out.append(("BadIndex", f"cone {cone} references ray {i}"))
                return tuple(out)
            used.add(i)
    if used != set(range(len(f.rays))):
        missing = sorted(set(range(len(f.rays))) - used)
        out.append(("UnusedRay", f"rays {missing} belong to no cone"))
    if out:
        return tuple(out)

    pointed = {}
    for cone in f.max_cones:
        gens = f.cone_gens(cone)
        pointed[cone] = not gens or cones.is_pointed(gens, f.rank)
        if not pointed[cone]:
            out.append(("NotPointed", f"cone {cone} contains a line"))
            continue
        for k, i in enumerate(cone):
            others = tuple(f.rays[j] for j in cone if j != i)
            if others and cones.contains(others, f.rank, f.rays[i]):
                out.append(("RedundantGenerator", f"ray {i} is not extreme in cone {cone}"))
    ok_cones = [c for c in f.max_cones if pointed[c] and c]
    for a in range(len(ok_cones)):
        for b in range(a + 1, len(ok_cones)):
            if not _meet_in_common_face(f, ok_cones[a], ok_cones[b]):
                out.append(("BadIntersection", f"cones {ok_cones[a]} and {ok_cones[b]}"))
    return tuple(out)


def _meet_in_common_face(f: Fan, ca: tuple[int, ...], cb: tuple[int, ...]) -> bool:
    """σ_a ∩ σ_b is a common face iff both cones touch the lineality space of
    cone(σ_a ∪ -σ_b) in the same face; tested via a relative-interior dual
    functional of that cone."""
    ga = f.cone_gens(ca)
    gb = f.cone_gens(cb)
    k = ga + tuple(tuple(-x for x in g) for g in gb)
    _, ineqs = cones.hrep(k, f.rank)
    m0 = tuple(sum(col) for col in zip(*ineqs)) if ineqs else (0,) * f.rank
    fa = tuple(g for g in ga if dot(m0, g) == 0)
    fb = tuple(g for g in gb if dot(m0, g) == 0)
    return cones.extreme_rays(fa, f.rank) == cones.extreme_rays(fb, f.rank)


def support_contains(f: Fan, v) -> bool:
    if f.rank == 0:
        return True
    return any(cones.contains(f.cone_gens(c), f.rank, v) for c in f.max_cones)


@dataclass(frozen=True)
class Located:
    cone: tuple[int, ...]
    simplicial: bool
    _coeffs: tuple | None

    @property
    def coefficients(self):
        if not self.simplicial:
            raise NonSimplicialCone("barycentric coefficients need a simplicial cone")
        return self._coeffs


def locate(f: Fan, v) -> Located | None:
    """Minimal cone of the fan whose relative interior holds v, or None."""
    if f.rank == 0 or is_zero(v):
        return Located(cone=(), simplicial=True, _coeffs=())
    for c in f.max_cones:
        gens = f.cone_gens(c)
        if not cones.contains(gens, f.rank, v):
            continue
        _, ineqs = cones.hrep(gens, f.rank)
        tight = [m for m in ineqs if dot(m, v) == 0]
        face = tuple(i for i in c if all(dot(m, f.rays[i]) == 0 for m in tight))
        fgens = f.cone_gens(face)
        simp = rank(fgens) == len(fgens)
        coeffs = cones.barycentric(fgens, v) if simp else None
        return Located(cone=face, simplicial=simp, _coeffs=coeffs)
    return None


def is_cone_of(f: Fan, idxs: tuple[int, ...]) -> bool:
    """True when the given ray indices span a face of some maximal cone."""
    idxs = tuple(sorted(set(idxs)))
    if idxs == ():
        return True
    if any(not 0 <= i < len(f.rays) for i in idxs):
        return False
    for c in f.max_cones:
        if not set(idxs) <= set(c):
            continue
        gens = f.cone_gens(c)
        _, ineqs = cones.hrep(gens, f.rank)
        tight = [m for m in ineqs if all(dot(m, f.rays[i]) == 0 for i in idxs)]
        face = tuple(i for i in c if all(dot(m, f.rays[i]) == 0 for m in tight))
        if face == idxs:
            return True
    return False


@lru_cache(maxsize=None)
def _walls(f: Fan):
    """Map from wall (facet ray-index tuple) to the maximal cones using it."""
    walls: dict[tuple[int, ...], list] = {}
    for c in f.max_cones:
        gens = f.cone_gens(c)
        _, ineqs = cones.hrep(gens, f.rank)
        for m in ineqs:
            key = tuple(i for i in c if dot(m, f.rays[i]) == 0)
            walls.setdefault(key, []).append(c)
    return walls


def is_complete(f: Fan) -> bool:
    """Support equals the whole space: full-dimensional cones glued along
    walls shared by exactly two cones, with a connected wall graph."""
    if f.rank == 0:
        return bool(f.max_cones)
    if not f.max_cones:
        return False
    for c in f.max_cones:
        if rank(f.cone_gens(c)) != f.rank:
            return False
    walls = _walls(f)
    if any(len(cs) != 2 for cs in walls.values()):
        return False
    adj = {c: set() for c in f.max_cones}
    for ca, cb in walls.values():
        adj[ca].add(cb)
        adj[cb].add(ca)
    seen = set()
    stack = [f.max_cones[0]]
    while stack:
        c = stack.pop()
        if c in seen:
            continue
        seen.add(c)
        stack.extend(adj[c] - seen)
    return len(seen) == len(f.max_cones)


def star_subdivision(f: Fan, v: Vec) -> Fan:
    """Refine the fan by inserting the ray through v (a no-op if present)."""
    v = tuple(int(x) for x in v)
    if is_zero(v) or content(v) != 1:
        raise NotARay(f"{v} is not a primitive lattice vector")
    if not support_contains(f, v):
        raise OutsideSupport(f"{v} lies outside the fan support")
    if v in f.rays:
        return f
    new_index = len(f.rays)
    new_cones = []
    for c in f.max_cones:
        gens = f.cone_gens(c)
        if not cones.contains(gens, f.rank, v):
            new_cones.append(c)
            continue
        if rank(gens) != len(gens):
            raise NonSimplicialCone(f"cannot star-subdivide non-simplicial cone {c}")
        coeffs = cones.barycentric(gens, v)
        for k, t in enumerate(coeffs):
            if t > 0:
                new_cones.append(tuple(j for j in c if j != c[k]) + (new_index,))
    return fan(f.rank, f.rays + (v,), new_cones)


def quotient_fan(f: Fan, v: Vec) -> tuple[Mat, Fan]:
    """Quotient by the ray through v: coordinates on N/Zv and the image fan
    of the cones containing v."""
    v = tuple(int(x) for x in v)
    if v not in f.rays:
        raise NotARay(f"{v} is not a ray of the fan")
    proj = quotient_projection(v)
    ray_idx = f.rays.index(v)
    star = [c for c in f.max_cones if ray_idx in c]
    if f.rank == 1:
        return proj, point_fan()
    image_cones = []
    for c in star:
        imgs = tuple(mat_vec(proj, g) for g in f.cone_gens(c))
        imgs = tuple(g for g in imgs if not is_zero(g))
        if imgs and not cones.is_pointed(imgs, f.rank - 1):
            raise QuotientNotAFan(f"image of cone {c} contains a line")
        image_cones.append(cones.extreme_rays(imgs, f.rank - 1))
    ray_set = sorted({r for ic in image_cones for r in ic})
    index = {r: i for i, r in enumerate(ray_set)}
    try:
        out = fan(f.rank - 1, ray_set, [tuple(index[r] for r in ic) for ic in image_cones])
    except ValidationError as exc:
        raise QuotientNotAFan(str(exc)) from exc
    return proj, out
