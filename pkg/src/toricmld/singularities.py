"""Minimal log discrepancies of toric pairs.

Everything reduces to minimizing the PL function A over lattice points:
on each (triangulated) maximal cone, every lattice point splits as an
integer combination of the generators plus a point of the half-open
fundamental parallelepiped, so when A is positive on the rays the minimum
is attained among ray generators and parallelepiped points, and sublevel
regions are finite and enumerable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import cones
from .divisors import PLFunction, ToricDivisor, log_discrepancy_function
from .errors import DomainError, NotACone, OutsideSupport
from .fans import Fan, is_cone_of
from .intlinalg import Vec, dot, is_zero, vec_add, vec_scale


class _MinusInfinity:
    __slots__ = ()

    def __repr__(self):
        return "-Infinity"


MINUS_INFINITY = _MinusInfinity()


@dataclass(frozen=True)
class MldReport:
    value: object
    witness: Vec | None
    enumerated_count: int
    status: str  # "exact" | "minus_infinity" | "zero_on_boundary_infimum"


def log_discrepancy(f: Fan, b: ToricDivisor, v) -> Fraction:
    """A(v) for the pair (X, B); v must be a nonzero point of the support."""
    if is_zero(v):
        raise DomainError("log discrepancies are indexed by nonzero lattice points")
    a = log_discrepancy_function(f, b)
    return a(v)


@lru_cache(maxsize=None)
def _triangulated(f: Fan) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Per maximal cone, simplices given by fan ray indices."""
    out = []
    for c in f.max_cones:
        gens = f.cone_gens(c)
        tri = cones.triangulate(gens, f.rank)
        out.append(tuple(tuple(c[i] for i in t) for t in tri))
    return tuple(out)


def _simplex_points_below(f: Fan, simplex: tuple[int, ...], fn, cap: Fraction):
    """Lattice points x = sum n_i v_i + b of the simplicial cone with
    fn(x) <= cap; requires fn > 0 on the simplex generators."""
    gens = f.cone_gens(simplex)
    vals = [Fraction(dot(fn, g)) for g in gens]
    for b, _ in cones.box_points(gens, f.rank):
        base = Fraction(dot(fn, b))
        if base > cap:
            continue
        bounds = [int((cap - base) / v) for v in vals]
        for ns in product(*(range(k + 1) for k in bounds)):
            if sum(n * v for n, v in zip(ns, vals)) + base > cap:
                continue
            x = b
            for n, g in zip(ns, gens):
                if n:
                    x = vec_add(x, vec_scale(n, g))
            yield x


def sublevel_points(f: Fan, a: PLFunction, cap: Fraction):
    """All nonzero lattice points of the support with A <= cap, with their
    values, deduplicated; A must be positive at every ray."""
    seen = set()
    for c, fn, simplices in zip(f.max_cones, a.functionals, _triangulated(f)):
        for simplex in simplices:
            for x in _simplex_points_below(f, simplex, fn, cap):
                if is_zero(x) or x in seen:
                    continue
                seen.add(x)
                yield x, Fraction(dot(fn, x))


def global_mld(f: Fan, b: ToricDivisor) -> MldReport:
    """Minimum of A over all nonzero lattice points of the support."""
    if not f.max_cones or not f.rays:
        raise DomainError("the fan has no rays to take discrepancies along")
    a = log_discrepancy_function(f, b)
    ray_vals = [1 - c for c in b.coeffs]
    count = len(f.rays)
    neg = next((i for i, v in enumerate(ray_vals) if v < 0), None)
    if neg is not None:
        return MldReport(MINUS_INFINITY, f.rays[neg], count, "minus_infinity")
    def key(val, x):
        return (val, max(abs(t) for t in x), x)

    best = min(
        (key(Fraction(v), r) for v, r in zip(ray_vals, f.rays)),
    )
    for c, fn, simplices in zip(f.max_cones, a.functionals, _triangulated(f)):
        for simplex in simplices:
            for x, _ in cones.box_points(f.cone_gens(simplex), f.rank):
                if is_zero(x):
                    continue
                count += 1
                cand = key(Fraction(dot(fn, x)), x)
                if cand < best:
                    best = cand
    return MldReport(best[0], best[2], count, "exact")


def _cone_functional(f: Fan, a: PLFunction, tau: tuple[int, ...]):
    for c, fn in zip(f.max_cones, a.functionals):
        if set(tau) <= set(c):
            return fn
    raise NotACone(f"{tau} is not contained in a maximal cone")


def mld_at_cone(f: Fan, b: ToricDivisor, tau: tuple[int, ...], zero_cap: int = 3) -> MldReport:
    """Minimum of A over nonzero lattice points of relint(tau).

    With A positive on the generators the sublevel region is bounded and the
    result is exact.  When A vanishes at some generator (but is nonnegative),
    the closed-cone infimum is reported; if a relative-interior witness
    attaining it is found within a small search cap the result is still
    exact, otherwise the status marks the value as an infimum bound.
    """
    tau = tuple(sorted(set(tau)))
    if not tau:
        raise DomainError("the minimal log discrepancy at a cone needs dimension >= 1")
    if not is_cone_of(f, tau):
        raise NotACone(f"{tau} is not a cone of the fan")
    a = log_discrepancy_function(f, b)
    fn = _cone_functional(f, a, tau)
    gens = f.cone_gens(tau)
    vals = [Fraction(dot(fn, g)) for g in gens]
    count = 0

    if any(v < 0 for v in vals):
        g_neg = gens[next(i for i, v in enumerate(vals) if v < 0)]
        p0 = cones.relint_point(gens)
        w = p0
        while Fraction(dot(fn, w)) >= 0:
            w = vec_add(w, g_neg)
        return MldReport(MINUS_INFINITY, w, 1, "minus_infinity")

    p0 = cones.relint_point(gens)
    cap = Fraction(dot(fn, p0))
    best_val, best_wit = cap, p0
    tri = cones.triangulate(gens, f.rank)
    simplices = [tuple(tau[i] for i in t) for t in tri]

    if all(v > 0 for v in vals):
        for simplex in simplices:
            for x in _simplex_points_below(f, simplex, fn, cap):
                if is_zero(x) or not cones.relint_contains(gens, f.rank, x):
                    continue
                count += 1
                val = Fraction(dot(fn, x))
                if val < best_val:
                    best_val, best_wit = val, x
        return MldReport(best_val, best_wit, count, "exact")

    # some generators sit at level zero: the closed infimum comes from the
    # parallelepiped scan, attainment is probed with capped coefficients on
    # the zero directions
    closed = Fraction(0)
    found = None
    for simplex in simplices:
        sgens = f.cone_gens(simplex)
        svals = [Fraction(dot(fn, g)) for g in sgens]
        for bpt, _ in cones.box_points(sgens, f.rank):
            base = Fraction(dot(fn, bpt))
            ranges = []
            for v in svals:
                if v > 0:
                    hi = int((cap - base) / v) if cap >= base else -1
                else:
                    hi = zero_cap
                ranges.append(range(hi + 1))
            for ns in product(*ranges):
                x = bpt
                for n, g in zip(ns, sgens):
                    if n:
                        x = vec_add(x, vec_scale(n, g))
                if is_zero(x):
                    continue
                count += 1
                val = Fraction(dot(fn, x))
                if not cones.relint_contains(gens, f.rank, x):
                    continue
                if val < best_val:
                    best_val, best_wit = val, x
                if val == closed and (found is None):
                    found = x
    if best_val == closed or found is not None:
        wit = found if found is not None else best_wit
        return MldReport(closed, wit, count, "exact")
    return MldReport(closed, None, count, "zero_on_boundary_infimum")


def is_eps_lc(f: Fan, b: ToricDivisor, eps: Fraction) -> bool:
    """mld(X, B) >= eps."""
    report = global_mld(f, b)
    if report.value is MINUS_INFINITY:
        return False
    return report.value >= Fraction(eps)


def certified_search_radius(f: Fan, b: ToricDivisor, cap: Fraction) -> int:
    """A sup-norm radius R with {A <= cap} ∩ |fan| inside the R-ball;
    requires A positive at every ray."""
    a = log_discrepancy_function(f, b)
    radius = 0
    for c, fn, simplices in zip(f.max_cones, a.functionals, _triangulated(f)):
        for simplex in simplices:
            gens = f.cone_gens(simplex)
            vals = [Fraction(dot(fn, g)) for g in gens]
            if any(v <= 0 for v in vals):
                raise DomainError("radius certificate needs positive ray values")
            bound = sum((Fraction(cap) / v) * max(abs(x) for x in g) for v, g in zip(vals, gens))
            radius = max(radius, int(bound) + 1)
    return radius


def brute_force_mld_in_ball(f: Fan, b: ToricDivisor, radius: int) -> tuple:
    """Reference minimization of A over all nonzero support points with
    sup-norm <= radius (test oracle)."""
    a = log_discrepancy_function(f, b)
    best = None
    for x in product(range(-radius, radius + 1), repeat=f.rank):
        if is_zero(x):
            continue
        try:
            val = a(x)
        except OutsideSupport:
            continue
        if best is None or val < best[0]:
            best = (val, x)
    return best
