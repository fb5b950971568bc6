"""Toric divisors and piecewise-linear support data.

A divisor is one exact rational coefficient per ray.  All discrepancy data
is carried by the PL function A with A(ray v_i) = 1 - b_i; the canonical
divisor itself is never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import cones
from .errors import NotQCartier, OutsideSupport, ValidationError
from .fans import Fan, _walls
from .intlinalg import dot, mat_vec, solve_exact

QVec = tuple[Fraction, ...]


@dataclass(frozen=True)
class ToricDivisor:
    fan: Fan
    coeffs: QVec


def divisor(f: Fan, coeffs) -> ToricDivisor:
    coeffs = tuple(Fraction(c) for c in coeffs)
    if len(coeffs) != len(f.rays):
        raise ValidationError(
            (("LengthMismatch", f"{len(coeffs)} coefficients for {len(f.rays)} rays"),)
        )
    return ToricDivisor(fan=f, coeffs=coeffs)


def boundary_divisor(f: Fan) -> ToricDivisor:
    """The reduced sum of all torus-invariant prime divisors."""
    return divisor(f, (Fraction(1),) * len(f.rays))


def zero_divisor(f: Fan) -> ToricDivisor:
    return divisor(f, (Fraction(0),) * len(f.rays))


@dataclass(frozen=True)
class PLFunction:
    """A functional per maximal cone, linear on each cone and matching on
    shared faces; positively homogeneous of degree one by construction."""

    fan: Fan
    functionals: tuple[QVec, ...]

    def on_cone(self, cone: tuple[int, ...]) -> QVec:
        return self.functionals[self.fan.max_cones.index(cone)]

    def __call__(self, v):
        for c, fn in zip(self.fan.max_cones, self.functionals):
            if cones.contains(self.fan.cone_gens(c), self.fan.rank, v):
                return Fraction(dot(fn, v))
        raise OutsideSupport(f"{v} is outside the fan support")


def pl_function(f: Fan, functionals) -> PLFunction:
    functionals = tuple(tuple(Fraction(x) for x in fn) for fn in functionals)
    if len(functionals) != len(f.max_cones):
        raise ValidationError((("LengthMismatch", "one functional per maximal cone"),))
    for a in range(len(f.max_cones)):
        for b in range(a + 1, len(f.max_cones)):
            for i in set(f.max_cones[a]) & set(f.max_cones[b]):
                va = dot(functionals[a], f.rays[i])
                vb = dot(functionals[b], f.rays[i])
                if va != vb:
                    raise ValidationError(
                        (("WallMismatch", f"cones disagree at shared ray {i}: {va} vs {vb}"),)
                    )
    return PLFunction(fan=f, functionals=functionals)


def support_function(f: Fan, ray_values) -> PLFunction | None:
    """The PL function with prescribed ray values, or None when some maximal
    cone admits no linear functional with those values."""
    ray_values = tuple(Fraction(x) for x in ray_values)
    functionals = []
    for c in f.max_cones:
        gens = f.cone_gens(c)
        sol = solve_exact(gens, tuple(ray_values[i] for i in c))
        if sol is None:
            return None
        functionals.append(sol if gens else (Fraction(0),) * f.rank)
    return pl_function(f, functionals)


def log_discrepancy_function(f: Fan, b: ToricDivisor) -> PLFunction:
    """The PL function A with A(v_i) = 1 - b_i; exists iff K+B is R-Cartier."""
    a = support_function(f, tuple(1 - c for c in b.coeffs))
    if a is None:
        raise NotQCartier("no linear functional interpolates 1 - b on some cone")
    return a


def is_q_cartier(f: Fan, d: ToricDivisor) -> PLFunction | None:
    """The support function with psi(v_i) = -d_i when it exists."""
    return support_function(f, tuple(-c for c in d.coeffs))


@dataclass(frozen=True)
class RelTrivialWitness:
    """A(v) = <m, v> + ell(phi(v)) on the whole source support."""

    m: QVec
    ell: PLFunction


def rel_trivial_witness(f, b: ToricDivisor) -> RelTrivialWitness | None:
    """Decide K+B ~ 0 over the base by exact linear feasibility.

    f is a toric morphism (matrix, source, target).  The unknowns are a
    global functional m on the source lattice and one functional per
    maximal target cone, glued PL; constraints are the ray values of A and
    agreement of the gluing at shared target rays.
    """
    src, tgt = f.source, f.target
    a = log_discrepancy_function(src, b)
    nx, nz = src.rank, tgt.rank
    zcones = tgt.max_cones
    width = nx + nz * len(zcones)
    rows, rhs = [], []

    def target_cone_index(image_gens):
        for k, zc in enumerate(zcones):
            zg = tgt.cone_gens(zc)
            if all(cones.contains(zg, nz, w) if nz else True for w in image_gens):
                return k
        raise OutsideSupport("source cone maps outside the target fan")

    for c, fn in zip(src.max_cones, a.functionals):
        gens = src.cone_gens(c)
        images = [mat_vec(f.matrix, g) for g in gens]
        k = target_cone_index(images)
        for g, w in zip(gens, images):
            row = [Fraction(0)] * width
            row[:nx] = [Fraction(x) for x in g]
            for j in range(nz):
                row[nx + k * nz + j] = Fraction(w[j])
            rows.append(tuple(row))
            rhs.append(Fraction(dot(fn, g)))
    for k1 in range(len(zcones)):
        for k2 in range(k1 + 1, len(zcones)):
            for i in set(zcones[k1]) & set(zcones[k2]):
                row = [Fraction(0)] * width
                w = tgt.rays[i]
                for j in range(nz):
                    row[nx + k1 * nz + j] += Fraction(w[j])
                    row[nx + k2 * nz + j] -= Fraction(w[j])
                rows.append(tuple(row))
                rhs.append(Fraction(0))
    sol = solve_exact(tuple(rows), tuple(rhs))
    if sol is None:
        return None
    m = sol[:nx]
    ell = pl_function(tgt, tuple(sol[nx + k * nz : nx + (k + 1) * nz] for k in range(len(zcones))))
    for c, fn in zip(src.max_cones, a.functionals):
        for g in src.cone_gens(c):
            w = mat_vec(f.matrix, g)
            if dot(fn, g) != dot(m, g) + (ell(w) if nz else 0):
                raise AssertionError("relative-triviality witness failed verification")
    return RelTrivialWitness(m=m, ell=ell)


def is_ample_over(f, d: ToricDivisor) -> bool:
    """Strict convexity of -psi_D across every interior wall of the source."""
    src = f.source
    psi = is_q_cartier(src, d)
    if psi is None:
        raise NotQCartier("the divisor is not Q-Cartier")
    fun = {c: psi.functionals[i] for i, c in enumerate(src.max_cones)}
    for key, cs in _walls(src).items():
        if len(cs) != 2:
            continue
        for ca, cb in ((cs[0], cs[1]), (cs[1], cs[0])):
            for i in cb:
                if i in key:
                    continue
                g = src.rays[i]
                if dot(fun[ca], g) <= dot(fun[cb], g):
                    return False
    return True
