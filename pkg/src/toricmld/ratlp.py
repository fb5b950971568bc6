"""Exact rational linear programming over finitely generated cones.

Programs have the shape

    minimize  <c, x>  over  x = sum_j lam_j * g_j,  lam >= 0,  A x = b

and are solved by substituting x = G lam and running a two-phase simplex
with Bland's rule on the standard form in lam.  Everything is a Fraction;
every Optimal result carries a dual vector that is re-verified before it
is returned, and Unbounded results carry a checked recession direction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MalformedProgram
from .intlinalg import dot

QV = tuple[Fraction, ...]


@dataclass(frozen=True)
class ConeLP:
    generators: tuple[tuple[int, ...], ...]
    eq_matrix: tuple[tuple[Fraction, ...], ...]
    rhs: QV
    objective: QV


def cone_lp(generators, eq_matrix, rhs, objective) -> ConeLP:
    gens = tuple(tuple(int(x) for x in g) for g in generators)
    eq = tuple(tuple(Fraction(x) for x in row) for row in eq_matrix)
    b = tuple(Fraction(x) for x in rhs)
    c = tuple(Fraction(x) for x in objective)
    n = len(c)
    if not gens:
        raise MalformedProgram("cone needs at least one generator")
    if any(len(g) != n for g in gens):
        raise MalformedProgram("generator dimension does not match objective")
    if any(all(x == 0 for x in g) for g in gens):
        raise MalformedProgram("zero generator")
    if len(eq) != len(b) or any(len(row) != n for row in eq):
        raise MalformedProgram("equality system dimensions inconsistent")
    return ConeLP(gens, eq, b, c)


@dataclass(frozen=True)
class Optimal:
    value: Fraction
    point: QV
    multipliers: QV
    dual: QV


@dataclass(frozen=True)
class Infeasible:
    certificate: QV


@dataclass(frozen=True)
class Unbounded:
    direction: QV
    multipliers: QV


LPStatus = Optimal | Infeasible | Unbounded


def simplex_min(c, a, b):
    """min c.lam over {lam >= 0 : a lam = b}, exact two-phase simplex.

    Returns ("optimal", lam, y) with dual y, ("infeasible", y) with a Farkas
    vector (y.a <= 0 componentwise, y.b > 0), or ("unbounded", d) with a
    recession direction d >= 0, a d = 0, c.d < 0.
    """
    ncols = len(c)
    nrows = len(a)
    c = [Fraction(x) for x in c]
    rows = [[Fraction(x) for x in row] for row in a]
    rhs = [Fraction(x) for x in b]
    flip = [1] * nrows
    for i in range(nrows):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
            flip[i] = -1
    total = ncols + nrows
    t = [rows[i] + [Fraction(int(j == i)) for j in range(nrows)] + [rhs[i]] for i in range(nrows)]
    basis = [ncols + i for i in range(nrows)]
    cost = [Fraction(0)] * (total + 1)

    def pivot(r, col):
        pv = t[r][col]
        t[r] = [x / pv for x in t[r]]
        for i in range(nrows):
            if i != r and t[i][col]:
                f = t[i][col]
                t[i] = [x - f * y for x, y in zip(t[i], t[r])]
        f = cost[col]
        if f:
            cost[:] = [x - f * y for x, y in zip(cost, t[r])]
        basis[r] = col

    def run(allowed):
        while True:
            enter = next((j for j in allowed if cost[j] < 0), None)
            if enter is None:
                return None
            best = None
            for i in range(nrows):
                if t[i][enter] > 0:
                    ratio = t[i][total] / t[i][enter]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return enter
            pivot(best[1], enter)

    for j in range(total):
        art_cost = Fraction(1) if j >= ncols else Fraction(0)
        cost[j] = art_cost - sum(t[i][j] for i in range(nrows))
    cost[total] = -sum(t[i][total] for i in range(nrows))
    run(range(total))
    if -cost[total] > 0:
        y = tuple(flip[i] * (1 - cost[ncols + i]) for i in range(nrows))
        return ("infeasible", y)

    # pivot leftover artificials out on zero-rhs rows; rows whose x-part is
    # entirely zero are redundant and keep a harmless artificial at level 0
    for r in range(nrows):
        if basis[r] >= ncols:
            col = next((j for j in range(ncols) if t[r][j] != 0), None)
            if col is not None:
                pivot(r, col)

    for j in range(total):
        cj = c[j] if j < ncols else Fraction(0)
        cost[j] = cj - sum((c[basis[i]] if basis[i] < ncols else 0) * t[i][j] for i in range(nrows))
    cost[total] = -sum((c[basis[i]] if basis[i] < ncols else 0) * t[i][total] for i in range(nrows))
    enter = run(range(ncols))
    if enter is not None:
        d = [Fraction(0)] * ncols
        d[enter] = Fraction(1)
        for i in range(nrows):
            if basis[i] < ncols:
                d[basis[i]] = -t[i][enter]
        return ("unbounded", tuple(d))
    lam = [Fraction(0)] * ncols
    for i in range(nrows):
        if basis[i] < ncols:
            lam[basis[i]] = t[i][total]
    y = tuple(flip[i] * -cost[ncols + i] for i in range(nrows))
    return ("optimal", tuple(lam), y)


def solve_min(p: ConeLP) -> LPStatus:
    """Solve the cone program exactly; certificates are verified on return."""
    gens = p.generators
    k = len(p.eq_matrix)
    cols = [tuple(dot(row, g) for row in p.eq_matrix) for g in gens]
    chat = [Fraction(dot(p.objective, g)) for g in gens]
    a = [[cols[j][i] for j in range(len(gens))] for i in range(k)]
    res = simplex_min(chat, a, p.rhs)
    if res[0] == "infeasible":
        y = res[1]
        if any(dot(y, col) > 0 for col in cols) or dot(y, p.rhs) <= 0:
            raise AssertionError("invalid infeasibility certificate")
        return Infeasible(certificate=y)
    if res[0] == "unbounded":
        d = res[1]
        if (
            any(x < 0 for x in d)
            or any(sum(d[j] * cols[j][i] for j in range(len(gens))) != 0 for i in range(k))
            or dot(chat, d) >= 0
        ):
            raise AssertionError("invalid unboundedness direction")
        xdir = tuple(sum(d[j] * g[i] for j, g in enumerate(gens)) for i in range(len(p.objective)))
        return Unbounded(direction=xdir, multipliers=d)
    _, lam, y = res
    value = dot(chat, lam)
    point = tuple(sum(lam[j] * g[i] for j, g in enumerate(gens)) for i in range(len(p.objective)))
    ok = (
        all(x >= 0 for x in lam)
        and all(sum(lam[j] * cols[j][i] for j in range(len(gens))) == p.rhs[i] for i in range(k))
        and all(dot(y, cols[j]) <= chat[j] for j in range(len(gens)))
        and dot(y, p.rhs) == value
    )
    if not ok:
        raise AssertionError("optimal result failed its duality check")
    return Optimal(value=Fraction(value), point=point, multipliers=lam, dual=y)
