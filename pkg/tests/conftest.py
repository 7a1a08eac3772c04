import random
from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import settings

from covermip import simplex
from covermip.instances import COVER, PACK, MkcInstance

settings.register_profile("det", derandomize=True, max_examples=40, deadline=None)
settings.load_profile("det")


def random_mkc(seed, eta_max=8, mu_max=2, sense=COVER, coeff_max=12):
    """A random feasible knapsack subproblem instance (no fixed items)."""
    rng = random.Random(seed)
    eta = rng.randint(1, eta_max)
    mu = rng.randint(1, mu_max)
    wbar = [[rng.randint(0, coeff_max) for _ in range(mu)] for _ in range(eta)]
    fbar = [rng.randint(0, coeff_max) for _ in range(eta)]
    vbar = [rng.randint(0, coeff_max) for _ in range(mu)]
    cbar = [rng.randint(1, coeff_max) for _ in range(mu)]
    dbar = []
    for j in range(mu):
        cap = sum(wbar[i][j] for i in range(eta)) + cbar[j]
        dbar.append(rng.randint(0, max(cap, 1)) if sense == COVER else rng.randint(0, 3 * coeff_max))
    if sense == COVER:
        for j in range(mu):
            dbar[j] = min(dbar[j], sum(wbar[i][j] for i in range(eta)) + cbar[j])
    return MkcInstance(sense=sense, eta=eta, mu=mu, fbar=fbar, vbar=vbar,
                       cbar=cbar, wbar=wbar, dbar=dbar)


def random_appendix_mkc(seed, eta_max=8):
    """A random feasible single-dimension cover instance satisfying the
    positivity, ordering and c < d assumptions of the approximate-formulation
    builder (selections are never empty in a feasible point)."""
    rng = random.Random(seed)
    eta = rng.randint(1, eta_max)
    weights = [rng.randint(1, 20) for _ in range(eta)]
    cbar = rng.randint(1, 15)
    dbar = rng.randint(max(cbar + 1, max(weights)), sum(weights) + cbar)
    fbar = sorted((rng.randint(1, 40) for _ in range(eta)), reverse=True)
    vbar = [rng.randint(1, 15)]
    return MkcInstance(sense=COVER, eta=eta, mu=1, fbar=fbar, vbar=vbar,
                       cbar=[cbar], wbar=[[w] for w in weights], dbar=[dbar])


def _gauss_solve(matrix, rhs):
    """Exact solve of a square system; None when singular."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(matrix)]
    for colidx in range(n):
        pivot = next((r for r in range(colidx, n) if a[r][colidx] != 0), None)
        if pivot is None:
            return None
        a[colidx], a[pivot] = a[pivot], a[colidx]
        inv = a[colidx][colidx]
        a[colidx] = [x / inv for x in a[colidx]]
        for r in range(n):
            if r != colidx and a[r][colidx] != 0:
                factor = a[r][colidx]
                a[r] = [x - factor * y for x, y in zip(a[r], a[colidx])]
    return [a[i][n] for i in range(n)]


def enumerate_vertices(model):
    """All basic feasible points of the model by brute force.

    Standard form: rows become equalities with slack columns, every nonbasic
    column sits at a finite bound, basic columns solve the square system.
    """
    nv = len(model.vars)
    m = len(model.constraints)
    cols = []
    for var in model.vars:
        cols.append((var.lb, var.ub))
    rows = [list(con.coeffs) for con in model.constraints]
    for i, con in enumerate(model.constraints):
        if con.rel == "<=":
            for r in range(m):
                rows[r].append(Fraction(1) if r == i else Fraction(0))
            cols.append((Fraction(0), None))
        elif con.rel == ">=":
            for r in range(m):
                rows[r].append(Fraction(-1) if r == i else Fraction(0))
            cols.append((Fraction(0), None))
    rhs = [con.rhs for con in model.constraints]
    total = len(cols)
    points = []
    for basis in combinations(range(total), m):
        nonbasic = [j for j in range(total) if j not in basis]
        choices = []
        for j in nonbasic:
            lb, ub = cols[j]
            opts = [b for b in (lb, ub) if b is not None]
            if not opts:
                opts = []
            choices.append(opts or [None])
        if any(c == [None] for c in choices):
            continue
        for assignment in product(*choices):
            b2 = list(rhs)
            for j, val in zip(nonbasic, assignment):
                for r in range(m):
                    b2[r] -= rows[r][j] * val
            mat = [[rows[r][j] for j in basis] for r in range(m)]
            sol = _gauss_solve(mat, b2)
            if sol is None:
                continue
            point = [None] * total
            for j, val in zip(nonbasic, assignment):
                point[j] = Fraction(val)
            for j, val in zip(basis, sol):
                point[j] = val
            ok = True
            for j in range(total):
                lb, ub = cols[j]
                if lb is not None and point[j] < lb:
                    ok = False
                    break
                if ub is not None and point[j] > ub:
                    ok = False
                    break
            if ok:
                points.append(tuple(point[:nv]))
    return points


def lp_oracle(model):
    """Optimal value over enumerated vertices; None when none is feasible.

    Valid for models whose optimum is attained at a vertex (all our test
    models are bounded).
    """
    points = enumerate_vertices(model)
    if not points:
        return None
    sign = 1 if model.objective.sense == "min" else -1
    best = None
    for point in points:
        val = model.objective.constant + sum(
            c * x for c, x in zip(model.objective.coeffs, point)
        )
        if best is None or sign * val < sign * best:
            best = val
    return best


@pytest.fixture
def tiny_lp_suite():
    """Random small LPs paired with the enumeration oracle."""
    rng = random.Random(20240)
    suite = []
    for _ in range(60):
        nv = rng.randint(1, 4)
        m = rng.randint(1, 3)
        variables = tuple(
            simplex.Variable(
                name=f"v{j}",
                lb=Fraction(rng.randint(-2, 1)),
                ub=Fraction(rng.randint(2, 5)),
            )
            for j in range(nv)
        )
        constraints = tuple(
            simplex.Constraint(
                coeffs=tuple(Fraction(rng.randint(-4, 4)) for _ in range(nv)),
                rel=rng.choice(["<=", ">=", "="]),
                rhs=Fraction(rng.randint(-6, 8)),
            )
            for _ in range(m)
        )
        objective = simplex.Objective(
            sense=rng.choice(["min", "max"]),
            coeffs=tuple(Fraction(rng.randint(-5, 5)) for _ in range(nv)),
        )
        suite.append(simplex.LinearModel(vars=variables, constraints=constraints, objective=objective))
    return suite
