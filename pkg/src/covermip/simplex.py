"""Exact-rational bounded-variable simplex returning optimal basic solutions.

The pivoting is integer-preserving: the working tableau holds integers equal
to q times the true rational entries, where q is the (positive) determinant
scale of the current basis.  Each pivot applies the Sylvester identity

    T'[i][j] = (T[p][e] * T[i][j] - T[i][e] * T[p][j]) / q_old

whose division is exact for any pivot sequence, so every intermediate
quantity and every reported value is an exact rational.  Arrays are numpy
int64 for speed and escalate to Python-int object arrays when entries
approach the 64-bit range, which changes nothing but cost.

Variables may sit nonbasic at either finite bound; bounds are never expanded
into rows, so an optimal basic solution has at most (number of rows)
variables strictly between their bounds.  Bland's rule (lowest eligible
index entering, lowest variable index among blocking candidates leaving)
makes every run deterministic and cycle-free.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_INT64_GUARD = 2**62
_INIT_GUARD = 2**40


@dataclass(frozen=True)
class Variable:
    """A model variable; lb=None means -inf, ub=None means +inf."""

    name: str
    lb: Fraction | None = Fraction(0)
    ub: Fraction | None = None
    kind: str = "continuous"  # continuous | binary | integer


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    rel: str  # "<=", ">=", "="
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(a) for a in self.coeffs))
        object.__setattr__(self, "rhs", Fraction(self.rhs))


@dataclass(frozen=True)
class Objective:
    sense: str  # "min" | "max"
    coeffs: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(a) for a in self.coeffs))
        object.__setattr__(self, "constant", Fraction(self.constant))


@dataclass(frozen=True)
class LinearModel:
    """A symbolic LP/MIP: variables with bounds, rows, one objective.

    Integrality kinds are carried for emission; solve() works on the LP
    relaxation and ignores them.
    """

    vars: tuple
    constraints: tuple
    objective: Objective

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "constraints", tuple(self.constraints))


@dataclass(frozen=True)
class LpResult:
    """Solver outcome.  On "optimal", values/objective/basis are exact.

    ``basis`` holds one column id per standard-form row; ids below
    len(model.vars) are model variables, larger ids are auxiliary columns
    (slacks and artificials).
    """

    status: str
    values: tuple
    objective: Fraction | None
    basis: tuple
    var_bounds: tuple


def replace_objective(model: LinearModel, sense: str, coeffs, constant=Fraction(0)) -> LinearModel:
    """A copy of the model with a different objective."""
    return dataclasses.replace(
        model, objective=Objective(sense=sense, coeffs=tuple(coeffs), constant=constant)
    )


def count_fractional(result: LpResult, subset) -> int:
    """Number of variables in ``subset`` strictly between their bounds."""
    count = 0
    for idx in subset:
        lb, ub = result.var_bounds[idx]
        val = result.values[idx]
        if (lb is None or val > lb) and (ub is None or val < ub):
            count += 1
    return count


def _validate(model: LinearModel):
    if not model.vars:
        raise ValueError("model must declare at least one variable")
    nv = len(model.vars)
    if len(model.objective.coeffs) != nv:
        raise ValueError(
            f"objective has {len(model.objective.coeffs)} coefficients for {nv} variables"
        )
    if model.objective.sense not in ("min", "max"):
        raise ValueError(f"objective sense must be min or max, got {model.objective.sense!r}")
    for idx, con in enumerate(model.constraints):
        if len(con.coeffs) != nv:
            raise ValueError(
                f"constraint {idx} has {len(con.coeffs)} coefficients for {nv} variables"
            )
        if con.rel not in ("<=", ">=", "="):
            raise ValueError(f"constraint {idx} has unknown relation {con.rel!r}")
    for var in model.vars:
        if var.kind == "binary":
            if var.lb is None or var.ub is None or var.lb < 0 or var.ub > 1:
                raise ValueError(f"binary variable {var.name!r} must have bounds within [0, 1]")
        if var.lb is not None and var.ub is not None and var.lb > var.ub:
            return INFEASIBLE
    return None


def _lcm(values):
    out = 1
    for val in values:
        out = out * val // math.gcd(out, val)
    return out


class _Standardized:
    """Model rewritten as: minimize over integer rows  A s = b,  0 <= s <= u.

    Each model variable maps to one column (shifted by its lower bound, or
    flipped around its upper bound when only that is finite) or to a split
    pair of columns when free; a global scale makes all finite bounds
    integers and a per-row multiplier clears row denominators.
    """

    def __init__(self, model: LinearModel):
        self.minimize = model.objective.sense == "min"
        self.recover = []  # per model var: (kind, datum, first column position)
        self.columns = []  # per column: model var index
        ubounds_t = []
        for j, var in enumerate(model.vars):
            if var.lb is not None:
                self.recover.append(("shift", var.lb, len(self.columns)))
                ubounds_t.append(None if var.ub is None else var.ub - var.lb)
                self.columns.append(j)
            elif var.ub is not None:
                self.recover.append(("flip", var.ub, len(self.columns)))
                ubounds_t.append(None)
                self.columns.append(j)
            else:
                self.recover.append(("split", None, len(self.columns)))
                ubounds_t.append(None)
                ubounds_t.append(None)
                self.columns.append(j)
                self.columns.append(j)
        self.scale = _lcm([u.denominator for u in ubounds_t if u is not None] or [1])
        L = self.scale
        self.u = [None if u is None else int(u * L) for u in ubounds_t]
        self.rows = []
        self.rels = []
        self.rhs = []
        for con in model.constraints:
            coeffs = [Fraction(0)] * len(self.columns)
            rhs = con.rhs
            for j, a in enumerate(con.coeffs):
                if a == 0:
                    continue
                kind, datum, pos = self.recover[j]
                if kind == "shift":
                    rhs -= a * datum
                    coeffs[pos] += Fraction(a, L)
                elif kind == "flip":
                    rhs -= a * datum
                    coeffs[pos] -= Fraction(a, L)
                else:
                    coeffs[pos] += Fraction(a, L)
                    coeffs[pos + 1] -= Fraction(a, L)
            mult = _lcm([c.denominator for c in coeffs] + [rhs.denominator])
            self.rows.append([int(c * mult) for c in coeffs])
            self.rels.append(con.rel)
            self.rhs.append(int(rhs * mult))
        # Objective in column space.  Only the signs steer the pivoting; the
        # final objective value is recomputed from recovered variable values.
        sign = 1 if self.minimize else -1
        obj = [Fraction(0)] * len(self.columns)
        for j, cval in enumerate(model.objective.coeffs):
            if cval == 0:
                continue
            kind, datum, pos = self.recover[j]
            if kind == "shift":
                obj[pos] += Fraction(sign * cval, L)
            elif kind == "flip":
                obj[pos] -= Fraction(sign * cval, L)
            else:
                obj[pos] += Fraction(sign * cval, L)
                obj[pos + 1] -= Fraction(sign * cval, L)
        gamma = _lcm([c.denominator for c in obj])
        self.obj = [int(c * gamma) for c in obj]

    def recover_values(self, col_values):
        """Map column values back to the model variables (exact Fractions)."""
        L = self.scale
        out = []
        for kind, datum, pos in self.recover:
            if kind == "shift":
                out.append(datum + col_values[pos] / L)
            elif kind == "flip":
                out.append(datum - col_values[pos] / L)
            else:
                out.append((col_values[pos] - col_values[pos + 1]) / L)
        return out


class _Tableau:
    """Integer-preserving bounded-variable two-phase simplex engine."""

    def __init__(self, std: _Standardized):
        self.std = std
        nstruct = len(std.columns)
        m = len(std.rows)
        self.m = m
        rows = [list(r) for r in std.rows]
        rels = list(std.rels)
        rhs = list(std.rhs)
        for i in range(m):
            if rhs[i] < 0:
                rows[i] = [-a for a in rows[i]]
                rhs[i] = -rhs[i]
                rels[i] = {"<=": ">=", ">=": "<=", "=": "="}[rels[i]]
            if rels[i] == ">=" and rhs[i] == 0:
                rows[i] = [-a for a in rows[i]]
                rels[i] = "<="
        # every initial basic column has coefficient +1, so T = A with q = 1
        ncols = nstruct
        slack_of = [None] * m
        surplus_of = [None] * m
        for i in range(m):
            if rels[i] == "<=":
                slack_of[i] = ncols
                ncols += 1
            elif rels[i] == ">=":
                surplus_of[i] = ncols
                ncols += 1
        art_of = {}
        self.art_cols = []
        for i in range(m):
            if rels[i] == "=" or rels[i] == ">=":
                art_of[i] = ncols
                self.art_cols.append(ncols)
                ncols += 1
        self.first_aux = nstruct
        self.ncols = ncols
        self.u = list(std.u) + [None] * (ncols - nstruct)
        data = [[0] * (ncols + 1) for _ in range(m + 2)]
        for i in range(m):
            data[i][:nstruct] = rows[i]
            if slack_of[i] is not None:
                data[i][slack_of[i]] = 1
            if surplus_of[i] is not None:
                data[i][surplus_of[i]] = -1
            if i in art_of:
                data[i][art_of[i]] = 1
            data[i][ncols] = rhs[i]
        for j, cval in enumerate(std.obj):
            data[m][j] = -cval  # reduced costs start at -c (basis cost 0)
        for i in art_of:
            for j in range(ncols + 1):
                data[m + 1][j] += data[i][j]
        for col in self.art_cols:
            data[m + 1][col] = 0
        self.basis = [art_of[i] if i in art_of else slack_of[i] for i in range(m)]
        self.is_basic = [False] * ncols
        for col in self.basis:
            self.is_basic[col] = True
        self.at_upper = [False] * ncols
        self.q = 1
        try:
            self.T = np.array(data, dtype=np.int64)
            if self.T.size and int(np.abs(self.T).max()) > _INIT_GUARD:
                self.T = np.array(data, dtype=object)
        except OverflowError:
            self.T = np.array(data, dtype=object)

    def _maxabs(self):
        return int(np.abs(self.T).max()) if self.T.size else 0

    def _basic_values_num(self):
        """Numerators of the basic-variable values over denominator q."""
        rhs = self.T[: self.m, self.ncols]
        ub_cols = [j for j in range(self.ncols) if self.at_upper[j]]
        if not ub_cols:
            return [int(x) for x in rhs]
        uvec = [self.u[j] for j in ub_cols]
        if self.T.dtype != object:
            guard = (self._maxabs() + 1) * (max(uvec) + 1) * (len(ub_cols) + 1)
            if guard < _INT64_GUARD:
                contrib = self.T[: self.m, ub_cols] @ np.array(uvec, dtype=np.int64)
                return [int(x) for x in (rhs - contrib)]
        out = []
        for i in range(self.m):
            total = int(rhs[i])
            for j, uval in zip(ub_cols, uvec):
                total -= int(self.T[i, j]) * uval
            out.append(total)
        return out

    def _pivot(self, prow: int, ecol: int, hit_upper: bool):
        piv = int(self.T[prow, ecol])
        if self.T.dtype != object:
            maxabs = self._maxabs()
            if 2 * maxabs * maxabs >= _INT64_GUARD * 2:
                self.T = self.T.astype(object)
        rowp = self.T[prow, :].copy()
        cole = self.T[:, ecol].copy()
        self.T *= piv
        self.T -= np.outer(cole, rowp)
        self.T //= self.q
        self.T[prow, :] = rowp
        self.q = piv
        if self.q < 0:
            self.q = -self.q
            np.negative(self.T, out=self.T)
        leaving = self.basis[prow]
        self.is_basic[leaving] = False
        self.at_upper[leaving] = hit_upper
        self.basis[prow] = ecol
        self.is_basic[ecol] = True
        self.at_upper[ecol] = False

    def _iterate(self, objrow: int, phase_one: bool):
        """Bland-rule pivots until optimal (True) or unbounded (False)."""
        safety = 2000 + 200 * (self.m + self.ncols)
        for _ in range(safety):
            objvals = self.T[objrow]
            enter = -1
            for j in range(self.ncols):
                if self.is_basic[j] or self.u[j] == 0:
                    continue
                oj = int(objvals[j])
                if (oj < 0) if self.at_upper[j] else (oj > 0):
                    enter = j
                    break
            if enter < 0:
                return True
            direction = -1 if self.at_upper[enter] else 1
            xbn = self._basic_values_num()
            q = self.q
            best_num = best_den = None  # blocking limit t = num/den, den > 0
            best_var = -1
            best_row = -1
            best_hit_upper = False
            if self.u[enter] is not None:
                best_num, best_den, best_var = self.u[enter], 1, enter
            for i in range(self.m):
                a = int(self.T[i, enter]) * direction
                if a > 0:
                    num, den = xbn[i], a
                    hit_upper = False
                elif a < 0:
                    ub = self.u[self.basis[i]]
                    if ub is None:
                        continue
                    num, den = q * ub - xbn[i], -a
                    hit_upper = True
                else:
                    continue
                if num < 0:
                    num = 0
                if (
                    best_num is None
                    or num * best_den < best_num * den
                    or (num * best_den == best_num * den and self.basis[i] < best_var)
                ):
                    best_num, best_den = num, den
                    best_var = self.basis[i]
                    best_row = i
                    best_hit_upper = hit_upper
            if best_num is None:
                if phase_one:
                    raise RuntimeError("phase-1 objective cannot be unbounded")
                return False
            if best_row < 0:
                self.at_upper[enter] = not self.at_upper[enter]  # bound flip
                continue
            self._pivot(best_row, enter, best_hit_upper)
        raise RuntimeError("simplex iteration limit exceeded")

    def solve(self):
        """Return (status, structural column values as Fractions or None)."""
        if self.art_cols:
            self._iterate(self.m + 1, phase_one=True)
            artset = set(self.art_cols)
            xbn = self._basic_values_num()
            art_total = sum(
                xbn[i] for i in range(self.m) if self.basis[i] in artset
            )
            if art_total != 0:
                return INFEASIBLE, None
            for col in self.art_cols:
                self.u[col] = 0
                self.at_upper[col] = False
        if not self._iterate(self.m, phase_one=False):
            return UNBOUNDED, None
        xbn = self._basic_values_num()
        nstruct = len(self.std.columns)
        values = [
            Fraction(self.u[j]) if self.at_upper[j] else Fraction(0)
            for j in range(nstruct)
        ]
        for i, col in enumerate(self.basis):
            if col < nstruct:
                values[col] = Fraction(xbn[i], self.q)
        return OPTIMAL, values


def solve(model: LinearModel) -> LpResult:
    """Solve the LP relaxation, returning an exact optimal basic solution.

    Deterministic: identical models yield identical results, including the
    tie-broken vertex and basis.
    """
    var_bounds = tuple((v.lb, v.ub) for v in model.vars)
    early = _validate(model)
    if early == INFEASIBLE:
        return LpResult(INFEASIBLE, (), None, (), var_bounds)
    if not model.constraints:
        return _solve_boxonly(model, var_bounds)

    std = _Standardized(model)
    tab = _Tableau(std)
    status, col_values = tab.solve()
    if status != OPTIMAL:
        return LpResult(status, (), None, (), var_bounds)
    values = std.recover_values(col_values)
    objective = model.objective.constant + sum(
        c * x for c, x in zip(model.objective.coeffs, values)
    )
    nstruct = len(std.columns)
    nv = len(model.vars)
    basis = tuple(
        std.columns[col] if col < nstruct else nv + (col - nstruct)
        for col in tab.basis
    )
    return LpResult(OPTIMAL, tuple(values), objective, basis, var_bounds)


def _solve_boxonly(model: LinearModel, var_bounds) -> LpResult:
    """Optimum of a model with variable bounds only (no rows)."""
    minimize = model.objective.sense == "min"
    values = []
    for var, coeff in zip(model.vars, model.objective.coeffs):
        if coeff == 0:
            if var.lb is not None:
                values.append(var.lb)
            elif var.ub is not None:
                values.append(var.ub)
            else:
                values.append(Fraction(0))
            continue
        want_low = (coeff > 0) == minimize
        bound = var.lb if want_low else var.ub
        if bound is None:
            return LpResult(UNBOUNDED, (), None, (), var_bounds)
        values.append(bound)
    objective = model.objective.constant + sum(
        c * x for c, x in zip(model.objective.coeffs, values)
    )
    return LpResult(OPTIMAL, tuple(values), objective, (), var_bounds)
