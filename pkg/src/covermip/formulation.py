"""LP formulation builders and a deterministic CPLEX-LP-format writer.

Three builders: the two-inequality convex hull of the elementary mixing set
(a bounded continuous variable plus binaries covering a threshold), the
compact perfect formulation for single-constraint instances with uniform
bounds, and the signature-based (1+eps)-approximate formulation for the
single-dimension knapsack cover subproblem, lifted over its polyhedra with
per-polyhedron variable copies and convex multipliers.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .errors import CapExceededError, HypothesisError, InfeasibleInstanceError
from .instances import COVER, CoverInstance, MkcInstance
from . import simplex
from .simplex import Constraint, LinearModel, Objective, Variable

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# convex hull of {alpha in [0, sigma], psi binary: alpha + sum psi >= delta}


@dataclass(frozen=True)
class HullYParams:
    delta: Fraction
    sigma: Fraction
    nu: int

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        object.__setattr__(self, "sigma", Fraction(self.sigma))


def hull_y(params: HullYParams) -> LinearModel:
    """Exact hull: bounds, the covering row, the rounded count row and the
    mixed-integer rounding row.  LP optima over this model equal integer
    optima for every linear objective.
    """
    delta, sigma, nu = params.delta, params.sigma, params.nu
    if delta <= 0:
        raise HypothesisError("delta must be positive")
    if not 0 < sigma <= 1:
        raise HypothesisError("sigma must lie in (0, 1]")
    if nu < 1:
        raise HypothesisError("nu must be a positive integer")
    if nu < math.ceil(delta - sigma):
        raise HypothesisError(
            f"nu = {nu} is below ceil(delta - sigma) = {math.ceil(delta - sigma)}"
        )
    variables = [Variable(name="alpha", lb=ZERO, ub=sigma)]
    variables += [Variable(name=f"psi{i}", lb=ZERO, ub=ONE) for i in range(1, nu + 1)]
    frac = delta - math.floor(delta)
    rows = [
        Constraint(coeffs=[ONE] + [ONE] * nu, rel=">=", rhs=delta),
        Constraint(coeffs=[ZERO] + [ONE] * nu, rel=">=", rhs=Fraction(math.ceil(delta - sigma))),
        Constraint(coeffs=[ONE] + [frac] * nu, rel=">=", rhs=frac * math.ceil(delta)),
    ]
    objective = Objective(sense="min", coeffs=[ZERO] * (nu + 1))
    return LinearModel(vars=tuple(variables), constraints=tuple(rows), objective=objective)


# ---------------------------------------------------------------------------
# perfect formulation for m = 1 with uniform bounds


@dataclass(frozen=True)
class UniformInstance:
    """Single-constraint instance with identical bounds on every item.

    Items must be pre-sorted by unit cost descending.
    """

    n: int
    v: tuple
    f: tuple
    ell: int
    cap: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(self.v))
        object.__setattr__(self, "f", tuple(self.f))
        if len(self.v) != self.n or len(self.f) != self.n:
            raise ValueError("v and f must have length n")
        if any(self.v[i] < self.v[i + 1] for i in range(self.n - 1)):
            raise ValueError("items must be sorted by unit cost descending")
        if not 0 <= self.ell <= self.cap <= self.d:
            raise ValueError("bounds must satisfy d >= cap >= ell >= 0")

    def to_cover_instance(self) -> CoverInstance:
        return CoverInstance(
            sense=COVER,
            n=self.n,
            m=1,
            v=[[vi] for vi in self.v],
            l=[[self.ell]] * self.n,
            c=[[self.cap]] * self.n,
            d=[self.d],
            f=list(self.f),
        )


def uniform_index_sets(instance: UniformInstance):
    """Pivot candidates and, per pivot g, the admissible counts of cheaper
    predecessors; both straight from the closed-form bounds."""
    n, ell, cap, d = instance.n, instance.ell, instance.cap, instance.d
    if cap == ell:
        g_hi = n
    else:
        g_hi = min(((n + 1) * cap - d - ell) // (cap - ell), n)
    pivots = range(1, g_hi + 1)
    counts = {}
    for g in pivots:
        short = d - (n + 1 - g) * cap
        lo = 0 if ell == 0 else max(0, -((-short) // ell))
        if lo <= g - 1:
            counts[g] = range(lo, g)
    return pivots, counts


def build_uniform_perfect(instance: UniformInstance) -> LinearModel:
    """The compact extended formulation whose LP optimum equals the integer
    optimum for every objective with unit costs sorted descending."""
    n, ell, cap, d = instance.n, instance.ell, instance.cap, instance.d
    pivots, counts = uniform_index_sets(instance)
    pairs = [(g, b) for g in pivots if g in counts for b in counts[g]]
    if not pairs:
        raise InfeasibleInstanceError("no pivot admits a feasible predecessor count")

    names = [f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    col = {name: idx for idx, name in enumerate(names)}
    bounds = {}
    for g, b in pairs:
        for name in (f"z_g{g}_b{b}", f"xg_g{g}_b{b}"):
            col[name] = len(names)
            names.append(name)
        for i in range(1, n + 1):
            name = f"y{i}_g{g}_b{b}"
            col[name] = len(names)
            names.append(name)
    nvars = len(names)

    def row(entries, rel, rhs):
        coeffs = [ZERO] * nvars
        for name, a in entries:
            coeffs[col[name]] += Fraction(a)
        return Constraint(coeffs=coeffs, rel=rel, rhs=Fraction(rhs))

    rows = []
    for i in range(1, n + 1):
        entries = [(f"x{i}", 1)]
        for g, b in pairs:
            if g > i:
                entries.append((f"y{i}_g{g}_b{b}", -ell))
            elif g < i:
                entries.append((f"y{i}_g{g}_b{b}", -cap))
            else:
                entries.append((f"xg_g{g}_b{b}", -1))
        rows.append(row(entries, "=", 0))
    for i in range(1, n + 1):
        entries = [(f"y{i}", 1)] + [(f"y{i}_g{g}_b{b}", -1) for g, b in pairs]
        rows.append(row(entries, "=", 0))
    for g, b in pairs:
        need = -((-(d - b * ell - cap)) // cap)  # ceil((d - b*ell - cap)/cap)
        entries = [(f"y{i}_g{g}_b{b}", 1) for i in range(g + 1, n + 1)]
        entries.append((f"z_g{g}_b{b}", -need))
        rows.append(row(entries, ">=", 0))
    for g, b in pairs:
        short = d - (b + 1) * ell
        rem = short - (short // cap) * cap
        rhs_coeff = ell + (-((-short) // cap)) * rem
        entries = [(f"xg_g{g}_b{b}", 1)]
        entries += [(f"y{i}_g{g}_b{b}", rem) for i in range(g + 1, n + 1)]
        entries.append((f"z_g{g}_b{b}", -rhs_coeff))
        rows.append(row(entries, ">=", 0))
    for g, b in pairs:
        entries = [(f"xg_g{g}_b{b}", 1)]
        entries += [(f"y{i}_g{g}_b{b}", cap) for i in range(g + 1, n + 1)]
        entries.append((f"z_g{g}_b{b}", -(d - b * ell)))
        rows.append(row(entries, ">=", 0))
    rows.append(row([(f"z_g{g}_b{b}", 1) for g, b in pairs], "=", 1))
    for g, b in pairs:
        entries = [(f"y{i}_g{g}_b{b}", 1) for i in range(1, g)]
        entries.append((f"z_g{g}_b{b}", -b))
        rows.append(row(entries, "=", 0))
    for g, b in pairs:
        rows.append(row([(f"y{g}_g{g}_b{b}", 1), (f"z_g{g}_b{b}", -1)], "=", 0))
    for g, b in pairs:
        rows.append(row([(f"xg_g{g}_b{b}", 1), (f"z_g{g}_b{b}", -ell)], ">=", 0))
        rows.append(row([(f"xg_g{g}_b{b}", 1), (f"z_g{g}_b{b}", -cap)], "<=", 0))
    for i in range(1, n + 1):
        for g, b in pairs:
            rows.append(row([(f"y{i}_g{g}_b{b}", 1), (f"z_g{g}_b{b}", -1)], "<=", 0))

    variables = tuple(Variable(name=name, lb=ZERO, ub=None) for name in names)
    obj = [ZERO] * nvars
    for i in range(1, n + 1):
        obj[col[f"x{i}"]] = Fraction(instance.v[i - 1])
        obj[col[f"y{i}"]] = Fraction(instance.f[i - 1])
    return LinearModel(
        vars=variables,
        constraints=tuple(rows),
        objective=Objective(sense="min", coeffs=obj),
    )


def perfect_objective(model: LinearModel, v, f) -> LinearModel:
    """The perfect model re-costed with unit costs v (sorted desc) and fixed
    costs f on the original item variables."""
    n = len(v)
    coeffs = [ZERO] * len(model.vars)
    for idx, var in enumerate(model.vars):
        if var.name.startswith("x") and var.name[1:].isdigit():
            coeffs[idx] = Fraction(v[int(var.name[1:]) - 1])
        elif var.name.startswith("y") and var.name[1:].isdigit():
            coeffs[idx] = Fraction(f[int(var.name[1:]) - 1])
    return simplex.replace_objective(model, "min", coeffs)


# ---------------------------------------------------------------------------
# signature-based approximate formulation for single-dimension cover


@dataclass(frozen=True)
class SignatureSpace:
    """Cost-band geometry: K bands per leading item, counts capped at J."""

    epsilon: Fraction
    K: int
    J: int

    @classmethod
    def from_epsilon(cls, epsilon) -> "SignatureSpace":
        epsilon = Fraction(epsilon)
        if not 0 < epsilon < 1:
            raise HypothesisError("epsilon must lie in (0, 1)")
        ratio = ONE / (ONE + epsilon)
        power = ratio
        K = 1
        while power > epsilon:
            power *= ratio
            K += 1
        J = math.ceil(1 + ONE / epsilon)
        return cls(epsilon=epsilon, K=K, J=J)


def _cost_bands(fbar, h, eps, K):
    """Band membership of the items after h, by cost relative to item h."""
    bands = [[] for _ in range(K)]
    tail = []
    fh = Fraction(fbar[h])
    lo = fh
    for k in range(K):
        hi = lo
        lo = fh / (ONE + eps) ** (k + 1)
        bands[k] = [i for i in range(h + 1, len(fbar)) if lo < Fraction(fbar[i]) <= hi]
    tail = [i for i in range(h + 1, len(fbar)) if Fraction(fbar[i]) <= lo]
    return bands, tail


def _piece_feasible(instance, h, sigma, bands, space):
    """LP feasibility of one (leading item, signature) polyhedron."""
    eta = instance.eta
    weights = [instance.wbar[i][0] for i in range(eta)]
    variables = []
    for i in range(eta):
        if i < h:
            lb = ub = ZERO
        elif i == h:
            lb = ub = ONE
        else:
            lb, ub = ZERO, ONE
        variables.append(Variable(name=f"y{i}", lb=lb, ub=ub))
    variables.append(Variable(name="alpha", lb=ZERO, ub=Fraction(instance.cbar[0])))
    rows = [
        Constraint(
            coeffs=[Fraction(w) for w in weights] + [ONE],
            rel=">=",
            rhs=Fraction(instance.dbar[0]),
        )
    ]
    for k in range(space.K):
        coeffs = [ONE if i in bands[k] else ZERO for i in range(eta)] + [ZERO]
        if sigma[k] == space.J:
            rows.append(Constraint(coeffs=coeffs, rel=">=", rhs=Fraction(space.J)))
        else:
            rows.append(Constraint(coeffs=coeffs, rel="=", rhs=Fraction(sigma[k])))
    model = LinearModel(
        vars=tuple(variables),
        constraints=tuple(rows),
        objective=Objective(sense="min", coeffs=[ZERO] * (eta + 1)),
    )
    return simplex.solve(model).status == simplex.OPTIMAL


def build_eps_1mkc(instance: MkcInstance, eps, piece_cap: int = 10**5) -> LinearModel:
    """Lifted union of the (leading item, signature) polyhedra.

    The LP optimum of the returned model is a lower bound on the integer
    optimum and within a (1+eps) factor of it.  Requires costs sorted
    descending and 0 < eps < 1.
    """
    if instance.mu != 1:
        raise ValueError("the approximate formulation is for single-dimension instances")
    if instance.sense != COVER:
        raise ValueError("the approximate formulation is for cover-sense instances")
    if any(instance.fbar[i] < instance.fbar[i + 1] for i in range(instance.eta - 1)):
        raise ValueError("costs must be sorted descending")
    space = SignatureSpace.from_epsilon(eps)
    eta = instance.eta
    total = (space.J + 1) ** space.K * eta
    if total > piece_cap:
        raise CapExceededError(f"{total} polyhedra exceed the cap {piece_cap}")
    eps = space.epsilon
    weights = [instance.wbar[i][0] for i in range(eta)]
    cbar = Fraction(instance.cbar[0])
    demand = Fraction(instance.dbar[0])

    pieces = []
    for h in range(eta):
        bands, _tail = _cost_bands(instance.fbar, h, eps, space.K)
        for sigma in itertools.product(range(space.J + 1), repeat=space.K):
            if any(
                (sigma[k] if sigma[k] < space.J else space.J) > len(bands[k])
                for k in range(space.K)
            ):
                continue
            if _piece_feasible(instance, h, sigma, bands, space):
                pieces.append((h, sigma, bands))

    names = [f"y{i}" for i in range(1, eta + 1)] + ["alpha"]
    variables = [Variable(name=f"y{i}", lb=ZERO, ub=ONE) for i in range(1, eta + 1)]
    variables.append(Variable(name="alpha", lb=ZERO, ub=cbar))
    col = {name: idx for idx, name in enumerate(names)}

    def add_var(name, lb=ZERO, ub=None):
        col[name] = len(names)
        names.append(name)
        variables.append(Variable(name=name, lb=lb, ub=ub))

    for idx, (h, sigma, _bands) in enumerate(pieces):
        tag = f"p{idx}"
        add_var(f"lam_{tag}_h{h + 1}_s{'_'.join(map(str, sigma))}")
        for i in range(h, eta):
            add_var(f"yc{i + 1}_{tag}")
        add_var(f"ac_{tag}")

    def row(entries, rel, rhs):
        coeffs = [ZERO] * len(names)
        for name, a in entries:
            coeffs[col[name]] += Fraction(a)
        return Constraint(coeffs=coeffs, rel=rel, rhs=Fraction(rhs))

    rows = []
    lam_names = []
    for idx, (h, sigma, bands) in enumerate(pieces):
        tag = f"p{idx}"
        lam = f"lam_{tag}_h{h + 1}_s{'_'.join(map(str, sigma))}"
        lam_names.append(lam)
        entries = [(f"yc{i + 1}_{tag}", weights[i]) for i in range(h, eta)]
        entries.append((f"ac_{tag}", 1))
        entries.append((lam, -demand))
        rows.append(row(entries, ">=", 0))
        rows.append(row([(f"yc{h + 1}_{tag}", 1), (lam, -1)], "=", 0))
        for k in range(space.K):
            entries = [(f"yc{i + 1}_{tag}", 1) for i in bands[k]]
            if sigma[k] == space.J:
                entries.append((lam, -space.J))
                rows.append(row(entries, ">=", 0))
            else:
                entries.append((lam, -sigma[k]))
                rows.append(row(entries, "=", 0))
        for i in range(h + 1, eta):
            rows.append(row([(f"yc{i + 1}_{tag}", 1), (lam, -1)], "<=", 0))
        rows.append(row([(f"ac_{tag}", 1), (lam, -cbar)], "<=", 0))
    rows.append(row([(lam, 1) for lam in lam_names], "=", 1))
    for i in range(eta):
        entries = [(f"y{i + 1}", 1)]
        for idx, (h, _sigma, _bands) in enumerate(pieces):
            if h <= i:
                entries.append((f"yc{i + 1}_p{idx}", -1))
        rows.append(row(entries, "=", 0))
    entries = [("alpha", 1)] + [(f"ac_p{idx}", -1) for idx in range(len(pieces))]
    rows.append(row(entries, "=", 0))

    obj = [ZERO] * len(names)
    for i in range(eta):
        obj[col[f"y{i + 1}"]] = Fraction(instance.fbar[i])
    obj[col["alpha"]] = Fraction(instance.vbar[0])
    return LinearModel(
        vars=tuple(variables),
        constraints=tuple(rows),
        objective=Objective(sense="min", coeffs=obj),
    )


def piece_count(model: LinearModel) -> int:
    """Number of lifted polyhedra in a model built by build_eps_1mkc."""
    return sum(1 for var in model.vars if var.name.startswith("lam_"))


# ---------------------------------------------------------------------------
# CPLEX LP format emission


def _decimal_exact(value: Fraction):
    """Exact decimal string when the denominator divides a power of ten."""
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return None
    k = max(twos, fives)
    if k == 0:
        return str(value.numerator)
    scaled = abs(value.numerator) * 10**k // value.denominator
    digits = str(scaled).zfill(k + 1)
    whole, frac = digits[:-k], digits[-k:].rstrip("0")
    sign = "-" if value < 0 else ""
    return f"{sign}{whole}.{frac}" if frac else f"{sign}{whole}"


def _format_number(value: Fraction):
    """(text, exact) rendering: exact decimal or 17 significant digits."""
    exact = _decimal_exact(value)
    if exact is not None:
        return exact, True
    with localcontext() as ctx:
        ctx.prec = 17
        approx = Decimal(value.numerator) / Decimal(value.denominator)
    return str(approx), False


def _terms(names, coeffs):
    parts = []
    notes = []
    for name, coeff in zip(names, coeffs):
        if coeff == 0:
            continue
        text, exact = _format_number(abs(coeff))
        if not exact:
            notes.append((name, abs(coeff)))
        if not parts:
            sign = "- " if coeff < 0 else ""
            parts.append(f"{sign}{text} {name}")
        else:
            sign = "-" if coeff < 0 else "+"
            parts.append(f"{sign} {text} {name}")
    if not parts:
        parts.append(f"0 {names[0]}")
    return " ".join(parts), notes


def emit_lp(model: LinearModel) -> str:
    """Deterministic CPLEX-LP-format text for the model.

    Rationals with a terminating decimal expansion are written exactly;
    any other value is written with 17 significant digits preceded by a
    comment carrying the exact fraction.
    """
    names = [var.name for var in model.vars]
    if len(set(names)) != len(names):
        seen = set()
        dup = next(n for n in names if n in seen or seen.add(n))
        raise ValueError(f"duplicate variable name {dup!r}")
    lines = []
    header = "Minimize" if model.objective.sense == "min" else "Maximize"
    body, notes = _terms(names, model.objective.coeffs)
    if model.objective.constant != 0:
        text, exact = _format_number(model.objective.constant)
        if not exact:
            notes.append(("constant", model.objective.constant))
        body += f" + {text}" if model.objective.constant > 0 else f" - {text.lstrip('-')}"
    lines.append(header)
    for name, value in notes:
        lines.append(f"\\ exact obj: {name} = {value}")
    lines.append(f" obj: {body}")
    lines.append("Subject To")
    for idx, con in enumerate(model.constraints, start=1):
        body, notes = _terms(names, con.coeffs)
        rhs_text, rhs_exact = _format_number(con.rhs)
        if not rhs_exact:
            notes.append(("rhs", con.rhs))
        for name, value in notes:
            lines.append(f"\\ exact c{idx}: {name} = {value}")
        lines.append(f" c{idx}: {body} {con.rel} {rhs_text}")
    lines.append("Bounds")
    for var in model.vars:
        notes = []

        def fmt(bound, label, var=var, notes=notes):
            text, exact = _format_number(bound)
            if not exact:
                notes.append((f"{label} {var.name}", bound))
            return text

        if var.lb is None and var.ub is None:
            entry = f" {var.name} free"
        elif var.lb is not None and var.ub is not None and var.lb == var.ub:
            entry = f" {var.name} = {fmt(var.lb, 'bound')}"
        elif var.lb is None:
            entry = f" -inf <= {var.name} <= {fmt(var.ub, 'upper bound')}"
        elif var.ub is None:
            entry = f" {var.name} >= {fmt(var.lb, 'lower bound')}"
        else:
            entry = f" {fmt(var.lb, 'lower bound')} <= {var.name} <= {fmt(var.ub, 'upper bound')}"
        for name, value in notes:
            lines.append(f"\\ exact {name} = {value}")
        lines.append(entry)
    binaries = [var.name for var in model.vars if var.kind == "binary"]
    integers = [var.name for var in model.vars if var.kind == "integer"]
    if binaries:
        lines.append("Binary")
        lines.extend(f" {name}" for name in binaries)
    if integers:
        lines.append("General")
        lines.extend(f" {name}" for name in integers)
    lines.append("End")
    return "\n".join(lines) + "\n"
