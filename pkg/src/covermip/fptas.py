"""Fully polynomial scheme for single-dimension knapsack cover subproblems.

Costs are scaled down by lambda = max(eps * f_max / (eta * poly(eta)), 1) and
rounded up, a coverage table is filled by dynamic programming over the scaled
costs, and a sweep over all cost levels picks the cheapest level whose
coverage leaves an affordable continuous remainder.  With lambda = 1 the
answer is exact; otherwise the value is within (1+eps) of optimal whenever
the instance's cost spread is polynomially bounded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapExceededError, InfeasibleInstanceError
from .instances import COVER, CoverInstance, MixedSolution, MkcInstance, MkcSolution
from .instances import zero_optimum
from .decompose import build_mkc, lift


@dataclass(frozen=True)
class PolyEta:
    """Monotone polynomial descriptor evaluated at the item count."""

    kind: str  # "eta" | "eta2" | "const"
    value: int = 1

    def __call__(self, eta: int) -> int:
        if self.kind == "eta":
            return max(1, eta)
        if self.kind == "eta2":
            return max(1, eta * eta)
        if self.kind == "const":
            return self.value

    @classmethod
    def parse(cls, text: str) -> "PolyEta":
        """Accepts "eta", "eta^2" or "const:k" (k >= 1)."""
        if text == "eta":
            return cls("eta")
        if text == "eta^2":
            return cls("eta2")
        if text.startswith("const:"):
            k = int(text.split(":", 1)[1])
            if k < 1:
                raise ValueError("constant poly descriptor must be >= 1")
            return cls("const", k)
        raise ValueError(f"unknown poly descriptor {text!r}; use eta, eta^2 or const:k")


@dataclass(frozen=True)
class FptasConfig:
    epsilon: Fraction
    poly: PolyEta = field(default_factory=lambda: PolyEta("eta"))
    dp_cell_cap: int = 10**7

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass(frozen=True)
class ScaledOneMkc:
    """A single-dimension instance after cost scaling; v_prime stays rational."""

    eta: int
    v_prime: Fraction
    f_prime: tuple
    weights: tuple
    demand: int
    cbar: int


@dataclass(frozen=True)
class DpTable:
    """Coverage table: M[i][j] = best total weight of a subset of the first
    i items whose scaled cost is at most j; ``take`` records the choices for
    solution reconstruction."""

    M: tuple
    take: tuple
    f_prime: tuple


def _flat(instance: MkcInstance):
    if instance.mu != 1:
        raise ValueError("expected a single-dimension instance")
    return (
        [instance.wbar[i][0] for i in range(instance.eta)],
        instance.dbar[0],
        instance.cbar[0],
    )


def scale(instance: MkcInstance, cfg: FptasConfig):
    """Scale costs down; returns (ScaledOneMkc, lambda) with exact lambda.

    f_prime_i = ceil(fbar_i / lambda) and v_prime = vbar / lambda unrounded,
    so lambda = 1 leaves the instance unchanged.
    """
    weights, demand, cbar = _flat(instance)
    eta = instance.eta
    f_max = max(instance.fbar) if instance.fbar else 0
    if eta == 0:
        lam = Fraction(1)
    else:
        lam = max(cfg.epsilon * f_max / (eta * cfg.poly(eta)), Fraction(1))
    f_prime = tuple(math.ceil(Fraction(fi) / lam) for fi in instance.fbar)
    scaled = ScaledOneMkc(
        eta=eta,
        v_prime=Fraction(instance.vbar[0]) / lam,
        f_prime=f_prime,
        weights=tuple(weights),
        demand=demand,
        cbar=cbar,
    )
    return scaled, lam


def scaling_factor(instance: MkcInstance, cfg: FptasConfig) -> Fraction:
    """Lambda that one_mkc_fptas will use, after removing fixed selections."""
    free = [i for i in range(instance.eta) if i not in instance.fixed_items]
    if not free:
        return Fraction(1)
    f_max = max(instance.fbar[i] for i in free)
    eta = len(free)
    return max(cfg.epsilon * f_max / (eta * cfg.poly(eta)), Fraction(1))


def dp(f_prime, weights, cell_cap: int = 10**7) -> DpTable:
    """Fill the coverage table for integer costs.

    M[i][j] is exactly the best weight over subsets of the first i items
    with total cost at most j; zero-cost items therefore enter even at j=0.
    """
    eta = len(f_prime)
    total = sum(f_prime)
    if eta * (total + 1) > cell_cap:
        raise CapExceededError(
            f"coverage table needs {eta * (total + 1)} cells, cap is {cell_cap}"
        )
    M = [[0] * (total + 1) for _ in range(eta + 1)]
    take = [[False] * (total + 1) for _ in range(eta + 1)]
    for i in range(1, eta + 1):
        cost, weight = f_prime[i - 1], weights[i - 1]
        prev = M[i - 1]
        cur = M[i]
        trow = take[i]
        for j in range(total + 1):
            keep = prev[j]
            if cost <= j:
                with_i = weight + prev[j - cost]
                if with_i > keep:
                    cur[j] = with_i
                    trow[j] = True
                    continue
            cur[j] = keep
    return DpTable(
        M=tuple(tuple(row) for row in M),
        take=tuple(tuple(row) for row in take),
        f_prime=tuple(f_prime),
    )


def one_mkc_fptas(instance: MkcInstance, cfg: FptasConfig) -> MkcSolution:
    """Approximate a single-dimension cover instance; exact when lambda = 1.

    Fixed selections are paid up front and their coverage subtracted before
    scaling, so the guarantee applies to the remaining choice.  The returned
    value is measured in the original costs.
    """
    if instance.sense != COVER:
        raise ValueError("one_mkc_fptas requires a cover-sense instance")
    weights, demand, cbar = _flat(instance)
    fixed = instance.fixed_items
    free = [i for i in range(instance.eta) if i not in fixed]
    base_cover = sum(weights[i] for i in fixed)
    residual = demand - base_cover
    if sum(weights[i] for i in free) < residual - cbar:
        raise InfeasibleInstanceError("items cannot reach the demand even with the continuous part")

    sub = MkcInstance(
        sense=COVER,
        eta=len(free),
        mu=1,
        fbar=[instance.fbar[i] for i in free],
        vbar=instance.vbar,
        cbar=instance.cbar,
        wbar=[[weights[i]] for i in free],
        dbar=[max(residual, 0)],
    )
    scaled, lam = scale(sub, cfg)
    table = dp(scaled.f_prime, scaled.weights, cfg.dp_cell_cap)
    rows = table.M[len(free)]
    floor_need = max(residual, 0) - cbar
    best_j = None
    best_q = None
    for j, covered in enumerate(rows):
        if covered < floor_need:
            continue
        cost = j + scaled.v_prime * max(max(residual, 0) - covered, 0)
        if best_q is None or cost < best_q:
            best_q = cost
            best_j = j
    if best_j is None:
        raise InfeasibleInstanceError("no cost level reaches the demand")
    chosen = []
    i, j = len(free), best_j
    while i > 0:
        if table.take[i][j]:
            chosen.append(free[i - 1])
            j -= scaled.f_prime[i - 1]
        i -= 1
    chosen.reverse()
    selected = set(chosen) | set(fixed)
    covered = sum(weights[i] for i in selected)
    alpha = Fraction(min(cbar, max(0, demand - covered)))
    value = sum(instance.fbar[i] for i in selected) + instance.vbar[0] * alpha
    y = tuple(1 if i in selected else 0 for i in range(instance.eta))
    return MkcSolution(y=y, alpha=(alpha,), value=Fraction(value))


def p1_fptas(instance: CoverInstance, cfg: FptasConfig):
    """FPTAS for single-constraint cover instances via the decomposition.

    Returns (solution, warnings).  A warning is emitted when the instance's
    cost spread violates the hypothesis under which the (1+eps) bound is
    certified; the computed solution is still returned.
    """
    if instance.sense != COVER:
        raise ValueError("p1_fptas handles cover-sense instances only")
    if instance.m != 1:
        raise ValueError("p1_fptas requires m = 1")
    warnings = []
    n = instance.n
    f_max = max(instance.f[i] + instance.c[i][0] * instance.v[i][0] for i in range(n))
    f_min = min(instance.f[i] + instance.l[i][0] * instance.v[i][0] for i in range(n))
    if f_min * cfg.poly(n) < f_max:
        warnings.append(
            "cost spread exceeds poly(n): the (1+epsilon) bound is not certified"
        )
    shortcut = zero_optimum(instance)
    if shortcut is not None:
        return shortcut, tuple(warnings)
    best = None
    for g in range(n):
        sub = build_mkc(instance, (g,))
        if not sub.is_feasible():
            continue
        sol = one_mkc_fptas(sub, cfg)
        if best is None or sol.value < best[1].value:
            best = ((g,), sol)
    if best is None:
        raise InfeasibleInstanceError("every subproblem of the decomposition is infeasible")
    return lift(instance, best[0], best[1]), tuple(warnings)
