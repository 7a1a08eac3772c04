"""Approximation schemes for the knapsack subproblems and the parent program.

For an accuracy parameter epsilon, every selection of at most
k = min(eta, ceil(mu/epsilon)) items is tried as the "expensive part" of the
solution: items costlier than the cheapest tried item are switched off, the
remainder is solved as an LP, and the basic optimal solution is rounded
(up for cover, down for pack).  At most mu variables of a basic solution are
fractional, each no costlier than the tried minimum, which caps the rounding
loss at a (1+epsilon) factor.

Alongside the rounded LP candidate, each selection is also evaluated with
its closed-form optimal continuous part and no extra items.  This never
worsens a selection and makes the (1+epsilon) bound independent of which
optimal vertex the LP solver happens to return under ties.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import CapExceededError, InfeasibleInstanceError
from .instances import COVER, PACK, CoverInstance, MixedSolution, MkcInstance, MkcSolution
from .instances import zero_optimum
from .decompose import build_mkc, enumerate_g, lift
from . import simplex


@dataclass(frozen=True)
class PtasConfig:
    """Accuracy and enumeration guard for the approximation schemes."""

    epsilon: Fraction
    subset_cap: int = 10**6

    def __post_init__(self):
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


def subset_budget(instance: MkcInstance, cfg: PtasConfig) -> int:
    """Size cap k on the enumerated part of each tried selection."""
    return min(instance.eta, math.ceil(Fraction(instance.mu) / cfg.epsilon))


def build_lp(instance: MkcInstance, selected, excluded):
    """The relaxation solved per tried selection.

    Selected items are pinned to 1, excluded ones to 0, the rest range over
    [0, 1]; one continuous variable per dimension ranges over [0, cbar_j].
    Returns the model and the indices of the free selection variables.
    """
    eta, mu = instance.eta, instance.mu
    variables = []
    free = []
    for i in range(eta):
        if i in selected:
            lb = ub = Fraction(1)
        elif i in excluded:
            lb = ub = Fraction(0)
        else:
            lb, ub = Fraction(0), Fraction(1)
            free.append(i)
        variables.append(simplex.Variable(name=f"y{i}", lb=lb, ub=ub))
    for j in range(mu):
        variables.append(
            simplex.Variable(name=f"alpha{j}", lb=Fraction(0), ub=Fraction(instance.cbar[j]))
        )
    rel = ">=" if instance.sense == COVER else "<="
    constraints = []
    for j in range(mu):
        coeffs = [Fraction(instance.wbar[i][j]) for i in range(eta)]
        coeffs += [Fraction(1) if jj == j else Fraction(0) for jj in range(mu)]
        constraints.append(simplex.Constraint(coeffs=coeffs, rel=rel, rhs=Fraction(instance.dbar[j])))
    obj_coeffs = [Fraction(instance.fbar[i]) for i in range(eta)] + [
        Fraction(instance.vbar[j]) for j in range(mu)
    ]
    sense = "min" if instance.sense == COVER else "max"
    model = simplex.LinearModel(
        vars=tuple(variables),
        constraints=tuple(constraints),
        objective=simplex.Objective(sense=sense, coeffs=obj_coeffs),
    )
    return model, tuple(free)


def _enumerated_subsets(instance: MkcInstance, cfg: PtasConfig):
    """Yield the enumerated item sets in size-then-lexicographic order."""
    free_items = [i for i in range(instance.eta) if i not in instance.fixed_items]
    k = min(subset_budget(instance, cfg), len(free_items))
    total = sum(math.comb(len(free_items), s) for s in range(k + 1))
    if total > cfg.subset_cap:
        raise CapExceededError(
            f"selection enumeration needs {total} subsets, cap is {cfg.subset_cap}"
        )
    for size in range(k + 1):
        yield from combinations(free_items, size)


def _exclusions(instance, chosen, free_lookup):
    """Items switched off for a tried selection: costlier than its cheapest pick."""
    if not chosen:
        return frozenset()
    cheapest = min(instance.fbar[t] for t in chosen)
    return frozenset(
        i for i in free_lookup if i not in chosen and instance.fbar[i] > cheapest
    )


def _closed_form_alpha(instance, items):
    """Optimal continuous part for an exact selection, or None if infeasible."""
    alpha = []
    for j in range(instance.mu):
        covered = sum(instance.wbar[i][j] for i in items)
        if instance.sense == COVER:
            need = instance.dbar[j] - covered
            if need > instance.cbar[j]:
                return None
            alpha.append(Fraction(max(0, need)))
        else:
            room = instance.dbar[j] - covered
            if room < 0:
                return None
            alpha.append(Fraction(min(instance.cbar[j], room)))
    return tuple(alpha)


def mkc_ptas(instance: MkcInstance, cfg: PtasConfig, on_lp=None) -> MkcSolution:
    """(1+epsilon)-approximation for a cover-sense MkcInstance.

    Fixed items are seeded into every tried selection without counting
    against the enumeration budget.  ``on_lp`` (if given) receives
    (LpResult, free y-indices) for every relaxation solved.
    """
    if instance.sense != COVER:
        raise ValueError("mkc_ptas requires a cover-sense instance")
    fixed = instance.fixed_items
    free_lookup = frozenset(range(instance.eta)) - fixed
    best = None
    for chosen in _enumerated_subsets(instance, cfg):
        selection = fixed | frozenset(chosen)
        excluded = _exclusions(instance, chosen, free_lookup)
        residual = [
            instance.dbar[j]
            - instance.cbar[j]
            - sum(instance.wbar[i][j] for i in selection)
            for j in range(instance.mu)
        ]
        open_items = [i for i in free_lookup if i not in selection and i not in excluded]
        if any(
            sum(instance.wbar[i][j] for i in open_items) < residual[j]
            for j in range(instance.mu)
        ):
            continue  # the relaxation would be infeasible
        model, free_idx = build_lp(instance, selection, excluded)
        result = simplex.solve(model)
        if result.status != simplex.OPTIMAL:
            raise RuntimeError(f"relaxation unexpectedly {result.status}")
        if on_lp is not None:
            on_lp(result, free_idx)
        y = tuple(math.ceil(result.values[i]) for i in range(instance.eta))
        alpha = tuple(
            max(
                Fraction(0),
                instance.dbar[j]
                - sum(instance.wbar[i][j] for i in range(instance.eta) if y[i]),
            )
            for j in range(instance.mu)
        )
        value = sum(instance.fbar[i] for i in range(instance.eta) if y[i]) + sum(
            instance.vbar[j] * alpha[j] for j in range(instance.mu)
        )
        candidate = MkcSolution(y=y, alpha=alpha, value=value)
        bare_alpha = _closed_form_alpha(instance, selection)
        if bare_alpha is not None:
            bare_value = sum(instance.fbar[i] for i in selection) + sum(
                instance.vbar[j] * bare_alpha[j] for j in range(instance.mu)
            )
            if bare_value < candidate.value:
                bare_y = tuple(1 if i in selection else 0 for i in range(instance.eta))
                candidate = MkcSolution(y=bare_y, alpha=bare_alpha, value=bare_value)
        if best is None or candidate.value < best.value:
            best = candidate
    if best is None:
        raise InfeasibleInstanceError("no tried selection admits a feasible relaxation")
    return best


def mkp_ptas(instance: MkcInstance, cfg: PtasConfig, on_lp=None) -> MkcSolution:
    """(1+epsilon)-approximation for a pack-sense MkcInstance (maximization)."""
    if instance.sense != PACK:
        raise ValueError("mkp_ptas requires a pack-sense instance")
    if not instance.is_feasible():
        raise InfeasibleInstanceError("fixed items exceed some demand")
    fixed = instance.fixed_items
    free_lookup = frozenset(range(instance.eta)) - fixed
    best = None
    for chosen in _enumerated_subsets(instance, cfg):
        selection = fixed | frozenset(chosen)
        if any(
            sum(instance.wbar[i][j] for i in selection) > instance.dbar[j]
            for j in range(instance.mu)
        ):
            continue
        excluded = _exclusions(instance, chosen, free_lookup)
        model, free_idx = build_lp(instance, selection, excluded)
        result = simplex.solve(model)
        if result.status != simplex.OPTIMAL:
            raise RuntimeError(f"relaxation unexpectedly {result.status}")
        if on_lp is not None:
            on_lp(result, free_idx)
        y = tuple(math.floor(result.values[i]) for i in range(instance.eta))
        alpha = tuple(
            min(
                Fraction(instance.cbar[j]),
                max(
                    Fraction(0),
                    instance.dbar[j]
                    - sum(instance.wbar[i][j] for i in range(instance.eta) if y[i]),
                ),
            )
            for j in range(instance.mu)
        )
        value = sum(instance.fbar[i] for i in range(instance.eta) if y[i]) + sum(
            instance.vbar[j] * alpha[j] for j in range(instance.mu)
        )
        candidate = MkcSolution(y=y, alpha=alpha, value=value)
        bare_alpha = _closed_form_alpha(instance, selection)
        if bare_alpha is not None:
            bare_value = sum(instance.fbar[i] for i in selection) + sum(
                instance.vbar[j] * bare_alpha[j] for j in range(instance.mu)
            )
            if bare_value > candidate.value:
                bare_y = tuple(1 if i in selection else 0 for i in range(instance.eta))
                candidate = MkcSolution(y=bare_y, alpha=bare_alpha, value=bare_value)
        if best is None or candidate.value > best.value:
            best = candidate
    if best is None:
        raise InfeasibleInstanceError("no tried selection fits every demand")
    return best


def p_ptas(instance: CoverInstance, cfg: PtasConfig, g_cap: int = 10**6, on_lp=None) -> MixedSolution:
    """Approximation scheme for the parent program via the decomposition.

    Cover: value <= (1+epsilon) * optimum; pack: value >= optimum / (1+epsilon).
    Subproblems are tried for every choice function in lexicographic order,
    infeasible ones skipped, and the best lifted solution returned
    (first-found on ties).
    """
    if instance.sense == COVER:
        shortcut = zero_optimum(instance)
        if shortcut is not None:
            return shortcut
        inner = mkc_ptas
        better = lambda a, b: a < b
    else:
        inner = mkp_ptas
        better = lambda a, b: a > b
    best = None
    for g in enumerate_g(instance, cap=g_cap):
        sub = build_mkc(instance, g)
        if not sub.is_feasible():
            continue
        sol = inner(sub, cfg, on_lp=on_lp)
        if best is None or better(sol.value, best[1].value):
            best = (g, sol)
    if best is None:
        raise InfeasibleInstanceError("every subproblem of the decomposition is infeasible")
    return lift(instance, best[0], best[1])
