"""Decomposition into knapsack subproblems with one continuous variable per dimension.

For every choice g of one "fractional" item per constraint, the parent
program restricted to the structured solutions (pivot item strictly inside
its bounds, every other selected item pinned to one of its bounds) collapses
to an MkcInstance.  The minimum over all choices recovers the exact optimum.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceededError
from .instances import COVER, CoverInstance, MixedSolution, MkcInstance, MkcSolution


@dataclass(frozen=True)
class LCPartition:
    """Partition of the non-pivot items for one constraint.

    Items in ``L`` are pinned to their lower bound, items in ``C`` to their
    upper bound; the pivot item ``k`` keeps a free range.  Membership is by
    unit-cost comparison against the pivot, ties broken by item index, with
    the comparison direction flipped between cover and pack sense.
    """

    L: frozenset
    C: frozenset
    pivot: int
    dim: int


def lc_partition(instance: CoverInstance, k: int, j: int) -> LCPartition:
    """Compute the lower/upper pinned sets for pivot item k in dimension j."""
    if not 0 <= k < instance.n:
        raise ValueError(f"item index {k} out of range")
    if not 0 <= j < instance.m:
        raise ValueError(f"dimension index {j} out of range")
    vk = instance.v[k][j]
    lower, upper = set(), set()
    for i in range(instance.n):
        if i == k:
            continue
        vi = instance.v[i][j]
        if instance.sense == COVER:
            in_lower = vi > vk or (vi == vk and i < k)
        else:
            in_lower = vi < vk or (vi == vk and i > k)
        (lower if in_lower else upper).add(i)
    return LCPartition(L=frozenset(lower), C=frozenset(upper), pivot=k, dim=j)


def build_mkc(instance: CoverInstance, g) -> MkcInstance:
    """Materialize the knapsack subproblem for choice function g.

    g maps each dimension j to the pivot item g[j] (0-based).  The pivot's
    continuous slack alpha_j ranges over [0, c[g_j][j] - l[g_j][j]]; pinned
    items contribute their bound as weight; the per-unit costs of the pinned
    contributions are folded into the item fixed costs.  The pivots are
    recorded as fixed items (their selection is mandatory).
    """
    g = tuple(g)
    if len(g) != instance.m:
        raise ValueError(f"g must have length m={instance.m}")
    n, m = instance.n, instance.m
    w = [[0] * m for _ in range(n)]
    for j in range(m):
        k = g[j]
        part = lc_partition(instance, k, j)
        for i in range(n):
            if i == k:
                w[i][j] = instance.l[k][j]
            elif i in part.L:
                w[i][j] = instance.l[i][j]
            else:
                w[i][j] = instance.c[i][j]
    fbar = [
        instance.f[i] + sum(instance.v[i][j] * w[i][j] for j in range(m))
        for i in range(n)
    ]
    cbar = [instance.c[g[j]][j] - instance.l[g[j]][j] for j in range(m)]
    vbar = [instance.v[g[j]][j] for j in range(m)]
    return MkcInstance(
        sense=instance.sense,
        eta=n,
        mu=m,
        fbar=fbar,
        vbar=vbar,
        cbar=cbar,
        wbar=w,
        dbar=instance.d,
        fixed_items=frozenset(g),
    )


def enumerate_g(instance: CoverInstance, cap: int = 10**6):
    """Yield every choice function g in lexicographic order.

    Raises CapExceededError when n**m exceeds the cap.
    """
    total = instance.n ** instance.m
    if total > cap:
        raise CapExceededError(f"n^m = {total} exceeds enumeration cap {cap}")
    return itertools.product(range(instance.n), repeat=instance.m)


def lift(instance: CoverInstance, g, sub: MkcSolution) -> MixedSolution:
    """Map a subproblem solution back to a solution of the parent instance.

    The value is preserved exactly.  Raises ValueError when the subproblem
    solution does not select every pivot or is infeasible for build_mkc(g).
    """
    g = tuple(g)
    mkc = build_mkc(instance, g)
    n, m = instance.n, instance.m
    if len(sub.y) != n:
        raise ValueError("solution length does not match instance")
    for j in range(m):
        if sub.y[g[j]] != 1:
            raise ValueError(f"pivot item {g[j]} of dimension {j} is not selected")
    for j in range(m):
        alpha = sub.alpha[j]
        if not 0 <= alpha <= mkc.cbar[j]:
            raise ValueError(f"alpha[{j}] = {alpha} outside [0, {mkc.cbar[j]}]")
        covered = sum(mkc.wbar[i][j] for i in range(n) if sub.y[i])
        if instance.sense == COVER:
            if covered + alpha < mkc.dbar[j]:
                raise ValueError(f"subproblem solution violates dimension {j}")
        else:
            if covered + alpha > mkc.dbar[j]:
                raise ValueError(f"subproblem solution violates dimension {j}")
    x = [[Fraction(0)] * m for _ in range(n)]
    for j in range(m):
        k = g[j]
        part = lc_partition(instance, k, j)
        for i in range(n):
            if i == k:
                x[i][j] = sub.alpha[j] + instance.l[k][j]
            elif sub.y[i]:
                bound = instance.l[i][j] if i in part.L else instance.c[i][j]
                x[i][j] = Fraction(bound)
    value = sum(
        instance.v[i][j] * x[i][j] for i in range(n) for j in range(m)
    ) + sum(instance.f[i] for i in range(n) if sub.y[i])
    return MixedSolution(x=x, y=sub.y, value=Fraction(value))
