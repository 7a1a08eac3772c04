"""Exhaustive exact solvers for desk-scale instances.

These are the ground truth for every approximation-ratio and formulation
tightness test: plain enumeration plus a per-dimension greedy fill that is
optimal for a fixed selection because each dimension is a separate linear
subproblem.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import CapExceededError
from .instances import COVER, CoverInstance, MixedSolution, MkcInstance, MkcSolution


def _clamp(x, lo, hi):
    return max(lo, min(hi, x))


def exact_mkc(instance: MkcInstance, cap: int = 20):
    """Optimal MkcSolution by enumerating all selections, or None if infeasible.

    Selections must contain the instance's fixed items.  For each selection
    the continuous variables are set to their optimal closed-form values
    (cover: just enough to meet the residual demand; pack: as high as fits).
    Ties are broken toward the lexicographically smallest selection.
    """
    eta, mu = instance.eta, instance.mu
    if eta > cap:
        raise CapExceededError(f"eta = {eta} exceeds enumeration cap {cap}")
    fixed_mask = 0
    for i in instance.fixed_items:
        fixed_mask |= 1 << i
    cover = instance.sense == COVER
    best = None
    best_key = None
    for mask in range(1 << eta):
        if mask & fixed_mask != fixed_mask:
            continue
        items = [i for i in range(eta) if mask >> i & 1]
        alpha = []
        feasible = True
        for j in range(mu):
            covered = sum(instance.wbar[i][j] for i in items)
            if cover:
                need = instance.dbar[j] - covered
                if need > instance.cbar[j]:
                    feasible = False
                    break
                alpha.append(Fraction(_clamp(need, 0, instance.cbar[j])))
            else:
                room = instance.dbar[j] - covered
                if room < 0:
                    feasible = False
                    break
                alpha.append(Fraction(min(instance.cbar[j], room)))
        if not feasible:
            continue
        value = sum(instance.fbar[i] for i in items) + sum(
            instance.vbar[j] * alpha[j] for j in range(mu)
        )
        key = (value, tuple(items)) if cover else (-value, tuple(items))
        if best_key is None or key < best_key:
            best_key = key
            y = tuple(1 if mask >> i & 1 else 0 for i in range(eta))
            best = MkcSolution(y=y, alpha=tuple(alpha), value=Fraction(value))
    return best


def _fill_dimension_cover(instance, items, j):
    """Cheapest x column meeting demand j for a fixed selection, or None."""
    x = {i: Fraction(instance.l[i][j]) for i in items}
    total = sum(x.values())
    if total < instance.d[j]:
        order = sorted(items, key=lambda i: (instance.v[i][j], i))
        for i in order:
            room = instance.c[i][j] - x[i]
            take = min(room, instance.d[j] - total)
            if take > 0:
                x[i] += take
                total += take
            if total >= instance.d[j]:
                break
        if total < instance.d[j]:
            return None
    return x


def _fill_dimension_pack(instance, items, j):
    """Most valuable x column fitting demand j for a fixed selection, or None."""
    x = {i: Fraction(instance.l[i][j]) for i in items}
    total = sum(x.values())
    if total > instance.d[j]:
        return None
    order = sorted(items, key=lambda i: (-instance.v[i][j], i))
    for i in order:
        if instance.v[i][j] == 0:
            break
        take = min(instance.c[i][j] - x[i], instance.d[j] - total)
        if take > 0:
            x[i] += take
            total += take
    return x


def exact_p(instance: CoverInstance, cap: int = 16):
    """Optimal MixedSolution by enumerating selections, or None if infeasible.

    For each selection y the dimensions separate and a greedy fill by unit
    cost (ascending for cover, descending for pack; ties by item index) is
    optimal.  Deterministic: selections are scanned in ascending bitmask
    order and only strict improvements are kept.
    """
    n, m = instance.n, instance.m
    if n > cap:
        raise CapExceededError(f"n = {n} exceeds enumeration cap {cap}")
    cover = instance.sense == COVER
    fill = _fill_dimension_cover if cover else _fill_dimension_pack
    best = None
    for mask in range(1 << n):
        items = [i for i in range(n) if mask >> i & 1]
        columns = []
        feasible = True
        for j in range(m):
            col = fill(instance, items, j)
            if col is None:
                feasible = False
                break
            columns.append(col)
        if not feasible:
            continue
        value = Fraction(sum(instance.f[i] for i in items))
        for j in range(m):
            value += sum(instance.v[i][j] * columns[j][i] for i in items)
        if best is None or (value < best[0] if cover else value > best[0]):
            x = tuple(
                tuple(columns[j].get(i, Fraction(0)) for j in range(m))
                for i in range(n)
            )
            y = tuple(1 if mask >> i & 1 else 0 for i in range(n))
            best = (value, MixedSolution(x=x, y=y, value=value))
    return best[1] if best else None
