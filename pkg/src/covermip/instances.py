"""Problem data types, invariant checking, JSON round-trip and seeded generation.

All instance data are nonnegative Python ints; solution values are exact
``fractions.Fraction`` so that approximation-ratio and tightness comparisons
never involve floating point.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

COVER = "cover"
PACK = "pack"
SENSES = (COVER, PACK)

_JSON_KEYS = ("sense", "n", "m", "v", "l", "c", "d", "f")


def _tuplize_matrix(rows):
    return tuple(tuple(row) for row in rows)


@dataclass(frozen=True)
class CoverInstance:
    """A covering (or packing) mixed-integer program over n items and m constraints.

    Item i selected (y_i = 1) makes x_ij available in [l[i][j], c[i][j]] at
    unit cost v[i][j] plus fixed cost f[i]; each constraint j carries demand
    d[j].  The packing twin reuses the same data with the demand row flipped
    and the objective maximized.
    """

    sense: str
    n: int
    m: int
    v: tuple
    l: tuple
    c: tuple
    d: tuple
    f: tuple

    def __post_init__(self):
        object.__setattr__(self, "v", _tuplize_matrix(self.v))
        object.__setattr__(self, "l", _tuplize_matrix(self.l))
        object.__setattr__(self, "c", _tuplize_matrix(self.c))
        object.__setattr__(self, "d", tuple(self.d))
        object.__setattr__(self, "f", tuple(self.f))


@dataclass(frozen=True)
class MkcInstance:
    """A multidimensional knapsack cover/packing subproblem.

    One continuous variable alpha_j in [0, cbar[j]] per dimension j; item i
    costs fbar[i] and covers wbar[i][j] in dimension j.  ``fixed_items`` are
    selections forced to 1 (attached by the decomposition so that subproblem
    indices stay aligned with the parent instance).
    """

    sense: str
    eta: int
    mu: int
    fbar: tuple
    vbar: tuple
    cbar: tuple
    wbar: tuple
    dbar: tuple
    fixed_items: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "fbar", tuple(self.fbar))
        object.__setattr__(self, "vbar", tuple(self.vbar))
        object.__setattr__(self, "cbar", tuple(self.cbar))
        object.__setattr__(self, "wbar", _tuplize_matrix(self.wbar))
        object.__setattr__(self, "dbar", tuple(self.dbar))
        object.__setattr__(self, "fixed_items", frozenset(self.fixed_items))

    @property
    def degenerate_dims(self):
        """Dimensions whose continuous variable is forced to 0 (cbar_j = 0)."""
        return tuple(j for j in range(self.mu) if self.cbar[j] == 0)

    def is_feasible(self):
        """Whether any selection satisfies every dimension.

        Cover: the all-ones selection must reach d - c.  Pack: the forced
        selections alone must fit under every demand.
        """
        if self.sense == COVER:
            return all(
                sum(self.wbar[i][j] for i in range(self.eta)) >= self.dbar[j] - self.cbar[j]
                for j in range(self.mu)
            )
        return all(
            sum(self.wbar[i][j] for i in self.fixed_items) <= self.dbar[j]
            for j in range(self.mu)
        )


@dataclass(frozen=True)
class MixedSolution:
    """A solution (x, y) of a CoverInstance with its exact objective value."""

    x: tuple
    y: tuple
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", _tuplize_matrix(self.x))
        object.__setattr__(self, "y", tuple(self.y))
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class MkcSolution:
    """A solution (y, alpha) of an MkcInstance with its exact objective value."""

    y: tuple
    alpha: tuple
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(self.y))
        object.__setattr__(self, "alpha", tuple(Fraction(a) for a in self.alpha))
        object.__setattr__(self, "value", Fraction(self.value))

    @property
    def selected(self):
        return frozenset(i for i, yi in enumerate(self.y) if yi)


@dataclass(frozen=True)
class GenConfig:
    """Parameters of the seeded random instance generator."""

    seed: int
    n: int
    m: int
    coeff_max: int
    sense: str = COVER


def _is_nonneg_int(x):
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def validate(instance: CoverInstance):
    """Check every instance invariant; return a list of violation strings.

    The empty list means the instance is valid.  Violations are data, not
    errors: each entry names the offending index pair and the failed rule.
    """
    out = []
    if instance.sense not in SENSES:
        out.append(f"sense must be one of {SENSES}, got {instance.sense!r}")
    if not (isinstance(instance.n, int) and instance.n >= 1):
        out.append(f"n must be a positive integer, got {instance.n!r}")
        return out
    if not (isinstance(instance.m, int) and instance.m >= 1):
        out.append(f"m must be a positive integer, got {instance.m!r}")
        return out
    n, m = instance.n, instance.m
    for name, mat in (("v", instance.v), ("l", instance.l), ("c", instance.c)):
        if len(mat) != n or any(len(row) != m for row in mat):
            out.append(f"{name} must be an {n}x{m} matrix")
            return out
    if len(instance.d) != m:
        out.append(f"d must have length {m}")
        return out
    if len(instance.f) != n:
        out.append(f"f must have length {n}")
        return out
    for name, mat in (("v", instance.v), ("l", instance.l), ("c", instance.c)):
        for i in range(n):
            for j in range(m):
                if not _is_nonneg_int(mat[i][j]):
                    out.append(f"{name}[{i}][{j}] must be a nonnegative integer")
    for j in range(m):
        if not _is_nonneg_int(instance.d[j]):
            out.append(f"d[{j}] must be a nonnegative integer")
    for i in range(n):
        if not _is_nonneg_int(instance.f[i]):
            out.append(f"f[{i}] must be a nonnegative integer")
    if out:
        return out
    for i in range(n):
        for j in range(m):
            if instance.c[i][j] < instance.l[i][j]:
                out.append(f"c[{i}][{j}] >= l[{i}][{j}] fails ({instance.c[i][j]} < {instance.l[i][j]})")
            if instance.d[j] < instance.c[i][j]:
                out.append(f"d[{j}] >= c[{i}][{j}] fails ({instance.d[j]} < {instance.c[i][j]})")
    return out


def zero_optimum(instance: CoverInstance):
    """O(nm) test for a zero-cost cover; returns the solution or None.

    An item can be switched on for free only when every dimension with a
    positive unit cost also has a zero lower bound (otherwise selecting it
    forces paid coverage).  Restricting to those items makes the test exact:
    a solution is returned if and only if the optimum is 0, and the returned
    solution is always feasible.
    """
    if instance.sense != COVER:
        raise ValueError("zero_optimum requires a cover-sense instance")
    n, m = instance.n, instance.m
    free = [
        i
        for i in range(n)
        if instance.f[i] == 0
        and all(instance.v[i][j] == 0 or instance.l[i][j] == 0 for j in range(m))
    ]
    free_set = set(free)
    for j in range(m):
        covered = sum(instance.c[i][j] for i in free if instance.v[i][j] == 0)
        if covered < instance.d[j]:
            return None
    y = tuple(1 if i in free_set else 0 for i in range(n))
    x = tuple(
        tuple(
            Fraction(instance.c[i][j]) if (i in free_set and instance.v[i][j] == 0) else Fraction(0)
            for j in range(m)
        )
        for i in range(n)
    )
    return MixedSolution(x=x, y=y, value=Fraction(0))


def generate(config: GenConfig) -> CoverInstance:
    """Deterministically generate a valid instance from the seed.

    Demands are drawn first, upper bounds at most the demand, lower bounds at
    most the upper bound.  Cover instances are made feasible by redrawing
    d_j into [max_i c_ij, sum_i c_ij] whenever the items cannot reach it.
    """
    if config.coeff_max < 1:
        raise ValueError("coeff_max must be >= 1")
    if config.sense not in SENSES:
        raise ValueError(f"sense must be one of {SENSES}")
    rng = random.Random(config.seed)
    n, m, cmax = config.n, config.m, config.coeff_max
    d = [rng.randint(1, cmax) for _ in range(m)]
    c = [[rng.randint(0, d[j]) for j in range(m)] for _ in range(n)]
    l = [[rng.randint(0, c[i][j]) for j in range(m)] for i in range(n)]
    v = [[rng.randint(0, cmax) for _ in range(m)] for _ in range(n)]
    f = [rng.randint(0, cmax) for _ in range(n)]
    if config.sense == COVER:
        for j in range(m):
            total = sum(c[i][j] for i in range(n))
            if total < d[j]:
                d[j] = rng.randint(max(c[i][j] for i in range(n)), total)
    return CoverInstance(sense=config.sense, n=n, m=m, v=v, l=l, c=c, d=d, f=f)


def write_json(instance: CoverInstance) -> str:
    """Serialize to the canonical JSON document (deterministic bytes)."""
    doc = {
        "sense": instance.sense,
        "n": instance.n,
        "m": instance.m,
        "v": [list(row) for row in instance.v],
        "l": [list(row) for row in instance.l],
        "c": [list(row) for row in instance.c],
        "d": list(instance.d),
        "f": list(instance.f),
    }
    return json.dumps(doc, indent=2) + "\n"


def read_json(text: str) -> CoverInstance:
    """Parse and validate an instance document.

    Raises ValueError with the offending field on malformed documents and
    with the full violation list on invariant failures.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"parse error: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ValueError("parse error: top-level value must be an object")
    for key in _JSON_KEYS:
        if key not in doc:
            raise ValueError(f"parse error: missing field {key!r}")
    extra = sorted(set(doc) - set(_JSON_KEYS))
    if extra:
        raise ValueError(f"parse error: unexpected field(s) {', '.join(map(repr, extra))}")
    if not isinstance(doc["sense"], str):
        raise ValueError("parse error: field 'sense' must be a string")
    for key in ("n", "m"):
        if not _is_nonneg_int(doc[key]):
            raise ValueError(f"parse error: field {key!r} must be a nonnegative integer")
    for key in ("v", "l", "c"):
        mat = doc[key]
        if not (isinstance(mat, list) and all(isinstance(row, list) for row in mat)):
            raise ValueError(f"parse error: field {key!r} must be a list of lists")
    for key in ("d", "f"):
        if not isinstance(doc[key], list):
            raise ValueError(f"parse error: field {key!r} must be a list")
    instance = CoverInstance(
        sense=doc["sense"], n=doc["n"], m=doc["m"],
        v=doc["v"], l=doc["l"], c=doc["c"], d=doc["d"], f=doc["f"],
    )
    violations = validate(instance)
    if violations:
        raise ValueError("validation error: " + "; ".join(violations))
    return instance
