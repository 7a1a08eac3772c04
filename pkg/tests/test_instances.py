from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from covermip import instances
from covermip.exact import exact_p
from covermip.instances import COVER, PACK, CoverInstance, GenConfig


def _inst(**kw):
    base = dict(sense=COVER, n=1, m=1, v=[[0]], l=[[0]], c=[[1]], d=[1], f=[0])
    base.update(kw)
    return CoverInstance(**base)


def test_validate_minimal_ok():
    assert instances.validate(_inst()) == []


def test_validate_demand_below_upper_bound():
    violations = instances.validate(_inst(c=[[2]], d=[1]))
    assert any("d[0] >= c[0][0]" in v for v in violations)


def test_validate_generated_instance():
    inst = instances.generate(GenConfig(seed=7, n=4, m=2, coeff_max=9))
    assert instances.validate(inst) == []


def test_validate_rejects_bools_and_negatives():
    violations = instances.validate(_inst(f=[True]))
    assert violations
    violations = instances.validate(_inst(v=[[-1]]))
    assert violations


def test_generate_deterministic():
    cfg = GenConfig(seed=1, n=3, m=1, coeff_max=10)
    assert instances.generate(cfg) == instances.generate(cfg)


def test_generate_valid_and_feasible():
    inst = instances.generate(GenConfig(seed=2, n=5, m=2, coeff_max=20))
    assert instances.validate(inst) == []
    for j in range(inst.m):
        assert sum(inst.c[i][j] for i in range(inst.n)) >= inst.d[j]


def test_generate_seed_sensitivity():
    differing = sum(
        instances.generate(GenConfig(seed=s, n=5, m=2, coeff_max=20))
        != instances.generate(GenConfig(seed=s + 1, n=5, m=2, coeff_max=20))
        for s in range(2, 22)
    )
    assert differing >= 18


def test_generate_validity_sweep():
    for seed in range(1000):
        cfg = GenConfig(seed=seed, n=1 + seed % 6, m=1 + seed % 2, coeff_max=3 + seed % 17)
        assert instances.validate(instances.generate(cfg)) == []


@given(st.integers(min_value=0, max_value=2**63 - 1))
def test_generate_any_seed_valid(seed):
    cfg = GenConfig(seed=seed, n=3, m=2, coeff_max=7)
    assert instances.validate(instances.generate(cfg)) == []


def test_zero_optimum_all_free():
    inst = _inst(n=2, m=1, v=[[0], [0]], l=[[0], [0]], c=[[3], [3]], d=[3], f=[0, 0])
    sol = instances.zero_optimum(inst)
    assert sol is not None and sol.value == 0
    assert sol.y == (1, 1)


def test_zero_optimum_none_when_costly():
    inst = _inst(n=2, m=1, v=[[0], [0]], l=[[0], [0]], c=[[3], [3]], d=[3], f=[1, 1])
    assert instances.zero_optimum(inst) is None


def test_zero_optimum_respects_lower_bound_cost():
    # the zero-fixed-cost item pays v*l in dimension 1 when switched on, so
    # no zero-value solution exists even though its dimension-0 cost is free
    inst = CoverInstance(
        sense=COVER, n=1, m=2,
        v=[[0, 1]], l=[[0, 1]], c=[[2, 2]], d=[2, 2], f=[0],
    )
    assert instances.zero_optimum(inst) is None
    opt = exact_p(inst)
    assert opt is not None and opt.value > 0


def test_zero_optimum_agrees_with_exact(             ):
    for seed in range(150):
        inst = instances.generate(
            GenConfig(seed=seed, n=1 + seed % 6, m=1 + seed % 2, coeff_max=4)
        )
        claim = instances.zero_optimum(inst)
        opt = exact_p(inst)
        assert opt is not None
        assert (claim is not None) == (opt.value == 0), seed
        if claim is not None:
            _assert_feasible(inst, claim)


def _assert_feasible(inst, sol):
    for j in range(inst.m):
        assert sum(sol.x[i][j] for i in range(inst.n)) >= inst.d[j]
    for i in range(inst.n):
        for j in range(inst.m):
            assert inst.l[i][j] * sol.y[i] <= sol.x[i][j] <= inst.c[i][j] * sol.y[i]
    recomputed = sum(
        inst.v[i][j] * sol.x[i][j] for i in range(inst.n) for j in range(inst.m)
    ) + sum(inst.f[i] for i in range(inst.n) if sol.y[i])
    assert recomputed == sol.value


def test_json_round_trip():
    inst = instances.generate(GenConfig(seed=9, n=4, m=2, coeff_max=11, sense=PACK))
    assert instances.read_json(instances.write_json(inst)) == inst


@given(st.integers(min_value=0, max_value=10**6))
def test_json_round_trip_property(seed):
    inst = instances.generate(GenConfig(seed=seed, n=1 + seed % 5, m=1 + seed % 2, coeff_max=6))
    assert instances.read_json(instances.write_json(inst)) == inst


def test_json_missing_field_named():
    with pytest.raises(ValueError, match="'d'"):
        instances.read_json(
            '{"sense": "cover", "n": 1, "m": 1, "v": [[0]], "l": [[0]], "c": [[1]], "f": [0]}'
        )


def test_json_extra_field_rejected():
    doc = instances.write_json(_inst()).rstrip()[:-1] + ', "extra": 1}'
    with pytest.raises(ValueError, match="extra"):
        instances.read_json(doc)


def test_json_invariant_violation_rejected():
    with pytest.raises(ValueError, match="validation error"):
        instances.read_json(
            '{"sense": "cover", "n": 1, "m": 1, "v": [[0]], "l": [[0]], "c": [[2]], "d": [1], "f": [0]}'
        )
