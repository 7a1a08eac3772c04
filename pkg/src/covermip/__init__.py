"""Exact-rational toolkit for covering/packing mixed-integer programs.

Decomposes the program into knapsack subproblems with one continuous
variable per dimension, solves them exactly or by approximation schemes,
and builds tight or approximate LP formulations, all in exact arithmetic.
"""

from .errors import CapExceededError, HypothesisError, InfeasibleInstanceError
from .instances import (
    COVER,
    PACK,
    CoverInstance,
    GenConfig,
    MixedSolution,
    MkcInstance,
    MkcSolution,
    generate,
    read_json,
    validate,
    write_json,
    zero_optimum,
)
from .decompose import LCPartition, build_mkc, enumerate_g, lc_partition, lift
from .simplex import (
    Constraint,
    LinearModel,
    LpResult,
    Objective,
    Variable,
    count_fractional,
    replace_objective,
    solve,
)
from .exact import exact_mkc, exact_p
from .ptas import PtasConfig, mkc_ptas, mkp_ptas, p_ptas
from .fptas import DpTable, FptasConfig, PolyEta, dp, one_mkc_fptas, p1_fptas, scale
from .formulation import (
    HullYParams,
    SignatureSpace,
    UniformInstance,
    build_eps_1mkc,
    build_uniform_perfect,
    emit_lp,
    hull_y,
)

__version__ = "0.1.0"
