"""Lattice calculus for orthogonally additive kernel operators on R^n.

The package models operators T(x)_i = sum_j t_ij(x_j) built from scalar
kernels vanishing at zero, and computes their lattice structure pointwise:
Riesz-Kantorovich joins/meets, disjointness witnesses, and band projections
(onto increasing sets, principal bands, rank-one bands, and functionals),
all by exhaustive fragment/mask enumeration with deterministic tie-breaks.
"""

from .calculus import (
    DisjointnessWitness,
    RKResult,
    check_disjoint_iff,
    check_modulus_bound,
    disjoint_witness,
    rk_eval,
    rk_eval_separable,
    witness_products,
)
from .dsl import Model, Settings, build_operator, parse_model, render
from .errors import (
    BadCommand,
    C0Violation,
    DimensionMismatch,
    KernelEvalError,
    ModelSemanticError,
    ModelSyntaxError,
    NegativeU,
    NoStabilization,
    NotConverged,
    NotDisjoint,
    NotIncreasing,
    NotPositive,
    NotPositiveUnit,
    SupportTooLarge,
    UrysonError,
)
from .kernels import BuiltinKernel, FuncKernel, PwlKernel, ZERO_KERNEL
from .lattice import (
    IndexedFamily,
    Mask,
    Vector,
    band_project,
    fragments,
    order_limit_witness,
    principal_projection_sup_form,
    vec,
)
from .operators import (
    IntegralKernelSpec,
    KernelOperator,
    discretize_integral,
    evaluate,
    functional_value,
    modulus,
    negative_part,
    operator_add,
    operator_is_positive,
    operator_leq,
    operator_scale,
    positive_part,
    rank_one,
    validate,
    zero_operator,
)
from .projections import (
    EpsSchedule,
    IncreasingSet,
    PrincipalProjection,
    ProjectionResult,
    RankOneProjection,
    band_set_profile,
    masking_oracle,
    project_band_set,
    project_band_set_complement,
    project_functional,
    project_principal,
    project_rank_one,
)
from .suite import CHECK_IDS, run_suite

import types as _types

__version__ = "0.1.0"

__all__ = sorted(
    name
    for name, obj in globals().items()
    if not name.startswith("_") and not isinstance(obj, _types.ModuleType)
)
