"""Exact verification and search for Poisson-type algebras with two products."""

__version__ = "0.1.0"

from .errors import DomainError, InputError
from .scalars import QQ, FieldSpec, Scalar, field_add, field_inv, field_mul, field_neg, parse_scalar
from .algebra import (
    BilinearOp,
    Element,
    LinearMap,
    TwoProductAlgebra,
    change_basis,
    eval_bilinear,
    eval_linear,
    is_associative,
    is_commutative,
    is_derivation,
    is_lie,
    is_right_leibniz,
    left_angle_jacobian,
    right_angle_jacobian,
    square_circle_jacobian,
    triple_circle,
)
from .taxonomy import (
    ALL_KINDS,
    AlphaSolution,
    AlphaStatus,
    AxiomReport,
    KindSpec,
    StructureKind,
    check,
    classify,
    classify_reports,
    kind_spec,
    solve_alpha,
)
from .census import CensusResult, CensusSpec, exhaustive_oracle, run_census
from .endv import SpaceShape, default_catalog, instantiate, survey
