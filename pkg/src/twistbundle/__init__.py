"""Twisted fiber-bundle CSS codes over group algebras F2[G]."""

from __future__ import annotations

__version__ = "0.1.0"

from .binlin import (
    BinMatrix,
    blockdiag,
    expand_bientry_matrix,
    gf2_inverse,
    gf2_mul,
    gf2_rank,
    is_monomial,
    kernel_basis,
    matrix_from_text,
    matrix_to_text,
    solve_in_image,
    transpose,
)
from .css import (
    CssCode,
    DistanceResult,
    IsoReport,
    assemble_css,
    check_weights,
    code_parameters,
    css_from_matrices,
    min_distance,
    verify_chain_iso,
)
from .errors import (
    ConstructionError,
    ElementParseError,
    FlatnessError,
    GroupMismatchError,
    GroupValidationError,
    OrthogonalityError,
    ShapeError,
    SingularMatrixError,
    SpecError,
    ValidationError,
)
from .group_algebra import (
    AlgElem,
    alg_add,
    alg_from_indices,
    alg_identity,
    alg_mul,
    alg_zero,
    antipode,
    format_element,
    left_regular,
    parse_element,
    right_regular,
)
from .group_core import Group, build_cyclic, build_dihedral, build_from_table
from .rchain import (
    BiEntry,
    FlatnessReport,
    RMatrix,
    TotalComplex,
    TwistData,
    TwistPair,
    build_lifted_product,
    build_twisted_complex,
    check_flatness,
    connection_from_group,
    is_invertible_twist,
    rmat_from_strings,
    rmat_identity,
    rmat_mul,
    rmat_scalar,
    rmat_to_strings,
    rmat_transpose,
    rmat_zeros,
)

__all__ = [
    "__version__",
    "AlgElem",
    "BiEntry",
    "BinMatrix",
    "ConstructionError",
    "CssCode",
    "DistanceResult",
    "ElementParseError",
    "FlatnessError",
    "FlatnessReport",
    "Group",
    "GroupMismatchError",
    "GroupValidationError",
    "IsoReport",
    "OrthogonalityError",
    "RMatrix",
    "ShapeError",
    "SingularMatrixError",
    "SpecError",
    "TotalComplex",
    "TwistData",
    "TwistPair",
    "ValidationError",
    "alg_add",
    "alg_from_indices",
    "alg_identity",
    "alg_mul",
    "alg_zero",
    "antipode",
    "assemble_css",
    "blockdiag",
    "build_cyclic",
    "build_dihedral",
    "build_from_table",
    "build_lifted_product",
    "build_twisted_complex",
    "check_flatness",
    "check_weights",
    "code_parameters",
    "connection_from_group",
    "css_from_matrices",
    "expand_bientry_matrix",
    "format_element",
    "gf2_inverse",
    "gf2_mul",
    "gf2_rank",
    "is_invertible_twist",
    "is_monomial",
    "kernel_basis",
    "left_regular",
    "matrix_from_text",
    "matrix_to_text",
    "min_distance",
    "parse_element",
    "right_regular",
    "rmat_from_strings",
    "rmat_identity",
    "rmat_mul",
    "rmat_scalar",
    "rmat_to_strings",
    "rmat_transpose",
    "rmat_zeros",
    "solve_in_image",
    "transpose",
    "verify_chain_iso",
]
