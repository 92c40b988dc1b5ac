"""Exact scalars and sparse linear algebra."""
from .scalars import (CycScalar, Scalar, as_field, cyclotomic_poly, euler_phi,
                      field_arith, format_scalar, parse_scalar, primitive_root)
from .linalg import (EchelonBasis, SingularMatrixError, SparseMat, SparseVec,
                     exact_det, nullspace, rank, rref, solve, vec_add, vec_iadd,
                     vec_scale, vec_sub)

__all__ = [
    "CycScalar", "Scalar", "as_field", "cyclotomic_poly", "euler_phi", "field_arith",
    "format_scalar", "parse_scalar", "primitive_root", "EchelonBasis",
    "SingularMatrixError", "SparseMat", "SparseVec", "exact_det", "nullspace", "rank",
    "rref", "solve", "vec_add", "vec_iadd", "vec_scale", "vec_sub",
]
