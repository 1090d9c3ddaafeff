"""Exact certificates for the rank-one tensor ideals I_p on R^{n_1 x ... x n_d}."""

from .certificates import (
    build_J,
    dimension,
    primality_certificate,
    seidenberg_certificate,
    smoothness_certificate,
    squarefree_LT_certificate,
    squarefree_LT_certificate_for,
)
from .groebner import (
    GroebnerBasis,
    Limits,
    ResourceLimitError,
    buchberger,
    divide,
    eliminate,
    is_groebner_basis,
    reduce,
)
from .ideals import INF, IdealSpec, build_ideal, parse_p
from .numeric import numeric_summary, sample_rank_one
from .poly import GREVLEX, Polynomial, parse_polynomial
from .tensor_index import TensorShape

__all__ = [
    "GREVLEX", "INF", "GroebnerBasis", "IdealSpec", "Limits", "Polynomial", "ResourceLimitError",
    "TensorShape", "buchberger", "build_J", "build_ideal", "dimension", "divide", "eliminate",
    "is_groebner_basis", "numeric_summary", "parse_p", "parse_polynomial", "primality_certificate",
    "reduce", "sample_rank_one", "seidenberg_certificate", "smoothness_certificate",
    "squarefree_LT_certificate", "squarefree_LT_certificate_for",
]
