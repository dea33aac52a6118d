"""Exact certification of Gamma product formulas for Gauss hypergeometric functions.

The package decides when f(w) = 2F1(pw + a, 1/2; rw; x) with 0 < p < r admits
a closed Gamma product in w, assembles the product, and checks it numerically.
"""

__version__ = "0.1.0"

from .data import HALF, HyperData
from .exact import AlgebraicReal, UniPoly, alg_is_root, irreducibility_certify, sturm_count
from .algebraic import degree_classify, integer_invariants, localize_roots, x_of_s
from .certifier import (
    GpfCertificate,
    assemble_v,
    classify,
    dual,
    multiple,
    nsc_certify,
    reciprocal,
    search,
    square_symmetry,
)

__all__ = [
    "HALF",
    "AlgebraicReal",
    "GpfCertificate",
    "HyperData",
    "UniPoly",
    "alg_is_root",
    "assemble_v",
    "classify",
    "degree_classify",
    "dual",
    "integer_invariants",
    "irreducibility_certify",
    "localize_roots",
    "multiple",
    "nsc_certify",
    "reciprocal",
    "search",
    "square_symmetry",
    "sturm_count",
    "x_of_s",
]
