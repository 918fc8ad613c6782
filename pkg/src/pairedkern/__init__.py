"""Kernels of Toeplitz, paired and truncated Toeplitz operators on the unit
circle, for rational symbols and finite Blaschke products: an exact engine in
canonical multiplier form, cross-validated by a Fourier-truncation oracle."""

from .atto import (
    AttoSymbol,
    Triviality,
    atto_kernel_closed_form,
    build_finite_rank_symbol,
    corona_check,
    s_trivial_check,
    s_triviality_threshold,
)
from .factorization import (
    BlaschkeProduct,
    WienerHopfFactors,
    blaschke_from_rational,
    classify_zeros,
    inner_outer,
    wiener_hopf,
)
from .kernels import (
    Inclusion,
    KernelSpace,
    basis_completion,
    blaschke_dim_formula,
    intersect_inner,
    kernel_include,
    map_M,
    paired_kernel_full,
    paired_kernel_minus,
    paired_kernel_plus,
    toeplitz_kernel,
)
from .rational import (
    Polynomial,
    RationalFunction,
    SymbolPair,
    conj_reflect,
    poly_gcd,
    poly_roots,
    rational_cancel,
    winding_number,
)
from .symexpr import parse_blaschke, parse_rational, parse_symbol

__all__ = [
    "AttoSymbol",
    "BlaschkeProduct",
    "Inclusion",
    "KernelSpace",
    "Polynomial",
    "RationalFunction",
    "SymbolPair",
    "Triviality",
    "WienerHopfFactors",
    "atto_kernel_closed_form",
    "basis_completion",
    "blaschke_dim_formula",
    "blaschke_from_rational",
    "build_finite_rank_symbol",
    "classify_zeros",
    "conj_reflect",
    "corona_check",
    "inner_outer",
    "intersect_inner",
    "kernel_include",
    "map_M",
    "paired_kernel_full",
    "paired_kernel_minus",
    "paired_kernel_plus",
    "parse_blaschke",
    "parse_rational",
    "parse_symbol",
    "poly_gcd",
    "poly_roots",
    "rational_cancel",
    "s_trivial_check",
    "s_triviality_threshold",
    "toeplitz_kernel",
    "wiener_hopf",
    "winding_number",
]

__version__ = "0.1.0"
