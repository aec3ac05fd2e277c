"""Real Clifford algebras, the Clifford-Fourier transform and uncertainty checks."""

from .algebra import (
    Multivector,
    Signature,
    blade_mul,
    geometric_product,
    grade_project,
    modulus,
    outer_product,
    pairing,
    principle_reverse,
    scalar_product,
    star_tilde,
)
from .field import Grid, SampledField, directional_derivative, ibp_residual, inner, integrate, sample_field
from .expr import parse_scalar_expr
from .roots import (
    ValidatedRoot,
    complex_kernel,
    enumerate_blade_roots,
    kernel,
    split_commuting,
    validate_root,
)
from .transform import Spectrum, cft, cft_direct, cft_fast, frequency_grid, icft
from .uncertainty import (
    gaussian_fit,
    hardy_check,
    heisenberg_directional,
    heisenberg_equality_gap,
    heisenberg_full,
)

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "Multivector",
    "SampledField",
    "Signature",
    "Spectrum",
    "ValidatedRoot",
    "blade_mul",
    "cft",
    "cft_direct",
    "cft_fast",
    "complex_kernel",
    "directional_derivative",
    "enumerate_blade_roots",
    "frequency_grid",
    "gaussian_fit",
    "geometric_product",
    "grade_project",
    "hardy_check",
    "heisenberg_directional",
    "heisenberg_equality_gap",
    "heisenberg_full",
    "ibp_residual",
    "icft",
    "inner",
    "integrate",
    "kernel",
    "modulus",
    "outer_product",
    "pairing",
    "parse_scalar_expr",
    "principle_reverse",
    "sample_field",
    "scalar_product",
    "split_commuting",
    "star_tilde",
    "validate_root",
]
