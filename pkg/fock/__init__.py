"""Numerical lowest-Landau-level toolkit: fields, quadrature, matrices and oracles."""
from fock.evaluation import UnboundSymbolError, eval_funcpoly
from fock.fields import FieldSpec, RadialBump, SmoothnessError, flux, scalar_potential
from fock.matrices import NonRealPotentialError, gram_matrix, weighted_matrix
from fock.oracle import (
    BumpProfile,
    CompositeProfile,
    DiskProfile,
    OracleSpectrum,
    oracle_spectrum,
    radial_toeplitz_oracle,
)
from fock.quadrature import BasisScaling, QuadratureError, QuadratureGrid

__all__ = [
    "BasisScaling",
    "BumpProfile",
    "CompositeProfile",
    "DiskProfile",
    "FieldSpec",
    "NonRealPotentialError",
    "OracleSpectrum",
    "QuadratureError",
    "QuadratureGrid",
    "RadialBump",
    "SmoothnessError",
    "UnboundSymbolError",
    "eval_funcpoly",
    "flux",
    "gram_matrix",
    "oracle_spectrum",
    "radial_toeplitz_oracle",
    "scalar_potential",
    "weighted_matrix",
]
