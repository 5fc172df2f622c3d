"""Exact commutation algebra of the magnetic creation/annihilation operators."""
from algebra.coefficients import GaussianRational
from algebra.funcpoly import Field, FieldAtom, FuncPoly, Monomial, ScalarSymbol, weight_of
from algebra.operators import (
    Func,
    OpExpr,
    OpLetter,
    OpWord,
    Q,
    QBAR,
    adjoint,
    normal_order,
    sandwich,
    vacuum_form,
)
from algebra.potentials import (
    DerivedPotential,
    LinDiffOp,
    PotentialComparison,
    Sign,
    StructureError,
    apply,
    compare_effective_potentials,
    derive_effective_potential,
    effective_potential,
    landau_constant,
    structure_report,
    x_op,
    y_op,
    z_poly,
)

__all__ = [
    "DerivedPotential",
    "Field",
    "FieldAtom",
    "Func",
    "FuncPoly",
    "GaussianRational",
    "LinDiffOp",
    "Monomial",
    "OpExpr",
    "OpLetter",
    "OpWord",
    "PotentialComparison",
    "Q",
    "QBAR",
    "ScalarSymbol",
    "Sign",
    "StructureError",
    "adjoint",
    "apply",
    "compare_effective_potentials",
    "derive_effective_potential",
    "effective_potential",
    "landau_constant",
    "normal_order",
    "sandwich",
    "structure_report",
    "vacuum_form",
    "weight_of",
    "x_op",
    "y_op",
    "z_poly",
]
