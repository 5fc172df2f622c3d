"""Numerical evaluation of symbolic field polynomials."""
from typing import Dict, Mapping, Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from algebra.funcpoly import Field, FieldAtom, FuncPoly, ScalarSymbol
from fock.fields import FieldSpec, SmoothnessError


class UnboundSymbolError(KeyError):
    """A scalar or field has no numerical value."""


def check_smoothness(poly: FuncPoly, spec: FieldSpec) -> None:
    for atom in poly.atoms():
        if atom.field == Field.U:
            continue
        needed = atom.order + 1
        if spec.bumps(atom.field) and spec.smoothness(atom.field) < needed:
            raise SmoothnessError(
                f"{atom.pretty()} needs bumps with k >= {needed}, "
                f"got k = {spec.smoothness(atom.field)}"
            )


def eval_funcpoly(
    poly: FuncPoly,
    spec: FieldSpec,
    z: ArrayLike,
    scalar_bindings: Optional[Mapping[ScalarSymbol, float]] = None,
) -> NDArray[np.complex128]:
    """Evaluate ``poly`` at the points ``z``; B0 is bound from ``spec``."""
    z = np.asarray(z, dtype=complex)
    bindings: Dict[ScalarSymbol, float] = {ScalarSymbol.B0: spec.B0}
    bindings.update(scalar_bindings or {})
    for symbol in poly.scalars():
        if symbol not in bindings:
            raise UnboundSymbolError(f"scalar {symbol.value} is not bound")
    if Field.U in poly.fields():
        raise UnboundSymbolError("the test function U has no numerical values")
    check_smoothness(poly, spec)

    atom_values: Dict[FieldAtom, NDArray[np.complex128]] = {
        atom: spec.field_derivative(atom.field, atom.d, atom.dbar, z) for atom in poly.atoms()
    }
    result = np.zeros_like(z)
    for mono in poly.monomials():
        term = np.full_like(z, mono.coeff.to_complex())
        for symbol, power in mono.scalars:
            term = term * bindings[symbol] ** power
        for atom, power in mono.atoms:
            term = term * atom_values[atom] ** power
        result = result + term
    return result
