"""Gram and weighted matrices on the lowest Landau level.

The basis is ``φ_n = z^n e^{−Ψ} / sqrt(g_n)``, n = 0..N−1.  For a perturbed
field the functions are not orthonormal; the Gram matrix records that.
"""
from typing import Mapping, Optional

import numpy as np
import structlog
from numpy.typing import NDArray

from algebra.funcpoly import FuncPoly, ScalarSymbol
from fock.evaluation import eval_funcpoly
from fock.fields import FieldSpec
from fock.quadrature import BasisScaling, QuadratureGrid

logger = structlog.get_logger(__name__)

NON_REAL_TOLERANCE = 1e-12


class NonRealPotentialError(ValueError):
    """The weight of a Toeplitz-type form is not real."""


def radial_path_applies(spec: FieldSpec, poly: Optional[FuncPoly] = None) -> bool:
    """Radial fields and rotation-invariant weights give diagonal matrices."""
    return spec.is_radial and (poly is None or poly.is_rotation_invariant)


def _basis(spec: FieldSpec, N: int, grid: QuadratureGrid) -> NDArray[np.complex128]:
    z = grid.points()
    log_r = np.log(np.abs(z))
    psi = spec.scalar_potential(z)
    log_norms = BasisScaling(spec.B0, N).log_norms
    n = np.arange(N)[:, None]
    modulus = np.exp(n * log_r[None, :] - psi[None, :] - 0.5 * log_norms[:, None])
    return modulus * np.exp(1j * n * np.angle(z)[None, :])


def _radial_diagonal(
    spec: FieldSpec, N: int, grid: QuadratureGrid, weight: NDArray[np.float64]
) -> NDArray[np.complex128]:
    r = grid.r_nodes
    psi = spec.scalar_potential(r.astype(complex))
    log_norms = BasisScaling(spec.B0, N).log_norms
    n = np.arange(N)[:, None]
    density = np.exp(2 * n * np.log(r)[None, :] - 2 * psi[None, :] - log_norms[:, None])
    diagonal = density @ (grid.radial_weights() * weight)
    return np.diag(diagonal).astype(complex)


def _weight_values(
    poly: FuncPoly,
    spec: FieldSpec,
    z: NDArray[np.complex128],
    scalar_bindings: Optional[Mapping[ScalarSymbol, float]],
) -> NDArray[np.float64]:
    values = eval_funcpoly(poly, spec, z, scalar_bindings)
    if not poly.is_real:
        scale = max(1.0, float(np.max(np.abs(values.real), initial=0.0)))
        if np.max(np.abs(values.imag), initial=0.0) > NON_REAL_TOLERANCE * scale:
            raise NonRealPotentialError(f"weight {poly.pretty()} is not real")
    return values.real


def _assemble(
    spec: FieldSpec,
    N: int,
    grid: QuadratureGrid,
    poly: Optional[FuncPoly],
    scalar_bindings: Optional[Mapping[ScalarSymbol, float]],
) -> NDArray[np.complex128]:
    grid.check_resolves(spec, N)
    if radial_path_applies(spec, poly):
        r = grid.r_nodes.astype(complex)
        weight = np.ones(r.shape) if poly is None else _weight_values(poly, spec, r, scalar_bindings)
        matrix = _radial_diagonal(spec, N, grid, weight)
    else:
        z = grid.points()
        weights = grid.area_weights()
        if poly is not None:
            weights = weights * _weight_values(poly, spec, z, scalar_bindings)
        phi = _basis(spec, N, grid)
        matrix = (phi.conj() * weights[None, :]) @ phi.T
    logger.debug(
        "form matrix assembled",
        basis_size=N,
        radial=radial_path_applies(spec, poly),
        weight=None if poly is None else poly.pretty(),
    )
    return 0.5 * (matrix + matrix.conj().T)


def gram_matrix(spec: FieldSpec, N: int, grid: QuadratureGrid) -> NDArray[np.complex128]:
    """``G_mn = ∫ conj(φ_m) φ_n dA``."""
    return _assemble(spec, N, grid, None, None)


def weighted_matrix(
    poly: FuncPoly,
    spec: FieldSpec,
    N: int,
    grid: QuadratureGrid,
    scalar_bindings: Optional[Mapping[ScalarSymbol, float]] = None,
) -> NDArray[np.complex128]:
    """``M_mn = ∫ conj(φ_m) p φ_n dA`` for a real polynomial weight p."""
    return _assemble(spec, N, grid, poly, scalar_bindings)
