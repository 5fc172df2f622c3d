"""Radial finite-volume oracle for P_− + V in a single angular sector.

On ``e^{imθ} f(r)`` the operator acts as

    −f″ − f′/r + (m/r − A_θ)² f − B f + V f,   A_θ = Ψ′.

The discretization is cell centered (r_i = (i − ½)h) with a Dirichlet wall at
``R_big``; the symmetrized matrix is tridiagonal.
"""
from dataclasses import dataclass
from math import log, sqrt
from typing import Optional, Tuple

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy.linalg import eigh_tridiagonal

from fock.fields import FieldSpec

logger = structlog.get_logger(__name__)

DEFAULT_STEP = 0.005
WALL_TOLERANCE = 1e-8
MAX_DOUBLINGS = 3


class WindowError(ValueError):
    """The eigenvalue window is not inside a single Landau gap (Λ − B0, Λ + B0)."""


class OuterRadiusError(ArithmeticError):
    """Sector eigenvalues still move when the Dirichlet wall is pushed outwards."""


@dataclass(frozen=True)
class RadialGrid:
    """Cell width ``step`` (coarse grid) and outer Dirichlet radius."""

    step: float
    outer_radius: float

    @classmethod
    def auto(
        cls, spec: FieldSpec, q: int, m: int, step: Optional[float] = None, tail_eps: float = 1e-16
    ) -> "RadialGrid":
        power = abs(m) + 2 * q + 2 + abs(spec.flux)
        outer = (
            spec.support_radius
            + sqrt(2.0 * power / spec.B0)
            + sqrt(4.0 * log(1.0 / tail_eps) / spec.B0)
        )
        return cls(step=step or DEFAULT_STEP / sqrt(spec.B0), outer_radius=outer)

    def doubled(self) -> "RadialGrid":
        return RadialGrid(self.step, 2.0 * self.outer_radius)


def level_index(q: int, m: int) -> Optional[int]:
    """Position of the q-th Landau level in the ascending spectrum of sector m."""
    if m < -q:
        return None
    return q - max(0, -m)


def free_eigenvalue(B0: float, m: int, index: int) -> float:
    """Exact sector eigenvalue B0(2n + |m| − m) of the unperturbed problem."""
    return B0 * (2 * index + abs(m) - m)


def check_window(B0: float, window: Tuple[float, float]) -> int:
    """Return q with window ⊂ [Λ_q − B0, Λ_q + B0]."""
    lo, hi = window
    if not lo < hi:
        raise WindowError(f"empty window {window}")
    q = int(round(0.25 * (lo + hi) / B0))
    level = 2 * q * B0
    if lo < level - B0 or hi > level + B0 or q < 0:
        raise WindowError(
            f"window {window} leaves the gap ({level - B0:.6g}, {level + B0:.6g}) around Λ_{q}"
        )
    return q


def _sector_eigenvalues(spec: FieldSpec, m: int, step: float, outer: float, count: int) -> NDArray[np.float64]:
    cells = int(round(outer / step))
    r = (np.arange(1, cells + 1) - 0.5) * step
    faces = np.arange(1, cells) * step
    potential = (
        (m / r - spec.circulation(r)) ** 2 - spec.total_field(r) + spec.electric(r)
    )
    diagonal = 2.0 / step**2 + potential
    off = -faces / (step**2 * np.sqrt(r[:-1] * r[1:]))
    return eigh_tridiagonal(
        diagonal, off, eigvals_only=True, select="i", select_range=(0, count - 1)
    )


def _extrapolated(spec: FieldSpec, m: int, grid: RadialGrid, count: int) -> NDArray[np.float64]:
    coarse = _sector_eigenvalues(spec, m, grid.step, grid.outer_radius, count)
    fine = _sector_eigenvalues(spec, m, 0.5 * grid.step, grid.outer_radius, count)
    return (4.0 * fine - coarse) / 3.0


def _lowest(
    spec: FieldSpec, m: int, grid: RadialGrid, count: int, calibrate: bool
) -> NDArray[np.float64]:
    values = _extrapolated(spec, m, grid, count)
    if calibrate:
        reference = _extrapolated(spec.without_perturbations(), m, grid, count)
        exact = np.array([free_eigenvalue(spec.B0, m, j) for j in range(count)])
        values = values - (reference - exact)
    return values


def radial_pauli_oracle(
    spec: FieldSpec,
    m: int,
    grid: RadialGrid,
    window: Tuple[float, float],
    calibrate: bool = True,
    max_doublings: int = MAX_DOUBLINGS,
) -> NDArray[np.float64]:
    """Sector-m eigenvalues inside ``window``, Richardson extrapolated.

    With ``calibrate`` every eigenvalue is corrected by the discretization
    error of the same eigenvalue of the unperturbed problem (B = B0, V = 0)
    on the same grid.

    The wall is doubled until the eigenvalues move by less than
    ``WALL_TOLERANCE``; the values of the widest grid are returned.
    ``OuterRadiusError`` is raised if ``max_doublings`` doublings do not settle.
    """
    if not spec.is_radial:
        raise ValueError("the radial oracle needs all bumps centered at the origin")
    q = check_window(spec.B0, window)
    index = level_index(q, m)
    if index is None:
        return np.zeros(0)
    count = index + 2
    values = _lowest(spec, m, grid, count, calibrate)
    shift = np.inf
    for _ in range(max_doublings):
        wider = grid.doubled()
        moved = _lowest(spec, m, wider, count, calibrate)
        shift = float(np.max(np.abs(moved - values)))
        grid, values = wider, moved
        if shift < WALL_TOLERANCE:
            break
    else:
        raise OuterRadiusError(
            f"sector m = {m}: eigenvalues moved by {shift:.3g} when the wall was pushed "
            f"to R = {grid.outer_radius:.6g}"
        )
    lo, hi = window
    inside = values[(values > lo) & (values < hi)]
    logger.debug(
        "sector solved",
        m=m,
        q=q,
        outer_radius=grid.outer_radius,
        wall_shift=shift,
        found=len(inside),
    )
    return inside
