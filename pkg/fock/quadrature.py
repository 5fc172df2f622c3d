"""Polar product quadrature adapted to the lowest-Landau-level basis."""
from dataclasses import dataclass
from math import log, pi, sqrt
from typing import List, Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.typing import NDArray
from scipy.special import gammaln

from fock.fields import FieldSpec

DEFAULT_TAIL_EPS = 1e-16


class QuadratureError(ValueError):
    """The quadrature cannot resolve the requested basis."""


def log_basis_norms(B0: float, N: int) -> NDArray[np.float64]:
    """``ln g_n`` with ``g_n = π n! (2/B0)^(n+1)``, n = 0..N−1."""
    n = np.arange(N, dtype=float)
    return log(pi) + gammaln(n + 1) + (n + 1) * log(2.0 / B0)


@dataclass(frozen=True)
class BasisScaling:
    """Reference norms ``g_n = ‖z^n e^{−B0|z|²/4}‖²`` of the basis; φ_n = z^n e^{−Ψ}/sqrt(g_n)."""

    B0: float
    N: int

    @property
    def log_norms(self) -> NDArray[np.float64]:
        return log_basis_norms(self.B0, self.N)

    @property
    def norms(self) -> NDArray[np.float64]:
        return np.exp(self.log_norms)


def required_radius(spec: FieldSpec, N: int, tail_eps: float = DEFAULT_TAIL_EPS) -> float:
    n_safe = max(N, 2)
    return spec.support_radius + sqrt(
        2.0 * (log(1.0 / tail_eps) + (N + 1) * log(n_safe)) / spec.B0
    )


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Composite Gauss–Legendre in r times the trapezoidal rule in θ."""

    r_nodes: NDArray[np.float64]
    r_weights: NDArray[np.float64]
    n_theta: int
    r_max: float
    edges: Tuple[float, ...]
    nodes_per_panel: int

    @classmethod
    def build(
        cls,
        spec: FieldSpec,
        N: int,
        nodes_per_panel: Optional[int] = None,
        n_theta: Optional[int] = None,
        tail_eps: float = DEFAULT_TAIL_EPS,
    ) -> "QuadratureGrid":
        r_max = required_radius(spec, N, tail_eps)
        cuts = [p for p in spec.breakpoints() if 0.0 < p < r_max]
        edges = tuple([0.0] + cuts + [r_max])
        return cls.from_edges(
            edges,
            nodes_per_panel or max(96, 2 * N + 48),
            n_theta or 4 * N + 16,
        )

    @classmethod
    def from_edges(cls, edges: Tuple[float, ...], nodes_per_panel: int, n_theta: int) -> "QuadratureGrid":
        x, w = leggauss(nodes_per_panel)
        nodes: List[NDArray[np.float64]] = []
        weights: List[NDArray[np.float64]] = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            nodes.append(lo + half * (x + 1.0))
            weights.append(half * w)
        return cls(
            r_nodes=np.concatenate(nodes),
            r_weights=np.concatenate(weights),
            n_theta=n_theta,
            r_max=edges[-1],
            edges=edges,
            nodes_per_panel=nodes_per_panel,
        )

    def refined(self) -> "QuadratureGrid":
        """Same panels with twice the nodes in both directions."""
        return QuadratureGrid.from_edges(self.edges, 2 * self.nodes_per_panel, 2 * self.n_theta)

    def extended(self, r_max: float) -> "QuadratureGrid":
        edges = tuple(e for e in self.edges[:-1] if e < r_max) + (r_max,)
        return QuadratureGrid.from_edges(edges, self.nodes_per_panel, self.n_theta)

    @property
    def thetas(self) -> NDArray[np.float64]:
        return 2.0 * pi * np.arange(self.n_theta) / self.n_theta

    def points(self) -> NDArray[np.complex128]:
        """Flattened quadrature points z = r e^{iθ}."""
        return (self.r_nodes[:, None] * np.exp(1j * self.thetas)[None, :]).ravel()

    def area_weights(self) -> NDArray[np.float64]:
        """Weights for ∫ f dA matching :meth:`points`."""
        radial = self.r_weights * self.r_nodes * (2.0 * pi / self.n_theta)
        return np.repeat(radial, self.n_theta)

    def radial_weights(self) -> NDArray[np.float64]:
        """Weights for ∫ f(r) 2πr dr."""
        return 2.0 * pi * self.r_weights * self.r_nodes

    def check_resolves(self, spec: FieldSpec, N: int, tail_eps: float = DEFAULT_TAIL_EPS) -> None:
        needed = required_radius(spec, N, tail_eps)
        if self.r_max < needed * (1.0 - 1e-12):
            raise QuadratureError(
                f"quadrature radius {self.r_max:.6g} below {needed:.6g} needed for N = {N}"
            )
        if self.n_theta < 4 * N + 16:
            raise QuadratureError(f"n_theta = {self.n_theta} < 4N + 16 = {4 * N + 16}")
