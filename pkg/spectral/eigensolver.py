"""Generalized Hermitian eigenproblems ``A v = λ G v`` with basis deflation."""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
import structlog
from numpy.typing import NDArray
from scipy.linalg import cholesky, eigh, solve_triangular

logger = structlog.get_logger(__name__)

DEFLATION_THRESHOLD = 1e-10
TRUST_FACTOR = 1e-12


class IndefiniteGramError(ArithmeticError):
    """The Gram matrix has a clearly negative eigenvalue."""


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Eigenvalues of a pencil plus the information needed to trust them."""

    eigenvalues: NDArray[np.float64]
    trust_floor: float
    basis_size: int
    deflated: int = 0
    hamiltonian: bool = False
    eigenvectors: Optional[NDArray[np.complex128]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def trusted(self) -> NDArray[np.bool_]:
        return np.abs(self.eigenvalues) >= self.trust_floor

    def trusted_eigenvalues(self) -> NDArray[np.float64]:
        return self.eigenvalues[self.trusted]

    def to_json(self) -> Dict[str, Any]:
        return {
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "trusted": [bool(t) for t in self.trusted],
            "trust_floor": self.trust_floor,
            "basis_size": self.basis_size,
            "deflated": self.deflated,
            "ordering": "ascending" if self.hamiltonian else "descending",
            "metadata": self.metadata,
        }


def _order(values: NDArray[np.float64], hamiltonian: bool) -> NDArray[np.intp]:
    if hamiltonian:
        return np.argsort(values, kind="stable")
    return np.argsort(-np.abs(values), kind="stable")


def gen_eigensolve(
    A: NDArray[np.complex128],
    G: NDArray[np.complex128],
    hamiltonian: bool = False,
    deflation_threshold: float = DEFLATION_THRESHOLD,
    metadata: Optional[Dict[str, Any]] = None,
) -> SpectralResult:
    """Solve the pencil (A, G).

    Directions of G with eigenvalues below ``deflation_threshold·trace(G)/N``
    are projected out instead of failing; a clearly negative G is an error.
    Toeplitz results are ordered by decreasing modulus, Hamiltonian results
    ascending.
    """
    A = np.asarray(A, dtype=complex)
    G = np.asarray(G, dtype=complex)
    n = G.shape[0]
    if A.shape != G.shape or G.shape != (n, n):
        raise ValueError(f"shape mismatch: A {A.shape}, G {G.shape}")
    A = 0.5 * (A + A.conj().T)
    G = 0.5 * (G + G.conj().T)

    g_values, g_vectors = eigh(G)
    threshold = deflation_threshold * float(np.trace(G).real) / n
    if g_values[0] < -threshold:
        raise IndefiniteGramError(
            f"Gram matrix eigenvalue {g_values[0]:.3e} below −{threshold:.3e}"
        )
    keep = g_values > threshold
    deflated = int(n - np.count_nonzero(keep))

    if deflated == 0:
        lower = cholesky(G, lower=True)
        half = solve_triangular(lower, A, lower=True)
        reduced = solve_triangular(lower, half.conj().T, lower=True).conj().T
        values, vectors = eigh(0.5 * (reduced + reduced.conj().T))
        vectors = solve_triangular(lower.conj().T, vectors, lower=False)
    else:
        basis = g_vectors[:, keep] / np.sqrt(g_values[keep])[None, :]
        reduced = basis.conj().T @ A @ basis
        values, vectors = eigh(0.5 * (reduced + reduced.conj().T))
        vectors = basis @ vectors
        logger.info("gram matrix deflated", basis_size=n, deflated=deflated)

    order = _order(values, hamiltonian)
    values, vectors = values[order], vectors[:, order]
    floor = TRUST_FACTOR * float(np.max(np.abs(values), initial=0.0))
    return SpectralResult(
        eigenvalues=values,
        trust_floor=floor,
        basis_size=n,
        deflated=deflated,
        hamiltonian=hamiltonian,
        eigenvectors=vectors,
        metadata=dict(metadata or {}),
    )
