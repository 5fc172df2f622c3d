"""Splitting of a Landau level under magnetic and electric perturbations.

The trial space is ``Q̄^q span{φ_0..φ_(N−1)}``.  Both quadratic forms reduce to
weighted matrices of lowest-level functions:

    ((Q̄^q φ_m, Q̄^q φ_n))            = M[vacuum(Q^q Q̄^q)]
    (((P_− + V) Q̄^q φ_m, Q̄^q φ_n))  = M[vacuum(Q^q (Q̄Q + V) Q̄^q)]
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import pi
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from numpy.typing import NDArray

from algebra.funcpoly import Field, FuncPoly, ScalarSymbol
from algebra.operators import OpExpr, sandwich, vacuum_form
from algebra.potentials import Sign, effective_potential
from fock.evaluation import eval_funcpoly
from fock.fields import FieldSpec, SmoothnessError
from fock.matrices import radial_path_applies, weighted_matrix
from fock.quadrature import QuadratureGrid
from spectral.counting import CountingReport
from spectral.eigensolver import SpectralResult, gen_eigensolve
from spectral.pauli_oracle import RadialGrid, radial_pauli_oracle

logger = structlog.get_logger(__name__)


def landau_level(q: int, B0: float) -> float:
    return 2.0 * q * B0


@dataclass(frozen=True)
class WindowParameters:
    """Numerical Λ, s, μ, τ for one side of a Landau level."""

    level: float
    s: float
    mu: float
    tau: float

    @classmethod
    def of(cls, q: int, B0: float, lam: float, sign: Sign) -> "WindowParameters":
        sgn = Sign(sign).factor
        level = landau_level(q, B0)
        s = level + sgn * B0
        return cls(level=level, s=s, mu=0.5 * (level + sgn * lam + s), tau=0.5 * (B0 - lam))


def window_parameters(q: int, B0: float, lam: float, sign: Sign) -> WindowParameters:
    return WindowParameters.of(q, B0, lam, sign)


def required_smoothness(q: int) -> int:
    return 2 * q + 6


def require_smoothness(spec: FieldSpec, q: int) -> None:
    needed = required_smoothness(q)
    for name in (Field.B, Field.V):
        if spec.bumps(name) and spec.smoothness(name) < needed:
            raise SmoothnessError(
                f"level q = {q} needs bumps with k >= {needed}, "
                f"field {name.value} has k = {spec.smoothness(name)}"
            )


def landau_form_polys(q: int) -> Tuple[FuncPoly, FuncPoly]:
    """Symbolic weights (energy form, norm form) of the level-q trial space."""
    V = FuncPoly.atom(Field.V)
    energy = vacuum_form(sandwich(q, OpExpr.qbar() * OpExpr.q() + V))
    norm = vacuum_form(sandwich(q, 1))
    return energy, norm


def landau_form_matrices(
    q: int, spec: FieldSpec, N: int, grid: QuadratureGrid
) -> Tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Rayleigh–Ritz matrices (A, Bm) for P_− + V on Q̄^q span{φ_n}."""
    if q < 0:
        raise ValueError("q must be non-negative")
    require_smoothness(spec, q)
    energy, norm = landau_form_polys(q)
    A = weighted_matrix(energy, spec, N, grid)
    Bm = weighted_matrix(norm, spec, N, grid)
    return A, Bm


def ritz_spectrum(q: int, spec: FieldSpec, N: int, grid: QuadratureGrid) -> SpectralResult:
    A, Bm = landau_form_matrices(q, spec, N, grid)
    return _solve_forms(q, spec, A, Bm)


def _solve_forms(
    q: int, spec: FieldSpec, A: NDArray[np.complex128], Bm: NDArray[np.complex128]
) -> SpectralResult:
    return gen_eigensolve(
        A,
        Bm,
        hamiltonian=True,
        metadata={"q": q, "basis_size": A.shape[0], "field": spec.content_hash()},
    )


def sector_ritz_values(
    q: int, A: NDArray[np.complex128], Bm: NDArray[np.complex128]
) -> Dict[int, float]:
    """Ritz value of each sector m = n − q; the forms of a radial field are diagonal."""
    ratios = np.real(np.diag(A) / np.diag(Bm))
    return {m: float(ratios[m + q]) for m in sector_range(q, A.shape[0])}


@dataclass(frozen=True)
class SectorComparison:
    """Ritz value against the ODE eigenvalue of the same angular sector."""

    m: int
    ritz: float
    oracle: float

    @property
    def relative_error(self) -> float:
        if self.oracle == 0:
            return float("inf")
        return abs(self.ritz - self.oracle) / abs(self.oracle)


def compare_sectors(
    q: int, B0: float, ritz: Dict[int, float], sectors: Dict[int, List[float]]
) -> List[SectorComparison]:
    """Pair sectors holding exactly one window eigenvalue in both pipelines."""
    level = landau_level(q, B0)
    rows = []
    for m in sorted(sectors):
        value = ritz.get(m)
        if value is None or len(sectors[m]) != 1 or not level - B0 < value < level + B0:
            continue
        rows.append(SectorComparison(m, value, sectors[m][0]))
    return rows


@dataclass(frozen=True)
class SplitCounts:
    """N₊ and N₋ of one pipeline."""

    eigenvalues: List[float]
    plus: CountingReport
    minus: CountingReport


def count_split(
    eigenvalues: Sequence[float], q: int, B0: float, lambdas: Sequence[float]
) -> SplitCounts:
    """Count eigenvalues in (Λ + λ, s₊) and in (s₋, Λ − λ)."""
    level = landau_level(q, B0)
    upper, lower = level + B0, level - B0
    values = np.asarray(sorted(eigenvalues), dtype=float)
    grid = sorted((float(lam) for lam in lambdas), reverse=True)
    plus = [int(np.count_nonzero((values > level + lam) & (values < upper))) for lam in grid]
    minus = [int(np.count_nonzero((values > lower) & (values < level - lam))) for lam in grid]
    return SplitCounts(
        eigenvalues=[float(v) for v in values if lower < v < upper],
        plus=CountingReport(grid, plus, label="N+"),
        minus=CountingReport(grid, minus, label="N-"),
    )


def sector_range(q: int, N: int) -> range:
    """Angular momenta m = n − q reached by the trial functions Q̄^q z^n."""
    return range(-q, N - q)


def oracle_sector_eigenvalues(
    q: int,
    spec: FieldSpec,
    N: int,
    step: Optional[float] = None,
    threads: int = 1,
) -> Dict[int, List[float]]:
    """Per-sector ODE eigenvalues in (Λ − B0, Λ + B0), collected in sector order."""
    level = landau_level(q, spec.B0)
    window = (level - spec.B0, level + spec.B0)

    def solve(m: int) -> List[float]:
        grid = RadialGrid.auto(spec, q, m, step=step)
        return [float(v) for v in radial_pauli_oracle(spec, m, grid, window)]

    sectors = list(sector_range(q, N))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        results = list(executor.map(solve, sectors))
    return dict(zip(sectors, results))


@dataclass(frozen=True)
class PotentialInspection:
    """Extremes of W± over a disk, for judging where W± is bounded below."""

    sign: str
    radius: float
    lam: float
    minimum: float
    maximum: float


def inspect_effective_potential(
    q: int, spec: FieldSpec, sign: Sign, lam: float, radius: Optional[float] = None, points: int = 64
) -> PotentialInspection:
    radius = radius or spec.support_radius or 1.0
    w = effective_potential(q, sign, substitute=True)
    r = radius * (np.arange(points) + 0.5) / points
    theta = 2 * pi * np.arange(points) / points
    z = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    values = eval_funcpoly(w, spec, z, {ScalarSymbol.LAM: lam}).real
    return PotentialInspection(
        sign=Sign(sign).value,
        radius=radius,
        lam=lam,
        minimum=float(values.min()),
        maximum=float(values.max()),
    )


@dataclass(frozen=True)
class SplittingReport:
    q: int
    ritz: SplitCounts
    oracle: Optional[SplitCounts]
    sectors: Dict[int, List[float]] = field(default_factory=dict)
    inspections: List[PotentialInspection] = field(default_factory=list)
    comparisons: List[SectorComparison] = field(default_factory=list)

    @property
    def single_pipeline(self) -> bool:
        return self.oracle is None

    @property
    def pipelines_agree(self) -> Optional[bool]:
        if self.oracle is None:
            return None
        return (
            self.ritz.plus.counts == self.oracle.plus.counts
            and self.ritz.minus.counts == self.oracle.minus.counts
        )

    @property
    def worst_sector(self) -> Optional[SectorComparison]:
        if not self.comparisons:
            return None
        return max(self.comparisons, key=lambda row: row.relative_error)

    def sector_json(self) -> Optional[Dict[str, Any]]:
        if self.oracle is None:
            return None
        worst = self.worst_sector
        return {
            "rows": [
                {"m": row.m, "ritz": row.ritz, "oracle": row.oracle, "relative_error": row.relative_error}
                for row in self.comparisons
            ],
            "worst_m": worst.m if worst else None,
            "max_relative_error": worst.relative_error if worst else None,
            "N+_agree": self.ritz.plus.counts == self.oracle.plus.counts,
            "N-_agree": self.ritz.minus.counts == self.oracle.minus.counts,
        }

    def to_json(self) -> Dict[str, Any]:
        def pipeline(counts: Optional[SplitCounts]) -> Optional[Dict[str, Any]]:
            if counts is None:
                return None
            return {
                "eigenvalues": counts.eigenvalues,
                "N+": counts.plus.to_json(),
                "N-": counts.minus.to_json(),
            }

        return {
            "q": self.q,
            "single_pipeline": self.single_pipeline,
            "pipelines_agree": self.pipelines_agree,
            "ritz": pipeline(self.ritz),
            "oracle": pipeline(self.oracle),
            "sectors": self.sector_json(),
            "effective_potential": [vars(i) for i in self.inspections],
        }


def splitting_counts(
    q: int,
    spec: FieldSpec,
    lambdas: Sequence[float],
    N: int,
    grid: Optional[QuadratureGrid] = None,
    ode_step: Optional[float] = None,
    threads: int = 1,
    inspect: bool = True,
    forms: Optional[Tuple[NDArray[np.complex128], NDArray[np.complex128]]] = None,
) -> SplittingReport:
    """N±(λ) from Rayleigh–Ritz and, for radial fields, from the sector ODE.

    ``forms`` takes the already built (A, Bm) of ``landau_form_matrices``.
    """
    if forms is None:
        forms = landau_form_matrices(q, spec, N, grid or QuadratureGrid.build(spec, N))
    A, Bm = forms
    ritz = _solve_forms(q, spec, A, Bm)
    ritz_counts = count_split(ritz.eigenvalues, q, spec.B0, lambdas)

    oracle_counts: Optional[SplitCounts] = None
    sectors: Dict[int, List[float]] = {}
    comparisons: List[SectorComparison] = []
    if radial_path_applies(spec):
        sectors = oracle_sector_eigenvalues(q, spec, N, step=ode_step, threads=threads)
        flat = [value for m in sorted(sectors) for value in sectors[m]]
        oracle_counts = count_split(flat, q, spec.B0, lambdas)
        comparisons = compare_sectors(q, spec.B0, sector_ritz_values(q, A, Bm), sectors)
    else:
        logger.info("no independent oracle for non-radial fields", q=q)

    inspections = []
    if inspect and q >= 1:
        lam = min(lambdas)
        inspections = [inspect_effective_potential(q, spec, sign, lam) for sign in Sign]

    report = SplittingReport(q, ritz_counts, oracle_counts, sectors, inspections, comparisons)
    logger.info(
        "splitting counted",
        q=q,
        basis_size=N,
        single_pipeline=report.single_pipeline,
        pipelines_agree=report.pipelines_agree,
        worst_relative_error=report.worst_sector.relative_error if report.worst_sector else None,
    )
    return report
