"""Counting functions and decay diagnostics for accumulating eigenvalues."""
from dataclasses import dataclass, field
from math import e, exp, log
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray
from scipy.special import gammaln

from fock.oracle import OracleSpectrum
from spectral.eigensolver import SpectralResult

XI_DOMAIN_END = exp(-e)


class XiDomainError(ValueError):
    """Ξ(λ) is only defined for 0 < λ < e^{−e}."""


def xi(lam: float) -> float:
    """Ξ(λ) = ½|ln λ| / ln|ln λ|."""
    if not 0.0 < lam < XI_DOMAIN_END:
        raise XiDomainError(f"Ξ needs 0 < λ < e^(−e), got {lam!r}")
    magnitude = abs(log(lam))
    return 0.5 * magnitude / log(magnitude)


def _xi_or_nan(lam: float) -> float:
    return xi(lam) if 0.0 < lam < XI_DOMAIN_END else float("nan")


def _oracle_ratio(count: int, lam: float) -> float:
    magnitude = abs(log(lam))
    if magnitude <= 1.0:
        return float("nan")
    return count * log(magnitude) / magnitude


Source = Union[SpectralResult, OracleSpectrum]


def _log_positive(source: Source) -> NDArray[np.float64]:
    """ln λ_n of the positive branch, in decreasing order."""
    if isinstance(source, OracleSpectrum):
        logs = source.log_abs[source.signs > 0]
    else:
        values = source.trusted_eigenvalues()
        values = values[values > 0]
        logs = np.log(values)
    return np.sort(logs)[::-1]


def _log_negative(source: Source) -> NDArray[np.float64]:
    if isinstance(source, OracleSpectrum):
        logs = source.log_abs[source.signs < 0]
    else:
        values = source.trusted_eigenvalues()
        logs = np.log(-values[values < 0])
    return np.sort(logs)[::-1]


@dataclass(frozen=True)
class DecayDiagnostic:
    """``s_n = (n! λ_n)^{1/n}`` for n ≥ 1 together with labeled reference constants."""

    n: List[int]
    s: List[float]
    references: Dict[str, float] = field(default_factory=dict)


def decay_diagnostic(
    source: Source, B0: Optional[float] = None, disk_radius: Optional[float] = None
) -> DecayDiagnostic:
    """Log-domain ``exp((lgamma(n+1) + ln λ_n)/n)`` on the positive branch.

    For a spectral result only eigenvalues above the trust floor are used, so
    the list ends at the floor index.
    """
    logs = _log_positive(source)
    indices = list(range(1, len(logs)))
    s = [float(np.exp((gammaln(n + 1) + logs[n]) / n)) for n in indices]
    references: Dict[str, float] = {}
    if B0 is not None and disk_radius is not None:
        references["disk_limit_B0_R2_over_2"] = 0.5 * B0 * disk_radius**2
        references["printed_bound_B0_over_2_times_capacity"] = 0.5 * B0 * disk_radius
    return DecayDiagnostic(n=indices, s=s, references=references)


@dataclass(frozen=True)
class CountingReport:
    """Counts n(λ) = #{λ_n > λ} on a decreasing λ grid."""

    lambdas: List[float]
    counts: List[int]
    label: str = "n+"
    counts_minus: Optional[List[int]] = None

    @property
    def xi(self) -> List[float]:
        return [_xi_or_nan(lam) for lam in self.lambdas]

    @property
    def ratio_xi(self) -> List[float]:
        return [count / x for count, x in zip(self.counts, self.xi)]

    @property
    def ratio_oracle(self) -> List[float]:
        return [_oracle_ratio(count, lam) for count, lam in zip(self.counts, self.lambdas)]

    @property
    def singular_counts(self) -> List[int]:
        """n(λ) = n₊(λ) + n₋(λ)."""
        minus = self.counts_minus or [0] * len(self.counts)
        return [p + m for p, m in zip(self.counts, minus)]

    def rows(self) -> List[Dict[str, Any]]:
        rows = []
        for i, lam in enumerate(self.lambdas):
            rows.append(
                {
                    "lambda": lam,
                    "count": self.counts[i],
                    "xi": self.xi[i],
                    "ratio_paper": self.ratio_xi[i],
                    "ratio_oracle": self.ratio_oracle[i],
                }
            )
        return rows

    def to_json(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"label": self.label, "rows": self.rows()}
        if self.counts_minus is not None:
            payload["counts_minus"] = self.counts_minus
        return payload


def _count(logs_desc: NDArray[np.float64], lam: float) -> int:
    # logs_desc sorted decreasing; strict inequality λ_n > λ
    ascending = logs_desc[::-1]
    return int(len(ascending) - np.searchsorted(ascending, log(lam), side="right"))


def lambda_grid(start: float, stop: float, num: int) -> List[float]:
    """Geometric grid from ``start`` down to ``stop``."""
    if not (start > 0 and stop > 0 and num >= 1):
        raise ValueError("λ grids need positive endpoints and at least one point")
    return sorted((float(v) for v in np.geomspace(start, stop, num)), reverse=True)


def counting_report(source: Source, lambdas: Sequence[float], label: str = "n+") -> CountingReport:
    grid = sorted((float(lam) for lam in lambdas), reverse=True)
    if any(lam <= 0 for lam in grid):
        raise ValueError("λ grid must be strictly positive")
    positive = _log_positive(source)
    negative = _log_negative(source)
    return CountingReport(
        lambdas=grid,
        counts=[_count(positive, lam) for lam in grid],
        label=label,
        counts_minus=[_count(negative, lam) for lam in grid] if len(negative) else None,
    )
