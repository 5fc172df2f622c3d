"""Closed-form Toeplitz eigenvalues for radial weights and a constant field.

For ``B = B0`` and a radial weight W the Toeplitz operator is diagonal in
``z^n e^{−B0|z|²/4}`` with

    λ_n = (1/n!) ∫_0^∞ W(sqrt(2t/B0)) t^n e^{−t} dt.

Everything is computed in the log domain so eigenvalues far below the
smallest double stay meaningful.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import inf, isinf, log
from typing import Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import betaln, gammainc, gammaln, hyp1f1, logsumexp

from fock.fields import RadialBump

LogSpectrum = Tuple[NDArray[np.float64], NDArray[np.float64]]


class RadialProfile(ABC):
    """A radial Toeplitz weight with known eigenvalues."""

    @abstractmethod
    def log_eigenvalues(self, B0: float, n: ArrayLike) -> LogSpectrum:
        """``(ln|λ_n|, sign λ_n)`` for the indices n."""


@dataclass(frozen=True)
class DiskProfile(RadialProfile):
    """``amplitude · 1{r < R}``; R may be infinite."""

    R: float
    amplitude: float = 1.0

    def log_eigenvalues(self, B0: float, n: ArrayLike) -> LogSpectrum:
        n = np.asarray(n, dtype=float)
        sign = np.full(n.shape, np.sign(self.amplitude))
        offset = log(abs(self.amplitude)) if self.amplitude else -inf
        if isinf(self.R):
            return np.full(n.shape, offset), sign
        x = 0.5 * B0 * self.R**2
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            series = (n + 1) * log(x) - x - gammaln(n + 2) + np.log(hyp1f1(1.0, n + 2, x))
            direct = np.log(gammainc(n + 1, x))
        return offset + np.where(x < n + 1, series, direct), sign


@dataclass(frozen=True)
class BumpProfile(RadialProfile):
    """``c (1 − r²/R²)^k`` on r < R."""

    c: float
    R: float
    k: int

    @classmethod
    def from_bump(cls, bump: RadialBump) -> "BumpProfile":
        if not bump.is_centered:
            raise ValueError("the oracle needs bumps centered at the origin")
        return cls(bump.c, bump.R, bump.k)

    def log_eigenvalues(self, B0: float, n: ArrayLike) -> LogSpectrum:
        n = np.asarray(n, dtype=float)
        x = 0.5 * B0 * self.R**2
        k = self.k
        with np.errstate(divide="ignore"):
            log_abs = (
                np.log(abs(self.c))
                + (n + 1) * log(x)
                - gammaln(n + 1)
                + betaln(n + 1, k + 1)
                - x
                + np.log(hyp1f1(k + 1.0, n + k + 2, x))
            )
        return log_abs, np.full(n.shape, np.sign(self.c))


@dataclass(frozen=True)
class CompositeProfile(RadialProfile):
    """Sum of radial profiles."""

    parts: Tuple[RadialProfile, ...]

    def log_eigenvalues(self, B0: float, n: ArrayLike) -> LogSpectrum:
        n = np.asarray(n, dtype=float)
        if not self.parts:
            return np.full(n.shape, -inf), np.zeros(n.shape)
        logs, signs = zip(*(part.log_eigenvalues(B0, n) for part in self.parts))
        with np.errstate(divide="ignore"):
            log_abs, sign = logsumexp(np.stack(logs), b=np.stack(signs), axis=0, return_sign=True)
        return log_abs, sign


def profile_of_bumps(bumps: Tuple[RadialBump, ...]) -> RadialProfile:
    if len(bumps) == 1:
        return BumpProfile.from_bump(bumps[0])
    return CompositeProfile(tuple(BumpProfile.from_bump(b) for b in bumps))


def log_toeplitz_oracle(profile: RadialProfile, B0: float, n: int) -> Tuple[float, float]:
    log_abs, sign = profile.log_eigenvalues(B0, np.array([n]))
    return float(log_abs[0]), float(sign[0])


def radial_toeplitz_oracle(profile: RadialProfile, B0: float, n: int) -> float:
    """λ_n; underflows to 0.0 where only the log value is representable."""
    log_abs, sign = log_toeplitz_oracle(profile, B0, n)
    return sign * float(np.exp(log_abs))


@dataclass(frozen=True, eq=False)
class OracleSpectrum:
    """Oracle eigenvalues λ_0..λ_(n−1) held as logarithms and signs."""

    log_abs: NDArray[np.float64]
    signs: NDArray[np.float64]

    @property
    def values(self) -> NDArray[np.float64]:
        return self.signs * np.exp(self.log_abs)

    def __len__(self) -> int:
        return len(self.log_abs)

    def count_above(self, lam: float) -> int:
        return int(np.count_nonzero((self.signs > 0) & (self.log_abs > log(lam))))

    def count_below(self, lam: float) -> int:
        """Number of eigenvalues below −λ."""
        return int(np.count_nonzero((self.signs < 0) & (self.log_abs > log(lam))))


def oracle_spectrum(
    profile: RadialProfile, B0: float, log_floor: float, chunk: int = 256, n_max: int = 1_000_000
) -> OracleSpectrum:
    """Eigenvalues until a whole chunk lies below ``exp(log_floor)`` in modulus."""
    logs, signs = [], []
    start = 0
    while start < n_max:
        log_abs, sign = profile.log_eigenvalues(B0, np.arange(start, start + chunk))
        logs.append(log_abs)
        signs.append(sign)
        start += chunk
        if np.all(log_abs < log_floor):
            break
    return OracleSpectrum(np.concatenate(logs), np.concatenate(signs))
