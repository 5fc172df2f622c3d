"""Compactly supported radial bump fields and the magnetic scalar potential."""
import hashlib
import json
from math import comb, factorial, pi
from typing import List, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field

from algebra.funcpoly import Field as FieldName


class SmoothnessError(ValueError):
    """A derivative was requested beyond the smoothness of a bump."""


class RadialBump(BaseModel):
    """``c·(1 − |z − center|²/R²)^k`` inside the disk of radius R, zero outside."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    center: Tuple[float, float] = (0.0, 0.0)
    c: float
    R: float = Field(gt=0)
    k: int = Field(ge=1)

    @property
    def origin(self) -> complex:
        return complex(*self.center)

    @property
    def is_centered(self) -> bool:
        return self.center == (0.0, 0.0)

    @property
    def integral(self) -> float:
        """∫ b over the plane."""
        return pi * self.c * self.R**2 / (self.k + 1)

    @property
    def sigma(self) -> float:
        """Coefficient of ln r outside the support: integral / 2π."""
        return self.c * self.R**2 / (2 * (self.k + 1))

    def profile_derivative(self, m: int, s: NDArray[np.float64]) -> NDArray[np.float64]:
        """m-th derivative of ``G(s) = c(1 − s/R²)^k`` with respect to s = |w|²."""
        s = np.asarray(s, dtype=float)
        if m > self.k:
            return np.zeros_like(s)
        scale = self.c * factorial(self.k) / factorial(self.k - m) * (-1.0 / self.R**2) ** m
        inside = np.clip(1.0 - s / self.R**2, 0.0, None)
        values = scale * inside ** (self.k - m)
        return np.where(s < self.R**2, values, 0.0)

    def derivative(self, d: int, dbar: int, z: ArrayLike) -> NDArray[np.complex128]:
        """``∂^d ∂̄^d̄`` of the bump at the points z."""
        if d + dbar > self.k - 1:
            raise SmoothnessError(
                f"∂^{d}∂̄^{dbar} needs k >= {d + dbar + 1}, bump has k = {self.k}"
            )
        w = np.asarray(z, dtype=complex) - self.origin
        s = (w * w.conj()).real
        total = np.zeros_like(w)
        for j in range(min(d, dbar) + 1):
            weight = comb(d, j) * factorial(dbar) / factorial(dbar - j)
            total = total + weight * w ** (dbar - j) * w.conj() ** (d - j) * self.profile_derivative(
                d + dbar - j, s
            )
        return total

    def value(self, z: ArrayLike) -> NDArray[np.float64]:
        return self.derivative(0, 0, z).real

    def potential(self, z: ArrayLike) -> NDArray[np.float64]:
        """Radial solution ψ of Δψ = bump with ψ = σ ln r outside the support."""
        r = np.abs(np.asarray(z, dtype=complex) - self.origin)
        u = np.minimum(r**2 / self.R**2, 1.0)
        inner = self.sigma * np.log(self.R) - 0.5 * self.sigma * sum(
            (1.0 - u) ** j / j for j in range(1, self.k + 2)
        )
        with np.errstate(divide="ignore"):
            outer = self.sigma * np.log(r)
        return np.where(r < self.R, inner, outer)

    def potential_slope(self, r: ArrayLike) -> NDArray[np.float64]:
        """dψ/dr for a centered bump: σ/r·(1 − (1 − r²/R²)^(k+1)) inside."""
        r = np.asarray(r, dtype=float)
        u = np.minimum(r**2 / self.R**2, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = -self.sigma * np.expm1((self.k + 1) * np.log1p(-u)) / r
        return np.where(r > 0, slope, 0.0)

    def breakpoints(self) -> List[float]:
        distance = abs(self.origin)
        return [p for p in (distance - self.R, distance + self.R) if p > 0]


class FieldSpec(BaseModel):
    """Constant field B0 plus bump perturbations ``b`` (magnetic) and ``V`` (electric)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    B0: float = Field(gt=0)
    b: Tuple[RadialBump, ...] = ()
    V: Tuple[RadialBump, ...] = ()

    def bumps(self, name: FieldName) -> Tuple[RadialBump, ...]:
        if name == FieldName.B:
            return self.b
        if name == FieldName.V:
            return self.V
        raise KeyError(f"field {name.value} has no numerical values")

    @property
    def is_radial(self) -> bool:
        return all(bump.is_centered for bump in self.b + self.V)

    @property
    def flux(self) -> float:
        """σ = (2π)⁻¹ ∫ b, the ln r coefficient of the potential far from the bumps."""
        return sum(bump.sigma for bump in self.b)

    def smoothness(self, name: FieldName) -> int:
        """Largest k such that every bump of the field is C^(k−1)."""
        return min((bump.k for bump in self.bumps(name)), default=10**9)

    @property
    def support_radius(self) -> float:
        return max((abs(bump.origin) + bump.R for bump in self.b + self.V), default=0.0)

    def breakpoints(self) -> List[float]:
        points = {p for bump in self.b + self.V for p in bump.breakpoints()}
        return sorted(points)

    def field_derivative(self, name: FieldName, d: int, dbar: int, z: ArrayLike) -> NDArray[np.complex128]:
        z = np.asarray(z, dtype=complex)
        total = np.zeros_like(z)
        for bump in self.bumps(name):
            total = total + bump.derivative(d, dbar, z)
        return total

    def scalar_potential(self, z: ArrayLike) -> NDArray[np.float64]:
        z = np.asarray(z, dtype=complex)
        psi = 0.25 * self.B0 * np.abs(z) ** 2
        for bump in self.b:
            psi = psi + bump.potential(z)
        return psi

    def total_field(self, r: ArrayLike) -> NDArray[np.float64]:
        """B(r) = B0 + b(r) along the positive real axis."""
        r = np.asarray(r, dtype=float)
        return self.B0 + sum((bump.value(r) for bump in self.b), np.zeros_like(r))

    def electric(self, r: ArrayLike) -> NDArray[np.float64]:
        r = np.asarray(r, dtype=float)
        return sum((bump.value(r) for bump in self.V), np.zeros_like(r))

    def circulation(self, r: ArrayLike) -> NDArray[np.float64]:
        """Angular vector potential A_θ(r) = Ψ'(r) for a radial field."""
        if not self.is_radial:
            raise ValueError("circulation is only defined for radial fields")
        r = np.asarray(r, dtype=float)
        slope = 0.5 * self.B0 * r
        for bump in self.b:
            slope = slope + bump.potential_slope(r)
        return slope

    def without_perturbations(self) -> "FieldSpec":
        return FieldSpec(B0=self.B0)

    def content_hash(self) -> str:
        payload = json.dumps(self.model_dump(mode="json"), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def flux(spec: FieldSpec) -> float:
    """Flux of the perturbation divided by 2π, Σ c R²/(2(k+1))."""
    return spec.flux


def scalar_potential(spec: FieldSpec, z: ArrayLike) -> NDArray[np.float64]:
    """Ψ with ΔΨ = B0 + b: ``B0|z|²/4 + Σ ψ_i``."""
    return spec.scalar_potential(z)

