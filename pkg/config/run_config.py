"""Validated run configuration for the ``ltbx`` command line."""
import hashlib
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from algebra.potentials import Sign
from fock.fields import FieldSpec
from spectral.counting import lambda_grid


class Command(str, Enum):
    ZXY = "zxy"
    EFFPOT = "effpot"
    TOEPLITZ = "toeplitz"
    SPLIT = "split"
    VERIFY = "verify"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class LambdaGrid(BaseModel):
    """Geometric λ grid from ``start`` down to ``stop``, or explicit ``values``."""

    model_config = ConfigDict(extra="forbid")

    start: float = Field(1e-1, gt=0)
    stop: float = Field(1e-12, gt=0)
    num: int = Field(12, ge=1)
    values: Optional[List[float]] = None

    def points(self) -> List[float]:
        if self.values is not None:
            if any(v <= 0 for v in self.values):
                raise ValueError("λ values must be positive")
            return sorted(self.values, reverse=True)
        return lambda_grid(self.start, self.stop, self.num)


class DiskSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    R: float = Field(gt=0)
    amplitude: float = 1.0


class NumericsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tail_eps: float = Field(1e-16, gt=0, lt=1)
    nodes_per_panel: Optional[int] = Field(None, ge=8)
    n_theta: Optional[int] = Field(None, ge=8)
    ode_step: Optional[float] = Field(None, gt=0)
    deflation_threshold: float = Field(1e-10, gt=0)


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    directory: str = "ltbx-out"
    format: OutputFormat = OutputFormat.JSON
    metrics_file: Optional[str] = None


class RunConfig(BaseModel):
    """One reproducible experiment.

    Defaults: q = 1, sign = "-", N = 30, B0 = 1, λ grid 1e-1 … 1e-12 (12
    points), one thread, JSON artifacts in ``ltbx-out``.
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    command: Command
    q: int = Field(1, ge=0)
    sign: Sign = Sign.MINUS
    basis_size: int = Field(30, ge=1, alias="N")
    B0: float = Field(1.0, gt=0)
    disk: Optional[DiskSpec] = None
    field_spec: Optional[FieldSpec] = Field(None, alias="field")
    lambdas: LambdaGrid = Field(default_factory=LambdaGrid)
    threads: int = Field(1, ge=1)
    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @model_validator(mode="after")
    def _check_command(self) -> "RunConfig":
        if self.command == Command.EFFPOT and self.q < 1:
            raise ValueError("effpot requires q >= 1")
        if self.command == Command.SPLIT and self.field_spec is None:
            raise ValueError("split requires a field")
        if self.command == Command.TOEPLITZ and self.disk is None and self.field_spec is None:
            raise ValueError("toeplitz requires a disk or a field")
        smoothed = (Command.SPLIT, Command.EFFPOT, Command.TOEPLITZ)
        if self.field_spec is not None and self.command in smoothed:
            level = 0 if self.command == Command.TOEPLITZ else self.q
            needed = 2 * level + 6
            for name, bumps in (("b", self.field_spec.b), ("V", self.field_spec.V)):
                for index, bump in enumerate(bumps):
                    if bump.k < needed:
                        raise ValueError(
                            f"field.{name}.{index}.k = {bump.k}: level q = {level} "
                            f"needs k >= 2q+6 = {needed}"
                        )
        return self

    def config_hash(self) -> str:
        """Hash of everything that determines results; threads and outputs excluded."""
        payload = self.model_dump_json(by_alias=True, exclude={"threads", "output"})
        return hashlib.sha256(payload.encode()).hexdigest()[:16]
