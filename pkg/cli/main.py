"""``ltbx`` command line: zxy, effpot, toeplitz, split, verify."""
import argparse
import sys
from enum import IntEnum
from math import log, log10
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.funcpoly import Field, FuncPoly
from algebra.potentials import (
    StructureError,
    compare_effective_potentials,
    derive_effective_potential,
    structure_report,
    x_op,
    y_op,
    z_poly,
)
from cli.artifacts import ArtifactWriter
from cli.verify import run_identity_suite
from config.config_manager import ConfigError, ConfigManager
from config.run_config import Command, OutputFormat, RunConfig
from fock.evaluation import UnboundSymbolError
from fock.export import MatrixKind, encode_matrix, matrix_rows
from fock.fields import SmoothnessError
from fock.matrices import NonRealPotentialError, gram_matrix, weighted_matrix
from fock.oracle import DiskProfile, OracleSpectrum, RadialProfile, oracle_spectrum, profile_of_bumps
from fock.quadrature import QuadratureError, QuadratureGrid
from monitoring.error_tracking import ErrorContext, ErrorTracker
from monitoring.logger import ArtifactLogger, run_logger, setup_logging
from monitoring.metrics_collector import MetricsCollector
from spectral.counting import CountingReport, XiDomainError, counting_report, decay_diagnostic
from spectral.eigensolver import IndefiniteGramError, gen_eigensolve
from spectral.landau import SplitCounts, landau_form_matrices, splitting_counts
from spectral.pauli_oracle import OuterRadiusError, WindowError


class ExitStatus(IntEnum):
    OK = 0
    CONFIG_ERROR = 2
    NUMERICAL_PRECONDITION = 3
    IDENTITY_FAILURE = 4
    DIVERGENCE = 5


NUMERICAL_ERRORS = (
    QuadratureError,
    SmoothnessError,
    UnboundSymbolError,
    NonRealPotentialError,
    IndefiniteGramError,
    WindowError,
    OuterRadiusError,
    XiDomainError,
    StructureError,
)


class Run:
    """Execution of one validated configuration."""

    def __init__(
        self,
        config: RunConfig,
        metrics: Optional[MetricsCollector] = None,
        seed: Optional[str] = None,
    ):
        self.config = config
        self.config_hash = config.config_hash()
        self.log = run_logger(__name__, command=config.command.value, config_hash=self.config_hash)
        self.writer = ArtifactWriter(
            config.output.directory, self.config_hash, ArtifactLogger(self.log), seed=seed
        )
        self.metrics = metrics or MetricsCollector()
        self.tracker = ErrorTracker()

    @property
    def as_csv(self) -> bool:
        return self.config.output.format == OutputFormat.CSV

    def execute(self) -> ExitStatus:
        handlers: Dict[Command, Callable[[], ExitStatus]] = {
            Command.ZXY: self.zxy,
            Command.EFFPOT: self.effpot,
            Command.TOEPLITZ: self.toeplitz,
            Command.SPLIT: self.split,
            Command.VERIFY: self.verify,
        }
        stop = self.metrics.time_operation(self.config.command.value)
        try:
            status = handlers[self.config.command]()
        except NUMERICAL_ERRORS as exc:
            self.tracker.track_error(exc, ErrorContext("cli", self.config.command.value))
            stop("error")
            return ExitStatus.NUMERICAL_PRECONDITION
        stop("success" if status == ExitStatus.OK else status.name.lower())
        return status

    # -- symbolic --------------------------------------------------------

    def zxy(self) -> ExitStatus:
        q = self.config.q
        payload: Dict[str, Any] = {
            "q": q,
            "Z": z_poly(q).to_json(),
            "X": x_op(q).to_json(),
            "Y": y_op(q).to_json(),
            "pretty": {"Z": z_poly(q).pretty(), "X": x_op(q).pretty(), "Y": y_op(q).pretty()},
        }
        if q >= 1:
            payload["structure"] = structure_report(q)
        self.writer.write_json(f"zxy_q{q}.json", payload)
        return ExitStatus.OK

    def effpot(self) -> ExitStatus:
        q, sign = self.config.q, self.config.sign
        comparison = compare_effective_potentials(q, sign)
        derived = derive_effective_potential(q, sign)
        payload = comparison.to_json()
        payload["field_free_part"] = derived.constant.to_json()
        payload["expected_field_free_part"] = derived.expected_constant.to_json()
        payload["field_free_part_matches"] = derived.constant_matches
        self.writer.write_json(f"effpot_q{q}_{'plus' if sign.value == '+' else 'minus'}.json", payload)
        if not comparison.agree:
            self.log.warning("printed and derived effective potentials differ", q=q, sign=sign.value)
            return ExitStatus.DIVERGENCE
        return ExitStatus.OK

    # -- numerical -------------------------------------------------------

    def _grid(self, N: int) -> QuadratureGrid:
        assert self.config.field_spec is not None
        numerics = self.config.numerics
        return QuadratureGrid.build(
            self.config.field_spec,
            N,
            nodes_per_panel=numerics.nodes_per_panel,
            n_theta=numerics.n_theta,
            tail_eps=numerics.tail_eps,
        )

    def _oracle_profile(self) -> Optional[RadialProfile]:
        if self.config.disk is not None:
            return DiskProfile(self.config.disk.R, self.config.disk.amplitude)
        spec = self.config.field_spec
        if spec is not None and not spec.b and spec.V and spec.is_radial:
            return profile_of_bumps(spec.V)
        return None

    def _write_matrix(self, stem: str, matrix: np.ndarray, kind: MatrixKind) -> None:
        self.writer.write_bytes(f"{stem}.ltbx", encode_matrix(matrix, kind))
        if self.as_csv:
            self.writer.write_csv(f"{stem}.csv", ["row", "col", "re", "im"], matrix_rows(matrix))

    def _write_counts(self, name: str, report: CountingReport) -> None:
        if self.as_csv:
            header = ["lambda", "count", "xi", "ratio_paper", "ratio_oracle"]
            rows = [[r[h] for h in header] for r in report.rows()]
            self.writer.write_csv(f"{name}.csv", header, rows)
        else:
            self.writer.write_json(f"{name}.json", report.to_json())

    def _write_oracle_eigenvalues(self, spectrum: OracleSpectrum, B0: float) -> None:
        radius = self.config.disk.R if self.config.disk is not None else None
        decay = decay_diagnostic(spectrum, B0=B0, disk_radius=radius)
        s_by_n = dict(zip(decay.n, decay.s))
        rows = []
        for n, (log_abs, sign) in enumerate(zip(spectrum.log_abs, spectrum.signs)):
            rows.append(
                [n, float(sign * np.exp(log_abs)), float(log_abs / log(10)), s_by_n.get(n, float("nan")), True]
            )
        self._write_eigenvalue_rows("toeplitz_oracle_eigenvalues", rows, decay.references)

    def _write_eigenvalue_rows(self, name: str, rows: List[List[Any]], references: Dict[str, float]) -> None:
        header = ["n", "lambda", "log10_lambda", "s_n", "trusted"]
        if self.as_csv:
            self.writer.write_csv(f"{name}.csv", header, rows)
        else:
            self.writer.write_json(
                f"{name}.json",
                {"rows": [dict(zip(header, row)) for row in rows], "references": references},
            )

    def toeplitz(self) -> ExitStatus:
        lambdas = self.config.lambdas.points()
        B0 = self.config.field_spec.B0 if self.config.field_spec is not None else self.config.B0
        profile = self._oracle_profile()
        if profile is not None:
            spectrum = oracle_spectrum(profile, B0, log_floor=log(min(lambdas)) - log(10.0))
            self._write_oracle_eigenvalues(spectrum, B0)
            self._write_counts("toeplitz_oracle_counts", counting_report(spectrum, lambdas))
            self.metrics.record_spectrum("oracle", 0, len(spectrum))

        spec = self.config.field_spec
        if spec is not None and spec.V:
            N = self.config.basis_size
            grid = self._grid(N)
            G = gram_matrix(spec, N, grid)
            M = weighted_matrix(FuncPoly.atom(Field.V), spec, N, grid)
            result = gen_eigensolve(
                M,
                G,
                deflation_threshold=self.config.numerics.deflation_threshold,
                metadata={"field": spec.content_hash(), "basis_size": N},
            )
            decay = decay_diagnostic(result, B0=spec.B0)
            s_by_n = dict(zip(decay.n, decay.s))
            rows = [
                [n, float(v), log10(abs(v)) if v else float("-inf"), s_by_n.get(n, float("nan")), bool(t)]
                for n, (v, t) in enumerate(zip(result.eigenvalues, result.trusted))
            ]
            self._write_eigenvalue_rows("toeplitz_matrix_eigenvalues", rows, {"deflated": result.deflated})
            self._write_counts("toeplitz_matrix_counts", counting_report(result, lambdas))
            self._write_matrix("toeplitz_gram", G, MatrixKind.GRAM)
            self._write_matrix("toeplitz_weighted", M, MatrixKind.WEIGHTED)
            self.metrics.record_spectrum("matrix", N, len(result.eigenvalues))
        return ExitStatus.OK

    def split(self) -> ExitStatus:
        spec = self.config.field_spec
        assert spec is not None
        N, q = self.config.basis_size, self.config.q
        grid = self._grid(N)
        A, Bm = landau_form_matrices(q, spec, N, grid)
        self._write_matrix(f"split_q{q}_form", A, MatrixKind.LANDAU_FORM)
        self._write_matrix(f"split_q{q}_gram", Bm, MatrixKind.LANDAU_GRAM)
        report = splitting_counts(
            q,
            spec,
            self.config.lambdas.points(),
            N,
            grid=grid,
            forms=(A, Bm),
            ode_step=self.config.numerics.ode_step,
            threads=self.config.threads,
        )
        self.metrics.record_spectrum("ritz", N, len(report.ritz.eigenvalues))
        self.writer.write_json(f"split_q{q}.json", report.to_json())
        if self.as_csv:
            pipelines: List[Tuple[str, Optional[SplitCounts]]] = [
                ("ritz", report.ritz),
                ("oracle", report.oracle),
            ]
            for label, counts in pipelines:
                if counts is None:
                    continue
                self._write_counts(f"split_q{q}_{label}_plus", counts.plus)
                self._write_counts(f"split_q{q}_{label}_minus", counts.minus)
        return ExitStatus.OK

    def verify(self) -> ExitStatus:
        report = run_identity_suite(self.tracker)
        self.writer.write_json("verify.json", report.to_json())
        return ExitStatus.OK if report.passed else ExitStatus.IDENTITY_FAILURE


def run(
    config: RunConfig, metrics: Optional[MetricsCollector] = None, seed: Optional[str] = None
) -> ExitStatus:
    """Execute a configuration and write its artifacts."""
    return Run(config, metrics, seed).execute()


def _disk(value: str) -> Dict[str, float]:
    """``R=1`` or ``R=1,amplitude=2``."""
    parsed: Dict[str, float] = {}
    for item in value.split(","):
        key, _, number = item.partition("=")
        try:
            parsed[key.strip()] = float(number)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad disk parameter {item!r}") from exc
    return parsed


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltbx",
        description="Landau-level commutation algebra and spectral experiments.",
    )
    parser.add_argument("--config", help="config file (YAML/JSON) or inline JSON object")
    parser.add_argument("--out", help="output directory (default: ltbx-out)")
    parser.add_argument("--threads", type=int, help="worker threads for sector solves (default: 1)")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], help="table format (default: json)")
    parser.add_argument("--metrics-file", help="write run metrics in Prometheus textfile format")
    parser.add_argument("--log-level", default="WARNING")
    parser.add_argument("--log-file")
    parser.add_argument("--plain-logs", action="store_true", help="human-readable instead of JSON logs")

    commands = parser.add_subparsers(dest="command")

    zxy = commands.add_parser("zxy", help="Z_q, X_q and Y_q of a Landau level")
    zxy.add_argument("--q", type=int, help="Landau level (default: 1)")

    effpot = commands.add_parser("effpot", help="printed vs derived effective potential")
    effpot.add_argument("--q", type=int)
    effpot.add_argument("--sign", choices=["+", "-"], help="side of the level (default: -)")

    toeplitz = commands.add_parser("toeplitz", help="Toeplitz eigenvalues and counting functions")
    toeplitz.add_argument("--disk", type=_disk, help="disk weight, e.g. R=1 or R=1,amplitude=2")
    toeplitz.add_argument("--B0", type=float, help="constant field for disk weights (default: 1)")
    toeplitz.add_argument("--N", type=int, help="basis size for the matrix pipeline (default: 30)")

    split = commands.add_parser("split", help="eigenvalue counts near a Landau level")
    split.add_argument("--q", type=int)
    split.add_argument("--N", type=int)

    commands.add_parser("verify", help="run the identity suite")

    for sub in (toeplitz, split):
        sub.add_argument("--lambda-start", type=float, help="largest λ (default: 1e-1)")
        sub.add_argument("--lambda-stop", type=float, help="smallest λ (default: 1e-12)")
        sub.add_argument("--lambda-num", type=int, help="number of λ points (default: 12)")
    return parser


def overrides_from_args(args: argparse.Namespace) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    if args.command:
        overrides["command"] = args.command
    direct = {"q": "q", "sign": "sign", "N": "N", "B0": "B0", "disk": "disk", "threads": "threads"}
    for attr, key in direct.items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    output = {
        key: getattr(args, attr)
        for attr, key in (("out", "directory"), ("format", "format"), ("metrics_file", "metrics_file"))
        if getattr(args, attr, None) is not None
    }
    if output:
        overrides["output"] = output
    lambdas = {
        key: getattr(args, f"lambda_{key}")
        for key in ("start", "stop", "num")
        if getattr(args, f"lambda_{key}", None) is not None
    }
    if lambdas:
        overrides["lambdas"] = lambdas
    return overrides


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.log_level, args.log_file, json_format=not args.plain_logs)
    log = run_logger(__name__)

    try:
        manager = ConfigManager(args.config, overrides_from_args(args))
        config = manager.run_config()
    except ConfigError as exc:
        log.error("invalid configuration", error=str(exc), path=exc.path)
        print(f"ltbx: configuration error: {exc}", file=sys.stderr)
        return int(ExitStatus.CONFIG_ERROR)

    metrics = MetricsCollector()
    execution = Run(config, metrics, seed=manager.seed)
    status = execution.execute()
    if config.output.metrics_file:
        metrics.write(config.output.metrics_file)
    if status == ExitStatus.NUMERICAL_PRECONDITION:
        failure = execution.tracker.errors[-1]
        print(f"ltbx: {failure.error_type}: {failure.error_message}", file=sys.stderr)
    return int(status)


if __name__ == "__main__":
    sys.exit(main())
