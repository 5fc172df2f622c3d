import time
from dataclasses import dataclass, field
from typing import Callable

import structlog
from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

logger = structlog.get_logger()


@dataclass
class MetricsCollector:
    """Per-run metrics, exported in the node-exporter textfile format."""

    registry: CollectorRegistry = field(default_factory=CollectorRegistry)

    def __post_init__(self) -> None:
        self.operation_count = Counter(
            "ltbx_operations_total",
            "Completed operations",
            ["operation", "status"],
            registry=self.registry,
        )
        self.operation_latency = Histogram(
            "ltbx_operation_seconds",
            "Operation duration in seconds",
            ["operation"],
            buckets=(0.01, 0.1, 1.0, 10.0, 60.0, 300.0),
            registry=self.registry,
        )
        self.basis_size = Gauge(
            "ltbx_basis_size",
            "Trial-space dimension of the last matrix computation",
            registry=self.registry,
        )
        self.eigenvalue_count = Gauge(
            "ltbx_eigenvalues",
            "Eigenvalues produced by the last spectral computation",
            ["pipeline"],
            registry=self.registry,
        )

    def time_operation(self, operation: str) -> Callable[[str], None]:
        """Start a timer; call the returned function with the final status."""
        start_time = time.perf_counter()

        def stop_timer(status: str = "success") -> None:
            duration = time.perf_counter() - start_time
            self.operation_latency.labels(operation=operation).observe(duration)
            self.operation_count.labels(operation=operation, status=status).inc()

        return stop_timer

    def record_spectrum(self, pipeline: str, basis_size: int, eigenvalues: int) -> None:
        self.basis_size.set(basis_size)
        self.eigenvalue_count.labels(pipeline=pipeline).set(eigenvalues)

    def write(self, path: str) -> None:
        write_to_textfile(path, self.registry)
        logger.debug("metrics written", path=path)
