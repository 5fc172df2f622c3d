"""Eigensolvers, counting diagnostics and the Landau-level splitting experiment."""
from spectral.counting import (
    CountingReport,
    DecayDiagnostic,
    XiDomainError,
    counting_report,
    decay_diagnostic,
    lambda_grid,
    xi,
)
from spectral.eigensolver import IndefiniteGramError, SpectralResult, gen_eigensolve
from spectral.landau import (
    SplittingReport,
    landau_form_matrices,
    landau_level,
    ritz_spectrum,
    splitting_counts,
    window_parameters,
)
from spectral.pauli_oracle import OuterRadiusError, RadialGrid, WindowError, radial_pauli_oracle

__all__ = [
    "CountingReport",
    "DecayDiagnostic",
    "IndefiniteGramError",
    "OuterRadiusError",
    "RadialGrid",
    "SpectralResult",
    "SplittingReport",
    "WindowError",
    "XiDomainError",
    "counting_report",
    "decay_diagnostic",
    "gen_eigensolve",
    "lambda_grid",
    "landau_form_matrices",
    "landau_level",
    "radial_pauli_oracle",
    "ritz_spectrum",
    "splitting_counts",
    "window_parameters",
    "xi",
]
