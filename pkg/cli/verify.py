"""Identity suite: exact algebra facts and oracle agreement at desk scale."""
import random
import time
from dataclasses import dataclass, field
from math import exp, factorial, log
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
import structlog

from algebra.coefficients import GaussianRational, I
from algebra.funcpoly import Field, FieldAtom, FuncPoly, ScalarSymbol, weight_of
from algebra.operators import Func, OpExpr, OpWord, Q, QBAR, normal_order, normal_terms
from algebra.potentials import (
    Sign,
    compare_effective_potentials,
    derive_effective_potential,
    landau_constant,
    landau_substitutions,
    x_op,
    y_op,
    z_poly,
)
from fock.fields import FieldSpec, RadialBump
from fock.matrices import gram_matrix, weighted_matrix
from fock.oracle import BumpProfile, DiskProfile, oracle_spectrum
from fock.quadrature import QuadratureGrid
from monitoring.error_tracking import ErrorContext, ErrorTracker
from spectral.counting import counting_report, decay_diagnostic, lambda_grid
from spectral.eigensolver import gen_eigensolve
from spectral.landau import landau_level, ritz_spectrum, splitting_counts

logger = structlog.get_logger(__name__)

SECTOR_TOLERANCE = 5e-3

B0 = FuncPoly.scalar(ScalarSymbol.B0)
b = FuncPoly.atom(Field.B)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0


@dataclass
class VerifyReport:
    checks: List[CheckResult]
    failures: List[Dict[str, Any]]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_json(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
            "failures": self.failures,
        }


def check_exact_values() -> Tuple[bool, Dict[str, Any]]:
    z1 = b * 2
    z2 = b * b * 8 + B0 * b * 16 + FuncPoly.atom(Field.B, 1, 1) * 8
    x1 = {(0, 0): B0 * 2 + b * 2, (1, 1): FuncPoly.constant(4)}
    x_actual = dict(x_op(1).terms)
    return (
        z_poly(1) == z1 and z_poly(2) == z2 and x_actual == x1,
        {"Z1": z_poly(1).pretty(), "Z2": z_poly(2).pretty(), "X1": x_op(1).pretty()},
    )


def check_structure(max_q: int = 4) -> Tuple[bool, Dict[str, Any]]:
    details: Dict[str, Any] = {}
    ok = True
    for q in range(1, max_q + 1):
        z = z_poly(q)
        full = z + landau_constant(q)
        linear = z.coefficient(
            atoms=[(FieldAtom(Field.B), 1)],
            scalars=[(ScalarSymbol.B0, q - 1)] if q > 1 else [],
        )
        x, y = x_op(q), y_op(q)
        x_weights = {weight_of(m) + 2 + d + e for (d, e), c in x.terms for m in c.monomials()}
        y_weights = {weight_of(m) + 2 + d + e for (d, e), c in y.terms for m in c.monomials()}
        facts = {
            "constant_term": full.field_free_part() == landau_constant(q),
            "derivative_free_linear": linear == GaussianRational.of(2**q * factorial(q) * q),
            "z_weight": {weight_of(m) for m in z.monomials()} == {2 * q},
            "x_weight": x_weights == {2 * q + 2},
            "y_weight": y_weights == {2 * q + 3},
            "x_top": x[(q, q)] == FuncPoly.constant(4**q),
            "y_top": y[(q, q + 1)] == FuncPoly.constant(I * (-2 * 4**q)),
        }
        details[f"q={q}"] = facts
        ok = ok and all(facts.values())
    return ok, details


def check_scalar_identity(max_q: int = 3) -> Tuple[bool, Dict[str, Any]]:
    mu, tau = FuncPoly.scalar(ScalarSymbol.MU), FuncPoly.scalar(ScalarSymbol.TAU)
    lam_big = FuncPoly.scalar(ScalarSymbol.BIG_LAM)
    lam, s = FuncPoly.scalar(ScalarSymbol.LAM), FuncPoly.scalar(ScalarSymbol.S)
    window, _ = landau_substitutions(1, Sign.MINUS)
    lhs = (mu * mu - tau * tau - mu * lam_big * 2 + lam_big * lam_big).substitute(window)
    rhs = (lam * (lam_big - s)).substitute(window)
    details: Dict[str, Any] = {"scalar_identity": lhs == rhs}
    for q in range(1, max_q + 1):
        details[f"q={q}"] = derive_effective_potential(q, Sign.MINUS).constant_matches
    return all(details.values()), details


def check_effective_potential() -> Tuple[bool, Dict[str, Any]]:
    details: Dict[str, Any] = {}
    for q in (1, 2):
        comparison = compare_effective_potentials(q, Sign.MINUS)
        details[f"q={q}"] = {
            "agree": comparison.agree,
            "differing_monomials": len(comparison.difference),
        }
    # Agreement is reported, not required.
    return True, details


def check_toeplitz_equivalence(N: int = 30) -> Tuple[bool, Dict[str, Any]]:
    bump = RadialBump(c=1.0, R=1.5, k=8)
    spec = FieldSpec(B0=1.0, V=(bump,))
    grid = QuadratureGrid.build(spec, N)
    result = gen_eigensolve(weighted_matrix(FuncPoly.atom(Field.V), spec, N, grid), gram_matrix(spec, N, grid))
    oracle = BumpProfile.from_bump(bump)
    expected = np.exp(oracle.log_eigenvalues(spec.B0, np.arange(N))[0])
    computed = result.eigenvalues
    mask = computed > 1e-12
    worst = float(np.max(np.abs(computed[mask] - expected[mask]) / expected[mask]))
    return worst < 1e-6, {"compared": int(mask.sum()), "max_relative_error": worst}


def check_decay() -> Tuple[bool, Dict[str, Any]]:
    spectrum = oracle_spectrum(DiskProfile(R=1.0), B0=2.0, log_floor=log(1e-300))
    diagnostic = decay_diagnostic(spectrum, B0=2.0, disk_radius=1.0)
    details: Dict[str, Any] = {}
    ok = True
    for n in (40, 100):
        s_n = diagnostic.s[n - 1]
        lower = exp(-(1 + log(n + 1)) / n)
        upper = exp((-1 - log(n + 1) + log((n + 2) / (n + 1))) / n)
        inside = lower * (1 - 1e-9) <= s_n <= upper * (1 + 1e-9)
        details[f"s_{n}"] = {"value": s_n, "lower": lower, "upper": upper, "ok": inside}
        ok = ok and inside
    return ok, details


def check_counting() -> Tuple[bool, Dict[str, Any]]:
    spectrum = oracle_spectrum(DiskProfile(R=1.0), B0=2.0, log_floor=log(1e-70))
    report = counting_report(spectrum, [1e-12, 1e-60])
    by_lambda = dict(zip(report.lambdas, zip(report.counts, report.ratio_oracle, report.ratio_xi)))
    count_12 = by_lambda[1e-12][0]
    count_60, ratio_60, xi_ratio_60 = by_lambda[1e-60]
    ok = count_12 == 14 and count_60 == 47 and 0.8 <= ratio_60 <= 1.8
    return ok, {"n(1e-12)": count_12, "n(1e-60)": count_60, "ratio_oracle": ratio_60, "ratio_xi": xi_ratio_60}


def check_landau_levels(N: int = 20, max_q: int = 3) -> Tuple[bool, Dict[str, Any]]:
    spec = FieldSpec(B0=1.0)
    grid = QuadratureGrid.build(spec, N)
    details: Dict[str, Any] = {}
    for q in range(max_q + 1):
        level = 2.0 * q * spec.B0
        values = ritz_spectrum(q, spec, N, grid).eigenvalues
        error = float(np.max(np.abs(values - level)))
        details[f"q={q}"] = error
        if error > 1e-10 * max(level, 1.0):
            return False, details
    return True, details


def check_confluence(
    words: int = 200, seed: int = 0, max_length: int = 8
) -> Tuple[bool, Dict[str, Any]]:
    rng = random.Random(seed)
    alphabet = [Q, QBAR, Func(b), Func(FuncPoly.atom(Field.V))]
    for _ in range(words):
        letters = [rng.choice(alphabet) for _ in range(rng.randint(1, max_length))]
        expr = OpExpr([OpWord.of(*letters)])
        if normal_terms(normal_order(expr, rng=rng)) != normal_terms(normal_order(expr)):
            return False, {"word": expr.pretty()}
    return True, {"words": words, "max_length": max_length}


def check_splitting_cross_oracle(N: int = 25) -> Tuple[bool, Dict[str, Any]]:
    """Ritz against the sector ODE for a magnetic bump at level q = 1.

    One trial function per sector limits the Ritz accuracy to a few 1e-3 here,
    so the relative tolerance is ``SECTOR_TOLERANCE`` and count agreement is
    reported only.  Sectors m < 0 hold the level as their ground state, where
    the Ritz value bounds the ODE eigenvalue from above.
    """
    spec = FieldSpec(B0=1.0, b=(RadialBump(c=0.3, R=1.0, k=12),))
    q = 1
    report = splitting_counts(q, spec, lambda_grid(1e-1, 1e-6, 11), N, inspect=False)
    level = landau_level(q, spec.B0)
    compared = [row for row in report.comparisons if abs(row.oracle - level) > 1e-6 * spec.B0]
    bounded = all(row.ritz >= row.oracle - 1e-7 for row in compared if row.m < 0)
    worst = max((row.relative_error for row in compared), default=float("inf"))
    detail = report.sector_json() or {}
    detail.update(tolerance=SECTOR_TOLERANCE, upper_bounds_hold=bounded)
    return worst < SECTOR_TOLERANCE and bounded, detail


CHECKS: List[Tuple[str, Callable[[], Tuple[bool, Dict[str, Any]]]]] = [
    ("exact_values", check_exact_values),
    ("structure", check_structure),
    ("scalar_identity", check_scalar_identity),
    ("effective_potential", check_effective_potential),
    ("toeplitz_equivalence", check_toeplitz_equivalence),
    ("decay", check_decay),
    ("counting", check_counting),
    ("landau_levels", check_landau_levels),
    ("confluence", check_confluence),
    ("splitting_cross_oracle", check_splitting_cross_oracle),
]


def run_identity_suite(tracker: ErrorTracker) -> VerifyReport:
    results = []
    for name, check in CHECKS:
        start = time.perf_counter()
        context = ErrorContext(component="verify", operation=name)
        try:
            passed, detail = check()
        except Exception as exc:  # a crash is a failed check, the suite goes on
            tracker.track_error(exc, context)
            passed, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
        else:
            if not passed:
                tracker.track_failure(f"{name} failed", context)
        elapsed = time.perf_counter() - start
        logger.info("check finished", check=name, passed=passed, seconds=round(elapsed, 3))
        results.append(CheckResult(name, passed, detail, elapsed))
    return VerifyReport(results, tracker.summary())
