from math import e, exp, lgamma, log

import numpy as np
import pytest

from fock.oracle import DiskProfile, OracleSpectrum, oracle_spectrum
from spectral.counting import (
    XiDomainError,
    counting_report,
    decay_diagnostic,
    lambda_grid,
    xi,
)
from spectral.eigensolver import gen_eigensolve


def spectrum_of(*values):
    values = np.array(values, dtype=float)
    return OracleSpectrum(np.log(np.abs(values)), np.sign(values))


class TestXi:
    def test_closed_forms(self):
        assert xi(exp(-(e**2))) == pytest.approx(e**2 / 4)
        assert xi(exp(-(e**3))) == pytest.approx(e**3 / 6)

    @pytest.mark.parametrize("lam", [0.0, -1e-3, exp(-e), 0.5, 2.0])
    def test_domain(self, lam):
        with pytest.raises(XiDomainError):
            xi(lam)

    def test_domain_error_is_value_error(self):
        assert issubclass(XiDomainError, ValueError)

    def test_grows_as_lambda_shrinks(self):
        values = [xi(lam) for lam in (1e-3, 1e-10, 1e-50, 1e-200)]
        assert values == sorted(values)


class TestLambdaGrid:
    def test_geometric_and_decreasing(self):
        grid = lambda_grid(1e-2, 1e-6, 5)
        assert grid == pytest.approx([1e-2, 1e-3, 1e-4, 1e-5, 1e-6])

    def test_either_direction(self):
        assert lambda_grid(1e-6, 1e-2, 3) == pytest.approx(lambda_grid(1e-2, 1e-6, 3))

    def test_rejects_bad_endpoints(self):
        with pytest.raises(ValueError):
            lambda_grid(0.0, 1e-3, 3)
        with pytest.raises(ValueError):
            lambda_grid(1e-2, 1e-3, 0)


class TestCountingReport:
    def test_strict_inequality(self):
        report = counting_report(spectrum_of(0.5, 0.25, 0.125), [0.25, 0.2, 0.6])
        assert report.lambdas == [0.6, 0.25, 0.2]
        assert report.counts == [0, 1, 2]
        assert report.counts_minus is None

    def test_two_branches(self):
        report = counting_report(spectrum_of(0.5, -0.25, -0.3, 0.01), [0.1])
        assert report.counts == [1]
        assert report.counts_minus == [2]
        assert report.singular_counts == [3]

    def test_spectral_result_uses_trusted_values(self):
        result = gen_eigensolve(np.diag([1.0, 0.1, -0.01, 1e-15]), np.eye(4))
        report = counting_report(result, [1e-16, 0.05])
        assert report.lambdas == [0.05, 1e-16]
        assert report.counts == [2, 2]
        assert report.counts_minus == [0, 1]

    def test_rejects_non_positive_lambda(self):
        with pytest.raises(ValueError):
            counting_report(spectrum_of(0.5), [0.1, 0.0])

    def test_ratios(self):
        lam = exp(-(e**2))
        report = counting_report(spectrum_of(*([0.9] * 10)), [lam, 0.5])
        assert report.lambdas[1] == lam
        assert report.ratio_xi[1] == pytest.approx(10 / (e**2 / 4))
        assert report.ratio_oracle[1] == pytest.approx(10 * 2 / e**2)
        assert np.isnan(report.xi[0]) and np.isnan(report.ratio_oracle[0])

    def test_to_json(self):
        report = counting_report(spectrum_of(0.5, -0.25), [0.1], label="n")
        payload = report.to_json()
        assert payload["label"] == "n"
        assert payload["counts_minus"] == [1]
        assert set(payload["rows"][0]) == {"lambda", "count", "xi", "ratio_paper", "ratio_oracle"}


class TestDecayDiagnostic:
    @pytest.fixture(scope="class")
    def disk(self):
        return oracle_spectrum(DiskProfile(1.0), 2.0, log(1e-250), chunk=64)

    @pytest.mark.parametrize("n", [40, 100])
    def test_disk_bounds(self, disk, n):
        diagnostic = decay_diagnostic(disk)
        s = diagnostic.s[diagnostic.n.index(n)]
        lower = exp(-(1 + log(n + 1)) / n)
        upper = exp((-1 - log(n + 1) + log((n + 2) / (n + 1))) / n)
        assert lower <= s <= upper

    def test_definition(self, disk):
        diagnostic = decay_diagnostic(disk)
        n = 5
        expected = exp((lgamma(n + 1) + disk.log_abs[n]) / n)
        assert diagnostic.s[diagnostic.n.index(n)] == pytest.approx(expected)
        assert diagnostic.n[0] == 1

    def test_references(self, disk):
        diagnostic = decay_diagnostic(disk, B0=2.0, disk_radius=1.0)
        assert diagnostic.references == {
            "disk_limit_B0_R2_over_2": 1.0,
            "printed_bound_B0_over_2_times_capacity": 1.0,
        }
        assert decay_diagnostic(disk).references == {}

    def test_stops_at_trust_floor(self):
        result = gen_eigensolve(np.diag([1.0, 0.5, 0.1, 1e-14]), np.eye(4))
        assert decay_diagnostic(result).n == [1, 2]
