from math import sqrt

import numpy as np
import pytest

from algebra.potentials import Sign
from fock.fields import FieldSpec, RadialBump, SmoothnessError
from fock.oracle import BumpProfile, radial_toeplitz_oracle
from fock.quadrature import QuadratureGrid
from spectral.counting import lambda_grid
from spectral.landau import (
    SectorComparison,
    compare_sectors,
    count_split,
    inspect_effective_potential,
    landau_form_matrices,
    landau_level,
    oracle_sector_eigenvalues,
    require_smoothness,
    ritz_spectrum,
    sector_range,
    sector_ritz_values,
    splitting_counts,
    window_parameters,
)


def gap_midpoints(intervals, floor):
    """Geometric midpoints of the gaps between [lo, hi] intervals, above ``floor``."""
    merged = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [sqrt(a[1] * b[0]) for a, b in zip(merged, merged[1:]) if a[1] >= floor]


class TestFreeLevels:
    @pytest.mark.parametrize("q", [0, 1, 2, 3])
    def test_ritz_reproduces_landau_level(self, free_spec, q):
        N = 20
        result = ritz_spectrum(q, free_spec, N, QuadratureGrid.build(free_spec, N))
        assert np.allclose(result.eigenvalues, landau_level(q, 1.0), atol=1e-9)
        assert result.deflated == 0
        assert result.metadata["q"] == q

    def test_negative_level(self, free_spec):
        with pytest.raises(ValueError):
            landau_form_matrices(-1, free_spec, 4, QuadratureGrid.build(free_spec, 4))


class TestWindowParameters:
    def test_lower_side(self):
        params = window_parameters(1, 1.0, 0.1, Sign.MINUS)
        assert params.level == 2.0
        assert params.s == 1.0
        assert params.mu == pytest.approx(1.45)
        assert params.tau == pytest.approx(0.45)

    def test_upper_side(self):
        params = window_parameters(1, 1.0, 0.1, Sign.PLUS)
        assert params.s == 3.0
        assert params.mu == pytest.approx(2.55)


class TestSmoothness:
    def test_rough_bump_rejected(self):
        spec = FieldSpec(B0=1.0, b=(RadialBump(c=0.1, R=1.0, k=6),))
        require_smoothness(spec, 0)
        with pytest.raises(SmoothnessError, match="k >= 8"):
            require_smoothness(spec, 1)

    def test_electric_bumps_count_too(self):
        spec = FieldSpec(B0=1.0, V=(RadialBump(c=0.1, R=1.0, k=7),))
        with pytest.raises(SmoothnessError):
            require_smoothness(spec, 1)


class TestRitzBounds:
    def test_lowest_level_from_below(self, offcenter_spec):
        # b = 0: magnetic translations map the off-center weight to the centered one
        bump = offcenter_spec.V[0]
        profile = BumpProfile(bump.c, bump.R, bump.k)
        exact = [radial_toeplitz_oracle(profile, offcenter_spec.B0, n) for n in range(4)]
        previous = np.zeros(4)
        for N in (4, 8, 16):
            result = ritz_spectrum(0, offcenter_spec, N, QuadratureGrid.build(offcenter_spec, N))
            top = np.sort(result.eigenvalues)[::-1][:4]
            assert np.all(top >= previous - 1e-10)
            assert np.all(top <= np.array(exact) + 1e-10)
            previous = top
        assert previous == pytest.approx(exact, rel=1e-6)


class TestCounting:
    def test_sector_range(self):
        assert list(sector_range(2, 5)) == [-2, -1, 0, 1, 2]

    def test_count_split(self):
        split = count_split([1.5, 1.95, 2.05, 2.5, 3.5], 1, 1.0, [0.01, 0.1])
        assert split.plus.lambdas == [0.1, 0.01]
        assert split.plus.counts == [1, 2]
        assert split.minus.counts == [1, 2]
        assert split.eigenvalues == [1.5, 1.95, 2.05, 2.5]
        assert split.plus.label == "N+" and split.minus.label == "N-"


class TestPipelines:
    def test_non_radial_runs_one_pipeline(self, offcenter_spec):
        report = splitting_counts(0, offcenter_spec, [1e-3, 1e-4], 6)
        assert report.single_pipeline
        assert report.pipelines_agree is None
        payload = report.to_json()
        assert payload["oracle"] is None
        assert payload["sectors"] is None
        assert payload["ritz"]["N+"]["label"] == "N+"

    def test_effective_potential_inspection(self, radial_spec):
        inspection = inspect_effective_potential(1, radial_spec, Sign.MINUS, 0.1)
        assert inspection.sign == "-"
        assert inspection.radius == radial_spec.support_radius
        assert np.isfinite(inspection.minimum) and inspection.minimum <= inspection.maximum

    @pytest.mark.slow
    def test_lowest_level_pipelines_agree(self):
        spec = FieldSpec(B0=1.0, V=(RadialBump(c=0.02, R=3.0, k=6),))
        N = 12
        values = sorted(ritz_spectrum(0, spec, N, QuadratureGrid.build(spec, N)).eigenvalues, reverse=True)
        lambdas = [
            sqrt(hi * lo) for hi, lo in zip(values, values[1:]) if lo >= 0.002 and hi / lo > 1.1
        ]
        lambdas.append(1.5 * values[0])
        report = splitting_counts(0, spec, lambdas, N)
        assert not report.single_pipeline
        assert report.pipelines_agree
        assert report.inspections == []

    @pytest.mark.slow
    def test_sector_shifts_agree(self):
        spec = FieldSpec(
            B0=1.0,
            b=(RadialBump(c=0.1, R=2.0, k=8),),
            V=(RadialBump(c=0.1, R=2.0, k=8),),
        )
        q, N = 1, 16
        level = landau_level(q, spec.B0)
        A, Bm = landau_form_matrices(q, spec, N, QuadratureGrid.build(spec, N))
        ritz = (np.diag(A) / np.diag(Bm)).real
        sectors = oracle_sector_eigenvalues(q, spec, N)

        intervals = []
        for m in sector_range(q, N):
            assert len(sectors[m]) == 1
            d_ritz = ritz[m + q] - level
            d_oracle = sectors[m][0] - level
            if min(abs(d_ritz), abs(d_oracle)) > 1e-6:
                assert np.sign(d_ritz) == np.sign(d_oracle)
                assert 1 / 3 <= d_ritz / d_oracle <= 3
            intervals.append(tuple(sorted((abs(d_ritz), abs(d_oracle)))))

        lambdas = gap_midpoints(intervals, floor=1e-5)
        assert lambdas
        flat = [value for m in sorted(sectors) for value in sectors[m]]
        from_ritz = count_split(ritz, q, spec.B0, lambdas)
        from_oracle = count_split(flat, q, spec.B0, lambdas)
        assert from_ritz.plus.counts == from_oracle.plus.counts
        assert from_ritz.minus.counts == from_oracle.minus.counts

    @pytest.mark.slow
    def test_magnetic_bump_sector_accuracy(self):
        spec = FieldSpec(B0=1.0, b=(RadialBump(c=0.3, R=1.0, k=12),))
        report = splitting_counts(1, spec, lambda_grid(1e-1, 1e-6, 11), 25, inspect=False)
        assert len(report.comparisons) == 25
        worst = report.worst_sector
        # measured: 1.99e-3 at m = -1 (Ritz shift 0.02633, ODE shift 0.02230)
        assert worst.m == -1
        assert 1e-3 < worst.relative_error < 5e-3
        assert worst.ritz > worst.oracle
        payload = report.to_json()["sectors"]
        assert payload["worst_m"] == -1
        assert payload["max_relative_error"] == pytest.approx(worst.relative_error)
        assert isinstance(payload["N+_agree"], bool) and isinstance(payload["N-_agree"], bool)


class TestSectorComparison:
    def test_pairs_single_window_eigenvalues(self):
        ritz = {-1: 2.03, 0: 2.5, 1: 3.5, 2: 2.1}
        sectors = {-1: [2.02], 0: [], 1: [2.9], 2: [2.0, 2.2]}
        rows = compare_sectors(1, 1.0, ritz, sectors)
        assert rows == [SectorComparison(-1, 2.03, 2.02)]
        assert rows[0].relative_error == pytest.approx(0.01 / 2.02)

    def test_radial_forms_give_one_value_per_sector(self, radial_spec):
        q, N = 1, 6
        A, Bm = landau_form_matrices(q, radial_spec, N, QuadratureGrid.build(radial_spec, N))
        values = sector_ritz_values(q, A, Bm)
        assert sorted(values) == list(sector_range(q, N))
        ritz = ritz_spectrum(q, radial_spec, N, QuadratureGrid.build(radial_spec, N))
        assert sorted(values.values()) == pytest.approx(sorted(ritz.eigenvalues), rel=1e-10)
