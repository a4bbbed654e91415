import numpy as np
import pytest

from rydfac import io
from rydfac.fitting import FitResult
from rydfac.grid import SpinorField, initial_state, make_grid
from rydfac.observables import CoherenceSeries, DensitySnapshot


@pytest.fixture
def sample_series():
    rng = np.random.default_rng(8)
    n = 40
    times = np.linspace(0.0, 2.0, n)
    pop_r = rng.uniform(0.0, 0.5, n)
    pop_g = 1.0 - pop_r
    return CoherenceSeries(
        times=times,
        rho_rg=rng.standard_normal(n) * 0.1 + 1j * rng.standard_normal(n) * 0.1,
        pop_r=pop_r,
        pop_g=pop_g,
        norm_total=pop_r + pop_g,
        boundary_leak=rng.uniform(0.0, 1e-9, n),
    )


class TestSeriesCsv:
    def test_round_trip_is_exact(self, tmp_path, sample_series):
        path = tmp_path / "series.csv"
        io.write_series_csv(path, sample_series)
        back = io.read_series_csv(path)
        assert np.array_equal(back.times, sample_series.times)
        assert np.array_equal(back.rho_rg, sample_series.rho_rg)
        assert np.array_equal(back.pop_r, sample_series.pop_r)
        assert np.array_equal(back.boundary_leak, sample_series.boundary_leak)

    def test_header(self, tmp_path, sample_series):
        path = tmp_path / "series.csv"
        io.write_series_csv(path, sample_series)
        header = path.read_text().splitlines()[0]
        assert header == ",".join(io.SERIES_COLUMNS)

    def test_schema_mismatch_is_an_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError, match="expected columns"):
            io.read_series_csv(path)


class TestFieldCsv:
    def test_round_trip(self, tmp_path, damped_params):
        grid = make_grid(256, 0.5, 1.5)
        field = initial_state(grid, damped_params)
        field.psi_r = field.psi_g * 0.3j
        path = tmp_path / "field.csv"
        io.write_field_csv(path, grid, field)
        x, back = io.read_field_csv(path)
        assert np.array_equal(x, grid.x)
        assert np.array_equal(back.psi_r, field.psi_r)
        assert np.array_equal(back.psi_g, field.psi_g)


class TestSnapshotsCsv:
    def test_long_format_rows(self, tmp_path):
        grid = make_grid(256, 0.5, 1.5)
        snaps = [
            DensitySnapshot(t=0.0, dens_r=np.zeros(256), dens_g=np.ones(256)),
            DensitySnapshot(t=1.0, dens_r=np.ones(256), dens_g=np.zeros(256)),
        ]
        path = tmp_path / "snapshots.csv"
        io.write_snapshots_csv(path, snaps, grid)
        lines = path.read_text().splitlines()
        assert lines[0] == "t,x,dens_g,dens_r"
        assert len(lines) == 1 + 2 * 256


class TestFitAndPeaks:
    def test_fit_csv(self, tmp_path):
        fit = FitResult(
            gamma_perp=0.0245,
            amplitude=0.5,
            r_squared=0.995,
            exponential_flag=True,
            peaks=[(1.0, 0.4), (2.0, 0.3), (3.0, 0.2)],
            n_peaks=3,
            floor_used=0.05,
        )
        path = tmp_path / "fit.csv"
        io.write_fit_csv(path, fit)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(io.FIT_COLUMNS)
        cells = lines[1].split(",")
        assert float(cells[0]) == 0.0245
        assert cells[3] == "true"

    def test_peaks_csv(self, tmp_path):
        path = tmp_path / "peaks.csv"
        io.write_peaks_csv(path, [(1.0, 0.5), (2.5, 0.25)])
        lines = path.read_text().splitlines()
        assert lines[0] == "t_peak,value"
        assert len(lines) == 3


class TestSweepCsv:
    def test_round_trip(self, tmp_path):
        rows = [
            {
                "detuning_ratio": 1.32,
                "xi_ratio": 1.25e-3,
                "gamma_perp_numeric": 0.0284,
                "gamma_perp_analytic": 0.0245,
                "rel_deviation": 0.159,
                "exponential_flag": True,
                "r_squared": 0.9926,
                "n_peaks": 6,
                "status": "ok",
            }
        ]
        path = tmp_path / "sweep.csv"
        io.write_sweep_csv(path, rows)
        back = io.read_sweep_csv(path)
        assert len(back) == 1
        assert float(back[0]["gamma_perp_numeric"]) == 0.0284
        assert back[0]["exponential_flag"] == "true"
        assert back[0]["status"] == "ok"


class TestManifest:
    def test_round_trip_sorted(self, tmp_path):
        path = tmp_path / "manifest"
        io.write_manifest(path, {"b_key": 2, "a_key": 1.5, "c_key": True, "d": "x=y"})
        text = path.read_text()
        assert text.splitlines()[0].startswith("a_key=")
        back = io.read_manifest(path)
        assert back["a_key"] == "1.5"
        assert back["c_key"] == "true"
        assert back["d"] == "x=y"

    def test_full_precision_floats(self, tmp_path, sample_series):
        path = tmp_path / "series.csv"
        io.write_series_csv(path, sample_series)
        cell = path.read_text().splitlines()[1].split(",")[1]
        assert float(cell) == sample_series.rho_rg[0].real
