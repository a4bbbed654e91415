import pytest

from rydfac.config import (
    ConfigError,
    load_run_config,
    load_sweep_config,
    read_key_values,
)


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


MINIMAL_RUN = """
# reference damped-Rabi point
detuning_ratio = 1.32
nu = 6
sigma_ratio = 0.05
xi_ratio = 1.25e-3
"""


class TestReadKeyValues:
    def test_comments_and_blanks_skipped(self, tmp_path):
        path = write(tmp_path, "# comment\n\na = 1\nb= two \n")
        assert read_key_values(path) == {"a": "1", "b": "two"}

    def test_malformed_line(self, tmp_path):
        path = write(tmp_path, "just a line\n")
        with pytest.raises(ConfigError, match="key=value"):
            read_key_values(path)

    def test_duplicate_key(self, tmp_path):
        path = write(tmp_path, "a=1\na=2\n")
        with pytest.raises(ConfigError, match="duplicate"):
            read_key_values(path)


class TestRunConfig:
    def test_minimal_with_defaults(self, tmp_path):
        setup = load_run_config(write(tmp_path, MINIMAL_RUN))
        assert setup.params.detuning_ratio == 1.32
        assert setup.n_points == 2**14
        assert setup.x_min == 0.1
        assert setup.x_max == 10.5
        assert setup.propagator.dt == 1e-3
        assert setup.propagator.t_final == 40.0

    def test_unknown_key_is_named(self, tmp_path):
        path = write(tmp_path, MINIMAL_RUN + "detuning_ration = 2\n")
        with pytest.raises(ConfigError, match="detuning_ration"):
            load_run_config(path)

    def test_missing_key_is_named(self, tmp_path):
        path = write(tmp_path, "nu = 6\nsigma_ratio = 0.05\nxi_ratio = 1e-3\n")
        with pytest.raises(ConfigError, match="detuning_ratio"):
            load_run_config(path)

    def test_free_rabi_without_detuning(self, tmp_path):
        path = write(tmp_path, "free_rabi = true\nnu = 6\nsigma_ratio = 0.05\nxi_ratio = 1e-3\n")
        setup = load_run_config(path)
        assert setup.params.free_rabi
        assert setup.params.detuning_ratio == 0.0

    def test_zero_detuning_without_free_rabi(self, tmp_path):
        path = write(
            tmp_path, "detuning_ratio = 0\nnu = 6\nsigma_ratio = 0.05\nxi_ratio = 1e-3\n"
        )
        with pytest.raises(ConfigError, match="free_rabi"):
            load_run_config(path)

    def test_bad_number(self, tmp_path):
        path = write(tmp_path, MINIMAL_RUN.replace("1.32", "abc"))
        with pytest.raises(ConfigError, match="detuning_ratio"):
            load_run_config(path)

    def test_bad_propagation_settings(self, tmp_path):
        path = write(tmp_path, MINIMAL_RUN + "dt = -1\n")
        with pytest.raises(ConfigError, match="dt"):
            load_run_config(path)

    def test_paper_scale_grid(self, tmp_path):
        setup = load_run_config(write(tmp_path, MINIMAL_RUN))
        assert setup.build_grid().n_points == 2**14
        assert setup.build_grid(paper_scale=True).n_points == 2**17

    def test_manifest_entries(self, tmp_path):
        setup = load_run_config(write(tmp_path, MINIMAL_RUN))
        entries = setup.manifest_entries()
        assert entries["detuning_ratio"] == 1.32
        assert entries["n_points"] == 2**14
        assert "c_nu" not in entries


MINIMAL_SWEEP = """
detuning_ratios = 1.32, 1.0
xi_ratios = 1.25e-3, 0.03e-3
nu = 6
sigma_ratio = 0.05
t_final = 12
"""


class TestSweepConfig:
    def test_jobs_are_sorted_product(self, tmp_path):
        spec = load_sweep_config(write(tmp_path, MINIMAL_SWEEP, "sweep.cfg"))
        jobs = spec.jobs()
        combos = [(job.params.detuning_ratio, job.params.xi_ratio) for job in jobs]
        assert combos == [(1.0, 3e-5), (1.0, 1.25e-3), (1.32, 3e-5), (1.32, 1.25e-3)]
        assert all(job.propagator.t_final == 12 for job in jobs)

    def test_empty_lists_give_no_jobs(self, tmp_path):
        text = "detuning_ratios =\nxi_ratios = 1e-3\nnu = 6\nsigma_ratio = 0.05\n"
        spec = load_sweep_config(write(tmp_path, text, "sweep.cfg"))
        assert spec.jobs() == []

    def test_duplicate_values_rejected(self, tmp_path):
        text = MINIMAL_SWEEP.replace("1.32, 1.0", "1.32, 1.32")
        with pytest.raises(ConfigError, match="duplicate"):
            load_sweep_config(write(tmp_path, text, "sweep.cfg"))

    def test_run_only_keys_rejected(self, tmp_path):
        text = MINIMAL_SWEEP + "detuning_ratio = 1.0\n"
        with pytest.raises(ConfigError, match="detuning_ratio"):
            load_sweep_config(write(tmp_path, text, "sweep.cfg"))

    def test_invalid_sweep_point_rejected(self, tmp_path):
        text = MINIMAL_SWEEP.replace("1.32, 1.0", "1.32, 0.0")
        with pytest.raises(ConfigError, match="sweep point"):
            load_sweep_config(write(tmp_path, text, "sweep.cfg"))
