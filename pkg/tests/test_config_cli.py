import logging

import pytest

import main
from core.config import get_settings, load_run_file, reload_settings
from core.context import run_label
from core.experiment_loader import ExperimentLoader, preset_command, resolve_preset
from core.log_formatter import EnhancedLogFormatter, configure_file_logging
from core.utils import InvalidArgumentError
from harness.run_config import RunConfig
from numerics.precision import Precision


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("DGSIAC_WORKERS", "DGSIAC_PRECISION", "DGSIAC_OUTPUT_DIR"):
            monkeypatch.delenv(name, raising=False)
        settings = reload_settings()
        assert settings.workers == 1
        assert settings.precision == "standard"
        assert settings.output_dir == "results"
        assert not settings.file_logging

    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("DGSIAC_WORKERS", "3")
        monkeypatch.setenv("DGSIAC_LOG_LEVEL", "debug")
        reload_settings()
        assert get_settings().workers == 3
        assert get_settings().log_level == "DEBUG"

    @pytest.mark.parametrize("value", ["0", "many"])
    def test_invalid_workers(self, monkeypatch, value):
        monkeypatch.setenv("DGSIAC_WORKERS", value)
        with pytest.raises(InvalidArgumentError):
            reload_settings()


class TestRunFile:
    def test_parses_key_value_lines(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# quick run\ndegrees=2,3\nCFL = 0.05\n\nintegrator=sdc\n", encoding="utf-8")
        assert load_run_file(str(path)) == {"degrees": "2,3", "cfl": "0.05", "integrator": "sdc"}

    def test_missing_file(self, tmp_path):
        with pytest.raises(InvalidArgumentError):
            load_run_file(str(tmp_path / "absent.cfg"))


class TestRunConfig:
    def test_later_sources_win_and_empty_values_are_skipped(self):
        cfg = RunConfig.from_sources(
            {"cfl": 0.1, "degrees": [2, 3]},
            {"cfl": "0.05"},
            {"cfl": "", "degrees": "4", "precision": "Extended"},
        )
        assert cfg.cfl == 0.05
        assert cfg.degrees == (4,)
        assert cfg.precision is Precision.EXTENDED

    def test_cfl_by_degree(self):
        cfg = RunConfig.from_mapping({"cfl_by_degree": "1:0.1, 2:0.01"})
        assert cfg.cfl_for(1) == 0.1
        assert cfg.cfl_for(2) == 0.01
        assert cfg.cfl_for(3) == 0.1
        assert RunConfig.from_mapping({"cfl_by_degree": {1: 0.2}}).cfl_for(1) == 0.2

    def test_integrator_parameters(self):
        cfg = RunConfig.from_mapping({"integrator": "SDC", "iterations": "3", "variant": "literal"})
        assert cfg.integrator.kind == "sdc"
        assert cfg.integrator.iterations == 3
        assert cfg.integrator.label == "sdc(K=3)"

    def test_problem_defaults(self):
        cfg = RunConfig.from_mapping({"problem": "burgers"})
        assert cfg.time_for() == 0.5
        assert cfg.cfl_for(2) == 0.05

    @pytest.mark.parametrize(
        "values",
        [
            {"colour": "blue"},
            {"workers": "0"},
            {"workers": "two"},
            {"degrees": "0,1"},
            {"resolutions": "2"},
            {"cfl": "-0.1"},
            {"final_time": "0"},
            {"integrator": "euler"},
            {"problem": "heat"},
            {"precision": "quad"},
            {"wallclock": "maybe"},
            {"cfl_by_degree": "1=0.1"},
            {"reference": "1:20:1e-3"},
        ],
    )
    def test_invalid_values(self, values):
        with pytest.raises(InvalidArgumentError):
            RunConfig.from_mapping(values)

    def test_precision_gating_threshold(self):
        cfg = RunConfig.from_sources(resolve_preset("sdg-linear"))
        assert cfg.needs_extended_precision(4, 80)
        assert cfg.needs_extended_precision(3, 80) is False
        assert cfg.needs_extended_precision(2, 20) is False
        assert cfg.needs_extended_precision(2, 320) is False

    def test_non_doubling_resolutions_warn(self, caplog):
        with caplog.at_level(logging.WARNING, logger="harness.run_config"):
            RunConfig.from_mapping({"resolutions": "10,30"})
        assert "not successive doublings" in caplog.text


class TestExperimentLoader:
    def test_packaged_presets(self):
        loader = ExperimentLoader()
        names = loader.get_available_presets()
        expected = (
            "rk3-linear",
            "sdg-linear",
            "sdc-linear",
            "rk3-cost",
            "sdg-variable",
            "sdg-burgers",
            "rk3-cfl-plateau",
            "adaptive-sdg-linear",
        )
        for name in expected:
            assert name in names
        assert preset_command("rk3-cfl-plateau") == "cfl-sweep"
        assert preset_command("rk3-cost") == "timing"
        assert loader.describe("rk3-linear").startswith("converge:")

    def test_every_preset_builds_a_run_config(self):
        loader = ExperimentLoader()
        for name in loader.get_available_presets():
            RunConfig.from_sources(loader.resolve_preset(name))
            assert preset_command(name) in main.COMMANDS

    def test_shared_reference_tables(self):
        sdg = resolve_preset("sdg-linear")["reference"]
        sdc = resolve_preset("sdc-linear")["reference"]
        assert sdg == sdc
        assert sdg[4][160] == [9.82e-13, 2.12e-18]

    def test_unknown_preset(self):
        with pytest.raises(InvalidArgumentError):
            resolve_preset("no-such-preset")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ExperimentLoader(tmp_path / "absent.yaml").get_available_presets()

    @pytest.mark.parametrize(
        "content",
        ["rk3-linear: [unclosed", "- rk3-linear\n- sdg-linear\n", "rk3-linear:\n  settings: {}\n  extra: 1\n"],
        ids=["bad-yaml", "not-a-mapping", "unknown-section"],
    )
    def test_malformed_files(self, tmp_path, content):
        path = tmp_path / "presets.yaml"
        path.write_text(content, encoding="utf-8")
        with pytest.raises(ValueError):
            ExperimentLoader(path).get_available_presets()


class TestLogFormatter:
    def _record(self, name, message, level=logging.INFO):
        return logging.LogRecord(name, level, __file__, 1, message, None, None)

    def test_row_summary_is_compacted_and_labelled(self):
        formatter = EnhancedLogFormatter(use_colors=False)
        record = self._record("harness.studies", "Row done: dg_l2=1.0e-03 pp_l2=2.0e-04 rhs_evals=12 seconds=0.10")
        with run_label("p=1 N=8"):
            text = formatter.format(record)
        assert text == "[STUDY] (p=1 N=8) DG 1.0e-03 | filtered 2.0e-04 | 12 rhs evals in 0.10s"

    def test_unknown_logger_uses_level_prefix(self):
        formatter = EnhancedLogFormatter(use_colors=False)
        assert formatter.format(self._record("other", "hello", logging.WARNING)) == "[WARNING] hello"

    def test_colors(self):
        formatter = EnhancedLogFormatter(use_colors=True)
        text = formatter.format(self._record("siac.kernel", "built"))
        assert text.startswith("[SIAC] \033[32m") and text.endswith("\033[0m")

    def test_file_logging_records_row_label(self, monkeypatch, tmp_path):
        path = tmp_path / "debug.log"
        monkeypatch.setenv("DGSIAC_FILE_LOGGING", "true")
        monkeypatch.setenv("DGSIAC_LOG_FILE", str(path))
        reload_settings()
        target = logging.getLogger("dgsiac.file-logging-test")
        target.setLevel(logging.DEBUG)
        assert configure_file_logging(target.name)
        try:
            with run_label("p=2 N=4"):
                target.info("sweep finished")
        finally:
            for handler in list(target.handlers):
                handler.close()
                target.removeHandler(handler)
        assert "[p=2 N=4]" in path.read_text(encoding="utf-8")
        assert "sweep finished" in path.read_text(encoding="utf-8")

    def test_file_logging_can_be_disabled(self, monkeypatch):
        monkeypatch.setenv("DGSIAC_FILE_LOGGING", "false")
        reload_settings()
        assert not configure_file_logging("dgsiac.disabled-test")


class TestMain:
    def run(self, *argv):
        with pytest.raises(SystemExit) as excinfo:
            main.main(list(argv))
        return excinfo.value.code

    def test_list_presets(self, capsys):
        assert self.run("--list-presets") == 0
        assert "sdg-linear" in capsys.readouterr().err

    def test_no_command(self):
        assert self.run() == 1

    def test_invalid_configuration(self):
        assert self.run("converge", "--degrees", "0") == 1

    def test_unknown_preset(self):
        assert self.run("converge", "--preset", "no-such-preset") == 1

    def test_converge(self, tmp_path, capsys):
        output = tmp_path / "out" / "converge.csv"
        code = self.run(
            "converge", "--degrees", "1", "--resolutions", "8,16", "--final-time", "0.1",
            "--output", str(output), "--no-wallclock",
        )
        assert code == 0
        assert output.read_text(encoding="utf-8").startswith("degree,N,dg_l2")
        assert "Active Configuration" in capsys.readouterr().err

    def test_failed_rows_exit_with_error(self, tmp_path):
        code = self.run(
            "converge", "--problem", "burgers", "--degrees", "1", "--resolutions", "8",
            "--final-time", "1.2", "--output", str(tmp_path / "burgers.csv"),
        )
        assert code == 1

    def test_dump(self, tmp_path):
        output = tmp_path / "final.txt"
        code = self.run(
            "dump", "--degrees", "1", "--resolutions", "8", "--final-time", "0.1", "--output", str(output),
        )
        assert code == 0
        assert output.read_text(encoding="utf-8").startswith("a=")

    def test_flags_override_run_file_and_preset(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("cfl=0.05\nresolutions=10,20\n", encoding="utf-8")
        args = main.build_parser().parse_args(
            ["converge", "--preset", "sdg-linear", "--config", str(path), "--resolutions", "40", "--no-wallclock"]
        )
        cfg = RunConfig.from_sources(*main.collect_run_values(args))
        assert cfg.resolutions == (40,)
        assert cfg.cfl == 0.05
        assert cfg.degrees == (2, 3, 4)
        assert cfg.wallclock is False

    def test_default_output(self):
        assert main.default_output("converge", "rk3-linear").endswith("rk3-linear.csv")
        assert main.default_output("dump", None).endswith("dump.txt")
