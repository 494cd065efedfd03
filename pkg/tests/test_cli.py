import argparse
import json
import logging

import pytest

from spgd.cli import main as cli_main
from spgd.cli.errors import EXIT_FIT_FAILURE, EXIT_OK, EXIT_USAGE
from spgd.cli.options import box, seed_list
from spgd.io import table_csv, write_dataset
from spgd.sampling import cross_plan
from spgd.validator import ValidationError


@pytest.fixture
def run(monkeypatch):
    # keep pytest's log capture handlers on the root logger
    monkeypatch.setattr(cli_main, "configure_logging", lambda verbose, quiet: None)
    return lambda *argv: cli_main.main([str(a) for a in argv])


@pytest.fixture
def toy_csv(tmp_path, xy_dataset):
    path = tmp_path / "toy.csv"
    write_dataset(path, xy_dataset)
    return path


def printed(capsys, key):
    for line in capsys.readouterr().out.splitlines():
        for part in line.split():
            name, _, value = part.partition("=")
            if name == key:
                return value
    raise AssertionError(f"{key} not printed")


class TestOptionParsers:
    def test_seed_range(self):
        assert seed_list("1..5") == (1, 2, 3, 4, 5)
        assert seed_list("0,3") == (0, 3)

    def test_box(self):
        assert box("0:1,-1:2") == ((0.0, 1.0), (-1.0, 2.0))


class TestFitAndPredict:
    def test_fit_then_predict_reproduces_targets(self, run, toy_csv, tmp_path, capsys):
        model = tmp_path / "model.json"
        report = tmp_path / "report.json"
        assert run("fit", "--data", toy_csv, "--out", model, "--report", report, "--degree-max", 2) == EXIT_OK
        assert float(printed(capsys, "train_error")) < 1e-6
        assert json.loads(report.read_text())["rank"] >= 1

        predictions = tmp_path / "pred.csv"
        assert run("predict", "--model", model, "--data", toy_csv, "--out", predictions) == EXIT_OK
        assert float(printed(capsys, "relative_l2_error")) < 1e-6
        header = predictions.read_text().splitlines()[0]
        assert header == "s1,s2,f,f_pred"

    def test_missing_file(self, run, tmp_path):
        assert run("fit", "--data", tmp_path / "nope.csv") == EXIT_USAGE

    def test_missing_required_option(self, run):
        assert run("fit") == EXIT_USAGE

    def test_zero_targets_fail_the_fit(self, run, tmp_path):
        path = tmp_path / "zeros.csv"
        path.write_text("s1,s2,f\n0.1,0.2,0\n-0.3,0.5,0\n0.7,-0.9,0\n")
        assert run("fit", "--data", path) == EXIT_FIT_FAILURE

    def test_sparse_dim_out_of_range(self, run, toy_csv):
        assert run("fit", "--data", toy_csv, "--method", "s2pgd", "--sparse-dims", "3") == EXIT_USAGE

    def test_bad_row_is_reported(self, run, tmp_path, caplog):
        path = tmp_path / "bad.csv"
        path.write_text("s1,s2,f\n0.1,0.2,1.0\n0.3,abc,2.0\n")
        assert run("fit", "--data", path) == EXIT_USAGE
        assert "line 3" in caplog.text

    def test_predict_dimension_mismatch(self, run, toy_csv, tmp_path):
        model = tmp_path / "model.json"
        assert run("fit", "--data", toy_csv, "--out", model, "--select", "train") == EXIT_OK
        wide = tmp_path / "wide.csv"
        wide.write_text("s1,s2,s3\n0.1,0.2,0.3\n")
        assert run("predict", "--model", model, "--data", wide) == EXIT_USAGE

    def test_predict_empty_file(self, run, toy_csv, tmp_path):
        model = tmp_path / "model.json"
        assert run("fit", "--data", toy_csv, "--out", model, "--select", "train") == EXIT_OK
        empty = tmp_path / "empty.csv"
        empty.write_text("s1,s2\n")
        out = tmp_path / "pred.csv"
        assert run("predict", "--model", model, "--data", empty, "--out", out) == EXIT_OK
        assert out.read_text().strip() == "s1,s2,f_pred"


class TestConfigFile:
    def test_file_fills_missing_flags(self, run, toy_csv, tmp_path, capsys):
        config = tmp_path / "run.cfg"
        config.write_text(f"# toy run\ndata = {toy_csv}\nselect = train\ndegree-max = 2\n")
        assert run("fit", "--config", config) == EXIT_OK
        assert float(printed(capsys, "train_error")) < 1e-6

    def test_command_line_wins(self, run, toy_csv, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(f"data = {tmp_path / 'missing.csv'}\n")
        assert run("fit", "--config", config, "--data", toy_csv, "--select", "train") == EXIT_OK

    def test_unknown_key(self, run, toy_csv, tmp_path, caplog):
        config = tmp_path / "run.cfg"
        config.write_text("bogus = 1\n")
        assert run("fit", "--config", config, "--data", toy_csv) == EXIT_USAGE
        assert "bogus" in caplog.text

    def test_bad_boolean(self, run, toy_csv, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("no-concurrent = maybe\n")
        assert run("fit", "--config", config, "--data", toy_csv) == EXIT_USAGE


class TestBenchmarkCommand:
    def test_unknown_case(self, run, caplog):
        assert run("benchmark", "--case", "bogus") == EXIT_USAGE
        assert "s2_ex1_cheb3d" in caplog.text

    @pytest.mark.slow
    def test_s2_ex1(self, run, tmp_path):
        out = tmp_path / "report.json"
        assert run("benchmark", "--case", "s2_ex1_cheb3d", "--out", out) == EXIT_OK
        document = json.loads(out.read_text())
        assert document["pass"] and document["penalized_dim"] == [2]


class TestAnovaCommand:
    def test_case_with_sobol(self, run, tmp_path, capsys):
        out = tmp_path / "anova.json"
        code = run("anova", "--case", "anova_2d", "--sobol", 5000, "--test", 200, "--out", out)
        assert code == EXIT_OK
        text = capsys.readouterr().out
        assert "budget=25" in text and "S12=" in text
        assert "anchor" in json.loads(out.read_text())

    def test_anchor_outside_box(self, run):
        assert run("anova", "--case", "anova_2d", "--anchor", "5,5") == EXIT_USAGE

    def test_needs_exactly_one_source(self, run, toy_csv):
        assert run("anova") == EXIT_USAGE
        assert run("anova", "--case", "anova_2d", "--data", toy_csv) == EXIT_USAGE

    def test_from_data_then_predict(self, run, tmp_path, capsys):
        plan = cross_plan([0.0, 0.0], [6, 6], [(-1.0, 1.0)] * 2).with_coupling(5, seed=0)
        points = plan.points()
        data = tmp_path / "cross.csv"
        x, y = points.T
        data.write_text(table_csv(points, {"f": x + y + x * y}))
        model = tmp_path / "anova.json"
        assert run("anova", "--data", data, "--domain=-1:1,-1:1", "--out", model) == EXIT_OK
        assert run("predict", "--model", model, "--data", data) == EXIT_OK
        assert float(printed(capsys, "relative_l2_error")) < 1e-9


class TestSindyCommand:
    def test_few_samples_warn(self, run, caplog):
        caplog.set_level(logging.WARNING)
        assert run("sindy", "--samples", 5, "--horizon", 2) == EXIT_OK
        assert "library terms" in caplog.text

    def test_large_threshold_empties_supports(self, run, caplog, tmp_path):
        caplog.set_level(logging.WARNING)
        assert run("sindy", "--stls-threshold", 100, "--horizon", 2, "--out", tmp_path) == EXIT_OK
        assert "removed every library term" in caplog.text
        document = json.loads((tmp_path / "identification.json").read_text())
        assert document["supports"] == [[], [], []]
        assert (tmp_path / "lorenz_coefficients.csv").exists()


class TestEntryPoint:
    def test_version(self, run, capsys):
        with pytest.raises(SystemExit) as info:
            run("--version")
        assert info.value.code == 0
        assert "spgd" in capsys.readouterr().out

    def test_no_command_prints_help(self, run, capsys):
        assert run() == EXIT_OK
        assert "usage" in capsys.readouterr().out

    def test_validation_errors_keep_their_field(self):
        with pytest.raises(ValidationError) as info:
            cli_main.commands.fit_config(
                argparse.Namespace(sparse_dims="0", alpha=None, chi_lim=None), 2
            )
        assert "--sparse-dims" in info.value.normalized_messages()
