import numpy as np
import pytest

from gravlabel.cli import main
from gravlabel.config import load_config
from gravlabel.errors import ConfigError
from gravlabel.pipeline import load_dataset, run_pipeline, run_sweep
from gravlabel.reporting import (
    load_matrix_csv,
    load_report,
    save_matrix_csv,
    strip_timings,
)

from .conftest import FIXTURE_DATASETS

CONFIG_TEMPLATE = """
[dataset]
path = {path}
kind = {kind}
truth_column = {truth_column}
truth_rule = {truth_rule}
{text_line}

[lfs]
path = {lf}
{use_first_line}

[reinforce]
metric = euclidean
mode = {mode}
{mode_line}
epsilon_d = {epsilon_d}

[model]
kind = {model}

[run]
arm = {arm}
gold_fraction = 0.3
seed = {seed}
repeats = {repeats}
"""


def make_config(tmp_path, name="redwine", arm="reinforced", model="naive_bayes",
                mode="fixed_epsilon", mode_line="epsilon = 2.0",
                epsilon_d="0.5", seed=7, repeats=1, lf=None, use_first=None,
                filename="cfg.ini"):
    ds = FIXTURE_DATASETS[name]
    body = CONFIG_TEMPLATE.format(
        path=ds["path"], kind=ds["kind"], truth_column=ds["truth_column"],
        truth_rule=ds["truth_rule"],
        text_line=(f"text_column = {ds['text_column']}"
                   if ds["kind"] == "text" else ""),
        lf=lf or ds["lf"],
        use_first_line=f"use_first = {use_first}" if use_first else "",
        mode=mode, mode_line=mode_line, epsilon_d=epsilon_d,
        model=model, arm=arm, seed=seed, repeats=repeats,
    )
    path = tmp_path / filename
    path.write_text(body, encoding="utf-8")
    return path


class TestConfig:
    def test_loads_and_echoes(self, tmp_path):
        cfg = load_config(make_config(tmp_path))
        assert cfg.run.arm == "reinforced"
        echo = cfg.echo()
        assert echo["reinforce"]["epsilon"] == 2.0
        assert echo["reinforce"]["epsilon_d"] == 0.5

    def test_infinite_cutoff_round_trips_through_echo(self, tmp_path):
        cfg = load_config(make_config(tmp_path, epsilon_d="inf"))
        assert cfg.echo()["reinforce"]["epsilon_d"] == "inf"

    def test_missing_lf_file_is_config_error(self, tmp_path):
        path = make_config(tmp_path, lf=tmp_path / "nope.lf")
        with pytest.raises(ConfigError, match="LF file"):
            load_config(path)

    def test_supervised_needs_truth_column(self, tmp_path):
        path = make_config(tmp_path, arm="supervised")
        text = path.read_text().replace("truth_column = quality", "")
        path.write_text(text)
        with pytest.raises(ConfigError, match="truth"):
            load_config(path)

    def test_overrides(self, tmp_path):
        cfg = load_config(make_config(tmp_path), {"run.seed": 99})
        assert cfg.run.seed == 99

    def test_unknown_arm(self, tmp_path):
        path = make_config(tmp_path, arm="quantum")
        with pytest.raises(ConfigError, match="arm"):
            load_config(path)


class TestPipeline:
    def test_reinforced_run_improves_or_keeps_label_count(self, tmp_path):
        cfg = load_config(make_config(tmp_path))
        report = run_pipeline(cfg)
        assert report["status"] == "ok"
        run = report["runs"][0]
        assert run["reinforce"]["labeled_points_post"] >= 0
        assert run["metrics"]["accuracy"] is not None
        assert report["mean_labeled_count"] == run["labeled_count"]

    def test_baseline_equals_noop_reinforced(self, tmp_path):
        base = run_pipeline(load_config(make_config(
            tmp_path, arm="baseline", filename="a.ini")))
        noop = run_pipeline(load_config(make_config(
            tmp_path, arm="reinforced", mode_line="epsilon = 1e18",
            filename="b.ini")))
        b, n = base["runs"][0], noop["runs"][0]
        assert b["labeled_count"] == n["labeled_count"]
        assert b["metrics"] == n["metrics"]
        assert b["lf_stats_pre"] == n["lf_stats_pre"]

    def test_supervised_arm(self, tmp_path):
        report = run_pipeline(load_config(make_config(tmp_path,
                                                      arm="supervised")))
        assert report["status"] == "ok"
        assert report["runs"][0]["eval_on"] == "pool"
        assert report["runs"][0]["lf_stats_pre"] is None

    def test_zero_coverage_is_structured_failure(self, tmp_path):
        dead = tmp_path / "dead.lf"
        dead.write_text("[never]\ntype = numeric\nfeature = alcohol\n"
                        "op = >\nthreshold = 5\nemit = 1\n", encoding="utf-8")
        report = run_pipeline(load_config(make_config(tmp_path, lf=dead,
                                                      arm="baseline")))
        assert report["status"] == "failed"
        failure = report["runs"][0]["failure"]
        assert failure["stage"] == "aggregate"
        assert failure["error"] == "NoTrainingDataError"

    def test_repeats_average_metrics(self, tmp_path):
        report = run_pipeline(load_config(make_config(tmp_path, repeats=3)))
        assert [r["seed"] for r in report["runs"]] == [7, 8, 9]
        accs = [r["metrics"]["accuracy"] for r in report["runs"]]
        assert report["mean_metrics"]["accuracy"] == pytest.approx(
            sum(accs) / 3)

    def test_text_pipeline_runs(self, tmp_path):
        report = run_pipeline(load_config(make_config(
            tmp_path, name="youtube", model="logreg",
            mode="iqr_factor", mode_line="h_iqr = 0.5", use_first=5)))
        assert report["status"] == "ok"
        assert report["runs"][0]["labeled_count"] > 0

    def test_supervised_text_leaks_gold_when_pool_unlabeled(self, tmp_path):
        ds = FIXTURE_DATASETS["youtube"]
        stripped = tmp_path / "nolabels.csv"
        with open(ds["path"], encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        stripped.write_text("\n".join(["CONTENT"]
                                      + [ln.rsplit(",", 1)[0]
                                         for ln in lines[1:]]) + "\n",
                            encoding="utf-8")
        # pool has no truth: supervised must fall back to gold-on-gold
        cfg_path = make_config(tmp_path, name="youtube", arm="supervised",
                               model="knn")
        text = cfg_path.read_text().replace(str(ds["path"]), str(stripped))
        text = text.replace("truth_column = CLASS", "")
        cfg_path.write_text(text)
        with pytest.raises(ConfigError):
            load_config(cfg_path)  # supervised without truth is rejected

    def test_line_corpus_supports_labeling_commands(self, tmp_path):
        corpus = tmp_path / "comments.txt"
        corpus.write_text("please check out my channel\n"
                          "i love this song\n"
                          "subscribe now\n", encoding="utf-8")
        cfg = tmp_path / "lines.ini"
        cfg.write_text(f"""
[dataset]
path = {corpus}
kind = text

[lfs]
path = {FIXTURE_DATASETS['youtube']['lf']}
use_first = 3

[run]
arm = baseline
gold_fraction = 0.34
seed = 1
""", encoding="utf-8")
        out = tmp_path / "out"
        assert main(["apply-lfs", "--config", str(cfg),
                     "--out", str(out)]) == 0
        mat, _ = load_matrix_csv(out / "label_matrix.csv")
        assert mat.m == 3

    def test_weather_fixture_with_missing_cells(self, tmp_path):
        with pytest.warns(UserWarning, match="dropped"):
            report = run_pipeline(load_config(make_config(
                tmp_path, name="weather", model="logreg", arm="baseline")))
        assert report["status"] == "ok"


class TestSweep:
    def test_rows_and_failing_cell(self, tmp_path):
        cfg = load_config(make_config(tmp_path, mode="iqr_factor",
                                      mode_line="h_iqr = 1.0"))
        report, plot_rows = run_sweep(cfg, "metric",
                                      ["euclidean", "not_a_metric"])
        assert report["rows"][0]["status"] == "ok"
        assert report["rows"][1]["status"] == "failed"
        assert plot_rows[1]["status"] == "failed"

    def test_single_value_sweep_matches_run(self, tmp_path):
        cfg = load_config(make_config(tmp_path))
        sweep_report, _ = run_sweep(cfg, "epsilon", [2.0])
        run_report = run_pipeline(load_config(make_config(tmp_path)))
        cell = sweep_report["rows"][0]["report"]
        assert cell["mean_metrics"] == run_report["mean_metrics"]
        assert cell["mean_labeled_count"] == run_report["mean_labeled_count"]

    def test_num_lfs_sweep(self, tmp_path):
        cfg = load_config(make_config(tmp_path, name="youtube", model="knn",
                                      mode="iqr_factor",
                                      mode_line="h_iqr = 1.0"))
        report, plot_rows = run_sweep(cfg, "num_lfs", [2, 5])
        assert all(r["status"] == "ok" for r in report["rows"])
        pre = [r["report"]["runs"][0]["lf_stats_pre"]["coverage"]
               for r in report["rows"]]
        assert len(pre[0]) == 2 and len(pre[1]) == 5


class TestCli:
    def run_cli(self, *argv):
        return main([str(a) for a in argv])

    def test_run_writes_report(self, tmp_path, capsys):
        cfg = make_config(tmp_path)
        out = tmp_path / "out"
        assert self.run_cli("run", "--config", cfg, "--out", out) == 0
        report = load_report(out / "report.json")
        assert report["status"] == "ok"
        assert "acc=" in capsys.readouterr().out
        summary = report["summary"]
        assert summary["arm"] == "reinforced"
        assert summary["end_model"] == "naive_bayes"
        assert summary["f1"] == report["mean_metrics"]["f1"]
        assert summary["labeled_count"] == report["mean_labeled_count"]

    def test_apply_lfs_and_matrix_round_trip(self, tmp_path):
        cfg = make_config(tmp_path)
        out = tmp_path / "out"
        assert self.run_cli("apply-lfs", "--config", cfg, "--out", out) == 0
        mat, ids = load_matrix_csv(out / "label_matrix.csv")
        assert mat.lf_names == ("check_alcohol", "check_sulphate",
                                "check_citric")
        assert len(ids) == mat.k
        copy = tmp_path / "copy.csv"
        save_matrix_csv(copy, mat, ids)
        assert copy.read_text() == (out / "label_matrix.csv").read_text()

    def test_rerun_is_byte_identical(self, tmp_path):
        cfg = make_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        self.run_cli("apply-lfs", "--config", cfg, "--out", out_a)
        self.run_cli("apply-lfs", "--config", cfg, "--out", out_b)
        assert ((out_a / "label_matrix.csv").read_bytes()
                == (out_b / "label_matrix.csv").read_bytes())

    def test_reinforce_noop_equals_input(self, tmp_path):
        cfg = make_config(tmp_path, mode_line="epsilon = 1e18")
        out = tmp_path / "out"
        assert self.run_cli("reinforce", "--config", cfg, "--out", out) == 0
        pre, _ = load_matrix_csv(out / "label_matrix.csv")
        post, _ = load_matrix_csv(out / "augmented_matrix.csv")
        np.testing.assert_array_equal(pre.entries, post.entries)

    def test_aggregate_from_matrix_file(self, tmp_path):
        cfg = make_config(tmp_path)
        out = tmp_path / "out"
        self.run_cli("reinforce", "--config", cfg, "--out", out)
        assert self.run_cli("aggregate", "--config", cfg, "--out", out,
                            "--matrix", out / "augmented_matrix.csv") == 0
        lines = (out / "labels.csv").read_text().splitlines()
        assert lines[0] == "point_id,label"
        labels = {int(v) for _, v in (ln.split(",") for ln in lines[1:])}
        assert labels <= {-1, 0, 1}

    def test_train_then_evaluate(self, tmp_path, capsys):
        cfg = make_config(tmp_path)
        out = tmp_path / "out"
        assert self.run_cli("train", "--config", cfg, "--out", out) == 0
        assert self.run_cli("evaluate", "--config", cfg, "--out", out) == 0
        metrics = load_report(out / "metrics.json")
        assert set(metrics) == {"accuracy", "precision", "recall", "f1"}

    def test_stats_prints_table(self, tmp_path, capsys):
        cfg = make_config(tmp_path)
        assert self.run_cli("stats", "--config", cfg, "--out",
                            tmp_path / "out") == 0
        out = capsys.readouterr().out
        assert "check_alcohol" in out and "(mean)" in out

    def test_reinforce_auto_mode_diagnostics_recompute(self, tmp_path):
        cfg = make_config(tmp_path, name="youtube", model="logreg",
                          mode="auto_iqr", mode_line="xi = 0.35",
                          epsilon_d="inf", use_first=5)
        out = tmp_path / "out"
        assert self.run_cli("reinforce", "--config", cfg, "--out", out) == 0
        diag = load_report(out / "reinforce.json")
        stats = diag["stats_pre"]
        want = (0.35 * stats["sum_coverage"] * stats["sum_overlaps"]
                * stats["sum_conflicts"])
        assert diag["h_iqr"] == pytest.approx(want, rel=1e-12)
        assert len(diag["boundaries"]) == 1
        b_neg, b_pos = diag["boundaries"][0]
        assert b_neg <= b_pos

    def test_sweep_writes_plot_data(self, tmp_path):
        cfg = make_config(tmp_path, mode="iqr_factor", mode_line="h_iqr = 1.0",
                          epsilon_d="inf")
        out = tmp_path / "out"
        assert self.run_cli("sweep", "--config", cfg, "--out", out,
                            "--param", "h_iqr", "--values", "0.5,1.0") == 0
        header = (out / "plot_data.csv").read_text().splitlines()[0]
        assert header.startswith("param,value,status")
        assert "f1" in header and "labeled_count" in header

    def test_missing_config_is_clean_error(self, tmp_path, capsys):
        assert self.run_cli("run", "--config", tmp_path / "ghost.ini") == 1
        assert "error:" in capsys.readouterr().err

    def test_failed_run_exits_nonzero_with_report(self, tmp_path):
        dead = tmp_path / "dead.lf"
        dead.write_text("[never]\ntype = numeric\nfeature = alcohol\n"
                        "op = >\nthreshold = 5\nemit = 1\n", encoding="utf-8")
        cfg = make_config(tmp_path, lf=dead, arm="baseline")
        out = tmp_path / "out"
        assert self.run_cli("run", "--config", cfg, "--out", out) == 1
        report = load_report(out / "report.json")
        assert report["status"] == "failed"


class TestDeterminism:
    def test_sequential_reports_byte_identical(self, tmp_path):
        cfg = make_config(tmp_path, repeats=2)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["run", "--config", str(cfg), "--out", str(out_a),
                     "--sequential"]) == 0
        assert main(["run", "--config", str(cfg), "--out", str(out_b),
                     "--sequential"]) == 0
        a = strip_timings(load_report(out_a / "report.json"))
        b = strip_timings(load_report(out_b / "report.json"))
        from gravlabel.reporting import canonical_json
        assert canonical_json(a).encode() == canonical_json(b).encode()

    def test_backends_agree_on_decisions(self, tmp_path):
        from gravlabel.backend import compiled_available

        if not compiled_available():
            pytest.skip("compiled kernel not built")
        cfg_py = load_config(make_config(tmp_path, filename="py.ini"),
                             {"run.backend": "python"})
        cfg_cy = load_config(make_config(tmp_path, filename="cy.ini"),
                             {"run.backend": "cython"})
        a = run_pipeline(cfg_py)
        b = run_pipeline(cfg_cy)
        assert a["runs"][0]["labeled_count"] == b["runs"][0]["labeled_count"]
        assert a["runs"][0]["metrics"] == b["runs"][0]["metrics"]


def test_dataset_loading_matches_fixture_schemas():
    for name, ds in FIXTURE_DATASETS.items():
        cfg_text = {
            "path": str(ds["path"]), "kind": ds["kind"],
            "truth_column": ds["truth_column"],
            "truth_rule": ds.get("truth_rule", "binary"),
        }
        from gravlabel.config import DatasetConfig, LFConfig, PipelineConfig

        cfg = PipelineConfig(
            dataset=DatasetConfig(text_column=ds.get("text_column"),
                                  **cfg_text),
            lfs=LFConfig(path=str(ds["lf"])),
        )
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            d = load_dataset(cfg)
        assert len(d) > 100
        if ds["kind"] == "numeric":
            assert d.X.min() >= 0.0 and d.X.max() <= 1.0
