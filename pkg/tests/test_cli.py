"""End-to-end command-line behavior, exit codes, and output formats."""

import json

import numpy as np
import pytest

from prs.base_features import FEATURE_NAMES
from prs.cli import main
from prs.dataset import generate_synthetic, write_dataset


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli-data")
    manifest = write_dataset(generate_synthetic(4, 64, seed=3), root)
    return str(manifest)


def run_ok(argv, capsys):
    rc = main(argv)
    captured = capsys.readouterr()
    assert rc == 0, captured.err
    return captured.out


# -- synth ---------------------------------------------------------------------


def test_synth_writes_manifest_and_signal_files(tmp_path, capsys):
    out = tmp_path / "data"
    stdout = run_ok(
        ["synth", "--n", "3", "--len", "32", "--seed", "1", "--out", str(out)],
        capsys,
    )
    assert stdout.strip().endswith("manifest.csv")
    assert (out / "manifest.csv").exists()
    assert len(list(out.glob("*.txt"))) == 6


def test_synth_is_deterministic_across_directories(tmp_path, capsys):
    args = ["synth", "--n", "2", "--len", "32", "--seed", "9"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    capsys.readouterr()
    a = (tmp_path / "a" / "manifest.csv").read_bytes()
    b = (tmp_path / "b" / "manifest.csv").read_bytes()
    assert a == b
    assert (tmp_path / "a" / "P0.txt").read_bytes() == (
        tmp_path / "b" / "P0.txt"
    ).read_bytes()


def test_synth_requires_seed(tmp_path, capsys):
    rc = main(["synth", "--out", str(tmp_path / "x")])
    captured = capsys.readouterr()
    assert rc == 2
    assert captured.err.startswith("error:")
    assert "--seed" in captured.err


# -- extract / spectral ----------------------------------------------------------


def test_extract_csv_to_stdout(data_dir, capsys):
    stdout = run_ok(["extract", "--manifest", data_dir], capsys)
    lines = stdout.strip().split("\n")
    assert lines[0] == "id,label," + ",".join(FEATURE_NAMES)
    assert len(lines) == 9
    assert lines[1].startswith("P0,P,")


def test_extract_out_file_matches_stdout(data_dir, tmp_path, capsys):
    stdout = run_ok(["extract", "--manifest", data_dir], capsys)
    out_file = tmp_path / "features.csv"
    run_ok(["extract", "--manifest", data_dir, "--out", str(out_file)], capsys)
    assert out_file.read_text() == stdout


def test_spectral_csv_header(data_dir, capsys):
    stdout = run_ok(["spectral", "--manifest", data_dir], capsys)
    lines = stdout.strip().split("\n")
    assert lines[0] == "id,label,MaxPSD,MedPSD"
    assert len(lines) == 9


def test_missing_manifest_is_runtime_error(capsys):
    rc = main(["extract", "--manifest", "/nonexistent/manifest.csv"])
    captured = capsys.readouterr()
    assert rc == 1
    assert captured.err.startswith("error:")


# -- rank --------------------------------------------------------------------------


def test_rank_report_shape_and_determinism(data_dir, capsys):
    argv = ["rank", "--manifest", data_dir, "--seed", "4"]
    first = run_ok(argv, capsys)
    second = run_ok(argv, capsys)
    assert first == second
    report = json.loads(first)
    assert set(report["gains"]) == set(FEATURE_NAMES)
    assert sorted(report["ranked"]) == sorted(FEATURE_NAMES)
    assert sorted(report["soil_column_order"]) == sorted(FEATURE_NAMES)
    assert report["config"]["seed"] == 4
    assert "out" not in report["config"]
    assert "config" not in report["config"]


# -- soil-dump ----------------------------------------------------------------------


def test_soil_dump_prints_both_grids(data_dir, capsys):
    stdout = run_ok(
        ["soil-dump", "--manifest", data_dir, "--sample", "P0", "--seed", "0"],
        capsys,
    )
    discrete_text, nutrient_text = stdout.split("\n\n")
    discrete = [line.split(",") for line in discrete_text.strip().split("\n")]
    nutrient = [line.split(",") for line in nutrient_text.strip().split("\n")]
    assert len(discrete) == 15 and len(nutrient) == 15
    assert all(len(row) == 12 for row in discrete)
    assert set(v for row in discrete for v in row) <= {"0", "1"}
    assert all(float(v) >= 0.0 for row in nutrient for v in row)


def test_soil_dump_out_directory(data_dir, tmp_path, capsys):
    out = tmp_path / "soil"
    run_ok(
        [
            "soil-dump",
            "--manifest",
            data_dir,
            "--sample",
            "N1",
            "--seed",
            "0",
            "--out",
            str(out),
        ],
        capsys,
    )
    assert (out / "discrete_soil.csv").exists()
    assert (out / "nutrient_matrix.csv").exists()


# -- grow ----------------------------------------------------------------------------


def test_grow_report(data_dir, capsys):
    stdout = run_ok(
        [
            "grow",
            "--manifest",
            data_dir,
            "--sample",
            "P0",
            "--seed",
            "0",
            "--days",
            "5",
            "--division-limit",
            "2",
        ],
        capsys,
    )
    report = json.loads(stdout)
    assert report["id"] == "P0"
    assert report["nf"] >= 0.0
    assert 0.0 <= report["rf"] <= 154.0
    assert report["days_run"] == len(report["day_log"]) <= 5
    assert all(len(day) <= 2 for day in report["day_log"])
    assert report["n_occupied"] == 1 + sum(len(day) for day in report["day_log"])
    assert report["config"]["days"] == 5


def test_grow_without_sample_is_usage_error(data_dir, capsys):
    rc = main(["grow", "--manifest", data_dir, "--seed", "0"])
    captured = capsys.readouterr()
    assert rc == 2
    assert "--sample" in captured.err


def test_grow_unknown_sample_is_runtime_error(data_dir, capsys):
    rc = main(["grow", "--manifest", data_dir, "--sample", "Q9", "--seed", "0"])
    captured = capsys.readouterr()
    assert rc == 1
    assert captured.err.startswith("error:")


def test_grow_dump_frames(data_dir, tmp_path, capsys):
    frames = tmp_path / "frames"
    stdout = run_ok(
        [
            "grow",
            "--manifest",
            data_dir,
            "--sample",
            "P1",
            "--seed",
            "0",
            "--days",
            "3",
            "--dump-frames",
            str(frames),
        ],
        capsys,
    )
    report = json.loads(stdout)
    frame_files = sorted(frames.glob("day*.csv"))
    assert len(frame_files) == report["days_run"] + 1
    assert (frames / "summary.json").exists()
    last = np.array(
        [[int(v) for v in line.split(",")] for line in
         frame_files[-1].read_text().strip().split("\n")]
    )
    assert int(last.sum()) == report["n_occupied"]


def test_grow_custom_radicle_and_flags(data_dir, capsys):
    stdout = run_ok(
        [
            "grow",
            "--manifest",
            data_dir,
            "--sample",
            "P0",
            "--seed",
            "0",
            "--radicle",
            "2,3;4,5",
            "--no-occupy-zero",
        ],
        capsys,
    )
    report = json.loads(stdout)
    assert report["config"]["radicle"] == "2,3;4,5"
    assert report["config"]["occupy_zero"] is False
    assert report["n_occupied"] >= 2


def test_grow_bad_radicle_is_usage_error(data_dir, capsys):
    rc = main(
        [
            "grow",
            "--manifest",
            data_dir,
            "--sample",
            "P0",
            "--seed",
            "0",
            "--radicle",
            "nonsense",
        ]
    )
    captured = capsys.readouterr()
    assert rc == 2
    assert "radicle" in captured.err


# -- classify -----------------------------------------------------------------------


def test_classify_report(data_dir, capsys):
    stdout = run_ok(
        [
            "classify",
            "--manifest",
            data_dir,
            "--seed",
            "1",
            "--classifier",
            "LDA",
        ],
        capsys,
    )
    report = json.loads(stdout)
    assert report["classifier"] == "LDA"
    assert report["variant"] == "PRS"
    assert 0.0 <= report["accuracy"] <= 1.0
    confusion = report["confusion"]
    assert sum(confusion.values()) == report["n_test"]
    assert report["config"]["global_prep"] is False


def test_classify_rejects_unknown_classifier(data_dir, capsys):
    rc = main(
        [
            "classify",
            "--manifest",
            data_dir,
            "--seed",
            "1",
            "--classifier",
            "FOREST",
        ]
    )
    captured = capsys.readouterr()
    assert rc == 2
    assert "classifier" in captured.err


# -- evaluate ------------------------------------------------------------------------


EVAL_ARGS = [
    "--classifiers",
    "LDA",
    "--variants",
    "BASE,PRS",
    "--reps",
    "2",
    "--seed",
    "7",
]


def test_evaluate_stdout_reruns_byte_identical(data_dir, capsys):
    argv = ["evaluate", "--manifest", data_dir] + EVAL_ARGS
    first = run_ok(argv, capsys)
    second = run_ok(argv, capsys)
    threaded = run_ok(argv + ["--threads", "4"], capsys)
    assert first == second == threaded
    report = json.loads(first)
    assert report["classifiers"] == ["LDA"]
    assert report["variants"] == ["BASE", "PRS"]
    assert "threads" not in report["config"]


def test_evaluate_out_directory(data_dir, tmp_path, capsys):
    out = tmp_path / "eval"
    run_ok(
        ["evaluate", "--manifest", data_dir, "--out", str(out)] + EVAL_ARGS,
        capsys,
    )
    report = json.loads((out / "eval_report.json").read_text())
    csv_lines = (out / "eval_report.csv").read_text().strip().split("\n")
    assert csv_lines[0] == "classifier,variant,rate,rep_mean,rep_std,n_reps"
    assert len(csv_lines) == 1 + len(report["cells"])
    assert csv_lines[1].startswith("LDA,BASE,")


def test_evaluate_rejects_unknown_variant(data_dir, capsys):
    rc = main(
        ["evaluate", "--manifest", data_dir, "--seed", "0", "--variants", "BASE,EXTRA"]
    )
    captured = capsys.readouterr()
    assert rc == 2
    assert "EXTRA" in captured.err


# -- correlate -----------------------------------------------------------------------


def test_correlate_out_directory(data_dir, tmp_path, capsys):
    out = tmp_path / "corr"
    run_ok(
        ["correlate", "--manifest", data_dir, "--seed", "0", "--out", str(out)],
        capsys,
    )
    report = json.loads((out / "correlation_report.json").read_text())
    assert len(report["names"]) == 16
    assert len(report["matrix"]) == 16
    for key in ("mean_abs_base_base", "mean_abs_prs_base", "mean_abs_spectral_base"):
        assert 0.0 <= report[key] <= 1.0
    csv_lines = (out / "correlation_report.csv").read_text().strip().split("\n")
    assert len(csv_lines) == 17
    assert csv_lines[0].startswith("feature,STD,")
    assert csv_lines[1].startswith("STD,1.0,")


# -- config files --------------------------------------------------------------------


def test_config_file_equivalent_to_flags(data_dir, tmp_path, capsys):
    cfg = tmp_path / "rank.cfg"
    cfg.write_text("# ranking defaults\nseed = 4\nrestarts = 5\n")
    by_config = run_ok(
        ["rank", "--manifest", data_dir, "--config", str(cfg)], capsys
    )
    by_flags = run_ok(
        ["rank", "--manifest", data_dir, "--seed", "4", "--restarts", "5"], capsys
    )
    assert by_config == by_flags


def test_flag_overrides_config(data_dir, tmp_path, capsys):
    cfg = tmp_path / "rank.cfg"
    cfg.write_text("seed = 4\n")
    override = run_ok(
        ["rank", "--manifest", data_dir, "--config", str(cfg), "--seed", "9"],
        capsys,
    )
    plain = run_ok(["rank", "--manifest", data_dir, "--seed", "9"], capsys)
    assert override == plain


def test_unknown_config_key(data_dir, tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus = 1\n")
    rc = main(["rank", "--manifest", data_dir, "--seed", "0", "--config", str(cfg)])
    captured = capsys.readouterr()
    assert rc == 2
    assert "bogus" in captured.err


def test_malformed_config_line(data_dir, tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("seed 4\n")
    rc = main(["rank", "--manifest", data_dir, "--seed", "0", "--config", str(cfg)])
    captured = capsys.readouterr()
    assert rc == 2
    assert "key = value" in captured.err


def test_config_can_supply_required_option(data_dir, tmp_path, capsys):
    cfg = tmp_path / "rank.cfg"
    cfg.write_text("seed = 11\n")
    stdout = run_ok(
        ["rank", "--manifest", data_dir, "--config", str(cfg)], capsys
    )
    assert json.loads(stdout)["config"]["seed"] == 11
