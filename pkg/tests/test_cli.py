import csv
import os

import pytest

from fraclab.app.cli import main, parse_config
from fraclab.app.config import Config
from fraclab.app.errors import (
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_USAGE,
    ConfigError,
    DomainError,
    InvariantFailure,
    SolverError,
    register_error_handlers,
)


@pytest.fixture(autouse=True)
def isolated_logs(tmp_path, monkeypatch):
    monkeypatch.delenv("FRACLAB_ENV", raising=False)
    monkeypatch.setattr(Config, "LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setattr(Config, "OUT_DIR", str(tmp_path / "results"))


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_flags_override_config_file(tmp_path):
    config_file = _write(tmp_path / "run.env", "experiment=lemmas\nseed=5\ngrid-n=16,32\ncorpus_size=2\n")
    cfg = parse_config(["--config", config_file, "--seed", "7", "--out", str(tmp_path / "out")])
    assert cfg.experiment == "lemmas"
    assert cfg.seed == 7
    assert cfg.grid_n == [16, 32]
    assert cfg.corpus_size == 2
    assert cfg.y_layers == Config.Y_LAYERS
    assert cfg.alpha is None


def test_lists_are_parsed_from_flags(tmp_path):
    cfg = parse_config(["--experiment", "commutator-sweep", "--alpha", "0.25,0.5", "--beta", "0,0.25",
                        "--kinds", "spectral,restricted", "--out", str(tmp_path)])
    assert cfg.alpha == [0.25, 0.5]
    assert cfg.beta == [0.0, 0.25]
    assert cfg.kinds == ["spectral", "restricted"]
    assert cfg.build_domain().kind == "interval"


def test_beta_above_alpha_names_the_ordering(tmp_path):
    with pytest.raises(ConfigError, match="ordering"):
        parse_config(["--experiment", "lemmas", "--alpha", "0.3", "--beta", "0.5", "--out", str(tmp_path)])


@pytest.mark.parametrize("argv", [
    ["--experiment", "nope"],
    ["--experiment", "hardy", "--bogus", "1"],
    ["--experiment", "lemmas", "--grid-n", "4"],
    ["--experiment", "lemmas", "--domain", "ball:1,3"],
    ["--experiment", "counterexample", "--alpha", "0.5"],
    ["--experiment", "counterexample", "--eps-list", "0.08,0.04,0.02"],
    ["--config", "does-not-exist.env"],
    [],
])
def test_usage_errors_exit_with_one(argv):
    assert main(argv) == EXIT_USAGE


def test_unknown_config_key_is_rejected(tmp_path):
    config_file = _write(tmp_path / "bad.env", "experiment=hardy\ncolour=blue\n")
    with pytest.raises(ConfigError):
        parse_config(["--config", config_file])
    assert main(["--config", config_file]) == EXIT_USAGE


@pytest.mark.parametrize("exc, code", [
    (ConfigError("bad key"), EXIT_USAGE),
    (DomainError("outside"), EXIT_USAGE),
    (InvariantFailure("ratio"), EXIT_INVARIANT),
    (SolverError("residual"), EXIT_INVARIANT),
    (ValueError("array must not contain infs or NaNs"), EXIT_INVARIANT),
    (ZeroDivisionError(), EXIT_INVARIANT),
])
def test_wrapped_runner_turns_errors_into_exit_codes(exc, code):
    def runner():
        raise exc

    assert register_error_handlers(runner)() == code


def test_hardy_run_writes_reports(tmp_path):
    out = tmp_path / "hardy"
    assert main(["--experiment", "hardy", "--out", str(out)]) == EXIT_OK

    with open(out / "report.csv", newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) >= 20
    assert {"experiment", "check", "lhs", "rhs", "ratio"} <= set(rows[0])
    assert all(row["experiment"] == "hardy" for row in rows)

    summary = (out / "summary.txt").read_text(encoding="utf-8")
    assert "PASS closed_form_ratio" in summary
    assert "FAIL" not in summary
    assert os.path.exists(out / "hardy_extremal.svg")


def test_reruns_are_byte_identical(tmp_path):
    for name in ("a", "b"):
        assert main(["--experiment", "hardy", "--out", str(tmp_path / name)]) == EXIT_OK
    assert (tmp_path / "a" / "report.csv").read_bytes() == (tmp_path / "b" / "report.csv").read_bytes()


def test_l1_run_produces_refinement_rows(tmp_path):
    out = tmp_path / "l1"
    code = main(["--experiment", "l1-theorem", "--grid-n", "64,128", "--alpha", "0.3", "--out", str(out)])
    assert code in (0, 2)
    with open(out / "report.csv", newline="", encoding="utf-8") as handle:
        rows = list(csv.DictReader(handle))
    levels = {row["level"] for row in rows if row["check"] == "l1_theorem"}
    assert levels == {"64", "128"}
    assert any(row["check"] == "truncation_identity" for row in rows)


def test_extension_run_exports_fields(tmp_path):
    out = tmp_path / "ext"
    code = main(["--experiment", "extension-convergence", "--grid-n", "64", "--alpha", "0.5",
                 "--y-layers", "40", "--out", str(out)])
    assert code in (0, 2)
    with open(out / "extension_phi1.csv", newline="", encoding="utf-8") as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["x", "y", "value"]
    assert len(rows) == 64 * 41 + 1
    with open(out / "phi1.csv", newline="", encoding="utf-8") as handle:
        assert next(csv.reader(handle)) == ["x", "value"]
    with open(out / "grid.csv", newline="", encoding="utf-8") as handle:
        assert next(csv.reader(handle)) == ["x", "weight"]
