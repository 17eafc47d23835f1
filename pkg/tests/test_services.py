import csv
import math

import numpy as np
import pytest

from fraclab.app.models import ExperimentConfig
from fraclab.app.modules.domain import Domain, build_grid, sample
from fraclab.app.modules.estimates import EstimateReport
from fraclab.app.modules.extension import ExtensionField, YGrid
from fraclab.app.services.chart_service import ChartService
from fraclab.app.services.csv_report_service import CSVReportService, format_cell
from fraclab.app.services.experiment_service import ExperimentOutcome, ExperimentService


def test_format_cell():
    assert format_cell(0.1) == "0.10000000000000001"
    assert format_cell(math.inf) == "inf"
    assert format_cell(True) == "true"
    assert format_cell(None) == ""
    assert format_cell(3) == "3"


def test_rows_share_a_header_in_first_seen_order(tmp_path):
    reports = [
        EstimateReport("es2", lhs=1.0, rhs=2.0, config={"alpha": 0.5}),
        EstimateReport("es42", lhs=1.0, rhs=0.0, config={"alpha": 0.5}, extras={"es39_ratio": 0.25}),
    ]
    rows = CSVReportService.report_rows(reports, experiment="lemmas", level=32)
    path = CSVReportService.write_rows(rows, str(tmp_path))
    with open(path, "rb") as handle:
        lines = handle.read().decode("utf-8").split("\n")
    assert lines[0] == "experiment,level,check,alpha,lhs,rhs,ratio,flags,extra.es39_ratio"
    assert lines[1] == "lemmas,32,es2,0.5,1,2,0.5,,"
    assert lines[2] == "lemmas,32,es42,0.5,1,0,inf,,0.25"
    assert b"\r" not in open(path, "rb").read()


def test_chart_needs_two_positive_points(tmp_path):
    assert ChartService.line_chart({"a": [(1.0, 0.0), (2.0, 1.0)]}, "t", "x", "y", str(tmp_path), "a.svg") is None
    path = ChartService.line_chart({"a": [(16, 1.0), (32, 0.5), (64, 0.25)], "b": [(16, 2.0), (32, 2.1)]},
                                   "refinement", "n", "ratio", str(tmp_path), "b.svg")
    with open(path, encoding="utf-8") as handle:
        assert "<svg" in handle.read()


def _read(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


def test_grid_function_rows_read_back_exactly(tmp_path, interval_grid):
    u = sample(interval_grid, lambda x: np.exp(-x ** 2) / 3.0)
    rows = _read(CSVReportService.write_grid_function(u, str(tmp_path), "u.csv"))
    assert rows[0] == ["x", "value"]
    assert len(rows) == interval_grid.size + 1
    x = np.array([float(r[0]) for r in rows[1:]])
    values = np.array([float(r[1]) for r in rows[1:]])
    assert np.array_equal(x, interval_grid.nodes[:, 0])
    assert np.array_equal(values, u.values)


def test_rectangle_grid_rows_carry_weights(tmp_path):
    grid = build_grid(Domain.rectangle((0.0, 1.0), (0.0, 2.0)), 8)
    rows = _read(CSVReportService.write_grid(grid, str(tmp_path)))
    assert rows[0] == ["x1", "x2", "weight"]
    assert len(rows) == grid.size + 1
    assert sum(float(r[2]) for r in rows[1:]) == pytest.approx(2.0, rel=1e-12)
    assert np.array_equal(np.array([[float(r[0]), float(r[1])] for r in rows[1:]]), grid.nodes)


def test_extension_field_rows_are_x_major(tmp_path, interval_grid):
    ygrid = YGrid(y_max=1.0, K=4, gamma=2.0)
    values = np.arange(interval_grid.size * 5, dtype=float).reshape(interval_grid.size, 5) / 7.0
    field = ExtensionField(interval_grid, ygrid, values)
    rows = _read(CSVReportService.write_field(field, str(tmp_path), "field.csv"))
    assert rows[0] == ["x", "y", "value"]
    assert len(rows) == interval_grid.size * 5 + 1
    y = np.array([float(r[1]) for r in rows[1:6]])
    assert np.array_equal(y, ygrid.nodes)
    assert all(float(r[0]) == interval_grid.nodes[0, 0] for r in rows[1:6])
    read_back = np.array([float(r[2]) for r in rows[1:]]).reshape(values.shape)
    assert np.array_equal(read_back, values)


def test_summary_lists_skipped_checks_without_failing(tmp_path):
    cfg = ExperimentConfig(experiment="counterexample", out=str(tmp_path))
    outcome = ExperimentOutcome(checks={"weighted_band": True}, inconclusive=["seminorm_slope"])
    path = ExperimentService.write_summary(cfg, outcome)
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    assert "PASS weighted_band" in lines
    assert "INCONCLUSIVE seminorm_slope" in lines
    assert lines[-1] == "result: PASS"
