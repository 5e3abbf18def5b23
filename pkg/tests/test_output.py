"""Tests for CSV and JSON rendering."""

from __future__ import annotations

import csv
import io
import json

import pytest

from mpemba_relax import __version__
from mpemba_relax.models import CheckResult, ScanResult, ValidationReport
from mpemba_relax.output import (
    format_cell,
    format_float,
    parse_cell,
    parse_row,
    render,
    render_csv,
)


@pytest.fixture
def result() -> ScanResult:
    return ScanResult(
        command="scan",
        kind="crossing_time",
        columns=["mean", "bias", "crossing_time"],
        rows=[[3.0, 0.0, 0.54012345678912345], [3.0, 1.0, None]],
        summary={"solved": 1, "passed": True},
    )


class TestFormatFloat:
    """Tests for format_float."""

    @pytest.mark.parametrize(
        ("value", "expected"),
        [
            (0.1, "0.1"),
            (2.0, "2"),
            (-0.0, "0"),
            (0.0, "0"),
            (1e-5, "1e-05"),
            (-3.25, "-3.25"),
            (1.0 / 3.0, "0.333333"),
        ],
    )
    def test_values(self, value: float, expected: str) -> None:
        assert format_float(value, 6) == expected

    def test_shortest_round_trip(self) -> None:
        assert format_float(0.1 + 0.2, 17) == "0.30000000000000004"
        assert format_float(0.1 + 0.2, 12) == "0.3"

    def test_non_finite(self) -> None:
        assert format_float(float("inf"), 12) == "inf"


class TestCells:
    """Tests for format_cell and parse_cell."""

    @pytest.mark.parametrize(
        ("value", "text"),
        [(None, ""), (True, "true"), (False, "false"), (7, "7"), ("I", "I"), (0.5, "0.5")],
    )
    def test_format(self, value: bool | int | float | str | None, text: str) -> None:
        assert format_cell(value, 12) == text

    def test_parse(self) -> None:
        assert parse_cell("") is None
        assert parse_cell("true") is True
        assert parse_cell("2.5") == 2.5
        assert parse_cell("I") == "I"

    def test_text_cells_stay_text(self) -> None:
        assert parse_cell("1e3", numeric=False) == "1e3"
        assert parse_cell("nan", numeric=False) == "nan"
        assert parse_cell("", numeric=False) is None
        assert parse_cell("1e3") == 1000.0

    def test_row_uses_text_columns(self) -> None:
        row = parse_row(["check", "passed", "measured"], ["1e3", "true", "1e3"], {"check"})
        assert row == ["1e3", True, 1000.0]

    def test_row_length_mismatch(self) -> None:
        with pytest.raises(ValueError, match="zip"):
            parse_row(["a", "b"], ["1"])


class TestRender:
    """Tests for render_csv and render_json."""

    def test_csv(self, result: ScanResult) -> None:
        text = render_csv(result, 6)
        assert text == "mean,bias,crossing_time\n3,0,0.540123\n3,1,\n"
        rows = list(csv.reader(io.StringIO(text)))
        assert parse_row(rows[0], rows[2]) == [3.0, 1.0, None]

    def test_check_names_read_back_as_text(self) -> None:
        check = CheckResult(name="1e3", passed=True, measured=0.5, tolerance=1.0)
        result = ValidationReport(checks=[check]).as_result()
        rows = list(csv.reader(io.StringIO(render_csv(result, 6))))
        assert parse_row(rows[0], rows[1], result.text_columns) == ["1e3", True, 0.5, 1.0]

    def test_json_metadata(self, result: ScanResult) -> None:
        payload = json.loads(render(result, "json", 6, {"model": "two_site"}))
        assert payload["metadata"] == {
            "engine": "mpemba-relax",
            "version": __version__,
            "command": "scan",
            "kind": "crossing_time",
            "config": {"model": "two_site"},
        }
        assert payload["summary"] == {"solved": 1, "passed": True}
        assert payload["columns"] == ["mean", "bias", "crossing_time"]
        assert payload["data"] == [[3.0, 0.0, 0.540123], [3.0, 1.0, None]]

    def test_deterministic(self, result: ScanResult) -> None:
        assert render(result, "json", 12) == render(result, "json", 12)
        assert render(result, "csv", 12) == render_csv(result, 12)
