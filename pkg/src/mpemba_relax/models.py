"""Output records emitted by the command-line runs."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict

Cell = bool | int | float | str | None


class RecordModel(BaseModel):
    """Base model for emitted records."""

    model_config = ConfigDict(populate_by_name=True)


class ScanResult(RecordModel):
    """A table of rows plus scalar summary values (NoCrossing is None, written empty)."""

    command: str
    kind: str
    columns: list[str]
    rows: list[list[Cell]]
    summary: dict[str, Cell] = {}
    text_columns: list[str] = []


class CheckResult(RecordModel):
    name: str
    passed: bool
    measured: float
    tolerance: float


class ValidationReport(RecordModel):
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_result(self) -> ScanResult:
        return ScanResult(
            command="validate",
            kind="checks",
            columns=["check", "passed", "measured", "tolerance"],
            rows=[[c.name, c.passed, c.measured, c.tolerance] for c in self.checks],
            summary={"passed": self.passed},
            text_columns=["check"],
        )
