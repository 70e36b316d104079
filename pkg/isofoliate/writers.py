"""Artifact writers: JSON summaries, CSV tables, plot data, and failure records."""

from __future__ import annotations

import csv
import json
from functools import cache
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .domain.errors import LabError
from .domain.results import ExperimentResult, Row

__all__ = [
    "ArtifactWriter",
    "format_cell",
    "table_columns",
]

FLOAT_FORMAT = ".17g"
SUMMARY_FILE = "summary.json"
FAILURE_FILE = "failure.json"


@cache
def table_columns() -> dict[str, list[str]]:
    """Documented column order of every table, read from the shipped schema."""
    schema = resources.files("isofoliate").joinpath("columns.yml").read_text(encoding="utf-8")
    return yaml.safe_load(schema)


def format_cell(value: float | int | str | None) -> str:
    """Render one CSV cell; floats keep 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    return str(value)


class ArtifactWriter:
    """Single writer of every file a run produces under its output directory."""

    def __init__(self, directory: Path) -> None:
        """Initialize the writer.

        Args:
            directory: Output directory, created on first write.

        """
        self.directory = directory

    def _prepare(self) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)

    def write(self, result: ExperimentResult) -> list[Path]:
        """Write the summary, every table as CSV, and numeric tables as plot data.

        Returns:
            The written paths in order.

        Raises:
            ValueError: A table is not documented in the column schema or its rows disagree with it.

        """
        self._prepare()
        summary = self.directory / SUMMARY_FILE
        summary.write_text(result.summary().model_dump_json(indent=2) + "\n", encoding="utf-8")
        paths = [summary]
        for name, rows in result.tables.items():
            columns = self._columns(name, rows)
            paths.append(self._write_csv(name, columns, rows))
            if rows and all(isinstance(row[column], (int, float)) for row in rows for column in columns):
                paths.append(self._write_plot(name, columns, rows))
        return paths

    def write_failure(self, error: LabError) -> Path:
        """Write the machine-readable record of a numerical failure."""
        self._prepare()
        path = self.directory / FAILURE_FILE
        path.write_text(json.dumps(error.record(), indent=2, default=str) + "\n", encoding="utf-8")
        return path

    def _columns(self, name: str, rows: list[Row]) -> list[str]:
        schema = table_columns()
        if name not in schema:
            msg = f"Table `{name}` is not documented in columns.yml"
            raise ValueError(msg)
        columns = schema[name]
        for row in rows:
            if set(row) != set(columns):
                msg = f"Table `{name}` has columns {sorted(row)}, expected {columns}"
                raise ValueError(msg)
        return columns

    def _write_csv(self, name: str, columns: list[str], rows: list[Row]) -> Path:
        path = self.directory / f"{name}.csv"
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows([format_cell(row[column]) for column in columns] for row in rows)
        return path

    def _write_plot(self, name: str, columns: list[str], rows: list[Row]) -> Path:
        path = self.directory / f"{name}.dat"
        data = np.array([[float(row[column]) for column in columns] for row in rows])  # type: ignore[arg-type]
        np.savetxt(path, data, fmt="%.17g", header=" ".join(columns))
        return path
