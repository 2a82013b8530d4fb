"""Labelled numeric tables and their CSV form."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidArgumentError


@dataclass
class ResultTable:
    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.columns = [str(c) for c in self.columns]
        self.rows = [[float(v) for v in row] for row in self.rows]
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise InvalidArgumentError(f"row {i} has {len(row)} fields, header has {len(self.columns)}")

    def column(self, name: str) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([row[j] for row in self.rows], dtype=float)

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=float).reshape(len(self.rows), len(self.columns))


def format_number(x: float) -> str:
    # 17 significant digits round-trip every IEEE double
    return format(float(x), ".17g")


def to_csv_text(table: ResultTable) -> str:
    buf = io.StringIO()
    for key in sorted(table.metadata):
        value = str(table.metadata[key]).replace("\n", " ")
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_number(v) for v in row])
    return buf.getvalue()


def emit_csv(table: ResultTable, path) -> None:
    """Write ``table`` as CSV: '#'-prefixed metadata lines, a header, then the rows."""
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(to_csv_text(table))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc


def read_csv(path) -> ResultTable:
    """Parse a file written by ``emit_csv`` back into a table."""
    metadata = {}
    body = []
    with open(path, newline="", encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition(": ")
                metadata[key] = value
            else:
                body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    rows = [[float(v) for v in row] for row in reader if row]
    return ResultTable(columns=header, rows=rows, metadata=metadata)
