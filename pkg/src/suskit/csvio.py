"""CSV ingestion for raw questionnaire responses and pre-scored studies.

All-or-nothing: a file either parses completely or raises CsvValidationError
with 1-based row/column coordinates (rows count data rows, excluding any
header). Raw files carry one respondent per row, columns Q1..Q10 (or 9
columns for the nine-item variant); pre-scored files carry one score per row.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass

from .scoring import ResponseSheet

__all__ = ["CsvValidationError", "InputFile", "ingest_csv"]

_Q_NAME = re.compile(r"^[Qq](\d{1,2})$")


class CsvValidationError(ValueError):
    """Input file rejected; row/column are 1-based when applicable."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        super().__init__(message)
        self.row = row
        self.column = column


@dataclass(frozen=True)
class InputFile:
    mode: str  # "responses" | "scores"
    sheets: tuple[ResponseSheet, ...]
    scores: tuple[float, ...]
    path: str
    has_header: bool


def _read_rows(path: str) -> list[list[str]]:
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            return [[c.strip() for c in row] for row in csv.reader(fh) if any(c.strip() for c in row)]
    except FileNotFoundError:
        raise CsvValidationError(f"file not found: {path}")
    except OSError as err:
        raise CsvValidationError(f"cannot read {path}: {err}")


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False


def _parse_columns_flag(tokens: list[str], width: int) -> list[int]:
    items = []
    for tok in tokens:
        m = _Q_NAME.match(tok)
        try:
            item = int(m.group(1)) if m else int(tok)
        except ValueError:
            raise CsvValidationError(f"--columns entry {tok!r} is not an item number")
        if not 1 <= item <= 10:
            raise CsvValidationError(f"--columns entry {tok!r} outside Q1..Q10")
        items.append(item)
    if len(items) != width:
        raise CsvValidationError(
            f"--columns names {len(items)} items but the file has {width} columns"
        )
    if len(set(items)) != len(items):
        raise CsvValidationError("--columns repeats an item")
    return items


def _items_from_header(header: list[str]) -> list[int] | None:
    items = []
    for cell in header:
        m = _Q_NAME.match(cell)
        if not m or not 1 <= int(m.group(1)) <= 10:
            return None
        items.append(int(m.group(1)))
    return items if len(set(items)) == len(items) else None


def ingest_csv(path: str, mode: str = "auto", columns: list[str] | None = None,
               omitted_item: int | None = None) -> InputFile:
    """Parse and validate a study CSV.

    mode "auto" infers from the column count: 1 column means pre-scored,
    9 or 10 mean raw responses. A non-numeric first row is treated as a
    header; Q-labelled headers fix the column order and, for 9-column
    files, identify the omitted item.
    """
    rows = _read_rows(path)
    if not rows:
        raise CsvValidationError(f"{path} holds no data rows")

    has_header = not all(_is_number(c) for c in rows[0])
    header = rows[0] if has_header else None
    data = rows[1:] if has_header else rows
    if not data:
        raise CsvValidationError(f"{path} holds a header but no data rows")

    width = len(data[0])
    if mode == "auto":
        if width == 1:
            mode = "scores"
        elif width in (9, 10):
            mode = "responses"
        else:
            raise CsvValidationError(
                f"cannot infer input mode from {width} columns; expected 1 "
                "(pre-scored) or 9/10 (raw responses)"
            )

    for i, row in enumerate(data, start=1):
        if len(row) != width:
            raise CsvValidationError(
                f"row {i}: has {len(row)} cells, expected {width}", row=i
            )

    if mode == "scores":
        if width != 1:
            raise CsvValidationError(f"pre-scored input must have 1 column, found {width}")
        scores = []
        for i, row in enumerate(data, start=1):
            if not _is_number(row[0]):
                raise CsvValidationError(
                    f"row {i}, column 1: {row[0]!r} is not a number", row=i, column="1"
                )
            value = float(row[0])
            if not 0.0 <= value <= 100.0:
                raise CsvValidationError(
                    f"row {i}, column 1: score {value:g} outside [0, 100]", row=i, column="1"
                )
            scores.append(value)
        return InputFile("scores", (), tuple(scores), path, has_header)

    if mode != "responses":
        raise CsvValidationError(f"unknown input mode {mode!r}")
    if width not in (9, 10):
        raise CsvValidationError(f"raw-response input must have 9 or 10 columns, found {width}")

    if columns:
        items = _parse_columns_flag(columns, width)
    elif header is not None and (from_header := _items_from_header(header)):
        items = from_header
    else:
        items = None

    if width == 10:
        item_order = items or list(range(1, 11))
        omitted = None
    else:
        if items:
            omitted = next(i for i in range(1, 11) if i not in items)
            item_order = items
        elif omitted_item is not None:
            if not 1 <= omitted_item <= 10:
                raise CsvValidationError(f"omitted item must be in 1..10, got {omitted_item}")
            omitted = omitted_item
            item_order = [i for i in range(1, 11) if i != omitted]
        else:
            raise CsvValidationError(
                "9-column file: name the omitted question via Q-labelled headers, "
                "--columns, or --omitted-item"
            )

    sheets = []
    for i, row in enumerate(data, start=1):
        by_item: dict[int, int] = {}
        for cell, item in zip(row, item_order):
            if not _is_number(cell) or not float(cell).is_integer():
                raise CsvValidationError(
                    f"row {i}, column Q{item}: {cell!r} is not an integer response",
                    row=i, column=f"Q{item}",
                )
            value = int(float(cell))
            if not 1 <= value <= 5:
                raise CsvValidationError(
                    f"row {i}, column Q{item}: response {value} outside 1..5",
                    row=i, column=f"Q{item}",
                )
            by_item[item] = value
        answers = tuple(by_item[item] for item in sorted(by_item))
        sheets.append(ResponseSheet(answers, omitted))
    return InputFile("responses", tuple(sheets), (), path, has_header)
