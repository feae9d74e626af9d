"""Row-labeled matrix and surface file I/O.

File formats
------------
Matrix (CSV or TSV): header row ``id,<t1>,...,<tn>``, then one line per
object: ``<row_id>,<v1>,...,<vn>``. Row ids must be unique and non-empty;
every cell must parse to a finite number. At least 2 rows and 3 columns.

Surface (CSV): two header lines::

    # origin=<r>,<c> k=<k>
    # rows=<R> cols=<C>

followed by the R x C value grid, one comma-separated line per row.
Values are written with 17 significant digits, so write -> read round
trips are bit-exact for float64.

Report: one JSON document, see :func:`write_report`.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MatrixFormatError

# 17 significant digits round-trip any float64 exactly.
_FLOAT_FMT = "%.17g"


@dataclass
class ExpressionMatrix:
    """A row-labeled m x n time-series matrix.

    Rows are objects (e.g. genes), columns are time points. Construction
    validates the data, so no instance with NaN/Inf values, duplicate ids,
    or degenerate dimensions can exist.
    """

    row_ids: list[str]
    time_labels: list[str]
    values: np.ndarray

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise MatrixFormatError(f"values must be 2-D, got shape {self.values.shape}")
        m, n = self.values.shape
        if m < 2:
            raise MatrixFormatError(f"need at least 2 rows, found {m}")
        if n < 3:
            raise MatrixFormatError(f"need at least 3 time columns, found {n}")
        if len(self.row_ids) != m:
            raise MatrixFormatError(
                f"{len(self.row_ids)} row ids for {m} rows")
        if len(self.time_labels) != n:
            raise MatrixFormatError(
                f"{len(self.time_labels)} time labels for {n} columns")
        seen: dict[str, int] = {}
        for i, rid in enumerate(self.row_ids, start=1):
            if not rid:
                raise MatrixFormatError(f"empty row id at row {i}")
            if rid in seen:
                raise MatrixFormatError(
                    f"duplicate row id '{rid}' at rows {seen[rid]} and {i}")
            seen[rid] = i
        bad = np.argwhere(~np.isfinite(self.values))
        if bad.size:
            r, c = bad[0]
            raise MatrixFormatError(
                f"non-finite value at row {r + 1}, column {c + 1} "
                f"(row id '{self.row_ids[r]}')")

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[1]

    def submatrix(self, row: int, col: int, height: int, width: int) -> "ExpressionMatrix":
        """Extract the block with 1-based top-left (row, col) and given dims."""
        if not (1 <= row and row + height - 1 <= self.m
                and 1 <= col and col + width - 1 <= self.n):
            raise ValueError(
                f"submatrix ({row},{col})+{height}x{width} outside {self.m}x{self.n}")
        return ExpressionMatrix(
            row_ids=self.row_ids[row - 1:row - 1 + height],
            time_labels=self.time_labels[col - 1:col - 1 + width],
            values=self.values[row - 1:row - 1 + height, col - 1:col - 1 + width].copy(),
        )


@dataclass
class Surface:
    """A dense 2-D grid of values with an offset into a parent frame.

    `origin` is the 1-based (row, col) of this grid's top-left cell in the
    parent coordinate frame. `window_size` records the sliding-window k
    that produced the surface (0 for surfaces not tied to a window pass).
    """

    values: np.ndarray
    origin: tuple[int, int] = (1, 1)
    window_size: int = 0

    def __post_init__(self):
        self.values = np.ascontiguousarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise MatrixFormatError(f"surface must be 2-D, got shape {self.values.shape}")
        if self.values.shape[0] < 1 or self.values.shape[1] < 1:
            raise MatrixFormatError(f"empty surface of shape {self.values.shape}")
        self.origin = (int(self.origin[0]), int(self.origin[1]))
        if self.origin[0] < 1 or self.origin[1] < 1:
            raise MatrixFormatError(f"origin must be >= (1,1), got {self.origin}")
        if self.window_size < 0:
            raise MatrixFormatError(f"window_size must be >= 0, got {self.window_size}")
        if not np.isfinite(self.values).all():
            bad = np.argwhere(~np.isfinite(self.values))[0]
            raise MatrixFormatError(
                f"non-finite surface value at row {bad[0] + 1}, column {bad[1] + 1}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


def _delimiter_for(path: Path, fmt: str | None) -> str:
    if fmt is None:
        fmt = "tsv" if path.suffix.lower() in (".tsv", ".tab") else "csv"
    if fmt not in ("csv", "tsv"):
        raise MatrixFormatError(f"unknown format '{fmt}' (expected csv or tsv)")
    return "\t" if fmt == "tsv" else ","


def load_matrix(path, fmt: str | None = None) -> ExpressionMatrix:
    """Read an ExpressionMatrix from a CSV/TSV file.

    The format is inferred from the suffix unless `fmt` ('csv' or 'tsv')
    is given. Errors name the offending row and column (1-based, header
    included in the row count).
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"matrix file not found: {path}")
    delim = _delimiter_for(path, fmt)
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delim)
        rows = [row for row in reader if row]
    if not rows:
        raise MatrixFormatError(f"{path}: file is empty")
    header = rows[0]
    if len(header) < 4:
        raise MatrixFormatError(
            f"{path}: header has {len(header) - 1} time columns, need at least 3")
    time_labels = [h.strip() for h in header[1:]]
    n = len(time_labels)
    row_ids: list[str] = []
    data = np.empty((len(rows) - 1, n), dtype=np.float64)
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != n + 1:
            raise MatrixFormatError(
                f"{path}: row {i} has {len(row) - 1} values, expected {n}")
        row_ids.append(row[0].strip())
        for j, cell in enumerate(row[1:], start=1):
            try:
                v = float(cell)
            except ValueError:
                raise MatrixFormatError(
                    f"{path}: non-numeric cell at row {i}, column {j + 1}: '{cell}'") from None
            if not np.isfinite(v):
                raise MatrixFormatError(
                    f"{path}: non-finite value at row {i}, column {j + 1}: '{cell}'")
            data[i - 2, j - 1] = v
    try:
        return ExpressionMatrix(row_ids=row_ids, time_labels=time_labels, values=data)
    except MatrixFormatError as exc:
        raise MatrixFormatError(f"{path}: {exc}") from None


def write_matrix(matrix: ExpressionMatrix, path, fmt: str | None = None) -> None:
    """Write an ExpressionMatrix; inverse of :func:`load_matrix`."""
    path = Path(path)
    delim = _delimiter_for(path, fmt)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delim, lineterminator="\n")
        writer.writerow(["id"] + list(matrix.time_labels))
        for rid, row in zip(matrix.row_ids, matrix.values):
            writer.writerow([rid] + [_FLOAT_FMT % v for v in row])


def write_surface(surface: Surface, path) -> None:
    """Write a surface grid with its origin/window header."""
    path = Path(path)
    r, c = surface.origin
    rows, cols = surface.values.shape
    with open(path, "w") as fh:
        fh.write(f"# origin={r},{c} k={surface.window_size}\n")
        fh.write(f"# rows={rows} cols={cols}\n")
        for row in surface.values:
            fh.write(",".join(_FLOAT_FMT % v for v in row) + "\n")


def read_surface(path) -> Surface:
    """Read a surface written by :func:`write_surface`."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"surface file not found: {path}")
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln.strip()]
    if len(lines) < 3:
        raise MatrixFormatError(f"{path}: surface file too short ({len(lines)} lines)")
    try:
        head1 = lines[0]
        origin_part, k_part = head1.lstrip("# ").split(" k=")
        r_str, c_str = origin_part.removeprefix("origin=").split(",")
        origin = (int(r_str), int(c_str))
        window_size = int(k_part)
        head2 = lines[1].lstrip("# ")
        rows_part, cols_part = head2.split(" cols=")
        n_rows = int(rows_part.removeprefix("rows="))
        n_cols = int(cols_part)
    except (ValueError, IndexError):
        raise MatrixFormatError(f"{path}: malformed surface header") from None
    body = lines[2:]
    if len(body) != n_rows:
        raise MatrixFormatError(
            f"{path}: header promises {n_rows} rows, found {len(body)}")
    grid = np.empty((n_rows, n_cols), dtype=np.float64)
    for i, ln in enumerate(body):
        cells = ln.split(",")
        if len(cells) != n_cols:
            raise MatrixFormatError(
                f"{path}: grid row {i + 1} has {len(cells)} values, expected {n_cols}")
        for j, cell in enumerate(cells):
            try:
                grid[i, j] = float(cell)
            except ValueError:
                raise MatrixFormatError(
                    f"{path}: non-numeric surface cell at row {i + 1}, "
                    f"column {j + 1}: '{cell}'") from None
    try:
        return Surface(values=grid, origin=origin, window_size=window_size)
    except MatrixFormatError as exc:
        raise MatrixFormatError(f"{path}: {exc}") from None


def write_report(report, path) -> None:
    """Serialize a comparison report to a single JSON document.

    `report` is any object with a ``to_json_dict()`` method (or a plain
    dict). Serialization is deterministic: sorted keys, repr floats.
    """
    path = Path(path)
    doc = report if isinstance(report, dict) else report.to_json_dict()
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_report(path) -> dict:
    """Read a report back as a plain dict."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"report file not found: {path}")
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"{path}: invalid report JSON: {exc}") from None
