"""CSV ingestion and atomic artifact output.

Numbers are written with 17 significant digits so a save/load round trip
reproduces doubles exactly; every file is written to a temporary sibling
and renamed into place, so readers never observe a half-written artifact.
"""

import os
import tempfile

import numpy as np

FLOAT_FMT = "%.17g"


def load_csv(path):
    """Read a dense numeric CSV.

    Returns (values, header, row_labels): header is the list of column
    names when the first line is non-numeric, row_labels the list of
    first-column labels when that column is non-numeric; either is None
    when absent. Raises ValueError on empty files, ragged rows, or any
    non-numeric data cell (reported with line and column).
    """
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n").rstrip("\r") for line in fh]
    rows = [line.split(",") for line in lines if line != ""]
    if not rows:
        raise ValueError(f"{path}: empty file")

    def numeric(cell):
        try:
            float(cell)
            return True
        except ValueError:
            return False

    header = None
    if not all(numeric(c) for c in rows[0]):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
        if not rows:
            raise ValueError(f"{path}: header but no data rows")

    labeled = not numeric(rows[0][0])
    if labeled and header is not None and len(header) == len(rows[0]):
        header = header[1:]
    row_labels = [] if labeled else None
    width = len(rows[0])
    values = []
    offset = 2 if header is not None else 1
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{path}: line {i + offset}: expected {width} "
                             f"columns, found {len(row)}")
        if labeled:
            row_labels.append(row[0].strip())
            row = row[1:]
        parsed = []
        for j, cell in enumerate(row):
            try:
                parsed.append(float(cell))
            except ValueError:
                col = j + (2 if labeled else 1)
                raise ValueError(f"{path}: line {i + offset}, column {col}: "
                                 f"not a number: {cell.strip()!r}") from None
        values.append(parsed)
    matrix = np.array(values, dtype=float)
    if matrix.ndim != 2 or matrix.size == 0:
        raise ValueError(f"{path}: no numeric data")
    return matrix, header, row_labels


def atomic_write_text(path, text):
    """Write text to path via a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_csv(path, matrix, header=None, row_labels=None):
    """Write a matrix (or 1-D vector, saved as one column) atomically."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    lines = []
    if header is not None:
        head = list(header)
        if row_labels is not None:
            head = ["id"] + head
        lines.append(",".join(head))
    for i in range(matrix.shape[0]):
        cells = [FLOAT_FMT % v for v in matrix[i]]
        if row_labels is not None:
            cells = [str(row_labels[i])] + cells
        lines.append(",".join(cells))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_manifest(path, entries):
    """Plain-text key=value manifest, one entry per line, sorted by key."""
    lines = []
    for key in sorted(entries):
        value = entries[key]
        if isinstance(value, float):
            value = FLOAT_FMT % value
        lines.append(f"{key}={value}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_manifest(path):
    """Parse a key=value manifest back into a dict of strings."""
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            entries[key] = value
    return entries
