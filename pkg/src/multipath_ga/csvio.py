"""CSV writing and reading with '#' provenance comment lines.

Every file starts with comment lines like '# tool_version = 0.1.0'
above the header row. Floats are written with 17 significant digits so
parsing a file back reproduces the in-memory values exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path, fieldnames, rows, metadata: dict | None = None):
    """Write rows with a comment preamble; parent dirs are created."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        if metadata:
            for key, value in metadata.items():
                fh.write(f"# {key} = {format_value(value)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([format_value(v) for v in row])


def read_csv(path):
    """Read back (metadata, fieldnames, rows); cell values stay strings."""
    metadata = {}
    fieldnames = None
    rows = []
    with open(path, "r", newline="") as fh:
        comment_lines = []
        data_lines = []
        for line in fh:
            if line.startswith("#"):
                comment_lines.append(line)
            else:
                data_lines.append(line)
        for line in comment_lines:
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                metadata[key.strip()] = value.strip()
        for record in csv.reader(data_lines):
            if fieldnames is None:
                fieldnames = record
            else:
                rows.append(record)
    return metadata, fieldnames, rows
