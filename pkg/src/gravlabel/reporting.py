"""File formats for matrices, labels, reports, and plot data.

Reports are JSON with sorted keys so that identical runs produce byte-
identical files (wall-clock timings live under the single "timings" key,
which comparisons exclude). All writes go through a temp file + rename.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from .errors import InputError
from .lf import LabelMatrix


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_report(path, obj) -> None:
    _atomic_write(path, canonical_json(obj))


def load_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def strip_timings(report: dict) -> dict:
    """Copy of a report without its wall-clock fields."""
    out = json.loads(json.dumps(report))
    out.pop("timings", None)
    for row in out.get("rows", []):
        if isinstance(row, dict):
            row.pop("timings", None)
            if isinstance(row.get("report"), dict):
                row["report"].pop("timings", None)
    return out


def save_matrix_csv(path, mat: LabelMatrix, point_ids) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["point_id", *mat.lf_names])
        for pid, row in zip(point_ids, mat.entries):
            writer.writerow([int(pid), *(int(v) for v in row)])
    os.replace(tmp, path)


def load_matrix_csv(path) -> tuple[LabelMatrix, np.ndarray]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "point_id":
            raise InputError(f"{path}: not a label matrix file")
        lf_names = tuple(header[1:])
        ids, rows = [], []
        for record in reader:
            if not record:
                continue
            ids.append(int(record[0]))
            rows.append([int(v) for v in record[1:]])
    entries = np.asarray(rows, dtype=np.int8).reshape(len(rows), len(lf_names))
    return (LabelMatrix(entries=entries, lf_names=lf_names),
            np.asarray(ids, dtype=np.int64))


def save_labels_csv(path, point_ids, labels) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["point_id", "label"])
        for pid, label in zip(point_ids, labels):
            writer.writerow([int(pid), int(label)])
    os.replace(tmp, path)


def write_plot_data(path, rows: list[dict]) -> None:
    """Flat CSV: one row per sweep cell, columns in first-seen order."""
    columns: list[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([row.get(c, "") for c in columns])
    os.replace(tmp, path)
