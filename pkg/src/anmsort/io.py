"""Dataset CSV and weighted-graph JSON reading and writing.

Graph JSON::

    {"d": 3, "edges": [[0, 1], [1, 2]], "weights": [[0, 1, 0.7], [1, 2, -1.2]]}

``weights`` is optional. Node indices are 0-based.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .anm import Dataset
from .graphs import Dag


class FormatError(ValueError):
    """Malformed input file; ``line`` is 1-based when known."""

    def __init__(self, path, message, line=None):
        self.path = str(path)
        self.line = line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")


def read_dataset_csv(path) -> Dataset:
    """Read a CSV with a header row of column names and one observation per row."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise FormatError(path, "file is empty", 1) from None
        names = [h.strip() for h in header]
        if not names or any(not h for h in names):
            raise FormatError(path, "header has empty column names", 1)
        rows = []
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(names):
                raise FormatError(path, f"expected {len(names)} fields, found {len(row)}", line)
            try:
                values = [float(cell) for cell in row]
            except ValueError as exc:
                raise FormatError(path, f"non-numeric value ({exc})", line) from None
            if not all(np.isfinite(values)):
                raise FormatError(path, "non-finite value", line)
            rows.append(values)
    if len(rows) < 2:
        raise FormatError(path, "need at least two observations")
    return Dataset(np.array(rows), tuple(names))


def write_dataset_csv(data: Dataset, path) -> None:
    names = data.names or tuple(f"X{t}" for t in range(data.d))
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in data.values:
            writer.writerow([repr(float(v)) for v in row])


def graph_to_dict(g: Dag, weights: np.ndarray | None = None) -> dict:
    out = {"d": g.d, "edges": [[s, t] for s, t in g.edges]}
    if weights is not None:
        w = np.asarray(weights, dtype=float)
        out["weights"] = [[s, t, float(w[s, t])] for s, t in g.edges]
    return out


def graph_from_dict(obj: dict, source="<graph>") -> tuple[Dag, np.ndarray | None]:
    try:
        d = int(obj["d"])
        edges = [(int(s), int(t)) for s, t in obj.get("edges", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(source, f"invalid graph document ({exc})") from None
    try:
        g = Dag.from_edges(d, edges)
    except ValueError as exc:
        raise FormatError(source, str(exc)) from None
    if "weights" not in obj:
        return g, None
    w = np.zeros((d, d))
    for entry in obj["weights"]:
        try:
            s, t, value = int(entry[0]), int(entry[1]), float(entry[2])
        except (TypeError, ValueError, IndexError) as exc:
            raise FormatError(source, f"invalid weight entry {entry!r} ({exc})") from None
        if not g.adjacency[s, t]:
            raise FormatError(source, f"weight given for non-edge ({s}, {t})")
        w[s, t] = value
    return g, w


def read_graph_json(path) -> tuple[Dag, np.ndarray | None]:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(path, exc.msg, exc.lineno) from None
    return graph_from_dict(obj, path)


def write_graph_json(g: Dag, path, weights: np.ndarray | None = None) -> None:
    Path(path).write_text(json.dumps(graph_to_dict(g, weights), indent=1) + "\n", encoding="utf-8")
