"""Text formats: edge lists, vertex-set files, points CSVs, label sidecars.

Edge lists are lines "u v w" (w optional, default 1.0) with '#' comments;
duplicate (u, v) lines aggregate by weight summation and (u, v) equals
(v, u). Weights are emitted with 17 significant digits so a save/load round
trip is bit-stable.
"""

from __future__ import annotations

import csv

import numpy as np

from .errors import FileFormatError
from .graph import VertexSet, WeightedGraph


def _data_lines(path):
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield line_no, line


def load_graph(path):
    """Parse an edge-list file.

    Returns (graph, id_map) where id_map maps original ids to the compacted
    contiguous ids, or None when the input ids were already contiguous from 0.
    """
    edges = []
    seen_ids = set()
    for line_no, line in _data_lines(path):
        parts = line.split()
        if len(parts) not in (2, 3):
            raise FileFormatError(path, line_no, f"expected 'u v [w]', got {line!r}")
        try:
            u = int(parts[0])
            v = int(parts[1])
        except ValueError:
            raise FileFormatError(path, line_no, f"vertex ids must be integers: {line!r}")
        if u < 0 or v < 0:
            raise FileFormatError(path, line_no, "vertex ids must be nonnegative")
        if u == v:
            raise FileFormatError(path, line_no, f"self-loop at vertex {u}")
        w = 1.0
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise FileFormatError(path, line_no, f"bad weight {parts[2]!r}")
            if w <= 0:
                raise FileFormatError(path, line_no, f"non-positive weight {w}")
        edges.append((u, v, w))
        seen_ids.add(u)
        seen_ids.add(v)
    if not edges:
        raise FileFormatError(path, 0, "no edges found")
    ordered = sorted(seen_ids)
    contiguous = ordered[0] == 0 and ordered[-1] == len(ordered) - 1
    id_map = None
    if not contiguous:
        id_map = {old: new for new, old in enumerate(ordered)}
        edges = [(id_map[u], id_map[v], w) for u, v, w in edges]
    return WeightedGraph.from_edges(edges), id_map


def save_graph(graph, path):
    with open(path, "w", encoding="utf-8") as handle:
        for u, v, w in graph.edge_list():
            handle.write(f"{u} {v} {w:.17g}\n")


def load_vertex_set(path, graph):
    """One vertex id per line; duplicates are rejected with their line number."""
    ids = []
    seen = set()
    for line_no, line in _data_lines(path):
        try:
            u = int(line)
        except ValueError:
            raise FileFormatError(path, line_no, f"expected a vertex id, got {line!r}")
        if u in seen:
            raise FileFormatError(path, line_no, f"duplicate vertex id {u}")
        seen.add(u)
        ids.append(u)
    return VertexSet(graph, ids)


def save_vertex_set(vset, path):
    with open(path, "w", encoding="utf-8") as handle:
        for u in vset:
            handle.write(f"{u}\n")


def save_labels(labels, path):
    """Write a vertex -> label sidecar, one 'vertex label' pair per line."""
    with open(path, "w", encoding="utf-8") as handle:
        for u in sorted(labels):
            handle.write(f"{u} {labels[u]}\n")


def load_points(path, label_column=False):
    """Rectangular CSV of feature vectors; optional leading integer label column.

    Returns (points, labels) with labels None when label_column is False.
    """
    rows = []
    labels = []
    width = None
    with open(path, "r", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        for line_no, row in enumerate(reader, start=1):
            row = [cell for cell in row if cell.strip()]
            if not row:
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise FileFormatError(path, line_no,
                                      f"expected {width} columns, got {len(row)}")
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                raise FileFormatError(path, line_no, f"non-numeric cell in {row!r}")
            if label_column:
                labels.append(int(values[0]))
                values = values[1:]
            rows.append(values)
    if not rows:
        raise FileFormatError(path, 0, "no data rows found")
    points = np.array(rows, dtype=float)
    if not np.isfinite(points).all():
        raise FileFormatError(path, 0, "points must be finite")
    return points, (np.array(labels, dtype=np.int64) if label_column else None)
