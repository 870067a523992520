"""Readers and writers for the plain-text edge-list and label formats."""
import csv
import os

from .errors import GraphError, InputFormatError
from .graph import build_graph


def _records(path):
    if not os.path.isfile(path):
        raise InputFormatError(path, 0, "no such file")
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def read_edge_list(path):
    """Parse ``u v [w]`` lines into ``(u, v, w)`` token triples."""
    out = []
    seen = {}
    for lineno, parts in _records(path):
        if len(parts) not in (2, 3):
            raise InputFormatError(path, lineno, f"expected 'u v [w]', got {len(parts)} fields")
        u, v = parts[0], parts[1]
        if len(parts) == 3:
            try:
                w = float(parts[2])
            except ValueError:
                raise InputFormatError(path, lineno, f"weight {parts[2]!r} is not a number") from None
        else:
            w = 1.0
        if u == v:
            raise InputFormatError(path, lineno, f"self-loop at {u!r}")
        if not w > 0 or w == float("inf"):
            raise InputFormatError(path, lineno, f"weight must be positive and finite, got {w}")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise InputFormatError(path, lineno, f"duplicate edge {u} {v} (first on line {seen[key]})")
        seen[key] = lineno
        out.append((u, v, w))
    return out


def load_graph(path):
    """Read an edge list into a connected :class:`WeightedGraph`.

    Vertex tokens keep their first-seen order and are stored in ``labels``.
    """
    triples = read_edge_list(path)
    if not triples:
        raise InputFormatError(path, 0, "no edges")
    try:
        return build_graph(triples)
    except GraphError as exc:
        raise InputFormatError(path, 0, str(exc)) from None


def read_labels(path):
    """Parse ``vertex label`` lines into an ordered ``{vertex: label}`` dict."""
    out = {}
    for lineno, parts in _records(path):
        if len(parts) != 2:
            raise InputFormatError(path, lineno, f"expected 'vertex label', got {len(parts)} fields")
        if parts[0] in out:
            raise InputFormatError(path, lineno, f"vertex {parts[0]!r} labelled twice")
        out[parts[0]] = parts[1]
    return out


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def fmt(x):
    """Six significant digits, locale independent; empty for missing values."""
    if x is None:
        return ""
    return f"{x:.6g}"
