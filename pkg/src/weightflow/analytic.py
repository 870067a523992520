"""Closed-form weight trajectories of the one-step flow on small symmetric graphs.

Every shape has equal initial weights ``w0`` on all edges and, by symmetry,
all edges keep a common weight ``w0 * exp(rate * t)``. The rate is piecewise
linear in alpha with one break point per shape.
"""
import math
import re

from .errors import AlphaOutsideBranch
from .graph import build_graph

SHAPES = ("segment", "path3", "triangle", "square", "k4", "star")


def _parse(shape, n=None):
    m = re.fullmatch(r"star\(?(\d+)\)?", shape)
    if m:
        return "star", int(m.group(1))
    if shape == "star":
        if n is None:
            raise ValueError("star needs a leaf count n")
        return "star", int(n)
    if shape not in SHAPES:
        raise ValueError(f"unknown shape {shape!r}")
    return shape, None


def break_point(shape, n=None):
    shape, n = _parse(shape, n)
    return {
        "segment": 0.5,
        "path3": 1 / 3,
        "triangle": 1 / 3,
        "square": 1 / 3,
        "k4": 0.25,
        "star": 1 / (n + 1) if n else None,
    }[shape]


def rate(shape, alpha, n=None, branch=None):
    """Exponential rate of the common edge weight.

    ``branch`` is ``"low"`` (alpha at or below the break point), ``"high"`` or
    None to pick automatically. Both branches agree at the break point.
    """
    shape, n = _parse(shape, n)
    a = float(alpha)
    if not 0.0 <= a <= 1.0:
        raise AlphaOutsideBranch(f"alpha={a} is outside [0, 1]")
    c = break_point(shape, n)
    if branch is None:
        branch = "low" if a <= c else "high"
    if branch not in ("low", "high"):
        raise ValueError(f"branch must be 'low' or 'high', got {branch!r}")
    if branch == "low" and a > c or branch == "high" and a < c:
        raise AlphaOutsideBranch(
            f"{shape}: alpha={a} is not in the {branch} branch (break point {c:.6g})"
        )
    low = branch == "low"
    if shape in ("segment", "path3", "square") and low:
        return -2 * a
    if shape == "segment":
        return 2 * (a - 1)
    if shape in ("path3", "square"):
        return a - 1
    if shape == "triangle":
        return -(3 * a + 1) / 2 if low else 3 * (a - 1) / 2
    if shape == "k4":
        return -(2 + 4 * a) / 3 if low else 4 * (a - 1) / 3
    return -2 * a if low else 2 * (a - 1) / n


def analytic_oracle(shape, alpha, t, w0, n=None, branch=None):
    """Weight of every edge of ``shape`` at time ``t``."""
    return float(w0) * math.exp(rate(shape, alpha, n, branch) * float(t))


def shape_edges(shape, w0=1.0, n=None):
    shape, n = _parse(shape, n)
    if shape == "segment":
        pairs = [(0, 1)]
    elif shape == "path3":
        pairs = [(0, 1), (1, 2)]
    elif shape == "triangle":
        pairs = [(0, 1), (1, 2), (0, 2)]
    elif shape == "square":
        pairs = [(0, 1), (1, 2), (2, 3), (0, 3)]
    elif shape == "k4":
        pairs = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    else:
        pairs = [(0, j) for j in range(1, n + 1)]
    return [(u, v, float(w0)) for u, v in pairs]


def shape_graph(shape, w0=1.0, n=None):
    return build_graph(shape_edges(shape, w0, n))
