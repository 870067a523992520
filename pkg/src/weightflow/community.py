"""Surgery on evolved weights and partition-quality metrics."""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import VertexSetMismatch
from .graph import canonical_labels, component_labels


class Partition:
    """Community id per vertex, renumbered to ``0..K-1`` in first-seen order."""

    __slots__ = ("assignment",)

    def __init__(self, assignment):
        a = np.asarray(assignment)
        self.assignment = canonical_labels(a) if len(a) else np.zeros(0, np.int64)

    @property
    def k(self):
        return int(self.assignment.max()) + 1 if len(self.assignment) else 0

    @property
    def n(self):
        return len(self.assignment)

    def blocks(self):
        out = [set() for _ in range(self.k)]
        for x, c in enumerate(self.assignment):
            out[c].add(x)
        return out

    @classmethod
    def from_blocks(cls, blocks, n=None):
        blocks = [set(b) for b in blocks]
        n = sum(len(b) for b in blocks) if n is None else n
        lab = np.full(n, -1, dtype=np.int64)
        for i, b in enumerate(blocks):
            for x in b:
                lab[x] = i
        if np.any(lab < 0):
            raise VertexSetMismatch("blocks do not cover every vertex")
        return cls(lab)

    @classmethod
    def from_labels(cls, labels, vertex_tokens):
        """Build from a ``{token: label}`` map ordered by ``vertex_tokens``."""
        keys = {str(t) for t in vertex_tokens}
        given = {str(t) for t in labels}
        if keys != given:
            missing = sorted(keys - given)[:5]
            extra = sorted(given - keys)[:5]
            raise VertexSetMismatch(f"label vertices differ: missing {missing}, unknown {extra}")
        lab = {str(k): v for k, v in labels.items()}
        ids = {}
        return cls([ids.setdefault(lab[str(t)], len(ids)) for t in vertex_tokens])

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.assignment, other.assignment)

    def __repr__(self):
        return f"Partition(n={self.n}, k={self.k})"


def _as_partition(p):
    return p if isinstance(p, Partition) else Partition(p)


@dataclass
class ContingencyTable:
    counts: np.ndarray

    @property
    def rows(self):
        return self.counts.sum(axis=1)

    @property
    def cols(self):
        return self.counts.sum(axis=0)

    @property
    def n(self):
        return int(self.counts.sum())


def contingency(p1, p2):
    p1, p2 = _as_partition(p1), _as_partition(p2)
    if p1.n != p2.n:
        raise VertexSetMismatch(f"partitions cover {p1.n} and {p2.n} vertices")
    counts = np.zeros((p1.k, p2.k), dtype=np.int64)
    np.add.at(counts, (p1.assignment, p2.assignment), 1)
    return ContingencyTable(counts)


def _same_partition(t):
    # one nonzero cell in every row and every column
    nz = t.counts > 0
    return bool(np.all(nz.sum(axis=0) == 1) and np.all(nz.sum(axis=1) == 1))


def _pairs(x):
    return sum(int(v) * (int(v) - 1) // 2 for v in np.ravel(x))


def ari(t):
    """Adjusted Rand index from a contingency table.

    Trivial cases with a zero denominator give 1 for identical partitions
    and 0 otherwise.
    """
    if not isinstance(t, ContingencyTable):
        t = contingency(*t)
    index = _pairs(t.counts)
    sa, sb, total = _pairs(t.rows), _pairs(t.cols), _pairs([t.n])
    if total == 0:
        return 1.0 if _same_partition(t) else 0.0
    expected = sa * sb / total
    top = (sa + sb) / 2
    if top == expected:
        return 1.0 if _same_partition(t) else 0.0
    return (index - expected) / (top - expected)


def nmi(t):
    """Mutual information over the mean entropy, natural log."""
    if not isinstance(t, ContingencyTable):
        t = contingency(*t)
    n = t.n
    c = t.counts.astype(float)
    a, b = c.sum(axis=1), c.sum(axis=0)
    h1 = -sum(x / n * math.log(x / n) for x in a if x > 0)
    h2 = -sum(x / n * math.log(x / n) for x in b if x > 0)
    if h1 + h2 == 0.0:
        return 1.0 if _same_partition(t) else 0.0
    mi = 0.0
    for i, j in zip(*np.nonzero(c)):
        mij = c[i, j]
        mi += mij / n * math.log(mij * n / (a[i] * b[j]))
    return min(max(2.0 * mi / (h1 + h2), 0.0), 1.0)


def modularity(g, p, beta=1.0, keep=None):
    """Unweighted modularity of ``p``.

    Edge counts and degrees come from the edges selected by the boolean mask
    ``keep`` (all edges by default). Returns 0 when no edge is selected.
    """
    p = _as_partition(p)
    if p.n != g.n:
        raise VertexSetMismatch(f"partition covers {p.n} vertices, graph has {g.n}")
    mask = np.ones(g.m, dtype=bool) if keep is None else np.asarray(keep, dtype=bool)
    eu, ev = g.eu[mask], g.ev[mask]
    m = len(eu)
    if m == 0:
        return 0.0
    cu, cv = p.assignment[eu], p.assignment[ev]
    intra = np.bincount(cu[cu == cv], minlength=p.k)
    deg = np.bincount(cu, minlength=p.k) + np.bincount(cv, minlength=p.k)
    return float(np.sum(intra / m - beta * (deg / (2.0 * m)) ** 2))


def _weights_of(state):
    return np.asarray(getattr(state, "weights", state), dtype=float)


def surgery(g, state, cutoff):
    """Communities left after deleting every edge heavier than ``cutoff``."""
    return Partition(component_labels(g, _weights_of(state) <= cutoff))


class SweepRow(NamedTuple):
    cutoff: float
    k: int
    modularity: float
    ari: float | None
    nmi: float | None


@dataclass
class SweepResult:
    rows: list

    def best(self, metric):
        """Row with the largest ``metric``; the first such row on ties."""
        vals = [getattr(r, metric) for r in self.rows]
        if any(v is None for v in vals):
            return None
        return self.rows[int(np.argmax(vals))]

    def __len__(self):
        return len(self.rows)


def sweep_cutoffs(weights, resolution=200):
    """``resolution`` evenly spaced cutoffs from the heaviest weight down to
    the lightest, then one just below the lightest so that every edge goes."""
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    w = _weights_of(weights)
    hi, lo = float(w.max()), float(w.min())
    cuts = np.linspace(hi, lo, int(resolution))
    cuts[0], cuts[-1] = hi, lo
    cuts = np.unique(cuts)[::-1]
    return np.append(cuts, np.nextafter(lo, -np.inf))


def sweep(g, state, ground_truth=None, resolution=200, modularity_on="surviving", beta=1.0):
    """Evaluate surgery at a decreasing series of cutoffs.

    ``modularity_on`` selects the edges behind the modularity score:
    ``"surviving"`` uses the edges left after the cut, ``"original"`` the
    full input topology.
    """
    if modularity_on not in ("surviving", "original"):
        raise ValueError(f"modularity_on must be 'surviving' or 'original', got {modularity_on!r}")
    w = _weights_of(state)
    truth = None if ground_truth is None else _as_partition(ground_truth)
    rows = []
    for c in sweep_cutoffs(w, resolution):
        keep = w <= c
        part = Partition(component_labels(g, keep))
        q = modularity(g, part, beta, keep if modularity_on == "surviving" else None)
        if truth is not None:
            t = contingency(part, truth)
            a, m = ari(t), nmi(t)
        else:
            a = m = None
        rows.append(SweepRow(float(c), part.k, q, a, m))
    return SweepResult(rows)
