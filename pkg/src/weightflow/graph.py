"""Weighted undirected graphs, the shortest-path metric and components."""
from typing import NamedTuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as _cc

from . import kernels
from .errors import (
    Disconnected,
    DuplicateEdge,
    EdgeNotInGraph,
    NonPositiveWeight,
    SelfLoop,
    StaleDistances,
)


class Edge(NamedTuple):
    u: int
    v: int
    weight: float


class WeightedGraph:
    """Undirected simple graph on vertices ``0..n-1`` with positive weights.

    Topology is fixed after construction. Weights may be replaced between
    flow iterations through :meth:`set_weights`, which bumps ``version`` so
    that distance matrices built from older weights are detectably stale.
    """

    def __init__(self, n, eu, ev, weights, labels=None):
        self.n = int(n)
        self.eu = np.asarray(eu, dtype=np.int64)
        self.ev = np.asarray(ev, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=float).copy()
        self.labels = list(labels) if labels is not None else list(range(self.n))
        self.version = 0
        self._index = {(int(a), int(b)): k for k, (a, b) in enumerate(zip(self.eu, self.ev))}
        self._build_csr()

    def _build_csr(self):
        m = len(self.eu)
        rows = np.concatenate([self.eu, self.ev])
        cols = np.concatenate([self.ev, self.eu])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((cols, rows))
        self.indices = cols[order]
        self.slot_edge = eid[order]
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=self.n), out=self.indptr[1:])

    @property
    def m(self):
        return len(self.eu)

    @property
    def edges(self):
        return [Edge(int(a), int(b), float(w)) for a, b, w in zip(self.eu, self.ev, self.weights)]

    @property
    def adjacency(self):
        """Per-vertex list of ``(neighbour, weight)`` pairs."""
        w = self.csr_weights()
        return [
            [(int(self.indices[k]), float(w[k])) for k in range(self.indptr[x], self.indptr[x + 1])]
            for x in range(self.n)
        ]

    def neighbors(self, x):
        return self.indices[self.indptr[x]:self.indptr[x + 1]]

    def csr_weights(self, weights=None):
        w = self.weights if weights is None else weights
        return np.ascontiguousarray(w[self.slot_edge], dtype=float)

    def edge_index(self, e):
        """Index of edge ``e`` given as an :class:`Edge`, a pair or an int."""
        if isinstance(e, (int, np.integer)):
            if 0 <= e < self.m:
                return int(e)
            raise EdgeNotInGraph(e)
        a, b = int(e[0]), int(e[1])
        key = (a, b) if a < b else (b, a)
        try:
            return self._index[key]
        except KeyError:
            raise EdgeNotInGraph(e) from None

    def set_weights(self, weights):
        w = np.asarray(weights, dtype=float)
        if w.shape != (self.m,):
            raise ValueError(f"expected {self.m} weights, got shape {w.shape}")
        if not np.all(w > 0):
            raise NonPositiveWeight("weights must stay strictly positive")
        self.weights = w.copy()
        self.version += 1

    def copy(self):
        return WeightedGraph(self.n, self.eu, self.ev, self.weights, self.labels)

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m})"


def build_graph(edge_list, require_connected=True):
    """Build a graph from ``(u, v, weight)`` triples.

    Vertices may be any hashable tokens. Integer vertices that already form
    ``0..n-1`` keep their ids; anything else is numbered in first-seen order.
    """
    triples = [tuple(t) for t in edge_list]
    tokens = {}
    for t in triples:
        for tok in t[:2]:
            tokens.setdefault(tok, len(tokens))
    keys = list(tokens)
    if all(isinstance(k, (int, np.integer)) for k in keys) and sorted(keys) == list(range(len(keys))):
        tokens = {k: int(k) for k in keys}
        labels = list(range(len(keys)))
    else:
        labels = keys

    eu, ev, ws = [], [], []
    seen = set()
    for t in triples:
        u, v = t[0], t[1]
        w = float(t[2]) if len(t) > 2 else 1.0
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u!r}")
        if not w > 0 or not np.isfinite(w):
            raise NonPositiveWeight(f"edge ({u!r}, {v!r}) has weight {w}")
        a, b = tokens[u], tokens[v]
        key = (a, b) if a < b else (b, a)
        if key in seen:
            raise DuplicateEdge(f"edge ({u!r}, {v!r}) listed twice")
        seen.add(key)
        eu.append(key[0])
        ev.append(key[1])
        ws.append(w)

    g = WeightedGraph(len(labels), eu, ev, ws, labels)
    if require_connected:
        if g.n == 0:
            raise Disconnected("graph has no vertices")
        k = int(component_labels(g).max()) + 1
        if k != 1:
            raise Disconnected(f"graph has {k} connected components")
    return g


class DistanceMatrix:
    """All-pairs shortest-path distances tied to one weight version."""

    def __init__(self, d, graph):
        self.d = d
        self._graph = graph
        self._version = graph.version

    @property
    def stale_flag(self):
        return self._graph.version != self._version

    def require_fresh(self):
        if self.stale_flag:
            raise StaleDistances("weights changed since these distances were computed")
        return self.d

    def __getitem__(self, key):
        return self.require_fresh()[key]


def shortest_distances(g):
    d = kernels.apsp(g.indptr, g.indices, g.csr_weights(), g.n)
    return DistanceMatrix(d, g)


def rho(g, d, e):
    k = g.edge_index(e)
    return float(d.require_fresh()[g.eu[k], g.ev[k]])


def component_labels(g, keep=None):
    """Component id per vertex, numbered in order of first appearance."""
    mask = np.ones(g.m, dtype=bool) if keep is None else np.asarray(keep, dtype=bool)
    adj = csr_matrix(
        (np.ones(int(mask.sum())), (g.eu[mask], g.ev[mask])), shape=(g.n, g.n)
    )
    _, lab = _cc(adj, directed=False)
    return canonical_labels(lab)


def canonical_labels(lab):
    """Relabel so ids appear in order of first occurrence: 0, 1, 2, ..."""
    _, first, inv = np.unique(lab, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv.ravel()]


def connected_components(g, removed=()):
    """Vertex sets of the subgraph left after deleting ``removed`` edges."""
    keep = np.ones(g.m, dtype=bool)
    for e in removed:
        keep[g.edge_index(e)] = False
    lab = component_labels(g, keep)
    comps = [set() for _ in range(int(lab.max()) + 1 if g.n else 0)]
    for x, c in enumerate(lab):
        comps[c].add(x)
    return comps
