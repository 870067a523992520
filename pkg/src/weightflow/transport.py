"""Exact optimal transport between vertex measures under the graph metric."""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import UnbalancedMasses
from .kernels.numpy_impl import MASS_TOL

BALANCE_TOL = 1e-9
GAP_TOL = 1e-9


@dataclass
class TransportResult:
    """Optimal cost, coupling and a Kantorovich potential pair.

    ``plan`` is indexed by ``(src, dst)`` over the two supports.
    ``dual_u[i] + dual_v[j] <= d(src[i], dst[j])`` for all pairs.
    """

    cost: float
    src: np.ndarray
    dst: np.ndarray
    plan: np.ndarray
    dual_u: np.ndarray
    dual_v: np.ndarray
    mu1: np.ndarray
    mu2: np.ndarray

    def sparse_plan(self, tol=0.0):
        rows, cols = np.nonzero(self.plan > tol)
        return {(int(self.src[i]), int(self.dst[j])): float(self.plan[i, j]) for i, j in zip(rows, cols)}


def _as_arrays(mu):
    if hasattr(mu, "vertices"):
        return mu.vertices, mu.masses
    if isinstance(mu, dict):
        return np.fromiter(mu.keys(), np.int64), np.fromiter(mu.values(), float)
    v, m = mu
    return np.asarray(v, np.int64), np.asarray(m, float)


def wasserstein(d, mu1, mu2):
    D = d.require_fresh() if hasattr(d, "require_fresh") else np.asarray(d)
    v1, m1 = _as_arrays(mu1)
    v2, m2 = _as_arrays(mu2)
    gap = abs(m1.sum() - m2.sum())
    if gap > BALANCE_TOL:
        raise UnbalancedMasses(f"total masses differ by {gap:.3g}")

    net = {}
    for v, m in zip(v1, m1):
        net[int(v)] = net.get(int(v), 0.0) + m
    for v, m in zip(v2, m2):
        net[int(v)] = net.get(int(v), 0.0) - m
    srcs = np.array([v for v, m in net.items() if m > MASS_TOL], np.int64)
    snks = np.array([v for v, m in net.items() if m < -MASS_TOL], np.int64)

    plan = np.zeros((len(v1), len(v2)))
    pos1 = {int(v): i for i, v in enumerate(v1)}
    pos2 = {int(v): j for j, v in enumerate(v2)}
    # common mass stays put at zero cost
    for v, j in pos2.items():
        i = pos1.get(v)
        if i is not None:
            plan[i, j] = min(m1[i], m2[j])

    if len(srcs) == 0 or len(snks) == 0:
        z1 = np.zeros(len(v1))
        return TransportResult(0.0, v1, v2, plan, z1, np.zeros(len(v2)), m1, m2)

    a = np.array([net[v] for v in srcs])
    b = np.array([-net[v] for v in snks])
    C = np.ascontiguousarray(D[np.ix_(srcs, snks)])
    flow, pot = kernels.transport(C, a, b)
    for i, s in enumerate(srcs):
        for j, t in enumerate(snks):
            if flow[i, j] != 0.0:
                plan[pos1[int(s)], pos2[int(t)]] += flow[i, j]
    cost = float((flow * C).sum())

    # extend the sink potentials to a 1-Lipschitz function on every vertex
    sink_pot = pot[len(srcs):]
    psi = lambda z: float(np.min(D[z, snks] - sink_pot))
    dual_u = np.array([psi(v) for v in v1])
    dual_v = np.array([-psi(v) for v in v2])
    return TransportResult(cost, v1, v2, plan, dual_u, dual_v, m1, m2)


def verify_duality(r, d, tol=GAP_TOL):
    """Check marginals, dual feasibility and a small duality gap."""
    D = d.require_fresh() if hasattr(d, "require_fresh") else np.asarray(d)
    C = D[np.ix_(r.src, r.dst)]
    scale = 1.0 + abs(r.cost)
    if np.any(r.plan < -tol):
        return False
    if not np.allclose(r.plan.sum(axis=1), r.mu1, atol=tol * scale, rtol=0):
        return False
    if not np.allclose(r.plan.sum(axis=0), r.mu2, atol=tol * scale, rtol=0):
        return False
    if np.any(r.dual_u[:, None] + r.dual_v[None, :] > C + tol * scale):
        return False
    primal = float((r.plan * C).sum())
    dual = float(r.dual_u @ r.mu1 + r.dual_v @ r.mu2)
    return abs(primal - dual) <= tol * scale
