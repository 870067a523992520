"""Pure numpy/scipy kernels.

Same signatures and semantics as :mod:`weightflow.kernels.numba_impl`; used
when numba is unavailable or disabled through ``WEIGHTFLOW_BACKEND=numpy``.
"""
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

MASS_TOL = 1e-15
FLOW_TOL = 1e-14


def apsp(indptr, indices, wcsr, n):
    adj = csr_matrix((wcsr, indices, indptr), shape=(n, n))
    dist = dijkstra(adj, directed=False)
    return np.minimum(dist, dist.T)


def _compact(mptr, midx, mmass, tol=MASS_TOL):
    keep = mmass >= tol
    owner = np.repeat(np.arange(len(mptr) - 1), np.diff(mptr))
    counts = np.bincount(owner[keep], minlength=len(mptr) - 1)
    newptr = np.zeros_like(mptr)
    np.cumsum(counts, out=newptr[1:])
    return newptr, midx[keep], mmass[keep]


def one_step_measures(indptr, indices, wcsr, alpha):
    n = len(indptr) - 1
    deg = np.diff(indptr)
    mptr = np.zeros(n + 1, np.int64)
    np.cumsum(deg + 1, out=mptr[1:])
    midx = np.empty(mptr[-1], np.int64)
    mmass = np.empty(mptr[-1])
    for x in range(n):
        lo, hi = indptr[x], indptr[x + 1]
        p = mptr[x]
        w = wcsr[lo:hi]
        midx[p] = x
        mmass[p] = alpha
        midx[p + 1:p + 1 + hi - lo] = indices[lo:hi]
        mmass[p + 1:p + 1 + hi - lo] = (1.0 - alpha) * w / w.sum()
    return _compact(mptr, midx, mmass)


def two_step_single(indptr, indices, wcsr, alpha, x, near):
    """Support and masses of the two-step lazy walk from ``x``.

    ``near`` is a scratch boolean array of length n, returned all-False.
    """
    lo, hi = indptr[x], indptr[x + 1]
    nbrs = indices[lo:hi]
    wx = wcsr[lo:hi]
    share = wx / wx.sum()

    near[nbrs] = True
    near[x] = True
    ring = []
    ring_pos = {}
    direct = alpha * (1.0 - alpha) * share
    ring_mass = []
    for k, y in enumerate(nbrs):
        ylo, yhi = indptr[y], indptr[y + 1]
        ynb = indices[ylo:yhi]
        outward = ~near[ynb]
        if not outward.any():
            # nowhere new to go from y: the second step stays at y
            direct[k] += (1.0 - alpha) ** 2 * share[k]
            continue
        wy = wcsr[ylo:yhi][outward]
        frac = (1.0 - alpha) ** 2 * share[k] * wy / wy.sum()
        for z, mz in zip(ynb[outward], frac):
            j = ring_pos.get(z)
            if j is None:
                ring_pos[z] = len(ring)
                ring.append(z)
                ring_mass.append(mz)
            else:
                ring_mass[j] += mz
    near[nbrs] = False
    near[x] = False
    idx = np.concatenate(([x], nbrs, np.asarray(ring, np.int64))).astype(np.int64)
    mass = np.concatenate(([alpha], direct, np.asarray(ring_mass, float)))
    return idx, mass


def two_step_measures(indptr, indices, wcsr, alpha):
    n = len(indptr) - 1
    scratch = np.zeros(n, np.bool_)
    parts = [two_step_single(indptr, indices, wcsr, alpha, x, scratch) for x in range(n)]
    mptr = np.zeros(n + 1, np.int64)
    np.cumsum([len(p[0]) for p in parts], out=mptr[1:])
    midx = np.concatenate([p[0] for p in parts])
    mmass = np.concatenate([p[1] for p in parts])
    return _compact(mptr, midx, mmass)


def transport(C, a, b):
    """Successive-shortest-path solve of a balanced transportation problem.

    Returns ``(flow, pot)`` where ``pot`` holds node potentials, sources first.
    At optimum ``C[i, j] + pot[i] - pot[r + j] >= 0`` with equality on used cells.
    """
    r, c = C.shape
    flow = np.zeros((r, c))
    pot = np.zeros(r + c)
    if r == 0 or c == 0:
        return flow, pot
    pot[r:] = C.min(axis=0)
    sup = np.array(a, dtype=float)
    dem = np.array(b, dtype=float)
    # every column minimum is a zero-reduced-cost arc: fill those greedily first
    for j in range(c):
        for i in np.flatnonzero(C[:, j] == pot[r + j]):
            if dem[j] <= FLOW_TOL:
                break
            x = min(sup[i], dem[j])
            if x > FLOW_TOL:
                flow[i, j] += x
                sup[i] -= x
                dem[j] -= x
    max_rounds = 4 * (r + c) ** 2 + 16
    for _ in range(max_rounds):
        active = sup > FLOW_TOL
        if not active.any() or not (dem > FLOW_TOL).any():
            break
        red = np.maximum(C + pot[:r, None] - pot[None, r:], 0.0)
        ds = np.where(active, 0.0, np.inf)
        dt = np.full(c, np.inf)
        prev_s = np.full(r, -1)   # sink feeding each source via a backward arc
        prev_t = np.full(c, -1)   # source feeding each sink
        done_s = np.zeros(r, np.bool_)
        done_t = np.zeros(c, np.bool_)
        t = -1
        for _ in range(r + c):
            cs = np.where(done_s, np.inf, ds)
            ct = np.where(done_t, np.inf, dt)
            i = int(np.argmin(cs))
            j = int(np.argmin(ct))
            if cs[i] == np.inf and ct[j] == np.inf:
                break
            if cs[i] <= ct[j]:
                done_s[i] = True
                cand = ds[i] + red[i]
                better = (cand < dt) & ~done_t
                dt[better] = cand[better]
                prev_t[better] = i
            else:
                done_t[j] = True
                if dem[j] > FLOW_TOL:
                    # nearest unmet sink is settled; farther labels are not needed
                    t = j
                    break
                back = (flow[:, j] > FLOW_TOL) & ~done_s
                cand = dt[j] + np.maximum(-(C[:, j] + pot[:r] - pot[r + j]), 0.0)
                better = back & (cand < ds)
                ds[better] = cand[better]
                prev_s[better] = j
        if t < 0:
            break
        dist_t = dt[t]
        pot[:r] += np.minimum(ds, dist_t)
        pot[r:] += np.minimum(dt, dist_t)

        # bottleneck along the path, walking back from sink t
        delta = dem[t]
        j = t
        while True:
            i = prev_t[j]
            jb = prev_s[i]
            if jb < 0:
                delta = min(delta, sup[i])
                break
            delta = min(delta, flow[i, jb])
            j = jb
        j = t
        while True:
            i = prev_t[j]
            flow[i, j] += delta
            jb = prev_s[i]
            if jb < 0:
                sup[i] -= delta
                break
            flow[i, jb] -= delta
            j = jb
        dem[t] -= delta
    return flow, pot


def pair_problem(D, idx1, mass1, idx2, mass2):
    """Net out shared mass and return the reduced transportation problem."""
    net = {}
    for v, m in zip(idx1, mass1):
        net[v] = net.get(v, 0.0) + m
    for v, m in zip(idx2, mass2):
        net[v] = net.get(v, 0.0) - m
    src = np.array([v for v, m in net.items() if m > MASS_TOL], np.int64)
    snk = np.array([v for v, m in net.items() if m < -MASS_TOL], np.int64)
    a = np.array([net[v] for v in src], float)
    b = np.array([-net[v] for v in snk], float)
    C = D[np.ix_(src, snk)]
    return src, snk, a, b, C


def edge_costs(D, mptr, midx, mmass, eu, ev):
    out = np.empty(len(eu))
    for e in range(len(eu)):
        x, y = eu[e], ev[e]
        _, _, a, b, C = pair_problem(
            D,
            midx[mptr[x]:mptr[x + 1]], mmass[mptr[x]:mptr[x + 1]],
            midx[mptr[y]:mptr[y + 1]], mmass[mptr[y]:mptr[y + 1]],
        )
        if len(a) == 0 or len(b) == 0:
            out[e] = 0.0
            continue
        flow, _ = transport(C, a, b)
        out[e] = float((flow * C).sum())
    return out
