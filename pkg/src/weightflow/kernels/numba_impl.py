"""numba-compiled kernels.

Mirrors :mod:`weightflow.kernels.numpy_impl` function by function. Loops are
written out explicitly so that the compiled code never allocates in the inner
relaxations.
"""
import heapq

import numpy as np
from numba import njit

MASS_TOL = 1e-15
FLOW_TOL = 1e-14


@njit(cache=True)
def _dijkstra_row(indptr, indices, wcsr, src, out):
    n = len(indptr) - 1
    for v in range(n):
        out[v] = np.inf
    out[src] = 0.0
    heap = [(0.0, src)]
    while len(heap) > 0:
        d, u = heapq.heappop(heap)
        if d > out[u]:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            nd = d + wcsr[k]
            if nd < out[v]:
                out[v] = nd
                heapq.heappush(heap, (nd, v))


@njit(cache=True)
def apsp(indptr, indices, wcsr, n):
    dist = np.empty((n, n))
    for s in range(n):
        _dijkstra_row(indptr, indices, wcsr, s, dist[s])
    for i in range(n):
        for j in range(i + 1, n):
            m = min(dist[i, j], dist[j, i])
            dist[i, j] = m
            dist[j, i] = m
    return dist


@njit(cache=True)
def _compact(mptr, midx, mmass, tol):
    n = len(mptr) - 1
    newptr = np.zeros(n + 1, np.int64)
    keep = 0
    for x in range(n):
        for p in range(mptr[x], mptr[x + 1]):
            if mmass[p] >= tol:
                keep += 1
        newptr[x + 1] = keep
    oidx = np.empty(keep, np.int64)
    omass = np.empty(keep)
    q = 0
    for p in range(len(mmass)):
        if mmass[p] >= tol:
            oidx[q] = midx[p]
            omass[q] = mmass[p]
            q += 1
    return newptr, oidx, omass


@njit(cache=True)
def one_step_measures(indptr, indices, wcsr, alpha):
    n = len(indptr) - 1
    mptr = np.zeros(n + 1, np.int64)
    for x in range(n):
        mptr[x + 1] = mptr[x] + indptr[x + 1] - indptr[x] + 1
    midx = np.empty(mptr[n], np.int64)
    mmass = np.empty(mptr[n])
    for x in range(n):
        s = 0.0
        for k in range(indptr[x], indptr[x + 1]):
            s += wcsr[k]
        p = mptr[x]
        midx[p] = x
        mmass[p] = alpha
        for k in range(indptr[x], indptr[x + 1]):
            p += 1
            midx[p] = indices[k]
            mmass[p] = (1.0 - alpha) * wcsr[k] / s
    return _compact(mptr, midx, mmass, MASS_TOL)


@njit(cache=True)
def two_step_measures(indptr, indices, wcsr, alpha):
    n = len(indptr) - 1
    # near[v] == x marks v as x itself or a neighbour of x
    near = np.full(n, -1, np.int64)
    slot = np.full(n, -1, np.int64)
    acc = np.zeros(n)
    order = np.empty(n, np.int64)
    ptr = np.zeros(n + 1, np.int64)
    cap = 4 * n + 16
    midx = np.empty(cap, np.int64)
    mmass = np.empty(cap)
    b = 1.0 - alpha
    for x in range(n):
        sx = 0.0
        near[x] = x
        for k in range(indptr[x], indptr[x + 1]):
            sx += wcsr[k]
            near[indices[k]] = x
        cnt = 0
        slot[x] = cnt
        order[cnt] = x
        acc[x] = alpha
        cnt += 1
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            slot[y] = cnt
            order[cnt] = y
            acc[y] = alpha * b * wcsr[k] / sx
            cnt += 1
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            share = wcsr[k] / sx
            ty = 0.0
            for kk in range(indptr[y], indptr[y + 1]):
                if near[indices[kk]] != x:
                    ty += wcsr[kk]
            if ty == 0.0:
                acc[y] += b * b * share
                continue
            for kk in range(indptr[y], indptr[y + 1]):
                z = indices[kk]
                if near[z] == x:
                    continue
                if slot[z] < 0:
                    slot[z] = cnt
                    order[cnt] = z
                    acc[z] = 0.0
                    cnt += 1
                acc[z] += b * b * share * wcsr[kk] / ty
        start = ptr[x]
        if start + cnt > cap:
            while start + cnt > cap:
                cap *= 2
            nidx = np.empty(cap, np.int64)
            nmass = np.empty(cap)
            nidx[:start] = midx[:start]
            nmass[:start] = mmass[:start]
            midx = nidx
            mmass = nmass
        for q in range(cnt):
            v = order[q]
            midx[start + q] = v
            mmass[start + q] = acc[v]
            slot[v] = -1
        ptr[x + 1] = start + cnt
    return _compact(ptr, midx[:ptr[n]], mmass[:ptr[n]], MASS_TOL)


@njit(cache=True)
def transport(C, a, b):
    r, c = C.shape
    flow = np.zeros((r, c))
    pot = np.zeros(r + c)
    if r == 0 or c == 0:
        return flow, pot
    for j in range(c):
        m = np.inf
        for i in range(r):
            if C[i, j] < m:
                m = C[i, j]
        pot[r + j] = m
    sup = a.copy()
    dem = b.copy()
    # every column minimum is a zero-reduced-cost arc: fill those greedily first
    for j in range(c):
        for i in range(r):
            if dem[j] <= FLOW_TOL:
                break
            if sup[i] > FLOW_TOL and C[i, j] == pot[r + j]:
                x = min(sup[i], dem[j])
                flow[i, j] += x
                sup[i] -= x
                dem[j] -= x
    ds = np.empty(r)
    dt = np.empty(c)
    prev_s = np.empty(r, np.int64)
    prev_t = np.empty(c, np.int64)
    done_s = np.empty(r, np.bool_)
    done_t = np.empty(c, np.bool_)
    max_rounds = 4 * (r + c) ** 2 + 16
    for _ in range(max_rounds):
        any_s = False
        for i in range(r):
            any_s = any_s or sup[i] > FLOW_TOL
        any_t = False
        for j in range(c):
            any_t = any_t or dem[j] > FLOW_TOL
        if not (any_s and any_t):
            break
        for i in range(r):
            ds[i] = 0.0 if sup[i] > FLOW_TOL else np.inf
            prev_s[i] = -1
            done_s[i] = False
        for j in range(c):
            dt[j] = np.inf
            prev_t[j] = -1
            done_t[j] = False
        t = -1
        for _step in range(r + c):
            bi = -1
            bv = np.inf
            for i in range(r):
                if not done_s[i] and ds[i] < bv:
                    bv = ds[i]
                    bi = i
            bj = -1
            bw = np.inf
            for j in range(c):
                if not done_t[j] and dt[j] < bw:
                    bw = dt[j]
                    bj = j
            if bi < 0 and bj < 0:
                break
            if bi >= 0 and bv <= bw:
                done_s[bi] = True
                for j in range(c):
                    if done_t[j]:
                        continue
                    red = C[bi, j] + pot[bi] - pot[r + j]
                    if red < 0.0:
                        red = 0.0
                    if bv + red < dt[j]:
                        dt[j] = bv + red
                        prev_t[j] = bi
            else:
                done_t[bj] = True
                if dem[bj] > FLOW_TOL:
                    # nearest unmet sink is settled; farther labels are not needed
                    t = bj
                    break
                for i in range(r):
                    if done_s[i] or flow[i, bj] <= FLOW_TOL:
                        continue
                    red = -(C[i, bj] + pot[i] - pot[r + bj])
                    if red < 0.0:
                        red = 0.0
                    if bw + red < ds[i]:
                        ds[i] = bw + red
                        prev_s[i] = bj
        if t < 0:
            break
        dist_t = dt[t]
        for i in range(r):
            pot[i] += min(ds[i], dist_t)
        for j in range(c):
            pot[r + j] += min(dt[j], dist_t)
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


@njit(cache=True)
def pair_problem(D, idx1, mass1, idx2, mass2, net, seen):
    """Net out shared mass; ``net`` and ``seen`` are length-n scratch arrays."""
    for p in range(len(idx1)):
        net[idx1[p]] = 0.0
    for p in range(len(idx2)):
        net[idx2[p]] = 0.0
    for p in range(len(idx1)):
        net[idx1[p]] += mass1[p]
    for p in range(len(idx2)):
        net[idx2[p]] -= mass2[p]
    src = np.empty(len(idx1) + len(idx2), np.int64)
    snk = np.empty(len(idx1) + len(idx2), np.int64)
    ns = 0
    nt = 0
    for p in range(len(idx1) + len(idx2)):
        v = idx1[p] if p < len(idx1) else idx2[p - len(idx1)]
        if seen[v]:
            continue
        seen[v] = True
        if net[v] > MASS_TOL:
            src[ns] = v
            ns += 1
        elif net[v] < -MASS_TOL:
            snk[nt] = v
            nt += 1
    for p in range(len(idx1)):
        seen[idx1[p]] = False
    for p in range(len(idx2)):
        seen[idx2[p]] = False
    a = np.empty(ns)
    bb = np.empty(nt)
    C = np.empty((ns, nt))
    for i in range(ns):
        a[i] = net[src[i]]
        for j in range(nt):
            C[i, j] = D[src[i], snk[j]]
    for j in range(nt):
        bb[j] = -net[snk[j]]
    return src[:ns], snk[:nt], a, bb, C


@njit(cache=True)
def edge_costs(D, mptr, midx, mmass, eu, ev):
    n = D.shape[0]
    net = np.zeros(n)
    seen = np.zeros(n, np.bool_)
    out = np.empty(len(eu))
    for e in range(len(eu)):
        x = eu[e]
        y = ev[e]
        _, _, a, b, C = pair_problem(
            D,
            midx[mptr[x]:mptr[x + 1]], mmass[mptr[x]:mptr[x + 1]],
            midx[mptr[y]:mptr[y + 1]], mmass[mptr[y]:mptr[y + 1]],
            net, seen,
        )
        if len(a) == 0 or len(b) == 0:
            out[e] = 0.0
            continue
        flow, _ = transport(C, a, b)
        s = 0.0
        for i in range(C.shape[0]):
            for j in range(C.shape[1]):
                s += flow[i, j] * C[i, j]
        out[e] = s
    return out
