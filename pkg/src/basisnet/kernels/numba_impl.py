"""Numba-jitted implementations of the hot array kernels.

Same contracts as :mod:`basisnet.kernels.numpy_impl`; see there for the
semantics.  Compiled lazily on first call, cached on disk.
"""

from __future__ import annotations

import numpy as np
from numba import njit

BACKEND = "numba"


@njit(cache=True)
def ge_mask(rows, v):
    k, m = rows.shape
    out = np.empty(k, dtype=np.bool_)
    for i in range(k):
        ok = True
        for p in range(m):
            if rows[i, p] < v[p]:
                ok = False
                break
        out[i] = ok
    return out


@njit(cache=True)
def dominates_mask(rows, basis):
    k, d = rows.shape
    e = basis.shape[0]
    out = np.zeros(k, dtype=np.bool_)
    for i in range(k):
        for j in range(e):
            ok = True
            for x in range(d):
                if rows[i, x] < basis[j, x]:
                    ok = False
                    break
            if ok:
                out[i] = True
                break
    return out


@njit(cache=True)
def expand_all(markings, pre, c):
    k, m = markings.shape
    n = pre.shape[1]
    count = 0
    for i in range(k):
        for t in range(n):
            ok = True
            for p in range(m):
                if markings[i, p] < pre[p, t]:
                    ok = False
                    break
            if ok:
                count += 1
    src = np.empty(count, dtype=np.int64)
    tcol = np.empty(count, dtype=np.int64)
    child = np.empty((count, m), dtype=np.int64)
    j = 0
    for i in range(k):
        for t in range(n):
            ok = True
            for p in range(m):
                if markings[i, p] < pre[p, t]:
                    ok = False
                    break
            if ok:
                src[j] = i
                tcol[j] = t
                for p in range(m):
                    child[j, p] = markings[i, p] + c[p, t]
                j += 1
    return src, tcol, child


@njit(cache=True)
def explain_all(m0, pre, c, pre_t, cap):
    mm = m0.shape[0]
    ni = pre.shape[1]
    k = pre_t.shape[0]

    ecap = 16
    ex_t = np.empty(ecap, dtype=np.int64)
    ex_y = np.empty((ecap, ni), dtype=np.int64)
    ne = 0

    frontier_y = np.zeros((1, ni), dtype=np.int64)
    frontier_m = np.empty((1, mm), dtype=np.int64)
    for p in range(mm):
        frontier_m[0, p] = m0[p]
    live = np.ones((1, k), dtype=np.bool_)
    explored = 1

    while frontier_y.shape[0] > 0:
        f = frontier_y.shape[0]
        # record satisfied (node, target) pairs, then drop dead rows
        for i in range(f):
            for j in range(k):
                if live[i, j]:
                    ok = True
                    for p in range(mm):
                        if frontier_m[i, p] < pre_t[j, p]:
                            ok = False
                            break
                    if ok:
                        if ne == ecap:
                            ecap *= 2
                            nt = np.empty(ecap, dtype=np.int64)
                            nyy = np.empty((ecap, ni), dtype=np.int64)
                            for e in range(ne):
                                nt[e] = ex_t[e]
                                for x in range(ni):
                                    nyy[e, x] = ex_y[e, x]
                            ex_t = nt
                            ex_y = nyy
                        ex_t[ne] = j
                        for x in range(ni):
                            ex_y[ne, x] = frontier_y[i, x]
                        ne += 1
                        live[i, j] = False
        keepn = 0
        for i in range(f):
            for j in range(k):
                if live[i, j]:
                    keepn += 1
                    break
        if keepn == 0:
            break
        if keepn < f:
            ny = np.empty((keepn, ni), dtype=np.int64)
            nm = np.empty((keepn, mm), dtype=np.int64)
            nl = np.empty((keepn, k), dtype=np.bool_)
            w = 0
            for i in range(f):
                row_live = False
                for j in range(k):
                    if live[i, j]:
                        row_live = True
                        break
                if row_live:
                    for x in range(ni):
                        ny[w, x] = frontier_y[i, x]
                    for p in range(mm):
                        nm[w, p] = frontier_m[i, p]
                    for j in range(k):
                        nl[w, j] = live[i, j]
                    w += 1
            frontier_y = ny
            frontier_m = nm
            live = nl
            f = keepn
        # expand one layer
        nchild = 0
        for i in range(f):
            for t in range(ni):
                ok = True
                for p in range(mm):
                    if frontier_m[i, p] < pre[p, t]:
                        ok = False
                        break
                if ok:
                    nchild += 1
        if nchild == 0:
            break
        child_y = np.empty((nchild, ni), dtype=np.int64)
        child_m = np.empty((nchild, mm), dtype=np.int64)
        child_live = np.empty((nchild, k), dtype=np.bool_)
        w = 0
        for i in range(f):
            for t in range(ni):
                ok = True
                for p in range(mm):
                    if frontier_m[i, p] < pre[p, t]:
                        ok = False
                        break
                if ok:
                    for x in range(ni):
                        child_y[w, x] = frontier_y[i, x]
                    child_y[w, t] += 1
                    for p in range(mm):
                        child_m[w, p] = frontier_m[i, p] + c[p, t]
                    for j in range(k):
                        child_live[w, j] = live[i, j]
                    w += 1
        # lexicographic sort of the count vectors brings duplicates
        # next to each other; merge their liveness into the group head
        order = np.arange(nchild)
        for col in range(ni - 1, -1, -1):
            keys = np.empty(nchild, dtype=np.int64)
            for i in range(nchild):
                keys[i] = child_y[order[i], col]
            order = order[np.argsort(keys, kind="mergesort")]
        heads = np.empty(nchild, dtype=np.int64)
        ng = 0
        for oi in range(nchild):
            r = order[oi]
            if oi > 0:
                prev = order[oi - 1]
                same = True
                for x in range(ni):
                    if child_y[r, x] != child_y[prev, x]:
                        same = False
                        break
                if same:
                    h = heads[ng - 1]
                    for j in range(k):
                        if child_live[r, j]:
                            child_live[h, j] = True
                    continue
            heads[ng] = r
            ng += 1
        explored += ng
        if explored > cap:
            explored = cap + 1
            break
        # per-target dominance against recorded vectors, then keep live rows
        sel = np.empty(ng, dtype=np.int64)
        keepn = 0
        for gi in range(ng):
            r = heads[gi]
            row_live = False
            for j in range(k):
                if child_live[r, j]:
                    dom = False
                    for e in range(ne):
                        if ex_t[e] == j:
                            ok = True
                            for x in range(ni):
                                if child_y[r, x] < ex_y[e, x]:
                                    ok = False
                                    break
                            if ok:
                                dom = True
                                break
                    if dom:
                        child_live[r, j] = False
                    else:
                        row_live = True
            if row_live:
                sel[keepn] = r
                keepn += 1
        if keepn == 0:
            break
        ny = np.empty((keepn, ni), dtype=np.int64)
        nm = np.empty((keepn, mm), dtype=np.int64)
        nl = np.empty((keepn, k), dtype=np.bool_)
        for w in range(keepn):
            r = sel[w]
            for x in range(ni):
                ny[w, x] = child_y[r, x]
            for p in range(mm):
                nm[w, p] = child_m[r, p]
            for j in range(k):
                nl[w, j] = child_live[r, j]
        frontier_y = ny
        frontier_m = nm
        live = nl

    return ex_t[:ne], ex_y[:ne], np.int64(explored)


@njit(cache=True)
def saturate(m0, pre, post, order, cap):
    m = m0.copy()
    npl = m.shape[0]
    q = pre.shape[1]
    counts = np.zeros(q, dtype=np.int64)
    total = 0
    for oi in range(order.shape[0]):
        t = order[oi]
        cnt = np.int64(-1)
        for p in range(npl):
            w = pre[p, t]
            if w > 0:
                avail = m[p] // w
                if cnt < 0 or avail < cnt:
                    cnt = avail
        if cnt < 0:
            # no input places: the column never saturates
            total = cap + 1
            break
        if cnt > 0:
            counts[t] = cnt
            total += cnt
            if total > cap:
                break
            for p in range(npl):
                m[p] += cnt * (post[p, t] - pre[p, t])
    return counts, m, total
