"""Pure-numpy implementations of the hot array kernels.

Every function here has a signature-identical twin in
:mod:`basisnet.kernels.numba_impl`; the active lane is chosen in the
package ``__init__``.  All inputs are ``int64`` arrays.
"""

from __future__ import annotations

import numpy as np

# keep per-chunk boolean tensors under ~16M entries
_CHUNK_CELLS = 1 << 24

BACKEND = "numpy"


def ge_mask(rows: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Row mask: rows[i] >= v entrywise."""
    return (rows >= v[None, :]).all(axis=1)


def dominates_mask(rows: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Row mask: rows[i] >= basis[j] entrywise for at least one j."""
    if basis.shape[0] == 0:
        return np.zeros(rows.shape[0], dtype=bool)
    return (rows[:, None, :] >= basis[None, :, :]).all(axis=2).any(axis=1)


def expand_all(markings: np.ndarray, pre: np.ndarray, c: np.ndarray):
    """All single-step firings from a batch of markings.

    Returns (src, tcol, child): for each enabled pair, the row index of
    the source marking, the fired column, and the successor marking.
    Pairs are emitted row-major (source ascending, then column ascending).
    """
    k, m = markings.shape
    n = pre.shape[1]
    if k == 0 or n == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty.copy(), np.empty((0, m), dtype=np.int64)
    srcs, tcols, children = [], [], []
    step = max(1, _CHUNK_CELLS // max(1, n * m))
    for lo in range(0, k, step):
        block = markings[lo : lo + step]
        enab = (block[:, None, :] >= pre.T[None, :, :]).all(axis=2)
        src, tcol = np.nonzero(enab)
        srcs.append(src + lo)
        tcols.append(tcol)
        children.append(block[src] + c.T[tcol])
    return (
        np.concatenate(srcs),
        np.concatenate(tcols),
        np.concatenate(children),
    )


def explain_all(m0: np.ndarray, pre: np.ndarray, c: np.ndarray,
                pre_t: np.ndarray, cap: int):
    """Minimal enabling firing-count vectors, all targets in one search.

    Layered search over the count vectors of the (pre, c) subnet from
    marking ``m0``; row j of ``pre_t`` is the token demand of target j.
    A vector stays live for a target until it covers that demand (then
    it is emitted as minimal) or rises componentwise above an emitted
    vector, and is expanded while live for any target.  Layer number
    equals the vector's total count, so vectors never recur and
    same-layer vectors are mutually incomparable.

    Returns ``(ex_target, ex_y, explored)``: parallel arrays pairing a
    target row index with each minimal vector, plus the number of
    distinct vectors visited, which exceeds ``cap`` iff the search was
    abandoned (outputs are then partial).
    """
    ni = pre.shape[1]
    k = pre_t.shape[0]
    ex_t: list[int] = []
    ex_rows: list[np.ndarray] = []
    basis = [np.zeros((0, ni), dtype=np.int64) for _ in range(k)]
    frontier_y = np.zeros((1, ni), dtype=np.int64)
    frontier_m = m0.reshape(1, -1).copy()
    live = np.ones((1, k), dtype=bool)
    explored = 1

    while frontier_y.shape[0]:
        sat = (frontier_m[:, None, :] >= pre_t[None, :, :]).all(axis=2)
        hits = sat & live
        if hits.any():
            for j in np.flatnonzero(hits.any(axis=0)):
                rows = frontier_y[hits[:, j]]
                ex_t.extend([j] * rows.shape[0])
                ex_rows.extend(rows)
                basis[j] = np.vstack([basis[j], rows])
            live &= ~sat
            keep = live.any(axis=1)
            frontier_y = frontier_y[keep]
            frontier_m = frontier_m[keep]
            live = live[keep]
            if frontier_y.shape[0] == 0:
                break
        src, tcol, child_m = expand_all(frontier_m, pre, c)
        if src.shape[0] == 0:
            break
        child_y = frontier_y[src].copy()
        child_y[np.arange(child_y.shape[0]), tcol] += 1
        child_live = live[src].copy()
        # dedupe within the layer, merging liveness of duplicate vectors
        index: dict[bytes, int] = {}
        fresh: list[int] = []
        for i in range(child_y.shape[0]):
            key = child_y[i].tobytes()
            at = index.get(key)
            if at is None:
                index[key] = i
                fresh.append(i)
            else:
                child_live[at] |= child_live[i]
        explored += len(fresh)
        child_y = child_y[fresh]
        child_m = child_m[fresh]
        child_live = child_live[fresh]
        if explored > cap:
            explored = cap + 1
            break
        for j in range(k):
            if basis[j].shape[0] and child_live[:, j].any():
                child_live[:, j] &= ~dominates_mask(child_y, basis[j])
        keep = child_live.any(axis=1)
        frontier_y = child_y[keep]
        frontier_m = child_m[keep]
        live = child_live[keep]

    if ex_rows:
        out_y = np.vstack(ex_rows)
    else:
        out_y = np.empty((0, ni), dtype=np.int64)
    return (np.asarray(ex_t, dtype=np.int64).reshape(-1), out_y,
            np.int64(explored))


def saturate(m0: np.ndarray, pre: np.ndarray, post: np.ndarray,
             order: np.ndarray, cap: int):
    """One topological pass firing each column as often as enabled.

    Returns (counts, final marking, total fired).  A column with no input
    places never saturates; it is charged ``cap + 1`` firings so the
    caller's cap check trips.  The pass aborts as soon as the total
    exceeds ``cap``; counts are then partial.
    """
    m = m0.copy()
    q = pre.shape[1]
    counts = np.zeros(q, dtype=np.int64)
    total = 0
    for t in order:
        col = pre[:, t]
        feeders = col > 0
        if not feeders.any():
            total = cap + 1
            break
        cnt = int((m[feeders] // col[feeders]).min())
        if cnt > 0:
            counts[t] = cnt
            total += cnt
            if total > cap:
                break
            m += cnt * (post[:, t] - col)
    return counts, m, total
