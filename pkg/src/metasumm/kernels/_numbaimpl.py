"""Numba @njit implementations of the hot kernels.

Mirror of kernels._purepy; keep the two in sync. fastmath stays off so
each backend is deterministic run to run.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

_LCG_MULT = np.uint64(6364136223846793005)
_LCG_INC = np.uint64(1442695040888963407)
_SHIFT = np.uint64(33)


@njit(cache=True)
def lcs_len(a, b):
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return 0
    prev = np.zeros(m + 1, dtype=np.int32)
    cur = np.zeros(m + 1, dtype=np.int32)
    for i in range(n):
        ai = a[i]
        for j in range(m):
            if ai == b[j]:
                cur[j + 1] = prev[j] + 1
            else:
                cur[j + 1] = max(prev[j + 1], cur[j])
        tmp = prev
        prev = cur
        cur = tmp
    return int(prev[m])


@njit(cache=True)
def lcs_ref_mask(ref, cand):
    n, m = len(ref), len(cand)
    mask = np.zeros(n, dtype=np.uint8)
    if n == 0 or m == 0:
        return mask
    table = np.zeros((n + 1, m + 1), dtype=np.int32)
    for i in range(1, n + 1):
        ri = ref[i - 1]
        for j in range(1, m + 1):
            if ri == cand[j - 1]:
                table[i, j] = table[i - 1, j - 1] + 1
            else:
                table[i, j] = max(table[i - 1, j], table[i, j - 1])
    i, j = n, m
    while i > 0 and j > 0:
        if ref[i - 1] == cand[j - 1]:
            mask[i - 1] = 1
            i -= 1
            j -= 1
        elif table[i, j - 1] > table[i - 1, j]:
            j -= 1
        else:
            i -= 1
    return mask


@njit(cache=True)
def _logsigmoid(x):
    if x >= 0.0:
        return -math.log1p(math.exp(-x))
    return x - math.log1p(math.exp(x))


@njit(cache=True)
def d2v_train_block(
    words,
    offsets,
    doc_rows,
    order,
    syn0,
    syn1,
    dvecs,
    table,
    window,
    k_neg,
    alpha0,
    alpha_min,
    done0,
    total,
    state,
    train_words,
    train_doc,
):
    dim = syn0.shape[1]
    tlen = np.uint64(len(table))
    loss_sum = 0.0
    done = done0
    st = np.uint64(state)
    span = float(total) if total > 0 else 1.0

    h = np.empty(dim, dtype=np.float32)
    neu1e = np.empty(dim, dtype=np.float32)

    for oi in range(len(order)):
        d = order[oi]
        lo = offsets[d]
        hi = offsets[d + 1]
        row = doc_rows[d]
        for pos in range(lo, hi):
            target = words[pos]
            c0 = max(lo, pos - window)
            c1 = min(hi, pos + window + 1)
            m = c1 - c0 - 1
            alpha = alpha0 + (alpha_min - alpha0) * (done / span)
            if alpha < alpha_min:
                alpha = alpha_min

            inv = np.float32(1.0 / (m + 1))
            for k in range(dim):
                acc = dvecs[row, k]
                for c in range(c0, c1):
                    if c != pos:
                        acc += syn0[words[c], k]
                h[k] = acc * inv
                neu1e[k] = 0.0

            for s_i in range(k_neg + 1):
                if s_i == 0:
                    tgt = target
                    label = 1.0
                else:
                    st = st * _LCG_MULT + _LCG_INC
                    tgt = table[(st >> _SHIFT) % tlen]
                    if tgt == target:
                        continue
                    label = 0.0
                score = 0.0
                for k in range(dim):
                    score += h[k] * syn1[tgt, k]
                f = 1.0 / (1.0 + math.exp(-score)) if score > -60.0 else 0.0
                g = np.float32((label - f) * alpha)
                if label == 1.0:
                    loss_sum -= _logsigmoid(score)
                else:
                    loss_sum -= _logsigmoid(-score)
                for k in range(dim):
                    out_k = syn1[tgt, k]
                    neu1e[k] += g * out_k
                    if train_words:
                        syn1[tgt, k] = out_k + g * h[k]

            if train_doc:
                for k in range(dim):
                    dvecs[row, k] += neu1e[k] * inv
            if train_words:
                for c in range(c0, c1):
                    if c != pos:
                        w = words[c]
                        for k in range(dim):
                            syn0[w, k] += neu1e[k] * inv
            done += 1

    return loss_sum, done - done0, st


@njit(cache=True)
def best_split(X, Y):
    n, nfeat = X.shape
    nout = Y.shape[1]
    tot = np.zeros(nout)
    tot2 = np.zeros(nout)
    for i in range(n):
        for j in range(nout):
            tot[j] += Y[i, j]
            tot2[j] += Y[i, j] * Y[i, j]
    sse_parent = 0.0
    for j in range(nout):
        sse_parent += max(tot2[j] - tot[j] * tot[j] / n, 0.0)
    best_f = -1
    best_thr = 0.0
    best_gain = 0.0
    if n < 2 or sse_parent <= 0.0:
        return best_f, best_thr, best_gain

    sl = np.empty(nout)
    sl2 = np.empty(nout)
    for f in range(nfeat):
        idx = np.argsort(X[:, f], kind="mergesort")
        for j in range(nout):
            sl[j] = 0.0
            sl2[j] = 0.0
        for i in range(n - 1):
            r = idx[i]
            for j in range(nout):
                y = Y[r, j]
                sl[j] += y
                sl2[j] += y * y
            xi = X[r, f]
            xn = X[idx[i + 1], f]
            if xi >= xn:
                continue
            nl = float(i + 1)
            nr = float(n - i - 1)
            sse_l = 0.0
            sse_r = 0.0
            for j in range(nout):
                sse_l += max(sl2[j] - sl[j] * sl[j] / nl, 0.0)
                tr = tot[j] - sl[j]
                sse_r += max((tot2[j] - sl2[j]) - tr * tr / nr, 0.0)
            gain = sse_parent - sse_l - sse_r
            if gain > best_gain:
                best_f = f
                best_thr = (xi + xn) / 2.0
                best_gain = gain
    return best_f, best_thr, best_gain
