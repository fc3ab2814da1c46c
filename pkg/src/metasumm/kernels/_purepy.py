"""Pure numpy/python fallback implementations of the hot kernels.

Semantics (including the negative-sampling RNG stream and all tie rules)
match the numba backend exactly; only floating-point summation order may
differ in the low bits.
"""

from __future__ import annotations

import math

import numpy as np

_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_U64_MASK = (1 << 64) - 1


def lcs_len(a: np.ndarray, b: np.ndarray) -> int:
    """Length of the longest common subsequence of two int sequences."""
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
        prev, cur = cur, prev
    return int(prev[m])


def lcs_ref_mask(ref: np.ndarray, cand: np.ndarray) -> np.ndarray:
    """Mask over `ref` positions belonging to the canonical LCS with `cand`.

    Backtracking matches whenever tokens are equal; on table ties it moves
    along the reference axis, which makes the selected index set
    deterministic.
    """
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


def _logsigmoid(x: float) -> float:
    if x >= 0.0:
        return -math.log1p(math.exp(-x))
    return x - math.log1p(math.exp(x))


def _frozen_words_pass(
    words, offsets, doc_rows, order, syn0, syn1, dvecs, table,
    window, k_neg, alpha0, alpha_min, done0, total, state,
):
    """Inference fast path: word parameters frozen, only doc vectors move.

    With syn0/syn1 constant the per-position context sums can be computed
    once per document and the per-sample math batched; the RNG stream and
    the applied updates match the general path exactly in exact
    arithmetic.
    """
    tlen = len(table)
    span = float(total) if total > 0 else 1.0
    dim = syn0.shape[1]
    loss_sum = 0.0
    done = int(done0)
    state = int(state) & _U64_MASK

    ctx_cache: dict[int, tuple] = {}

    def doc_arrays(d: int):
        if d not in ctx_cache:
            lo, hi = int(offsets[d]), int(offsets[d + 1])
            n = hi - lo
            sums = np.zeros((n, dim), dtype=np.float32)
            invs = np.empty(n, dtype=np.float32)
            for i in range(n):
                pos = lo + i
                c0 = max(lo, pos - window)
                c1 = min(hi, pos + window + 1)
                ctx = np.concatenate((words[c0:pos], words[pos + 1 : c1]))
                if len(ctx):
                    sums[i] = syn0[ctx].sum(axis=0)
                invs[i] = 1.0 / (len(ctx) + 1)
            ctx_cache[d] = (lo, hi, sums, invs)
        return ctx_cache[d]

    for d in order:
        lo, hi, sums, invs = doc_arrays(int(d))
        row = int(doc_rows[int(d)])
        dvec = dvecs[row]
        for i in range(hi - lo):
            target = int(words[lo + i])
            alpha = alpha0 + (alpha_min - alpha0) * (done / span)
            if alpha < alpha_min:
                alpha = alpha_min
            inv = invs[i]
            h = (dvec + sums[i]) * inv
            tgts = [target]
            for _ in range(k_neg):
                state = (state * _LCG_MULT + _LCG_INC) & _U64_MASK
                tgt = int(table[(state >> 33) % tlen])
                if tgt != target:
                    tgts.append(tgt)
            outs = syn1[tgts]
            scores = outs @ h
            gs = np.empty(len(tgts), dtype=np.float32)
            for j in range(len(tgts)):
                s = float(scores[j])
                f = 1.0 / (1.0 + math.exp(-s)) if s > -60.0 else 0.0
                gs[j] = ((1.0 if j == 0 else 0.0) - f) * alpha
                loss_sum -= _logsigmoid(s if j == 0 else -s)
            dvec = dvec + (gs @ outs) * inv
            done += 1
        dvecs[row] = dvec
    return loss_sum, done - int(done0), state


def d2v_train_block(
    words: np.ndarray,
    offsets: np.ndarray,
    doc_rows: np.ndarray,
    order: np.ndarray,
    syn0: np.ndarray,
    syn1: np.ndarray,
    dvecs: np.ndarray,
    table: np.ndarray,
    window: int,
    k_neg: int,
    alpha0: float,
    alpha_min: float,
    done0: int,
    total: int,
    state: int,
    train_words: bool,
    train_doc: bool,
):
    """One pass of PV-DM negative-sampling SGD over `order`.

    Returns (loss_sum, positions_processed, new_rng_state). The context is
    the mean of the doc vector and the word vectors inside the window; the
    exact gradient (including the 1/(m+1) context scaling) is applied.
    """
    if not train_words and train_doc:
        return _frozen_words_pass(
            words, offsets, doc_rows, order, syn0, syn1, dvecs, table,
            window, k_neg, alpha0, alpha_min, done0, total, state,
        )
    tlen = len(table)
    loss_sum = 0.0
    done = int(done0)
    state = int(state) & _U64_MASK
    span = float(total) if total > 0 else 1.0

    for d in order:
        lo, hi = int(offsets[d]), int(offsets[d + 1])
        row = int(doc_rows[d])
        dvec = dvecs[row]
        for pos in range(lo, hi):
            target = int(words[pos])
            c0 = max(lo, pos - window)
            c1 = min(hi, pos + window + 1)
            m = c1 - c0 - 1
            alpha = alpha0 + (alpha_min - alpha0) * (done / span)
            if alpha < alpha_min:
                alpha = alpha_min

            ctx = np.concatenate((words[c0:pos], words[pos + 1 : c1]))
            inv = np.float32(1.0 / (m + 1))
            if m > 0:
                h = (dvec + syn0[ctx].sum(axis=0)) * inv
            else:
                h = dvec.copy()

            if train_words:
                tgts = [target]
                for _ in range(k_neg):
                    state = (state * _LCG_MULT + _LCG_INC) & _U64_MASK
                    tgt = int(table[(state >> 33) % tlen])
                    if tgt != target:
                        tgts.append(tgt)
                if len(set(tgts)) == len(tgts):
                    # distinct rows never interact within one position, so
                    # the sequential sample loop batches exactly
                    outs = syn1[tgts]
                    scores = outs @ h
                    gs = np.empty(len(tgts), dtype=np.float32)
                    for j in range(len(tgts)):
                        s = float(scores[j])
                        f = 1.0 / (1.0 + math.exp(-s)) if s > -60.0 else 0.0
                        gs[j] = ((1.0 if j == 0 else 0.0) - f) * alpha
                        loss_sum -= _logsigmoid(s if j == 0 else -s)
                    neu1e = gs @ outs
                    syn1[tgts] = outs + gs[:, None] * h
                else:
                    neu1e = np.zeros_like(h)
                    for j, tgt in enumerate(tgts):
                        out = syn1[tgt]
                        score = float(np.dot(h, out))
                        f = 1.0 / (1.0 + math.exp(-score)) if score > -60.0 else 0.0
                        g = ((1.0 if j == 0 else 0.0) - f) * alpha
                        loss_sum -= _logsigmoid(score if j == 0 else -score)
                        neu1e = neu1e + np.float32(g) * out
                        syn1[tgt] = out + np.float32(g) * h
            else:
                # frozen word parameters: the per-sample updates cannot
                # interact, so the sample loop collapses to matrix ops
                tgts = [target]
                for _ in range(k_neg):
                    state = (state * _LCG_MULT + _LCG_INC) & _U64_MASK
                    tgt = int(table[(state >> 33) % tlen])
                    if tgt != target:
                        tgts.append(tgt)
                outs = syn1[tgts]
                scores = outs @ h
                s64 = scores.astype(np.float64)
                probs = np.where(s64 > -60.0, 1.0 / (1.0 + np.exp(-np.minimum(s64, 60.0))), 0.0)
                labels = np.zeros(len(tgts))
                labels[0] = 1.0
                gs = ((labels - probs) * alpha).astype(np.float32)
                loss_sum += float(
                    np.sum(np.logaddexp(0.0, -s64) * labels + np.logaddexp(0.0, s64) * (1.0 - labels))
                )
                neu1e = gs @ outs

            upd = neu1e * inv
            if train_doc:
                dvecs[row] = dvec + upd
                dvec = dvecs[row]
            if train_words and m > 0:
                for c in ctx:
                    syn0[c] += upd
            done += 1

    return loss_sum, done - int(done0), state


def best_split(X: np.ndarray, Y: np.ndarray):
    """Best (feature, threshold) by summed variance reduction over outputs.

    Features are scanned in column order and thresholds in ascending order;
    only strictly larger gains replace the incumbent, so ties resolve to
    the lowest feature index, then the lowest threshold. Returns
    (feature_index, threshold, gain); feature_index is -1 when no split
    improves on the parent.
    """
    n, nfeat = X.shape
    tot = Y.sum(axis=0)
    tot2 = (Y * Y).sum(axis=0)
    sse_parent = float(np.maximum(tot2 - tot * tot / n, 0.0).sum())
    best_f, best_thr, best_gain = -1, 0.0, 0.0
    if n < 2 or sse_parent <= 0.0:
        return best_f, best_thr, best_gain

    for f in range(nfeat):
        idx = np.argsort(X[:, f], kind="mergesort")
        xs = X[idx, f]
        ys = Y[idx]
        csum = np.cumsum(ys, axis=0)
        csum2 = np.cumsum(ys * ys, axis=0)
        valid = xs[:-1] < xs[1:]
        if not valid.any():
            continue
        nl = np.arange(1, n, dtype=np.float64)
        nr = n - nl
        sl = csum[:-1]
        sl2 = csum2[:-1]
        sse_l = np.maximum(sl2 - sl * sl / nl[:, None], 0.0).sum(axis=1)
        sse_r = np.maximum((tot2 - sl2) - (tot - sl) ** 2 / nr[:, None], 0.0).sum(axis=1)
        gains = np.where(valid, sse_parent - sse_l - sse_r, -np.inf)
        i = int(np.argmax(gains))
        if gains[i] > best_gain:
            best_f = f
            best_thr = float((xs[i] + xs[i + 1]) / 2.0)
            best_gain = float(gains[i])
    return best_f, best_thr, best_gain
