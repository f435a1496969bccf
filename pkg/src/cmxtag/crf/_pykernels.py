"""Pure numpy implementation of the CRF kernels.

Conventions shared with the compiled module:

* ``state`` is ``(F, L)``; ``trans[i, j]`` scores label ``i`` followed by ``j``;
  ``bos``/``eos`` score the first/last label.
* A sequence's features are ``feat_ids[tok_off[t]:tok_off[t + 1]]`` for token
  ``t``.  ``seq_off`` delimits sequences in token units.
* All arrays are C-contiguous float64 / int32 / int64 as in :mod:`.model`.
"""
import numpy as np

NAME = "python"


def _lse(a, axis):
    m = np.max(a, axis=axis, keepdims=True)
    m = np.where(np.isfinite(m), m, 0.0)
    return np.squeeze(m, axis=axis) + np.log(np.sum(np.exp(a - m), axis=axis))


def emissions(state, feat_ids, tok_off):
    T = len(tok_off) - 1
    emit = np.zeros((T, state.shape[1]))
    rows = np.repeat(np.arange(T), np.diff(tok_off))
    np.add.at(emit, rows, state[feat_ids])
    return emit


def forward(emit, trans, bos, eos):
    T, L = emit.shape
    alpha = np.empty((T, L))
    alpha[0] = bos + emit[0]
    for t in range(1, T):
        alpha[t] = _lse(alpha[t - 1][:, None] + trans, axis=0) + emit[t]
    return alpha, float(_lse(alpha[-1] + eos, axis=0))


def backward(emit, trans, bos, eos):
    T, L = emit.shape
    beta = np.empty((T, L))
    beta[-1] = eos
    for t in range(T - 2, -1, -1):
        beta[t] = _lse(trans + (emit[t + 1] + beta[t + 1])[None, :], axis=1)
    return beta, float(_lse(bos + emit[0] + beta[0], axis=0))


def viterbi(emit, trans, bos, eos):
    T, L = emit.shape
    V = np.empty((T, L))
    V[-1] = eos
    for t in range(T - 2, -1, -1):
        V[t] = np.max(trans + (emit[t + 1] + V[t + 1])[None, :], axis=1)
    path = np.empty(T, dtype=np.int64)
    # argmax returns the first maximum, i.e. the smallest label id
    path[0] = np.argmax(bos + emit[0] + V[0])
    for t in range(1, T):
        path[t] = np.argmax(trans[path[t - 1]] + emit[t] + V[t])
    return path


def nll_grad(state, trans, bos, eos, feat_ids, tok_off, seq_off, labels,
             g_state, g_trans, g_bos, g_eos):
    total = 0.0
    for s in range(len(seq_off) - 1):
        a, b = seq_off[s], seq_off[s + 1]
        if a == b:
            continue
        offs = tok_off[a:b + 1]
        ids = feat_ids[offs[0]:offs[-1]]
        emit = emissions(state, ids, offs - offs[0])
        y = labels[a:b]
        alpha, logz = forward(emit, trans, bos, eos)
        beta, _ = backward(emit, trans, bos, eos)

        gold = bos[y[0]] + emit[0, y[0]]
        for t in range(1, len(y)):
            gold += trans[y[t - 1], y[t]] + emit[t, y[t]]
        gold += eos[y[-1]]
        total += logz - gold

        node = np.exp(alpha + beta - logz)
        rows = np.repeat(np.arange(b - a), np.diff(offs))
        np.add.at(g_state, ids, node[rows])
        np.add.at(g_state, (ids, y[rows]), -1.0)
        if b - a > 1:
            edge = np.exp(alpha[:-1, :, None] + trans[None] + (emit[1:] + beta[1:])[:, None, :] - logz)
            g_trans += edge.sum(axis=0)
            np.add.at(g_trans, (y[:-1], y[1:]), -1.0)
        g_bos += node[0]
        g_eos += node[-1]
        g_bos[y[0]] -= 1.0
        g_eos[y[-1]] -= 1.0
    return total
