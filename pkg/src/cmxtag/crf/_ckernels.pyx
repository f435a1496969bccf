# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled linear-chain CRF kernels.

Same contract as ``_pykernels``; see that module for argument conventions.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport exp, log, INFINITY

cnp.import_array()

NAME = "cython"


cdef inline double _lse(double* a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double m = -INFINITY
    cdef double s = 0.0
    for i in range(n):
        if a[i] > m:
            m = a[i]
    if m == -INFINITY:
        return m
    for i in range(n):
        s += exp(a[i] - m)
    return m + log(s)


cdef void _emit(const double[:, ::1] state, const cnp.int32_t[::1] feat_ids,
                const cnp.int64_t[::1] tok_off, Py_ssize_t t0, Py_ssize_t T,
                double[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t L = state.shape[1]
    cdef Py_ssize_t t, k, y, f
    for t in range(T):
        for y in range(L):
            out[t, y] = 0.0
        for k in range(tok_off[t0 + t], tok_off[t0 + t + 1]):
            f = feat_ids[k]
            for y in range(L):
                out[t, y] += state[f, y]


cdef double _forward(const double[:, ::1] emit, const double[:, ::1] trans,
                     const double[::1] bos, const double[::1] eos, Py_ssize_t T,
                     double[:, ::1] alpha, double* buf) noexcept nogil:
    cdef Py_ssize_t L = trans.shape[0]
    cdef Py_ssize_t t, i, j
    for j in range(L):
        alpha[0, j] = bos[j] + emit[0, j]
    for t in range(1, T):
        for j in range(L):
            for i in range(L):
                buf[i] = alpha[t - 1, i] + trans[i, j]
            alpha[t, j] = _lse(buf, L) + emit[t, j]
    for j in range(L):
        buf[j] = alpha[T - 1, j] + eos[j]
    return _lse(buf, L)


cdef double _backward(const double[:, ::1] emit, const double[:, ::1] trans,
                      const double[::1] bos, const double[::1] eos, Py_ssize_t T,
                      double[:, ::1] beta, double* buf) noexcept nogil:
    cdef Py_ssize_t L = trans.shape[0]
    cdef Py_ssize_t t, i, j
    for i in range(L):
        beta[T - 1, i] = eos[i]
    for t in range(T - 2, -1, -1):
        for i in range(L):
            for j in range(L):
                buf[j] = trans[i, j] + emit[t + 1, j] + beta[t + 1, j]
            beta[t, i] = _lse(buf, L)
    for j in range(L):
        buf[j] = bos[j] + emit[0, j] + beta[0, j]
    return _lse(buf, L)


def emissions(const double[:, ::1] state, const cnp.int32_t[::1] feat_ids,
              const cnp.int64_t[::1] tok_off):
    cdef Py_ssize_t T = tok_off.shape[0] - 1
    out = np.zeros((T, state.shape[1]), dtype=np.float64)
    cdef double[:, ::1] ov = out
    with nogil:
        _emit(state, feat_ids, tok_off, 0, T, ov)
    return out


def forward(const double[:, ::1] emit, const double[:, ::1] trans,
            const double[::1] bos, const double[::1] eos):
    cdef Py_ssize_t T = emit.shape[0], L = emit.shape[1]
    alpha = np.empty((T, L), dtype=np.float64)
    buf = np.empty(L, dtype=np.float64)
    cdef double[:, ::1] av = alpha
    cdef double[::1] bv = buf
    cdef double logz
    with nogil:
        logz = _forward(emit, trans, bos, eos, T, av, &bv[0])
    return alpha, logz


def backward(const double[:, ::1] emit, const double[:, ::1] trans,
             const double[::1] bos, const double[::1] eos):
    cdef Py_ssize_t T = emit.shape[0], L = emit.shape[1]
    beta = np.empty((T, L), dtype=np.float64)
    buf = np.empty(L, dtype=np.float64)
    cdef double[:, ::1] bv = beta
    cdef double[::1] bb = buf
    cdef double logz
    with nogil:
        logz = _backward(emit, trans, bos, eos, T, bv, &bb[0])
    return beta, logz


def viterbi(const double[:, ::1] emit, const double[:, ::1] trans,
            const double[::1] bos, const double[::1] eos):
    cdef Py_ssize_t T = emit.shape[0], L = emit.shape[1]
    cdef Py_ssize_t t, i, j, best
    cdef double v, m
    value = np.empty((T, L), dtype=np.float64)
    path = np.empty(T, dtype=np.int64)
    cdef double[:, ::1] V = value
    cdef cnp.int64_t[::1] p = path
    with nogil:
        # V[t, i]: best score of positions t+1.. plus eos, given label i at t
        for i in range(L):
            V[T - 1, i] = eos[i]
        for t in range(T - 2, -1, -1):
            for i in range(L):
                m = -INFINITY
                for j in range(L):
                    v = trans[i, j] + emit[t + 1, j] + V[t + 1, j]
                    if v > m:
                        m = v
                V[t, i] = m
        # forward greedy pass: first strict maximum gives the smallest label id
        best = 0
        m = -INFINITY
        for j in range(L):
            v = bos[j] + emit[0, j] + V[0, j]
            if v > m:
                m = v
                best = j
        p[0] = best
        for t in range(1, T):
            i = p[t - 1]
            best = 0
            m = -INFINITY
            for j in range(L):
                v = trans[i, j] + emit[t, j] + V[t, j]
                if v > m:
                    m = v
                    best = j
            p[t] = best
    return path


def nll_grad(const double[:, ::1] state, const double[:, ::1] trans,
             const double[::1] bos, const double[::1] eos,
             const cnp.int32_t[::1] feat_ids, const cnp.int64_t[::1] tok_off,
             const cnp.int64_t[::1] seq_off, const cnp.int32_t[::1] labels,
             double[:, ::1] g_state, double[:, ::1] g_trans,
             double[::1] g_bos, double[::1] g_eos):
    """Sum over sequences of ``log Z - gold score``; adds expected minus
    empirical counts into the ``g_*`` arrays."""
    cdef Py_ssize_t L = trans.shape[0]
    cdef Py_ssize_t S = seq_off.shape[0] - 1
    cdef Py_ssize_t max_t = 1, s, t, t0, T, i, j, k, f, y, yp
    for s in range(S):
        if seq_off[s + 1] - seq_off[s] > max_t:
            max_t = seq_off[s + 1] - seq_off[s]
    emit_a = np.empty((max_t, L), dtype=np.float64)
    alpha_a = np.empty((max_t, L), dtype=np.float64)
    beta_a = np.empty((max_t, L), dtype=np.float64)
    buf_a = np.empty(L, dtype=np.float64)
    cdef double[:, ::1] emit = emit_a
    cdef double[:, ::1] alpha = alpha_a
    cdef double[:, ::1] beta = beta_a
    cdef double[::1] buf = buf_a
    cdef double total = 0.0, logz, gold, p
    with nogil:
        for s in range(S):
            t0 = seq_off[s]
            T = seq_off[s + 1] - t0
            if T == 0:
                continue
            _emit(state, feat_ids, tok_off, t0, T, emit)
            logz = _forward(emit, trans, bos, eos, T, alpha, &buf[0])
            _backward(emit, trans, bos, eos, T, beta, &buf[0])

            y = labels[t0]
            gold = bos[y] + emit[0, y]
            for t in range(1, T):
                yp = y
                y = labels[t0 + t]
                gold = gold + trans[yp, y] + emit[t, y]
            gold = gold + eos[y]
            total += logz - gold

            for t in range(T):
                for y in range(L):
                    p = exp(alpha[t, y] + beta[t, y] - logz)
                    buf[y] = p
                    if t == 0:
                        g_bos[y] += p
                    if t == T - 1:
                        g_eos[y] += p
                y = labels[t0 + t]
                for k in range(tok_off[t0 + t], tok_off[t0 + t + 1]):
                    f = feat_ids[k]
                    for j in range(L):
                        g_state[f, j] += buf[j]
                    g_state[f, y] -= 1.0
                if t > 0:
                    for i in range(L):
                        for j in range(L):
                            g_trans[i, j] += exp(alpha[t - 1, i] + trans[i, j] + emit[t, j]
                                                 + beta[t, j] - logz)
                    g_trans[labels[t0 + t - 1], y] -= 1.0
            g_bos[labels[t0]] -= 1.0
            g_eos[labels[t0 + T - 1]] -= 1.0
    return total
