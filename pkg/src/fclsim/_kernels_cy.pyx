# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense-network kernels.

Same contract as ``fclsim._kernels_py`` (see its docstring for the parameter
layout and activation codes). Plain typed loops; at desk scale the per-call
overhead of many small NumPy ops dominates, which is what this removes.
"""

import numpy as np

from libc.math cimport exp, log, tanh

RELU = 0
TANH = 1

cdef enum:
    ACT_RELU = 0


cdef void _dense_forward(double[:, ::1] a, double[::1] params, Py_ssize_t off,
                         Py_ssize_t n_in, Py_ssize_t n_out,
                         double[:, ::1] out, int act, bint is_last) noexcept nogil:
    # out[i, k] = act(sum_j a[i, j] * W[j, k] + b[k]); W row-major at `off`.
    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t bias_off = off + n_in * n_out
    cdef double s
    for i in range(a.shape[0]):
        for k in range(n_out):
            s = params[bias_off + k]
            for j in range(n_in):
                s += a[i, j] * params[off + j * n_out + k]
            if is_last:
                out[i, k] = s
            elif act == ACT_RELU:
                out[i, k] = s if s > 0.0 else 0.0
            else:
                out[i, k] = tanh(s)


cdef list _forward_acts(double[::1] params, long[::1] sizes, int act,
                        double[:, ::1] inputs):
    """Post-activation outputs per layer; last entry holds the logits."""
    cdef Py_ssize_t n_layers = sizes.shape[0] - 1
    cdef Py_ssize_t off = 0, l
    cdef list acts = [np.asarray(inputs)]
    cdef double[:, ::1] cur = inputs
    cdef double[:, ::1] nxt
    for l in range(n_layers):
        out = np.empty((inputs.shape[0], sizes[l + 1]), dtype=np.float64)
        nxt = out
        _dense_forward(cur, params, off, sizes[l], sizes[l + 1], nxt, act,
                       l == n_layers - 1)
        off += sizes[l] * sizes[l + 1] + sizes[l + 1]
        acts.append(out)
        cur = nxt
    return acts


cdef void _backprop(double[::1] params, long[::1] sizes, int act,
                    list acts, double[:, ::1] delta_in, double[::1] grad):
    cdef Py_ssize_t n_layers = sizes.shape[0] - 1
    cdef Py_ssize_t l, i, j, k, off
    cdef Py_ssize_t n = delta_in.shape[0]
    cdef double s
    cdef double[:, ::1] delta = delta_in
    cdef double[:, ::1] prev_delta
    cdef double[:, ::1] a
    # Offsets of each layer's weight block.
    cdef list offsets = []
    off = 0
    for l in range(n_layers):
        offsets.append(off)
        off += sizes[l] * sizes[l + 1] + sizes[l + 1]
    for l in range(n_layers - 1, -1, -1):
        off = offsets[l]
        a = acts[l]
        # Weight and bias gradients.
        for j in range(sizes[l]):
            for k in range(sizes[l + 1]):
                s = 0.0
                for i in range(n):
                    s += a[i, j] * delta[i, k]
                grad[off + j * sizes[l + 1] + k] = s
        for k in range(sizes[l + 1]):
            s = 0.0
            for i in range(n):
                s += delta[i, k]
            grad[off + sizes[l] * sizes[l + 1] + k] = s
        if l == 0:
            break
        # delta_prev = (delta @ W.T) * act'(a)
        prev = np.empty((n, sizes[l]), dtype=np.float64)
        prev_delta = prev
        for i in range(n):
            for j in range(sizes[l]):
                s = 0.0
                for k in range(sizes[l + 1]):
                    s += delta[i, k] * params[off + j * sizes[l + 1] + k]
                if act == ACT_RELU:
                    prev_delta[i, j] = s if a[i, j] > 0.0 else 0.0
                else:
                    prev_delta[i, j] = s * (1.0 - a[i, j] * a[i, j])
        delta = prev_delta


cdef double _softmax_delta(double[:, ::1] logits, long[::1] labels,
                           double[:, ::1] delta, bint scale_by_n) noexcept nogil:
    """Fill delta with softmax(logits) - onehot; return the mean NLL."""
    cdef Py_ssize_t n = logits.shape[0], c = logits.shape[1]
    cdef Py_ssize_t i, k
    cdef double m, z, loss = 0.0, inv
    for i in range(n):
        m = logits[i, 0]
        for k in range(1, c):
            if logits[i, k] > m:
                m = logits[i, k]
        z = 0.0
        for k in range(c):
            z += exp(logits[i, k] - m)
        loss += -(logits[i, labels[i]] - m - log(z))
        inv = 1.0 / z
        for k in range(c):
            delta[i, k] = exp(logits[i, k] - m) * inv
        delta[i, labels[i]] -= 1.0
        if scale_by_n:
            for k in range(c):
                delta[i, k] /= n
    return loss / n


def forward_logits(params, sizes, act, inputs):
    """Batch forward pass; returns (batch, class_count) logits."""
    cdef double[::1] p = np.ascontiguousarray(params, dtype=np.float64)
    cdef long[::1] sz = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef double[:, ::1] x = np.ascontiguousarray(inputs, dtype=np.float64)
    acts = _forward_acts(p, sz, act, x)
    return acts[len(acts) - 1]


def ce_loss_grad(params, sizes, act, inputs, labels):
    """Mean softmax cross-entropy and its exact gradient, fused."""
    cdef double[::1] p = np.ascontiguousarray(params, dtype=np.float64)
    cdef long[::1] sz = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef double[:, ::1] x = np.ascontiguousarray(inputs, dtype=np.float64)
    cdef long[::1] y = np.ascontiguousarray(labels, dtype=np.int64)
    acts = _forward_acts(p, sz, act, x)
    logits = acts[len(acts) - 1]
    delta_arr = np.empty_like(logits)
    cdef double[:, ::1] logits_mv = logits
    cdef double[:, ::1] delta = delta_arr
    cdef double loss = _softmax_delta(logits_mv, y, delta, True)
    grad = np.zeros(p.shape[0], dtype=np.float64)
    cdef double[::1] g = grad
    _backprop(p, sz, act, acts, delta, g)
    return float(loss), grad


def dlogits_backward(params, sizes, act, inputs, dlogits):
    """Gradient of any scalar loss given its logit-space derivative."""
    cdef double[::1] p = np.ascontiguousarray(params, dtype=np.float64)
    cdef long[::1] sz = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef double[:, ::1] x = np.ascontiguousarray(inputs, dtype=np.float64)
    cdef double[:, ::1] d = np.ascontiguousarray(dlogits, dtype=np.float64)
    acts = _forward_acts(p, sz, act, x)
    grad = np.zeros(p.shape[0], dtype=np.float64)
    cdef double[::1] g = grad
    _backprop(p, sz, act, acts, d, g)
    return grad


def fisher_diag(params, sizes, act, inputs, labels):
    """Mean over samples of the squared per-sample NLL gradient."""
    cdef double[::1] p = np.ascontiguousarray(params, dtype=np.float64)
    cdef long[::1] sz = np.ascontiguousarray(sizes, dtype=np.int64)
    cdef double[:, ::1] x = np.ascontiguousarray(inputs, dtype=np.float64)
    cdef long[::1] y = np.ascontiguousarray(labels, dtype=np.int64)
    acts = _forward_acts(p, sz, act, x)
    logits = acts[len(acts) - 1]
    delta_arr = np.empty_like(logits)
    cdef double[:, ::1] logits_mv = logits
    cdef double[:, ::1] delta = delta_arr
    _softmax_delta(logits_mv, y, delta, False)

    cdef Py_ssize_t n_layers = sz.shape[0] - 1
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t l, i, j, k, off
    cdef double s
    fisher = np.zeros(p.shape[0], dtype=np.float64)
    cdef double[::1] f = fisher
    cdef double[:, ::1] a
    cdef double[:, ::1] cur = delta
    cdef double[:, ::1] prev_delta
    cdef list offsets = []
    off = 0
    for l in range(n_layers):
        offsets.append(off)
        off += sz[l] * sz[l + 1] + sz[l + 1]
    for l in range(n_layers - 1, -1, -1):
        off = offsets[l]
        a = acts[l]
        for j in range(sz[l]):
            for k in range(sz[l + 1]):
                s = 0.0
                for i in range(n):
                    s += (a[i, j] * a[i, j]) * (cur[i, k] * cur[i, k])
                f[off + j * sz[l + 1] + k] = s / n
        for k in range(sz[l + 1]):
            s = 0.0
            for i in range(n):
                s += cur[i, k] * cur[i, k]
            f[off + sz[l] * sz[l + 1] + k] = s / n
        if l == 0:
            break
        prev = np.empty((n, sz[l]), dtype=np.float64)
        prev_delta = prev
        for i in range(n):
            for j in range(sz[l]):
                s = 0.0
                for k in range(sz[l + 1]):
                    s += cur[i, k] * p[off + j * sz[l + 1] + k]
                if act == ACT_RELU:
                    prev_delta[i, j] = s if a[i, j] > 0.0 else 0.0
                else:
                    prev_delta[i, j] = s * (1.0 - a[i, j] * a[i, j])
        cur = prev_delta
    return fisher
