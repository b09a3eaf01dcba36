"""NumPy implementation of the dense-network kernels.

The compiled extension (``fclsim._kernels_cy``) exposes the exact same four
functions; :mod:`fclsim.backend` selects one of the two at import time.

Parameter layout (shared contract): for layer sizes ``[n0, n1, ..., nL]`` the
flat vector holds, layer by layer, the ``(n_in, n_out)`` weight matrix in
row-major order followed by the bias vector of length ``n_out``.

Activation codes: 0 = relu, 1 = tanh. The relu derivative at exactly 0 is
taken as 0 in both backends so they agree everywhere.
"""

from __future__ import annotations

import numpy as np

RELU = 0
TANH = 1


def _layer_views(flat: np.ndarray, sizes: np.ndarray):
    """Split a flat parameter (or gradient) vector into (W, b) views."""
    views = []
    off = 0
    for i in range(len(sizes) - 1):
        n_in, n_out = int(sizes[i]), int(sizes[i + 1])
        w = flat[off:off + n_in * n_out].reshape(n_in, n_out)
        off += n_in * n_out
        b = flat[off:off + n_out]
        off += n_out
        views.append((w, b))
    return views


def _activate(z: np.ndarray, act: int) -> np.ndarray:
    if act == RELU:
        return np.maximum(z, 0.0)
    return np.tanh(z)


def _act_deriv(a: np.ndarray, act: int) -> np.ndarray:
    # Derivative expressed through the post-activation value.
    if act == RELU:
        return (a > 0.0).astype(np.float64)
    return 1.0 - a * a


def _forward_cached(params, sizes, act, inputs):
    layers = _layer_views(params, sizes)
    acts = [inputs]
    a = inputs
    for w, b in layers[:-1]:
        a = _activate(a @ w + b, act)
        acts.append(a)
    w, b = layers[-1]
    return layers, acts, a @ w + b


def _log_softmax(logits):
    shifted = logits - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def _backprop(layers, sizes, acts, act, delta, grad):
    """Accumulate layer gradients into ``grad`` given output-layer delta."""
    gviews = _layer_views(grad, sizes)
    for idx in range(len(layers) - 1, -1, -1):
        gw, gb = gviews[idx]
        gw[:] = acts[idx].T @ delta
        gb[:] = delta.sum(axis=0)
        if idx:
            w, _ = layers[idx]
            delta = (delta @ w.T) * _act_deriv(acts[idx], act)


def forward_logits(params, sizes, act, inputs):
    """Batch forward pass; returns (batch, class_count) logits."""
    _, _, logits = _forward_cached(params, sizes, act, inputs)
    return logits


def ce_loss_grad(params, sizes, act, inputs, labels):
    """Mean softmax cross-entropy and its exact gradient, fused."""
    layers, acts, logits = _forward_cached(params, sizes, act, inputs)
    n = inputs.shape[0]
    logp = _log_softmax(logits)
    loss = -logp[np.arange(n), labels].mean()
    delta = np.exp(logp)
    delta[np.arange(n), labels] -= 1.0
    delta /= n
    grad = np.zeros_like(params)
    _backprop(layers, sizes, acts, act, delta, grad)
    return float(loss), grad


def dlogits_backward(params, sizes, act, inputs, dlogits):
    """Gradient of any scalar loss given its logit-space derivative."""
    layers, acts, _ = _forward_cached(params, sizes, act, inputs)
    grad = np.zeros_like(params)
    _backprop(layers, sizes, acts, act, dlogits, grad)
    return grad


def fisher_diag(params, sizes, act, inputs, labels):
    """Mean over samples of the squared per-sample NLL gradient.

    Uses the factorization grad_W[i] = a[i] (outer) delta[i], so the summed
    square is (a**2).T @ (delta**2) without materializing per-sample grads.
    """
    layers, acts, logits = _forward_cached(params, sizes, act, inputs)
    n = inputs.shape[0]
    delta = np.exp(_log_softmax(logits))
    delta[np.arange(n), labels] -= 1.0
    fisher = np.zeros_like(params)
    fviews = _layer_views(fisher, sizes)
    for idx in range(len(layers) - 1, -1, -1):
        fw, fb = fviews[idx]
        fw[:] = (acts[idx] ** 2).T @ (delta ** 2)
        fb[:] = (delta ** 2).sum(axis=0)
        if idx:
            w, _ = layers[idx]
            delta = (delta @ w.T) * _act_deriv(acts[idx], act)
    fisher /= n
    return fisher
