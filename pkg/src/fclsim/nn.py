"""Minimal dense feedforward classifier with exact analytic gradients.

Parameters live in a single flat float64 vector so that averaging across
nodes and quadratic penalties stay plain vector arithmetic. Layout: for
layer sizes ``[n0, ..., nL]``, each layer contributes its ``(n_in, n_out)``
weight matrix (row-major) followed by its bias vector.

All functions are pure; training state is just the vector you pass around.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels_py, backend
from .errors import NumericError, ShapeError

_ACTIVATIONS = {"relu": 0, "tanh": 1}


@dataclass(frozen=True)
class ModelSpec:
    """Architecture of a dense classifier: input dim, hidden dims, class count."""

    layer_sizes: tuple[int, ...]
    activation: str = "relu"

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        object.__setattr__(self, "layer_sizes", sizes)
        if len(sizes) < 2:
            raise ValueError("layer_sizes needs at least input and output dims")
        if any(s <= 0 for s in sizes):
            raise ValueError(f"layer sizes must be positive, got {sizes}")
        if sizes[-1] < 2:
            raise ValueError("output layer must have at least 2 classes")
        if self.activation not in _ACTIVATIONS:
            raise ValueError(
                f"activation must be one of {sorted(_ACTIVATIONS)}, "
                f"got {self.activation!r}"
            )

    @property
    def input_dim(self) -> int:
        return self.layer_sizes[0]

    @property
    def class_count(self) -> int:
        return self.layer_sizes[-1]

    @property
    def param_count(self) -> int:
        return sum(
            n_in * n_out + n_out
            for n_in, n_out in zip(self.layer_sizes, self.layer_sizes[1:])
        )

    def sizes_array(self) -> np.ndarray:
        return np.asarray(self.layer_sizes, dtype=np.int64)

    @property
    def activation_code(self) -> int:
        return _ACTIVATIONS[self.activation]


@dataclass
class Batch:
    """A minibatch: (batch, input_dim) features and integer class labels."""

    inputs: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.inputs = np.ascontiguousarray(self.inputs, dtype=np.float64)
        self.labels = np.ascontiguousarray(self.labels, dtype=np.int64)
        if self.inputs.ndim != 2:
            raise ShapeError(f"inputs must be 2-D, got shape {self.inputs.shape}")
        if self.labels.shape != (self.inputs.shape[0],):
            raise ShapeError(
                f"labels shape {self.labels.shape} does not match "
                f"batch size {self.inputs.shape[0]}"
            )
        if self.inputs.shape[0] < 1:
            raise ShapeError("batch must contain at least one sample")

    def __len__(self) -> int:
        return self.inputs.shape[0]


def init_params(spec: ModelSpec, seed: int) -> np.ndarray:
    """Deterministic init: zero-mean weights scaled by sqrt(2/fan_in), zero biases."""
    rng = np.random.default_rng(seed)
    chunks = []
    for n_in, n_out in zip(spec.layer_sizes, spec.layer_sizes[1:]):
        scale = np.sqrt(2.0 / n_in)
        chunks.append(rng.normal(0.0, scale, n_in * n_out))
        chunks.append(np.zeros(n_out))
    return np.concatenate(chunks)


def unpack_params(params: np.ndarray, spec: ModelSpec):
    """(W, b) views per layer, sharing memory with the flat vector."""
    _check_params(params, spec)
    return _kernels_py._layer_views(params, spec.sizes_array())


def _check_params(params: np.ndarray, spec: ModelSpec) -> None:
    if params.shape != (spec.param_count,):
        raise ShapeError(
            f"expected {spec.param_count} parameters for {spec.layer_sizes}, "
            f"got shape {params.shape}"
        )


def _check_input(x: np.ndarray, spec: ModelSpec) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim == 1:
        if x.shape[0] != spec.input_dim:
            raise ShapeError(
                f"input length {x.shape[0]} != model input dim {spec.input_dim}"
            )
        return x[None, :]
    if x.ndim == 2 and x.shape[1] == spec.input_dim:
        return x
    raise ShapeError(f"input shape {x.shape} incompatible with dim {spec.input_dim}")


def forward(params: np.ndarray, spec: ModelSpec, x: np.ndarray) -> np.ndarray:
    """Logits for a single input vector (length = class count)."""
    _check_params(params, spec)
    batch = _check_input(x, spec)
    out = backend.kernels().forward_logits(
        params, spec.sizes_array(), spec.activation_code, batch
    )
    return out[0] if np.ndim(x) == 1 else out


def batch_logits(params: np.ndarray, spec: ModelSpec, inputs: np.ndarray) -> np.ndarray:
    """Logits for a (batch, input_dim) matrix."""
    _check_params(params, spec)
    inputs = _check_input(np.atleast_2d(inputs), spec)
    return backend.kernels().forward_logits(
        params, spec.sizes_array(), spec.activation_code, inputs
    )


def loss_and_grad(params: np.ndarray, spec: ModelSpec, batch: Batch):
    """Mean softmax cross-entropy over the batch and its analytic gradient."""
    _check_params(params, spec)
    if batch.inputs.shape[1] != spec.input_dim:
        raise ShapeError(
            f"batch dim {batch.inputs.shape[1]} != model input dim {spec.input_dim}"
        )
    if batch.labels.max(initial=0) >= spec.class_count:
        raise ShapeError("label outside the model's class range")
    loss, grad = backend.kernels().ce_loss_grad(
        params, spec.sizes_array(), spec.activation_code, batch.inputs, batch.labels
    )
    if not np.isfinite(loss):
        raise NumericError(f"non-finite loss {loss!r}")
    return loss, grad


def grad_from_dlogits(
    params: np.ndarray, spec: ModelSpec, inputs: np.ndarray, dlogits: np.ndarray
) -> np.ndarray:
    """Backpropagate an arbitrary d(loss)/d(logits) matrix to the parameters."""
    _check_params(params, spec)
    return backend.kernels().dlogits_backward(
        params,
        spec.sizes_array(),
        spec.activation_code,
        np.ascontiguousarray(inputs, dtype=np.float64),
        np.ascontiguousarray(dlogits, dtype=np.float64),
    )


def sgd_step(params: np.ndarray, grad: np.ndarray, lr: float) -> np.ndarray:
    """One plain gradient step: params - lr * grad."""
    if params.shape != grad.shape:
        raise ShapeError(f"params {params.shape} vs grad {grad.shape}")
    return params - lr * grad


def predict(params: np.ndarray, spec: ModelSpec, x: np.ndarray) -> int:
    """Argmax class of the logits; ties go to the lowest class index."""
    return int(np.argmax(forward(params, spec, x)))


def predict_batch(params: np.ndarray, spec: ModelSpec, inputs: np.ndarray) -> np.ndarray:
    """Vector of predicted classes for a (batch, input_dim) matrix."""
    return np.argmax(batch_logits(params, spec, inputs), axis=1)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise stabilized softmax (max subtraction before exponentiation)."""
    logits = np.atleast_2d(logits)
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def finite_diff_grad(
    params: np.ndarray, spec: ModelSpec, batch: Batch, h: float = 1e-5
) -> np.ndarray:
    """Central-difference gradient oracle: (L(w+h e_i) - L(w-h e_i)) / 2h.

    Independent of the analytic backward pass; used to cross-check it.
    """
    if h <= 0:
        raise ValueError("h must be positive")

    def loss_at(w):
        logits = batch_logits(w, spec, batch.inputs)
        logp = logits - logits.max(axis=1, keepdims=True)
        logp = logp - np.log(np.exp(logp).sum(axis=1, keepdims=True))
        return -logp[np.arange(len(batch)), batch.labels].mean()

    grad = np.zeros_like(params)
    for i in range(params.shape[0]):
        bump = np.zeros_like(params)
        bump[i] = h
        grad[i] = (loss_at(params + bump) - loss_at(params - bump)) / (2.0 * h)
    return grad
