"""Keyed, deterministic, invertible transform applied to every input vector.

Training and inference consume only the transformed features ("ciphertext");
raw features never enter the learning pipeline. The transform is a seeded
feature permutation, optionally composed with a per-feature affine map. For
a plain permutation, training a dense net on ciphertext is exactly training
on plaintext with the first-layer weight rows permuted at init, so nothing
is lost (see :func:`permute_first_layer`).

This is obfuscation with a key, not cryptography; no security claim beyond
key-dependence is made or tested.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError

PERMUTE_ONLY = "permute_only"
PERMUTE_AFFINE = "permute_affine"
MODES = (PERMUTE_ONLY, PERMUTE_AFFINE)

SCALE_LOW, SCALE_HIGH = 0.5, 2.0  # keeps the map invertible and well conditioned
OFFSET_LOW, OFFSET_HIGH = -1.0, 1.0


@dataclass(frozen=True)
class CipherKey:
    """Everything needed to encrypt/decrypt; a pure function of (seed, dim)."""

    seed: int
    dim: int
    mode: str
    permutation: np.ndarray  # bijection on 0..dim-1
    scales: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        if sorted(self.permutation.tolist()) != list(range(self.dim)):
            raise ValueError("permutation is not a bijection on 0..dim-1")
        if np.any(self.scales < SCALE_LOW):
            raise ValueError("scales below the invertibility floor")


def derive_key(seed: int, dim: int, mode: str = PERMUTE_AFFINE) -> CipherKey:
    """Derive the full key from a seed: permutation, scales, offsets."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    rng = np.random.default_rng(seed)
    permutation = rng.permutation(dim).astype(np.int64)
    scales = rng.uniform(SCALE_LOW, SCALE_HIGH, dim)
    offsets = rng.uniform(OFFSET_LOW, OFFSET_HIGH, dim)
    return CipherKey(int(seed), int(dim), mode, permutation, scales, offsets)


def _check_dim(key: CipherKey, vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=np.float64)
    if vec.shape[-1] != key.dim:
        raise ShapeError(f"feature length {vec.shape[-1]} != key dim {key.dim}")
    return vec


def encrypt(key: CipherKey, features: np.ndarray) -> np.ndarray:
    """Transform a feature vector (or a (n, dim) matrix, row-wise)."""
    x = _check_dim(key, features)
    out = x[..., key.permutation]
    if key.mode == PERMUTE_AFFINE:
        out = out * key.scales + key.offsets
    return out


def decrypt(key: CipherKey, ciphertext: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`encrypt` up to floating rounding."""
    c = _check_dim(key, ciphertext)
    if key.mode == PERMUTE_AFFINE:
        c = (c - key.offsets) / key.scales
    out = np.empty_like(c)
    out[..., key.permutation] = c
    return out


def permute_first_layer(params: np.ndarray, spec, permutation: np.ndarray) -> np.ndarray:
    """Re-index the first layer's weight rows to consume permuted inputs.

    With W' = W[permutation] the net computes identical logits on encrypted
    (permute_only) inputs as the original net does on plaintext.
    """
    out = params.copy()
    n_in, n_out = spec.layer_sizes[0], spec.layer_sizes[1]
    w = out[: n_in * n_out].reshape(n_in, n_out)
    w[:] = w[np.asarray(permutation, dtype=np.int64)]
    return out


def encrypt_dataset(key: CipherKey, dataset):
    """Dataset with every feature row encrypted; labels unchanged."""
    from .data import Dataset

    return Dataset(encrypt(key, dataset.features), dataset.labels.copy(),
                   dataset.class_count)
