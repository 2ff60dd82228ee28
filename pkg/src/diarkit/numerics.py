"""Dense-matrix kernels and elementary layer math shared by the whole library.

Everything operates on float64 numpy arrays. The functions here are pure
and total on finite input; shape errors raise ValueError.

Randomness goes through numpy's PCG64 bit generator, wrapped by
:func:`new_rng`: a given seed yields the same draw stream on every
platform, and child streams can be derived for parallel work without
overlap.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "new_rng",
    "spawn_rng",
    "softmax_rows",
    "layer_norm",
    "linear",
    "relu",
    "sigmoid",
    "median_filter_binary",
    "finite_diff_grad",
]


def new_rng(seed) -> np.random.Generator:
    """Create a seeded PCG64 generator.

    ``seed`` may be an int or a sequence of ints (entropy words). Equal
    seeds give bit-identical streams.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_rng(seed, index: int) -> np.random.Generator:
    """Derive the ``index``-th independent child generator of ``seed``.

    Used to give each mixture / worker its own stream while keeping the
    whole run reproducible from one root seed.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


def softmax_rows(m: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max-subtraction for numerical stability.

    Each output row is nonnegative and sums to 1; safe for rows with
    large-magnitude entries (e.g. all 1000.0).
    """
    m = np.asarray(m, dtype=np.float64)
    shifted = m - m.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def layer_norm(x: np.ndarray, gain: np.ndarray, bias: np.ndarray, eps: float = 1e-5) -> np.ndarray:
    """Normalize the last axis to zero mean / unit variance, then apply an affine map.

    Variance is the biased estimate. ``eps`` keeps constant rows finite:
    a constant input normalizes to zeros, so the output is just ``bias``.
    """
    x = np.asarray(x, dtype=np.float64)
    mu = x.mean(axis=-1, keepdims=True)
    var = np.mean((x - mu) ** 2, axis=-1, keepdims=True)
    xhat = (x - mu) / np.sqrt(var + eps)
    return gain * xhat + bias


def linear(x: np.ndarray, w: np.ndarray, b: np.ndarray | None = None) -> np.ndarray:
    """Affine map ``x @ w + b`` with explicit shape checking.

    x: (T, n_in), w: (n_in, n_out), b: (n_out,) or None for no bias.
    """
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if x.shape[-1] != w.shape[0]:
        raise ValueError(f"inner dimensions do not match: x is {x.shape}, w is {w.shape}")
    out = x @ w
    if b is not None:
        b = np.asarray(b, dtype=np.float64)
        if b.shape != (w.shape[1],):
            raise ValueError(f"bias shape {b.shape} does not match output dim {w.shape[1]}")
        out = out + b
    return out


def relu(m: np.ndarray) -> np.ndarray:
    """Elementwise max(0, x)."""
    return np.maximum(np.asarray(m, dtype=np.float64), 0.0)


def sigmoid(m: np.ndarray) -> np.ndarray:
    """Elementwise logistic function, computed stably for both signs."""
    m = np.asarray(m, dtype=np.float64)
    out = np.empty_like(m)
    pos = m >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-m[pos]))
    em = np.exp(m[~pos])
    out[~pos] = em / (1.0 + em)
    return out


def median_filter_binary(bits: np.ndarray, window: int) -> np.ndarray:
    """Majority vote over a centered odd-length window, per position.

    Edges replicate the first/last value so boundary frames see a full
    window. Length is preserved; empty input returns an empty array.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be odd and >= 1, got {window}")
    bits = np.asarray(bits)
    n = bits.shape[0]
    if n == 0:
        return bits.copy()
    half = window // 2
    padded = np.concatenate([np.repeat(bits[:1], half), bits, np.repeat(bits[-1:], half)])
    windows = np.lib.stride_tricks.sliding_window_view(padded, window)
    counts = windows.sum(axis=-1)
    return (counts * 2 > window).astype(bits.dtype)


def finite_diff_grad(f, x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of a scalar function, one coordinate at a time.

    The independent check used against every analytic gradient in this
    library. Raises if ``f`` returns a non-finite value at any probe.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    x = np.asarray(x, dtype=np.float64)
    grad = np.empty_like(x)
    flat = x.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        fp = f(x)
        flat[i] = orig - h
        fm = f(x)
        flat[i] = orig
        if not (np.isfinite(fp) and np.isfinite(fm)):
            raise FloatingPointError(f"non-finite function value at coordinate {i}")
        gflat[i] = (fp - fm) / (2.0 * h)
    return grad
