"""Minimal reverse-mode autodiff over numpy arrays.

Only the operations the forecasting layers need are differentiable:
elementwise arithmetic, matmul, slicing, reshape, concat, the sigmoid /
tanh / relu activations, reductions, a valid-mode 1-D convolution and a
non-overlapping max-pool.  Everything is float64 so finite-difference
checks are meaningful.
"""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatch


class Tensor:
    """A numpy array plus the closure that routes gradients to its parents."""

    __slots__ = ("data", "grad", "_parents", "_backward")

    def __init__(self, data, parents=(), backward=None):
        self.data = np.asarray(data, dtype=np.float64)
        self.grad = None
        self._parents = parents
        self._backward = backward

    @property
    def shape(self):
        return self.data.shape

    def __repr__(self):
        return f"Tensor(shape={self.data.shape})"

    def zero_grad(self):
        self.grad = None

    def backward(self):
        if self.data.size != 1:
            raise ShapeMismatch("backward() requires a scalar output")
        topo = []
        seen = set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    # operator sugar
    def __add__(self, other):
        return add(self, _as_tensor(other))

    def __radd__(self, other):
        return add(_as_tensor(other), self)

    def __sub__(self, other):
        return add(self, neg(_as_tensor(other)))

    def __rsub__(self, other):
        return add(_as_tensor(other), neg(self))

    def __neg__(self):
        return neg(self)

    def __mul__(self, other):
        return mul(self, _as_tensor(other))

    def __rmul__(self, other):
        return mul(_as_tensor(other), self)

    def __matmul__(self, other):
        return matmul(self, _as_tensor(other))

    def __pow__(self, k):
        return power(self, k)

    def __getitem__(self, key):
        return take(self, key)


def _as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


def _accum(t: Tensor, g: np.ndarray):
    if t.grad is None:
        t.grad = np.zeros_like(t.data)
    t.grad += g


def _unbroadcast(g: np.ndarray, shape) -> np.ndarray:
    """Sum a broadcast gradient back down to `shape`."""
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, n in enumerate(shape):
        if n == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g.reshape(shape)


# --- elementwise ------------------------------------------------------------

def add(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data + b.data

    def backward(g):
        _accum(a, _unbroadcast(g, a.data.shape))
        _accum(b, _unbroadcast(g, b.data.shape))

    return Tensor(out_data, (a, b), backward)


def neg(a: Tensor) -> Tensor:
    def backward(g):
        _accum(a, -g)

    return Tensor(-a.data, (a,), backward)


def mul(a: Tensor, b: Tensor) -> Tensor:
    out_data = a.data * b.data

    def backward(g):
        _accum(a, _unbroadcast(g * b.data, a.data.shape))
        _accum(b, _unbroadcast(g * a.data, b.data.shape))

    return Tensor(out_data, (a, b), backward)


def power(a: Tensor, k) -> Tensor:
    def backward(g):
        _accum(a, g * k * a.data ** (k - 1))

    return Tensor(a.data ** k, (a,), backward)


def sigmoid(a: Tensor) -> Tensor:
    s = 1.0 / (1.0 + np.exp(-a.data))

    def backward(g):
        _accum(a, g * s * (1.0 - s))

    return Tensor(s, (a,), backward)


def tanh(a: Tensor) -> Tensor:
    t = np.tanh(a.data)

    def backward(g):
        _accum(a, g * (1.0 - t * t))

    return Tensor(t, (a,), backward)


def relu(a: Tensor) -> Tensor:
    # subgradient at 0 is 0
    mask = a.data > 0.0

    def backward(g):
        _accum(a, g * mask)

    return Tensor(a.data * mask, (a,), backward)


# --- linear algebra ---------------------------------------------------------

def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim not in (1, 2) or b.data.ndim != 2:
        raise ShapeMismatch(f"matmul on shapes {a.data.shape} @ {b.data.shape}")
    if a.data.shape[-1] != b.data.shape[0]:
        raise ShapeMismatch(f"matmul on shapes {a.data.shape} @ {b.data.shape}")
    out_data = a.data @ b.data

    def backward(g):
        if a.data.ndim == 1:
            _accum(a, g @ b.data.T)
            _accum(b, np.outer(a.data, g))
        else:
            _accum(a, g @ b.data.T)
            _accum(b, a.data.T @ g)

    return Tensor(out_data, (a, b), backward)


def transpose(a: Tensor) -> Tensor:
    def backward(g):
        _accum(a, g.T)

    return Tensor(a.data.T, (a,), backward)


# --- shape plumbing ---------------------------------------------------------

def reshape(a: Tensor, shape) -> Tensor:
    def backward(g):
        _accum(a, g.reshape(a.data.shape))

    return Tensor(a.data.reshape(shape), (a,), backward)


def take(a: Tensor, key) -> Tensor:
    def backward(g):
        full = np.zeros_like(a.data)
        full[key] = g
        _accum(a, full)

    return Tensor(a.data[key], (a,), backward)


def concat(tensors, axis=0) -> Tensor:
    tensors = list(tensors)
    out_data = np.concatenate([t.data for t in tensors], axis=axis)
    sizes = [t.data.shape[axis] for t in tensors]
    splits = np.cumsum(sizes)[:-1]

    def backward(g):
        for t, piece in zip(tensors, np.split(g, splits, axis=axis)):
            _accum(t, piece)

    return Tensor(out_data, tuple(tensors), backward)


# --- reductions -------------------------------------------------------------

def tsum(a: Tensor) -> Tensor:
    def backward(g):
        _accum(a, np.full_like(a.data, float(g)))

    return Tensor(a.data.sum(), (a,), backward)


def tmean(a: Tensor) -> Tensor:
    n = a.data.size

    def backward(g):
        _accum(a, np.full_like(a.data, float(g) / n))

    return Tensor(a.data.mean(), (a,), backward)


# --- convolution and pooling ------------------------------------------------

def conv1d_channels(x: Tensor, kernels: Tensor, bias: Tensor) -> Tensor:
    """Valid-mode stride-1 convolution.

    x: [batch, in_ch, length]; kernels: [filters, in_ch, k]; bias: [filters].
    Returns [batch, filters, length - k + 1].
    """
    if x.data.ndim != 3 or kernels.data.ndim != 3:
        raise ShapeMismatch("conv1d expects [B,C,L] input and [F,C,k] kernels")
    B, C, L = x.data.shape
    F, Ck, k = kernels.data.shape
    if Ck != C or bias.data.shape != (F,):
        raise ShapeMismatch("conv1d kernel/bias shapes disagree with input")
    if L < k:
        raise ShapeMismatch(f"conv1d input length {L} shorter than kernel {k}")
    windows = np.lib.stride_tricks.sliding_window_view(x.data, k, axis=2)
    out_data = np.einsum("bclk,fck->bfl", windows, kernels.data) + bias.data[None, :, None]
    Lo = L - k + 1

    def backward(g):
        _accum(kernels, np.einsum("bfl,bclk->fck", g, windows))
        _accum(bias, g.sum(axis=(0, 2)))
        dx = np.zeros_like(x.data)
        for d in range(k):
            dx[:, :, d:d + Lo] += np.einsum("bfl,fc->bcl", g, kernels.data[:, :, d])
        _accum(x, dx)

    return Tensor(out_data, (x, kernels, bias), backward)


def maxpool1d_op(x: Tensor, pool: int) -> Tensor:
    """Non-overlapping max-pool over the last axis; trailing remainder dropped.

    Ties break to the first maximal index.
    """
    if pool < 1:
        raise ShapeMismatch("pool size must be >= 1")
    L = x.data.shape[-1]
    m = L // pool
    lead = x.data.shape[:-1]
    trimmed = x.data[..., :m * pool].reshape(*lead, m, pool)
    idx = trimmed.argmax(axis=-1)
    out_data = np.take_along_axis(trimmed, idx[..., None], axis=-1)[..., 0]

    def backward(g):
        dtrim = np.zeros_like(trimmed)
        np.put_along_axis(dtrim, idx[..., None], g[..., None], axis=-1)
        dx = np.zeros_like(x.data)
        dx[..., :m * pool] = dtrim.reshape(*lead, m * pool)
        _accum(x, dx)

    return Tensor(out_data, (x,), backward)
