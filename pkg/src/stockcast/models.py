"""Factories for the four forecasting architectures (MLP, CNN, GRU, LSTM).

Each builder takes the input window size w and the output arity h.  The
MLP/CNN keep relu on the output layer (normalized targets live in
[0,1], so clipping negatives is benign); the recurrent models use a
linear output head with relu on the projection between the two stacked
recurrent layers.  All weights draw from a seeded, per-layer-split PRNG
so two builds with the same seed are parameter-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ArityMismatch, WindowTooSmall
from .nn import autodiff as ad
from .nn.autodiff import Tensor
from .nn.layers import (
    dense,
    gru_cell,
    gru_param_shapes,
    lstm_cell,
    lstm_param_shapes,
)
from .nn.params import ParamSet

KINDS = ("MLP", "CNN", "GRU", "LSTM")

MLP_HIDDEN = (16, 16)
CNN_FILTERS = (32, 32)
CNN_POOL = 2
CNN_DENSE = 32
CNN_KERNEL = 3
RNN_HIDDEN = (256, 128)


@dataclass(frozen=True)
class ArchSpec:
    kind: str
    w: int
    h: int
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown architecture {self.kind!r}")

    def build(self, seed: int) -> "Model":
        return build_model(self.kind, self.w, self.h, seed=seed, **self.overrides)


class Model:
    """A differentiable map from a length-w window to h outputs."""

    def __init__(self, kind: str, w: int, h: int, params: ParamSet, forward_fn, meta=None):
        self.kind = kind
        self.w = w
        self.h = h
        self.params = params
        self._forward = forward_fn
        self.meta = dict(meta or {})

    @property
    def input_arity(self) -> int:
        return self.w

    @property
    def output_arity(self) -> int:
        return self.h

    def forward(self, x: Tensor) -> Tensor:
        """x: Tensor [batch, w] -> Tensor [batch, h]."""
        if x.data.ndim != 2 or x.data.shape[1] != self.w:
            raise ArityMismatch(f"forward input {x.data.shape}, expected [batch, {self.w}]")
        return self._forward(x, self.params)

    def __call__(self, window) -> np.ndarray:
        """Numpy-in, numpy-out prediction on a single window."""
        arr = np.asarray(window, dtype=np.float64)
        if arr.ndim == 1:
            if arr.shape[0] != self.w:
                raise ArityMismatch(f"window length {arr.shape[0]}, expected {self.w}")
            out = self.forward(Tensor(arr[None, :]))
            return out.data[0].copy()
        out = self.forward(Tensor(arr))
        return out.data.copy()

    def n_params(self) -> int:
        return self.params.n_scalars()


# --- seeded initialization ---------------------------------------------------

def _layer_rngs(seed: int, n: int):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def _he_uniform(rng, shape, fan_in):
    limit = np.sqrt(6.0 / fan_in)
    return rng.uniform(-limit, limit, size=shape)


def _xavier_uniform(rng, shape, fan_in, fan_out):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def _init_gated(rng, shapes: dict[str, tuple]) -> dict[str, Tensor]:
    out = {}
    for name, shape in shapes.items():
        if name.startswith("b"):
            out[name] = Tensor(np.zeros(shape))
        else:
            out[name] = Tensor(_xavier_uniform(rng, shape, shape[1], shape[0]))
    return out


# --- MLP ----------------------------------------------------------------------

def build_mlp(w: int, h: int, seed: int = 0, hidden=MLP_HIDDEN) -> Model:
    """dense(w->16) relu, dense(16->16) relu, dense(16->h) relu."""
    sizes = [w, *hidden, h]
    n_layers = len(sizes) - 1
    rngs = _layer_rngs(seed, n_layers)
    tensors = {}
    for i, (n_in, n_out) in enumerate(zip(sizes, sizes[1:])):
        # the relu head starts near mid-range (small weights, bias 0.5):
        # a head that is negative for every sample gets no gradient and
        # never recovers
        head = i == n_layers - 1
        w_scale = 0.1 if head else 1.0
        tensors[f"l{i}.W"] = Tensor(w_scale * _he_uniform(rngs[i], (n_out, n_in), n_in))
        tensors[f"l{i}.b"] = Tensor(np.full(n_out, 0.5 if head else 0.0))

    def forward(x, params):
        out = x
        for i in range(n_layers):
            out = ad.relu(dense(out, params[f"l{i}.W"], params[f"l{i}.b"]))
        return out

    return Model("MLP", w, h, ParamSet(tensors), forward, meta={"hidden": tuple(hidden)})


# --- CNN ----------------------------------------------------------------------

def _cnn_lengths(w: int, kernel: int, pool: int) -> tuple[int, int, int]:
    l1 = w - kernel + 1
    l2 = l1 - kernel + 1
    lp = l2 // pool if l2 > 0 else 0
    return l1, l2, lp


def build_cnn(w: int, h: int, seed: int = 0, filters=CNN_FILTERS, pool: int = CNN_POOL,
              dense_size: int = CNN_DENSE, kernel_size: int = CNN_KERNEL,
              auto_kernel: bool = True) -> Model:
    """conv(32) relu, conv(32) relu, maxpool(2), dense(->32) relu, dense(32->h) relu.

    With `auto_kernel` (the default, needed for the small single-step
    windows) the kernel shrinks until both conv layers and the pool
    still produce a non-empty output; without it a too-small window
    raises WindowTooSmall.
    """
    kernel = kernel_size
    if auto_kernel:
        while kernel > 1 and _cnn_lengths(w, kernel, pool)[2] < 1:
            kernel -= 1
    l1, l2, lp = _cnn_lengths(w, kernel, pool)
    if lp < 1:
        raise WindowTooSmall(
            f"window {w} too small for kernel {kernel} + pool {pool} "
            f"(conv lengths {l1}, {l2})"
        )
    f1, f2 = filters
    flat = f2 * lp
    rngs = _layer_rngs(seed, 4)
    tensors = {
        "conv0.K": Tensor(_he_uniform(rngs[0], (f1, 1, kernel), 1 * kernel)),
        "conv0.b": Tensor(np.zeros(f1)),
        "conv1.K": Tensor(_he_uniform(rngs[1], (f2, f1, kernel), f1 * kernel)),
        "conv1.b": Tensor(np.zeros(f2)),
        "fc0.W": Tensor(_he_uniform(rngs[2], (dense_size, flat), flat)),
        "fc0.b": Tensor(np.zeros(dense_size)),
        # relu output head starts near mid-range, same rationale as the MLP
        "fc1.W": Tensor(0.1 * _he_uniform(rngs[3], (h, dense_size), dense_size)),
        "fc1.b": Tensor(np.full(h, 0.5)),
    }

    def forward(x, params):
        b = x.data.shape[0]
        out = ad.reshape(x, (b, 1, x.data.shape[1]))
        out = ad.relu(ad.conv1d_channels(out, params["conv0.K"], params["conv0.b"]))
        out = ad.relu(ad.conv1d_channels(out, params["conv1.K"], params["conv1.b"]))
        out = ad.maxpool1d_op(out, pool)
        out = ad.reshape(out, (b, flat))
        out = ad.relu(dense(out, params["fc0.W"], params["fc0.b"]))
        return ad.relu(dense(out, params["fc1.W"], params["fc1.b"]))

    meta = {"kernel": kernel, "pool": pool, "filters": tuple(filters),
            "flat": flat, "conv_lengths": (l1, l2, lp)}
    return Model("CNN", w, h, ParamSet(tensors), forward, meta=meta)


# --- recurrent ----------------------------------------------------------------

def _build_recurrent(kind: str, w: int, h: int, seed: int, hidden) -> Model:
    shapes_fn = gru_param_shapes if kind == "GRU" else lstm_param_shapes
    cell = gru_cell if kind == "GRU" else lstm_cell
    n1, n2 = hidden
    rngs = _layer_rngs(seed, 3)
    tensors = {}
    for name, t in _init_gated(rngs[0], shapes_fn(1, n1)).items():
        tensors[f"r0.{name}"] = t
    for name, t in _init_gated(rngs[1], shapes_fn(n1, n2)).items():
        tensors[f"r1.{name}"] = t
    # linear output head
    tensors["out.W"] = Tensor(_xavier_uniform(rngs[2], (h, n2), n2, h))
    tensors["out.b"] = Tensor(np.zeros(h))

    def forward(x, params):
        b = x.data.shape[0]
        p0 = {k.split(".", 1)[1]: v for k, v in params.items() if k.startswith("r0.")}
        p1 = {k.split(".", 1)[1]: v for k, v in params.items() if k.startswith("r1.")}
        h1 = Tensor(np.zeros((b, n1)))
        h2 = Tensor(np.zeros((b, n2)))
        if kind == "LSTM":
            c1 = Tensor(np.zeros((b, n1)))
            c2 = Tensor(np.zeros((b, n2)))
        for t in range(x.data.shape[1]):
            x_t = x[:, t:t + 1]
            if kind == "GRU":
                h1 = gru_cell(x_t, h1, p0)
                h2 = gru_cell(ad.relu(h1), h2, p1)
            else:
                h1, c1 = lstm_cell(x_t, h1, c1, p0)
                h2, c2 = lstm_cell(ad.relu(h1), h2, c2, p1)
        return dense(h2, params["out.W"], params["out.b"])

    return Model(kind, w, h, ParamSet(tensors), forward, meta={"hidden": tuple(hidden)})


def build_gru(w: int, h: int, seed: int = 0, hidden=RNN_HIDDEN) -> Model:
    """Stacked GRU (256, 128) with relu inter-layer projection, linear head."""
    return _build_recurrent("GRU", w, h, seed, hidden)


def build_lstm(w: int, h: int, seed: int = 0, hidden=RNN_HIDDEN) -> Model:
    """Stacked LSTM (256, 128) with relu inter-layer projection, linear head."""
    return _build_recurrent("LSTM", w, h, seed, hidden)


def build_model(kind: str, w: int, h: int, seed: int = 0, **overrides) -> Model:
    builders = {"MLP": build_mlp, "CNN": build_cnn, "GRU": build_gru, "LSTM": build_lstm}
    if kind not in builders:
        raise ValueError(f"unknown architecture {kind!r}")
    return builders[kind](w, h, seed=seed, **overrides)


# small widths for finite-difference checks; layer math is width-independent
SURROGATE_OVERRIDES = {
    "MLP": {"hidden": (6, 5)},
    "CNN": {"filters": (3, 3), "dense_size": 4},
    "GRU": {"hidden": (6, 5)},
    "LSTM": {"hidden": (6, 5)},
}


def build_surrogate(kind: str, w: int, h: int, seed: int = 0) -> Model:
    return build_model(kind, w, h, seed=seed, **SURROGATE_OVERRIDES[kind])
