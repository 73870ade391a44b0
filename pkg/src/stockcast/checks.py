"""The gradient-check suite behind the `gradcheck` command and tests.

Every differentiable kernel plus all four architectures at surrogate
widths is compared against central finite differences.  Purely linear
paths must agree to 1e-6; relu/pool/gated paths to 1e-4, with kink
resampling (a finite-difference step that crosses a relu kink or a pool
argmax flip is a property of the probe point, not a wrong gradient).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import build_surrogate
from .nn import autodiff as ad
from .nn.autodiff import Tensor
from .nn.gradcheck import grad_check_resampling
from .nn.layers import (
    conv1d,
    dense,
    gru_cell,
    gru_param_shapes,
    lstm_cell,
    lstm_param_shapes,
    maxpool1d,
    mse,
)
from .nn.params import ParamSet

LINEAR_TOL = 1e-6
NONLINEAR_TOL = 1e-4


@dataclass
class CheckResult:
    name: str
    worst_error: float
    tol: float
    resamples: int = 0

    @property
    def passed(self) -> bool:
        return self.worst_error < self.tol


def _rng(seed):
    return np.random.default_rng(seed)


def _check_dense(seed):
    def make(attempt):
        rng = _rng((seed, attempt))
        params = ParamSet({
            "W": Tensor(rng.standard_normal((4, 3))),
            "b": Tensor(rng.standard_normal(4)),
            "x": Tensor(rng.standard_normal(3)),
        })

        def f(p):
            return ad.tsum(dense(p["x"], p["W"], p["b"]) ** 2)

        return f, params

    return make


def _check_conv(seed):
    def make(attempt):
        rng = _rng((seed, attempt))
        params = ParamSet({
            "K": Tensor(rng.standard_normal((2, 4))),
            "b": Tensor(rng.standard_normal(2)),
            "x": Tensor(rng.standard_normal(9)),
        })

        def f(p):
            return ad.tsum(conv1d(p["x"], p["K"], p["b"]) ** 2)

        return f, params

    return make


def _check_maxpool(seed):
    def make(attempt):
        rng = _rng((seed, attempt))
        # well-separated entries keep the argmax away from ties
        x = rng.permutation(np.linspace(-3.0, 3.0, 12)) + 0.01 * rng.standard_normal(12)
        params = ParamSet({"x": Tensor(x)})

        def f(p):
            return ad.tsum(maxpool1d(p["x"], 3) ** 2)

        return f, params

    return make


def _check_gru(seed, steps=3, n_in=2, n_hid=4):
    def make(attempt):
        rng = _rng((seed, attempt))
        tensors = {name: Tensor(0.5 * rng.standard_normal(shape))
                   for name, shape in gru_param_shapes(n_in, n_hid).items()}
        xs = rng.standard_normal((steps, n_in))
        params = ParamSet(tensors)

        def f(p):
            h = Tensor(np.zeros(n_hid))
            for t in range(steps):
                h = gru_cell(Tensor(xs[t]), h, p)
            return ad.tsum(h ** 2)

        return f, params

    return make


def _check_lstm(seed, steps=3, n_in=2, n_hid=4):
    def make(attempt):
        rng = _rng((seed, attempt))
        tensors = {name: Tensor(0.5 * rng.standard_normal(shape))
                   for name, shape in lstm_param_shapes(n_in, n_hid).items()}
        xs = rng.standard_normal((steps, n_in))
        params = ParamSet(tensors)

        def f(p):
            h = Tensor(np.zeros(n_hid))
            c = Tensor(np.zeros(n_hid))
            for t in range(steps):
                h, c = lstm_cell(Tensor(xs[t]), h, c, p)
            return ad.tsum(h ** 2)

        return f, params

    return make


def _check_mse(seed):
    def make(attempt):
        rng = _rng((seed, attempt))
        target = rng.standard_normal(6)
        params = ParamSet({"pred": Tensor(rng.standard_normal(6))})

        def f(p):
            return mse(p["pred"], Tensor(target))

        return f, params

    return make


def _check_architecture(kind, seed, w=7, h=2):
    def make(attempt):
        rng = _rng((seed, attempt))
        model = build_surrogate(kind, w, h, seed=seed + attempt)
        x = rng.uniform(0.1, 0.9, size=(2, w))
        y = rng.uniform(0.1, 0.9, size=(2, h))

        def f(p):
            return mse(model.forward(Tensor(x)), Tensor(y))

        return f, model.params

    return make


def run_gradcheck_suite(seed: int = 7, eps: float = 1e-5) -> list[CheckResult]:
    """Worst finite-difference error per layer kind and architecture."""
    checks = [
        ("dense", _check_dense(seed), LINEAR_TOL),
        ("conv1d", _check_conv(seed), LINEAR_TOL),
        ("maxpool", _check_maxpool(seed), NONLINEAR_TOL),
        ("gru_cell", _check_gru(seed), NONLINEAR_TOL),
        ("lstm_cell", _check_lstm(seed), NONLINEAR_TOL),
        ("mse", _check_mse(seed), LINEAR_TOL),
        ("arch_MLP", _check_architecture("MLP", seed), NONLINEAR_TOL),
        ("arch_CNN", _check_architecture("CNN", seed), NONLINEAR_TOL),
        ("arch_GRU", _check_architecture("GRU", seed), NONLINEAR_TOL),
        ("arch_LSTM", _check_architecture("LSTM", seed), NONLINEAR_TOL),
    ]
    results = []
    for name, make, tol in checks:
        err, resamples = grad_check_resampling(make, n_tries=3, eps=eps, tol=tol)
        results.append(CheckResult(name=name, worst_error=err, tol=tol,
                                   resamples=resamples))
    return results
