"""Finite-difference verification of the reverse-mode gradients."""

from __future__ import annotations

import numpy as np

from ..errors import NonFiniteGradient
from .autodiff import Tensor
from .params import ParamSet

_FLOOR = 1e-8


def grad_check(f, params: ParamSet, eps: float = 1e-5) -> float:
    """Worst relative error between reverse-mode and central differences.

    `f` maps the ParamSet to a scalar Tensor.  Relative error uses the
    denominator max(|analytic|, |numeric|, 1e-8) per coordinate.
    """
    if not 1e-7 <= eps <= 1e-3:
        raise ValueError(f"eps {eps} outside [1e-7, 1e-3]")
    params.zero_grad()
    out = f(params)
    out.backward()
    analytic = {}
    for name, p in params.items():
        g = p.grad if p.grad is not None else np.zeros_like(p.data)
        if not np.all(np.isfinite(g)):
            raise NonFiniteGradient(f"non-finite gradient in {name}")
        analytic[name] = g.copy()

    worst = 0.0
    for name, p in params.items():
        flat = p.data.reshape(-1)
        ga = analytic[name].reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + eps
            hi = float(f(params).data)
            flat[i] = orig - eps
            lo = float(f(params).data)
            flat[i] = orig
            num = (hi - lo) / (2.0 * eps)
            if not np.isfinite(num):
                raise NonFiniteGradient(f"non-finite finite difference in {name}")
            err = abs(ga[i] - num) / max(abs(ga[i]), abs(num), _FLOOR)
            worst = max(worst, err)
    return worst


def grad_check_resampling(make_instance, n_tries: int = 3, eps: float = 1e-5,
                          tol: float = 1e-4) -> tuple[float, int]:
    """Gradient check with kink resampling.

    relu/max-pool make the loss piecewise; a finite-difference step that
    crosses a kink is a property of the probe point, not a wrong gradient.
    `make_instance(attempt)` returns a fresh (f, params) pair; on failure
    the point is resampled up to `n_tries` times.  Returns the best error
    observed and the number of resamples taken.
    """
    best = np.inf
    for attempt in range(n_tries):
        f, params = make_instance(attempt)
        err = grad_check(f, params, eps)
        best = min(best, err)
        if best < tol:
            return best, attempt
    return best, n_tries - 1
