"""Supervised sample construction and the three forecast procedures.

Single-step: predict the value right after a length-w window.  Direct
multi-step: one model call maps the window to all h future values.
Iterative multi-step: a single-output model is applied recursively,
feeding its own predictions back in; once more than w steps have been
predicted the input consists of predictions only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ArityMismatch, WindowTooLarge


@dataclass(frozen=True)
class WindowSpec:
    w: int       # backcast window size
    w_test: int  # forecast horizon, 1 for single-step

    def __post_init__(self):
        if self.w < 1 or self.w_test < 1:
            raise ValueError("window size and horizon must be >= 1")


@dataclass(frozen=True)
class Sample:
    input: tuple[float, ...]
    target: tuple[float, ...]


@dataclass(frozen=True)
class ForecastTrace:
    """Predictions from one forecast origin.

    `origin_index` counts the observed points preceding the forecast
    (equivalently: the 0-based index of the first predicted point).
    """

    origin_index: int
    predictions: tuple[float, ...]
    targets: tuple[float, ...] | None = None

    def to_json_dict(self) -> dict:
        d = {"origin": self.origin_index, "predictions": list(self.predictions)}
        if self.targets is not None:
            d["targets"] = list(self.targets)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


class FunctionModel:
    """Wrap a plain function over a window as a forecasting model."""

    def __init__(self, fn, input_arity: int, output_arity: int = 1):
        self._fn = fn
        self.input_arity = input_arity
        self.output_arity = output_arity
        self.n_calls = 0

    def __call__(self, window) -> np.ndarray:
        self.n_calls += 1
        out = np.atleast_1d(np.asarray(self._fn(np.asarray(window, dtype=np.float64)),
                                       dtype=np.float64))
        return out


def _check_arity(model, w: int, h: int):
    if getattr(model, "input_arity", w) != w:
        raise ArityMismatch(f"model input arity {model.input_arity}, window size {w}")
    if getattr(model, "output_arity", h) != h:
        raise ArityMismatch(f"model output arity {model.output_arity}, expected {h}")


def make_single_step_samples(values, w: int) -> list[Sample]:
    """All (length-w window, next value) pairs; exactly n - w of them."""
    values = [float(v) for v in values]
    n = len(values)
    if n <= w:
        raise WindowTooLarge(f"series length {n} <= window {w}")
    return [
        Sample(input=tuple(values[k:k + w]), target=(values[k + w],))
        for k in range(n - w)
    ]


def make_direct_samples(values, w: int, h: int) -> list[Sample]:
    """All (length-w window, next-h block) pairs; exactly n - w - h + 1."""
    values = [float(v) for v in values]
    n = len(values)
    if n < w + h:
        raise WindowTooLarge(f"series length {n} < window {w} + horizon {h}")
    return [
        Sample(input=tuple(values[k:k + w]), target=tuple(values[k + w:k + w + h]))
        for k in range(n - w - h + 1)
    ]


def single_step_forecast(model, window) -> float:
    """One model call on a length-w window, scalar output."""
    window = np.asarray(window, dtype=np.float64)
    _check_arity(model, len(window), 1)
    out = np.atleast_1d(model(window))
    if out.size != 1:
        raise ArityMismatch(f"model returned {out.size} outputs, expected 1")
    return float(out[0])


def iterative_forecast(model, last_window, h: int) -> ForecastTrace:
    """Recursive multi-step forecast with a single-output model.

    Each step feeds the last w values of (observed window + predictions
    so far); after w predictions the input is predictions only.
    """
    window = [float(v) for v in np.asarray(last_window, dtype=np.float64)]
    w = len(window)
    _check_arity(model, w, 1)
    if h < 1:
        raise ValueError("horizon must be >= 1")
    history = list(window)
    predictions = []
    for _ in range(h):
        x = np.asarray(history[-w:], dtype=np.float64)
        out = np.atleast_1d(model(x))
        if out.size != 1:
            raise ArityMismatch(f"iterative forecast needs a single-output model, got {out.size}")
        y = float(out[0])
        predictions.append(y)
        history.append(y)
    return ForecastTrace(origin_index=w, predictions=tuple(predictions))


def direct_forecast(model, window) -> ForecastTrace:
    """One model call yields all h predictions."""
    window = np.asarray(window, dtype=np.float64)
    w = len(window)
    if getattr(model, "input_arity", w) != w:
        raise ArityMismatch(f"model input arity {model.input_arity}, window size {w}")
    out = np.atleast_1d(model(window))
    h = getattr(model, "output_arity", out.size)
    if out.size != h:
        raise ArityMismatch(f"model returned {out.size} outputs, declared {h}")
    return ForecastTrace(origin_index=w, predictions=tuple(float(v) for v in out))


def rolling_test_forecast(model, test_values, w: int, h: int,
                          strategy: str = "direct", origin_stride: int = 1
                          ) -> list[ForecastTrace]:
    """Teacher-forced rolling-origin forecasts over a test series.

    Every origin's input window holds true observed values; predictions
    are never reused across origins.  Targets are attached to each trace.
    """
    if strategy not in ("direct", "iterative"):
        raise ValueError(f"unknown strategy {strategy!r}")
    values = np.asarray(test_values, dtype=np.float64)
    n = len(values)
    if n < w + h:
        raise WindowTooLarge(f"test length {n} < window {w} + horizon {h}")
    traces = []
    for k in range(0, n - w - h + 1, origin_stride):
        window = values[k:k + w]
        if strategy == "direct":
            trace = direct_forecast(model, window)
        else:
            trace = iterative_forecast(model, window, h)
        traces.append(ForecastTrace(
            origin_index=k + w,
            predictions=trace.predictions,
            targets=tuple(float(v) for v in values[k + w:k + w + h]),
        ))
    return traces
