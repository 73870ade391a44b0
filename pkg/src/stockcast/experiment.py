"""Seeded training loop and grid execution.

Per (stock, model, w, h) cell the protocol is: five independently
seeded train/test runs, each reporting the test MSE in normalized
space; the cell aggregates to a mean (+/- sample std) loss interval.
Run seeds derive from the master seed as master + i so any single run
is re-executable in isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import NonFiniteLoss, TooFewRuns
from .models import ArchSpec
from .nn.autodiff import Tensor
from .nn.layers import mse as mse_loss
from .nn.optim import Adam
from .windowing import ForecastTrace, Sample, rolling_test_forecast


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 100
    batch_size: int = 32
    lr: float = 1e-3
    seed: int = 0
    shuffle: bool = True
    origin_stride: int = 1
    scaler_scope: str = "train"

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.scaler_scope not in ("train", "full"):
            raise ValueError(f"scaler_scope {self.scaler_scope!r} not in (train, full)")


@dataclass
class RunResult:
    seed: int
    train_mse: float
    test_mse: float
    loss_history: list[float]
    traces: list[ForecastTrace]


@dataclass(frozen=True)
class LossInterval:
    mean: float
    std: float
    n_runs: int


@dataclass
class CellResult:
    stock: str
    model: str
    w: int
    h: int
    strategy: str
    runs: list[RunResult] = field(default_factory=list)
    failed_runs: int = 0

    @property
    def interval(self) -> LossInterval:
        errors = [r.test_mse for r in self.runs]
        if len(errors) < 2:
            raise TooFewRuns(f"cell has {len(errors)} successful runs")
        return LossInterval(
            mean=float(np.mean(errors)),
            std=float(np.std(errors, ddof=1)),
            n_runs=len(errors),
        )


def train(model, samples: list[Sample], cfg: TrainConfig) -> list[float]:
    """Mini-batch Adam on MSE; returns the per-epoch mean batch loss.

    Mutates the model's parameters in place.  Identical (model, cfg)
    reproduce bit-identical histories on one platform.
    """
    if not samples:
        raise ValueError("no training samples")
    X = np.array([s.input for s in samples], dtype=np.float64)
    Y = np.array([s.target for s in samples], dtype=np.float64)
    n = X.shape[0]
    rng = np.random.default_rng(cfg.seed)
    opt = Adam(model.params, lr=cfg.lr)
    history = []
    for _ in range(cfg.epochs):
        order = rng.permutation(n) if cfg.shuffle else np.arange(n)
        epoch_loss = 0.0
        n_batches = 0
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            model.params.zero_grad()
            pred = model.forward(Tensor(X[idx]))
            loss = mse_loss(pred, Tensor(Y[idx]))
            value = float(loss.data)
            if not math.isfinite(value):
                raise NonFiniteLoss(
                    f"{model.kind} diverged at epoch {len(history)}, batch {n_batches} "
                    f"(lr={cfg.lr}, seed={cfg.seed})"
                )
            loss.backward()
            opt.step()
            epoch_loss += value
            n_batches += 1
        history.append(epoch_loss / n_batches)
    return history


def evaluate_run(model, test_values, w: int, h: int, strategy: str,
                 origin_stride: int = 1) -> tuple[float, list[ForecastTrace]]:
    """Rolling-origin test MSE (normalized space) plus the traces."""
    traces = rolling_test_forecast(model, test_values, w, h,
                                   strategy=strategy, origin_stride=origin_stride)
    preds = np.array([t.predictions for t in traces], dtype=np.float64)
    targets = np.array([t.targets for t in traces], dtype=np.float64)
    return float(np.mean((preds - targets) ** 2)), traces


def run_cell(stock: str, train_values, test_values, arch: ArchSpec,
             cfg: TrainConfig, n_runs: int, strategy: str) -> CellResult:
    """Execute n_runs seeded train/evaluate runs on pre-normalized values."""
    from .windowing import make_direct_samples, make_single_step_samples

    if arch.h == 1 and strategy != "iterative":
        samples = make_single_step_samples(train_values, arch.w)
    else:
        samples = (make_single_step_samples(train_values, arch.w)
                   if strategy == "iterative"
                   else make_direct_samples(train_values, arch.w, arch.h))
    result = CellResult(stock=stock, model=arch.kind, w=arch.w, h=arch.h,
                        strategy=strategy)
    for i in range(n_runs):
        run_seed = cfg.seed + i
        run_cfg = replace(cfg, seed=run_seed)
        model = arch.build(seed=run_seed) if strategy == "direct" or arch.h == 1 \
            else ArchSpec(arch.kind, arch.w, 1, arch.overrides).build(seed=run_seed)
        try:
            history = train(model, samples, run_cfg)
            test_mse, traces = evaluate_run(model, test_values, arch.w, arch.h,
                                            strategy, cfg.origin_stride)
        except NonFiniteLoss:
            result.failed_runs += 1
            continue
        result.runs.append(RunResult(
            seed=run_seed,
            train_mse=history[-1],
            test_mse=test_mse,
            loss_history=history,
            traces=traces,
        ))
    return result


def run_grid(series_by_stock: dict[str, tuple[np.ndarray, np.ndarray]],
             kinds: list[str], windows: list[int], horizons: list[int],
             cfg: TrainConfig, n_runs: int, strategy: str,
             jobs: int = 1, overrides: dict | None = None) -> list[CellResult]:
    """One CellResult per (stock, kind, w, h), row order deterministic.

    `series_by_stock` maps symbol -> (normalized train values, normalized
    test values).  Per-cell failures are carried in the result, never
    abort other cells.
    """
    cells = [
        (stock, kind, w, h)
        for stock in series_by_stock
        for kind in kinds
        for w in windows
        for h in horizons
    ]

    def execute(cell):
        stock, kind, w, h = cell
        tr, te = series_by_stock[stock]
        arch = ArchSpec(kind, w, h, overrides or {})
        return run_cell(stock, tr, te, arch, cfg, n_runs, strategy)

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_execute_cell, [
                (series_by_stock[c[0]], c, cfg, n_runs, strategy, overrides or {})
                for c in cells
            ]))
    else:
        results = [execute(c) for c in cells]
    return results


def _execute_cell(packed):
    (tr, te), (stock, kind, w, h), cfg, n_runs, strategy, overrides = packed
    arch = ArchSpec(kind, w, h, overrides)
    return run_cell(stock, tr, te, arch, cfg, n_runs, strategy)
