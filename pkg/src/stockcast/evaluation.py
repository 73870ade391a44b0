"""Forecast-accuracy statistics: loss intervals and the Diebold-Mariano test.

The DM test compares two aligned forecast-error series through the mean
of their loss differential d_t = e_a,t^2 - e_b,t^2, scaled by a long-run
variance estimate (autocovariances up to lag h-1, biased 1/T estimator).
The default statistic carries the Harvey small-sample adjustment and is
referred to a Student-t distribution with T-1 degrees of freedom, two
sided.  A negative statistic means the first model has the smaller loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DegenerateDifferential, TooFewRuns
from .experiment import LossInterval

# fixed pair orderings for the single-step and multi-step comparison reports
SINGLE_STEP_PAIRS = (
    ("MLP", "CNN"), ("LSTM", "GRU"), ("MLP", "LSTM"), ("LSTM", "CNN"), ("CNN", "GRU"),
)
MULTI_STEP_PAIRS = (
    ("MLP", "CNN"), ("LSTM", "GRU"), ("MLP", "LSTM"), ("LSTM", "CNN"), ("MLP", "GRU"),
)


@dataclass(frozen=True)
class DmReport:
    statistic: float
    p_value: float
    h: int
    n_obs: int
    variant: str = "harvey"


def _autocovariance(d: np.ndarray, lag: int) -> float:
    """Biased (1/T) autocovariance at the given lag."""
    T = d.size
    dc = d - d.mean()
    return float(np.dot(dc[lag:], dc[:T - lag]) / T)


def dm_test(errors_a, errors_b, h: int = 1, loss: str = "squared",
            harvey: bool = True) -> DmReport:
    """Diebold-Mariano test on two aligned forecast-error series.

    Raises DegenerateDifferential when the loss differential is
    identically zero.  If the long-run variance estimate is non-positive
    at h > 1 it falls back to the lag-0 autocovariance.
    """
    a = np.asarray(errors_a, dtype=np.float64)
    b = np.asarray(errors_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"error series shapes {a.shape} vs {b.shape}")
    T = a.size
    if T <= max(h, 4):
        raise ValueError(f"need more than max(h, 4) = {max(h, 4)} observations, got {T}")
    if loss == "squared":
        d = a ** 2 - b ** 2
    elif loss == "absolute":
        d = np.abs(a) - np.abs(b)
    else:
        raise ValueError(f"unknown loss {loss!r}")
    if np.all(d == 0.0):
        raise DegenerateDifferential("identical losses; forecasts indistinguishable")

    gamma0 = _autocovariance(d, 0)
    v_hat = gamma0 + 2.0 * sum(_autocovariance(d, k) for k in range(1, h))
    if v_hat <= 0.0:
        # possible at h > 1; documented deterministic fallback
        v_hat = gamma0
    if v_hat <= 0.0:
        raise DegenerateDifferential("long-run variance estimate is zero")

    dm = float(d.mean() / np.sqrt(v_hat / T))
    variant = "harvey" if harvey else "plain"
    if harvey:
        dm *= float(np.sqrt((T + 1 - 2 * h + h * (h - 1) / T) / T))
        p = 2.0 * float(stats.t.sf(abs(dm), df=T - 1))
    else:
        p = 2.0 * float(stats.norm.sf(abs(dm)))
    return DmReport(statistic=dm, p_value=p, h=h, n_obs=T, variant=variant)


def loss_interval(run_errors) -> LossInterval:
    """Sample mean and sample std (n-1) over per-run test errors."""
    errors = np.asarray(run_errors, dtype=np.float64)
    if errors.size < 2:
        raise TooFewRuns(f"need >= 2 runs, got {errors.size}")
    if not np.all(np.isfinite(errors)):
        raise ValueError("non-finite run errors")
    return LossInterval(mean=float(errors.mean()),
                        std=float(errors.std(ddof=1)),
                        n_runs=int(errors.size))


def pairwise_dm_matrix(per_model_errors: dict[str, np.ndarray], h: int,
                       mode: str = "single", loss: str = "squared",
                       harvey: bool = True) -> list[tuple[tuple[str, str], DmReport | None]]:
    """One DmReport per model pair, in the fixed report order.

    A degenerate pair (identical losses) yields None instead of raising,
    so the remaining pairs still report.
    """
    pairs = SINGLE_STEP_PAIRS if mode == "single" else MULTI_STEP_PAIRS
    out = []
    for a, b in pairs:
        try:
            report = dm_test(per_model_errors[a], per_model_errors[b], h=h,
                             loss=loss, harvey=harvey)
        except DegenerateDifferential:
            report = None
        out.append(((a, b), report))
    return out


def majority_vote_ranking(dm_by_stock: dict[str, list],
                          alpha: float) -> dict[tuple[str, str], str | None]:
    """Per-pair winner by majority vote across stocks.

    A model wins a pair when it has the significantly smaller loss
    (p < alpha, sign pointing at it) in strictly more than half of the
    stocks; otherwise the pair is a tie (None).
    """
    n_stocks = len(dm_by_stock)
    votes: dict[tuple[str, str], dict[str, int]] = {}
    for reports in dm_by_stock.values():
        for pair, report in reports:
            tally = votes.setdefault(pair, {})
            if report is None or report.p_value >= alpha or report.statistic == 0.0:
                continue
            winner = pair[0] if report.statistic < 0.0 else pair[1]
            tally[winner] = tally.get(winner, 0) + 1
    ranking: dict[tuple[str, str], str | None] = {}
    for pair, tally in votes.items():
        ranking[pair] = None
        for model, wins in tally.items():
            if wins > n_stocks / 2:
                ranking[pair] = model
    return ranking
