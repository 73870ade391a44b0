"""Desk-scale stock-price forecasting benchmark.

From-scratch differentiable models (MLP, 1-D CNN, GRU, LSTM), windowed
single-step and multi-step forecasting (direct and iterative), a seeded
multi-run experiment harness, and Diebold-Mariano significance testing.
"""

from .evaluation import DmReport, dm_test, loss_interval, majority_vote_ranking, pairwise_dm_matrix
from .experiment import LossInterval, RunResult, TrainConfig, evaluate_run, run_grid, train
from .ingest import TimeSeries, ValidationReport, load_series, validate_series, write_series
from .models import ArchSpec, Model, build_cnn, build_gru, build_lstm, build_mlp, build_model
from .preprocess import Scaler, SplitSeries, fit_scaler, inverse_scale, scale, split_by_date
from .windowing import (
    ForecastTrace,
    FunctionModel,
    Sample,
    WindowSpec,
    direct_forecast,
    iterative_forecast,
    make_direct_samples,
    make_single_step_samples,
    rolling_test_forecast,
    single_step_forecast,
)

__version__ = "0.1.0"
