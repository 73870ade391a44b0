"""Are two forecasters distinguishable, or just differently seeded?

Trains an MLP and a CNN on the same symbol, aligns their rolling test
errors, and runs the Diebold-Mariano test with the Harvey small-sample
adjustment.  A negative statistic favors the first model; a large
p-value says the difference could be noise.
"""

import os
import sys
from datetime import date

import numpy as np

from stockcast.evaluation import dm_test
from stockcast.experiment import TrainConfig, run_cell
from stockcast.ingest import load_series
from stockcast.models import ArchSpec
from stockcast.preprocess import fit_scaler, scale, split_by_date

DATA_DIR = sys.argv[1] if len(sys.argv) > 1 else "./data"
SYMBOL = "ACC"
W = 5

ts, _ = load_series(os.path.join(DATA_DIR, f"{SYMBOL}.csv"), SYMBOL)
split = split_by_date(ts, date(2017, 1, 1))
scaler = fit_scaler(split.train.values)
train_n = scale(scaler, split.train.values)
test_n = scale(scaler, split.test.values)

errors = {}
for kind in ("MLP", "CNN"):
    cell = run_cell(SYMBOL, train_n, test_n, ArchSpec(kind, W, 1),
                    TrainConfig(epochs=40, seed=0), n_runs=3, strategy="direct")
    # mean absolute error per origin, averaged across the seeds
    per_seed = np.array([[abs(t.predictions[0] - t.targets[0])
                          for t in run.traces] for run in cell.runs])
    errors[kind] = per_seed.mean(axis=0)
    print(f"{kind}: mean test MSE {cell.interval.mean:.3e} over 3 seeds")

report = dm_test(errors["MLP"], errors["CNN"], h=1)
better = "MLP" if report.statistic < 0 else "CNN"
print(f"\nDM statistic {report.statistic:+.3f}, p-value {report.p_value:.4f} "
      f"(T={report.n_obs}, {report.variant})")
alpha = 0.05
if report.p_value < alpha:
    print(f"significant at alpha={alpha}: {better} has lower squared error")
else:
    print(f"not significant at alpha={alpha}: the two are indistinguishable here")
