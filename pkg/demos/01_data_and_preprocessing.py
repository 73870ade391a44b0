"""From raw close-price CSVs to normalized train/test arrays.

Walks the reference corpus, validates each file, then shows the
date-cutoff split and min-max normalization for one symbol.
"""

import os
import sys

from stockcast.ingest import load_series, validate_series
from stockcast.preprocess import DEFAULT_CUTOFF, fit_scaler, scale, split_by_date
from stockcast.synthetic import make_reference_corpus

DATA_DIR = sys.argv[1] if len(sys.argv) > 1 else "./data"

if not os.path.isfile(os.path.join(DATA_DIR, "ACC.csv")):
    print(f"no corpus at {DATA_DIR}, generating one")
    make_reference_corpus(DATA_DIR)

print(f"validating {DATA_DIR}")
for name in sorted(os.listdir(DATA_DIR)):
    if not name.endswith(".csv"):
        continue
    symbol = os.path.splitext(name)[0]
    ts, load_report = load_series(os.path.join(DATA_DIR, name), symbol)
    report = validate_series(ts)
    status = "ok" if report.ok else f"{len(report.issues)} issue(s)"
    print(f"  {symbol:12s} {len(ts):5d} points "
          f"{ts.dates[0]}..{ts.dates[-1]}  {status}")

symbol = "ACC"
ts, _ = load_series(os.path.join(DATA_DIR, f"{symbol}.csv"), symbol)
split = split_by_date(ts, DEFAULT_CUTOFF)
print(f"\n{symbol}: split at {split.cutoff}")
print(f"  train {len(split.train)} points, test {len(split.test)} points")

scaler = fit_scaler(split.train.values)
train_n = scale(scaler, split.train.values)
test_n = scale(scaler, split.test.values)
print(f"  scaler fitted on train: min {scaler.min:.2f}, max {scaler.max:.2f}")
print(f"  normalized train range [{train_n.min():.4f}, {train_n.max():.4f}]")
print(f"  normalized test range  [{test_n.min():.4f}, {test_n.max():.4f}] "
      "(may leave [0, 1]: the scaler never sees the test side)")
