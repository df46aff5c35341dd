"""End-to-end run: mine, prune, sweep k, train the ELM, and compare against
raw-series baselines, with the per-k curve and a saved model.

Uses a synthetic train/test split by default. Drop UCR-format files under
data/ucr/ (for example Coffee_TRAIN.txt / Coffee_TEST.txt) and pass the
dataset name to run on real data:

    python demos/04_full_pipeline.py Coffee
"""

import io
import sys
from pathlib import Path

import numpy as np

from divshap import (
    MiningConfig,
    PipelineConfig,
    load_pipeline,
    predict_pipeline,
    read_ucr,
    save_pipeline,
)
from divshap.bench import run_experiment, sweep_csv

REPO = Path(__file__).resolve().parent.parent


def synthetic_split():
    def build(seed, name):
        rng = np.random.default_rng(seed)
        n_per_class, m = 10, 60
        X = rng.normal(0.0, 0.25, (2 * n_per_class, m))
        y = np.array([1] * n_per_class + [2] * n_per_class)
        bump = np.array([0.0, 1.2, 2.4, 3.0, 2.4, 1.2, 0.0])
        for i in range(len(X)):
            off = rng.integers(3, m - len(bump) - 3)
            X[i, off : off + len(bump)] += bump if y[i] == 1 else -bump
        from divshap import Dataset

        return Dataset(X=X, y=y, name=name)

    return build(0, "synthetic"), build(1, "synthetic_test")


def ucr_split(name):
    root = REPO / "data" / "ucr"
    for folder in (root, root / name):
        for ext in (".txt", ".tsv", ""):
            tr, te = folder / f"{name}_TRAIN{ext}", folder / f"{name}_TEST{ext}"
            if tr.is_file() and te.is_file():
                return read_ucr(tr), read_ucr(te)
    sys.exit(f"no {name}_TRAIN/{name}_TEST files under {root}")


if len(sys.argv) > 1:
    train, test = ucr_split(sys.argv[1])
    cfg = PipelineConfig()  # full m/11..m/2 band, kappa 9
else:
    train, test = synthetic_split()
    cfg = PipelineConfig(mining=MiningConfig(min_len=5, max_len=12))

print(f"train: {train.n} x {train.m}, test: {test.n} x {test.m}")

report, model = run_experiment(train, test, cfg)
print()
print(report.table())

print("\nper-k sweep (mean CV accuracy over seeded ELM repeats):")
print(sweep_csv(model))

print("selected shapelets:")
for s in model.shapelets:
    print(
        f"  series {s.source_series} @ {s.start} len {s.length} "
        f"class {s.class_label} gain {s.gain:.3f}"
    )

# persistence round trip
buf = io.StringIO()
save_pipeline(model, buf)
buf.seek(0)
reloaded = load_pipeline(buf)
pred_a, acc_a = predict_pipeline(model, test)
pred_b, acc_b = predict_pipeline(reloaded, test)
print(f"\nmodel JSON round-trip preserves predictions: {bool((pred_a == pred_b).all())}")
print(f"test accuracy: {acc_a:.4f}")
