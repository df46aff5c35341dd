"""Walk through shapelet mining on a small synthetic dataset.

Builds a two-class set where class 1 carries an upward bump and class 2 a
downward one, enumerates subsequence candidates, and inspects how the best
candidate's orderline splits the classes.

Run: python demos/01_mining_and_splits.py
"""

import numpy as np

from divshap import Dataset, MiningConfig, best_split, mine_shapelets, orderline

rng = np.random.default_rng(0)

n_per_class, m = 8, 40
X = rng.normal(0.0, 0.25, (2 * n_per_class, m))
y = np.array([1] * n_per_class + [2] * n_per_class)
bump = np.array([0.0, 1.0, 2.2, 2.8, 2.2, 1.0, 0.0])
for i in range(len(X)):
    off = rng.integers(3, m - len(bump) - 3)
    X[i, off : off + len(bump)] += bump if y[i] == 1 else -bump
train = Dataset(X=X, y=y, name="bumps")

print(f"dataset: {train.n} series of length {train.m}, classes {list(train.classes)}")

# default candidate band is m/11 .. m/2; pin a narrow one to keep the
# enumeration small enough to see
cfg = MiningConfig(min_len=5, max_len=9)
shapelets = mine_shapelets(train, cfg)
print(f"scored candidates: {len(shapelets)}")

print("\ntop five by information gain:")
for s in shapelets[:5]:
    print(
        f"  series {s.source_series} @ {s.start:2d} len {s.length}  "
        f"gain {s.gain:.3f}  threshold {s.split_threshold:.3f}  gap {s.gap:.3f}"
    )

best = shapelets[0]
print(f"\norderline of the best candidate (from a class-{best.class_label} series):")
ol = orderline(best, train)
for dist, label in ol:
    side = "<=" if dist <= best.split_threshold else "> "
    print(f"  dist {dist:7.4f}  class {label}  {side} threshold")

thr, gain, gap = best_split(ol)
print(f"\nbest split: threshold {thr:.4f}, gain {gain:.3f} bits, gap {gap:.4f}")
print("series of one class sit below the threshold, the other above it;")
print("the gain is the entropy removed by that partition.")
