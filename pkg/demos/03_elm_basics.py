"""Exercise the ELM classifier on its own: the random hidden layer never
trains; the output weights come from one least-squares solve.

Run: python demos/03_elm_basics.py
"""

import numpy as np

from divshap import ELMConfig
from divshap import elm

rng = np.random.default_rng(0)

# --- interpolation: width N, no ridge, N distinct points -> zero error ----
N = 12
X = rng.normal(size=(N, 3))
y = np.arange(N) % 3
model = elm.train(X, y, ELMConfig(n_hidden=N, seed=0, ridge=0.0))
T = (y[:, None] == model.codebook[None, :]).astype(float)
err = np.abs(elm.decision_values(model, X) - T).max()
print(f"interpolation with width {N} on {N} samples: max one-hot error {err:.2e}")
print(f"training predictions exact: {bool((elm.predict(model, X) == y).all())}")

# --- ridge shrinks the output weights -------------------------------------
print("\nridge vs solution norm (same hidden layer):")
H = elm.hidden_output(model.hidden, X)
for lam in (0.0, 1e-6, 1e-3, 1e-1, 10.0):
    beta = elm.pinv_solve(H, T, ridge=lam)
    print(f"  lambda {lam:8.1e}  ||beta||_F {np.linalg.norm(beta):8.4f}")

# --- generalization on a simple two-moon-ish problem ----------------------
def moons(n, seed):
    r = np.random.default_rng(seed)
    t = r.uniform(0, np.pi, n)
    upper = np.c_[np.cos(t), np.sin(t)] + r.normal(0, 0.1, (n, 2))
    lower = np.c_[1 - np.cos(t), -np.sin(t) + 0.4] + r.normal(0, 0.1, (n, 2))
    X = np.vstack([upper, lower])
    y = np.array([0] * n + [1] * n)
    return X, y


Xtr, ytr = moons(60, seed=1)
Xte, yte = moons(60, seed=2)
for width in (5, 20, 80):
    m = elm.train(Xtr, ytr, ELMConfig(n_hidden=width, seed=3))
    acc = (elm.predict(m, Xte) == yte).mean()
    print(f"hidden width {width:3d}: test accuracy {acc:.3f}")

print("\nthe hidden layer is drawn once from a seeded uniform [-1, 1];")
print("the same seed reproduces the same model bit for bit.")
a = elm.train(Xtr, ytr, ELMConfig(n_hidden=20, seed=7))
b = elm.train(Xtr, ytr, ELMConfig(n_hidden=20, seed=7))
print(f"betas identical across runs: {bool(np.array_equal(a.beta, b.beta))}")
