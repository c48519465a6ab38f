# %% [markdown]
# Brute-force check on short chains
#
# Expand the state into all (2s+1)^L amplitudes and optimise over product
# states with alternating single-site updates.

# %%
import numpy as np

from vbs_ge import Chain, ProductAnsatz, dense_lambda_sq, dense_optimize, ge

for chain in (Chain(1, 4), Chain(1, 6), Chain(2, 4)):
    best, state = dense_optimize(chain, restarts=20, seed=0)
    r = ge(chain)
    print(f"s={chain.s} L={chain.L}  optimum={best:.6f}  sector value={2 ** (-chain.L * r.eps):.6f}")

# %% On the four-site spin-1 ring a Neel product state beats both sector states.
neel = np.array([[1, 0, 0], [0, 0, 1], [1, 0, 0], [0, 0, 1]], dtype=float)
print(dense_lambda_sq(Chain(1, 4), ProductAnsatz(1, neel)), 4 / 21)
