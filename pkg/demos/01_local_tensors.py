# %% [markdown]
# Local tensors of the spin-s chain
#
# Each bond carries a (s+1) x (s+1) coefficient matrix whose entry (p, q)
# lives at level m = q - p. Coefficients come from exact integers.

# %%
import numpy as np

from vbs_ge import boundary_tensor, contracted_row, local_tensor, sector_ansatz

np.set_printoptions(precision=4, suppress=True)

for s in (1, 2, 3):
    g = local_tensor(s)
    print(f"s = {s}")
    print(" coeffs:\n", g.coeffs)
    print(" levels:\n", g.levels)

# %% The open-chain boundary tensor is the unsigned bulk tensor.
print(boundary_tensor(2).coeffs)

# %% Contracting a sector state into a site leaves a block-sparse matrix.
for sector in ("even", "odd"):
    print(sector, "\n", contracted_row(sector_ansatz(2, sector), local_tensor(2)))
