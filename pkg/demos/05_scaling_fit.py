# %% [markdown]
# Fitting eps_inf(s) = alpha * log(s + beta/s + gamma) + delta
#
# Even and odd spins are fitted separately. The published parameter rows
# are compared in three log bases.

# %%
import math

from vbs_ge import PUBLISHED_PARAMS, eval_f, fit, published_comparison
from vbs_ge.checks import fit_datasets

data = fit_datasets()
for parity, pts in data.items():
    rep = fit(pts)
    print(parity, rep.params, f"rms={rep.rms_residual:.2e}", rep.converged)
    for s, e in pts:
        print(f"   s={s}  data={e:.6f}  fit={eval_f(rep.params, s):.6f}  published={eval_f(PUBLISHED_PARAMS[parity], s):.6f}")

# %% Published rows in each base, and the refit starting from them
for parity, pts in data.items():
    for row in published_comparison(pts):
        refit = row["refit"]
        base = {2.0: "2", math.e: "e", 10.0: "10"}[row["log_base"]]
        print(f"{parity:4s} base {base:2s}  published rms={row['published_rms']:.3f}  "
              f"refit rms={refit.rms_residual:.1e}")
