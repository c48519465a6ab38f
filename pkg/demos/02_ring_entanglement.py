# %% [markdown]
# Per-site entanglement of periodic chains
#
# eps(L) approaches its limit like 1/L, so a two-parameter fit over
# L = 100..400 gives the large-chain value.

# %%
import math

from vbs_ge import Chain, closed_forms, extrapolated_eps, ge

for L in (4, 10, 40, 200):
    r = ge(Chain(1, L))
    print(f"s=1 L={L:3d}  eps={r.eps_even:.10f}  closed form={closed_forms.s1_pbc_eps(L):.10f}")

# %% Odd lengths: the sector overlaps vanish identically for odd s.
for s in (1, 2, 3):
    r = ge(Chain(s, 7))
    print(f"s={s} L=7  eps_even={r.eps_even}  eps_odd={r.eps_odd}")

# %% Extrapolated values against the spin-1 limit log2(3)
print("log2(3) =", math.log2(3))
for s in range(1, 9):
    even = extrapolated_eps(s, sector="even")
    odd = extrapolated_eps(s, sector="odd")
    print(f"s={s}  even={even.eps_infinity:.7f}  odd={odd.eps_infinity:.7f}  resid={even.residual:.1e}")

# %% Even s: odd and even lengths give the same eps_even up to a gap that closes with L.
for s in (2, 4, 6):
    gaps = [abs(ge(Chain(s, L + 1)).eps_even - ge(Chain(s, L)).eps_even) for L in (10, 40, 160, 398)]
    print(f"s={s}  |eps(L+1) - eps(L)| at L=10,40,160,398:", " ".join(f"{g:.2e}" for g in gaps))
