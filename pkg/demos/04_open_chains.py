# %% [markdown]
# Open chains: edge averages and closed forms
#
# The (s+1)^2 edge states have integer norms (K^L)_pq with K = g**2
# elementwise. Their sum equals c_L = (s+1) ((2s+1)!/(s+1))^L exactly.

# %%
from fractions import Fraction

from vbs_ge import Chain, closed_forms, ge
from vbs_ge.contraction import c_L_exact, obc_norms_exact, overlap_obc

for s in (1, 2, 3):
    for L in (2, 5, 20):
        total = sum(map(sum, obc_norms_exact(s, L)))
        print(s, L, Fraction(total) / c_L_exact(s, L))

# %% Exact per-edge averaging against the c_L asymptote
for L in (6, 12, 24, 48, 96):
    chain = Chain(1, L, "obc-avg")
    print(L, ge(chain, "exact").eps_even, ge(chain, "asymptotic").eps_even)

# %% s = 2, odd sector: the contraction gives 2 * 12**L / c_L, not 3**L / c_L.
for L in (2, 10, 50, 100):
    lam = overlap_obc(Chain(2, L, "obc-avg"), "odd", "asymptotic").log2value
    print(L, lam, closed_forms.s2_odd_obc_sum_squares(L), closed_forms.s2_odd_obc_published(L))

# %% s = 2, even sector: which reading of the closed form matches?
report = closed_forms.s2_even_report()
print(report["matching"])
for name, dev in report["max_log2_deviation"].items():
    print(f"{name:20s} {dev:.3e}")
