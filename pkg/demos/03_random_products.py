# %% [markdown]
# Random product states versus the sector states
#
# Three sampling modes: all sites independent, one vector repeated on every
# site, and only the first site randomised on top of the best sector state.

# %%
from vbs_ge import Chain, ge, sample, summarize

for s, L in ((1, 10), (2, 10), (3, 8)):
    for bc in ("pbc", "obc-avg"):
        chain = Chain(s, L, bc)
        bound = ge(chain).eps
        for mode in ("unconstrained", "perm-invariant", "boundary-random"):
            summ = summarize(sample(chain, mode, 300, seed=2024), bound)
            flag = "below" if summ.minimum < bound else ""
            print(f"s={s} L={L} {bc:8s} {mode:16s} eps={bound:.5f} min={summ.minimum:.5f} "
                  f"within={summ.fraction_within:.2f} {flag}")

# %% For s = 1 the uniform sector states are not the closest product states:
# some unconstrained samples land below the sector value on short rings.

# %% The boundary-random gap closes roughly like 1/L.
for L in (4, 8, 16, 32):
    chain = Chain(2, L)
    bound = ge(chain).eps
    print(L, summarize(sample(chain, "boundary-random", 200, seed=3), bound).minimum - bound)
