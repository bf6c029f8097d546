# %% [markdown]
# # Ideal irreducibility
#
# A family of nonnegative matrices is ideal irreducible when no proper
# coordinate subspace is invariant under every member.  The test runs on the
# union positivity digraph; a reducible family comes with a witness ideal and
# an irreducible one with a word for every matrix entry.

# %%
import numpy as np

from irrsemigroup import is_ideal_irreducible, orbit_ideal
from irrsemigroup.irreducibility import invariant_subset_masks, mask_to_ideal

P = np.array([[1.0, 0.0], [1.0, 0.0]])
Q = np.array([[0.0, 1.0], [0.0, 1.0]])

# %% [markdown]
# Each projection on its own leaves a coordinate line invariant.

# %%
for name, M in [("P", P), ("Q", Q)]:
    rep = is_ideal_irreducible([M])
    print(f"{name}: irreducible={rep.irreducible}, witness={rep.witness}")

# %% [markdown]
# Together they are irreducible.  The certificate names, for every entry
# (i, j), a shortest word that is positive there.

# %%
rep = is_ideal_irreducible([P, Q])
print("pair irreducible:", rep.irreducible)
for (i, j), word in sorted(rep.certificate.items()):
    print(f"  entry ({i}, {j}) positive in", "".join("PQ"[g] for g in word))

# %% [markdown]
# Orbit ideals and the brute-force subset search give the same answer on a
# reducible chain.

# %%
chain = np.diag([1.0, 1.0], -1)
print("orbit of e_1:", orbit_ideal([chain], [0, 1, 0]))
print("invariant sets:", [mask_to_ideal(m, 3).indices for m in invariant_subset_masks([chain])])
