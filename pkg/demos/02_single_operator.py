# %% [markdown]
# # One irreducible operator
#
# An irreducible nonnegative T with period r cyclically permutes r disjoint
# positive vectors, and the closed ray semigroup it generates adds exactly r
# asymptotic rays to the powers of T.

# %%
import numpy as np

from irrsemigroup import analyze_single, classify_dichotomy, cyclic_classes
from irrsemigroup.random_models import random_irreducible

T = random_irreducible(np.random.default_rng(2), 6, period=3)
print(np.round(T, 3))
print("cyclic classes:", cyclic_classes(T))

# %%
rep = analyze_single(T)
print("r(T) =", rep.r_T, " period =", rep.r)
print("peripheral spectrum:", np.round(rep.sigma_per, 6))
print("sigma:", rep.sigma)
print("cyclic basis (columns):")
print(np.round(rep.x, 4))
print("T x_i - r(T) x_sigma(i), max relative residual:", rep.residual)

# %% [markdown]
# Three independent routes to r: the combinatorial period, the minimal rank
# in the ray ball of T, and the number of peripheral eigenvalues.

# %%
print("period / minrank / multiplicity:", rep.r_period, rep.r_minrank, rep.r_multiplicity)

# %% [markdown]
# Powers of T / r(T) return to the peripheral projection along multiples of r.

# %%
d = classify_dichotomy(T)
print(d.kind, d.m_j, ["%.1e" % e for e in d.errors])

# %% [markdown]
# A Jordan block is the other regime: normalised powers converge to the
# square-zero matrix E12 after dividing by a binomial coefficient.

# %%
d = classify_dichotomy([[1.0, 1.0], [0.0, 1.0]])
print(d.kind, "k =", d.k, "limit:", d.limit.tolist(), "m_j:", d.m_j)
