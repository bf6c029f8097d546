# %% [markdown]
# # Permutation structure of a commutative semigroup
#
# Two commuting circulants act on a disjoint positive basis, each element as
# a positive multiple of a permutation.  The sum of the basis is a common
# eigenvector.

# %%
import numpy as np

from irrsemigroup import (
    block_decomposition,
    common_eigenvector,
    generate_ball,
    permutation_structure,
    verify_structure_theorems,
)
from irrsemigroup.random_models import random_circulant_pair

S, K = random_circulant_pair(np.random.default_rng(11), 6, imprimitive=True)
print(np.round(S, 3))
print(np.round(K, 3))

# %%
ball = generate_ball([S, K], 4, names=["S", "K"])
ps = permutation_structure(ball)
print("r =", ps.r, " group:", ps.G)
for e, a in list(zip(ball.elements, ps.table))[:6]:
    print(f"  {ball.word_name(e.word):>12}: c = {a.c:.4f}, pi = {a.pi}")

# %%
ce = common_eigenvector(ps, ball)
print("x0 =", np.round(ce.x0, 4), " fixed space dim:", ce.fixed_space_dim)
print("blocks:", block_decomposition(ps, ball).blocks)

# %%
for c in verify_structure_theorems(ball, ps).checks:
    print(f"{c.status:>7}  {c.name}: {c.statement}")
