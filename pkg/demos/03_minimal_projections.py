# %% [markdown]
# # Minimal projections of small semigroups
#
# Three pairs of rank-one projections that behave differently: distinct
# ranges, a shared range with two projections, and a shared range coming
# from two reducible projections.

# %%
from irrsemigroup import generate_ball, right_ideal_analysis, same_range_diagnosis
from irrsemigroup.cli import fixture_path, parse_matrix_set

for name in ["ex_no_sr", "ex_non_uniq_proj", "ex_non_irr_proj", "ex_2_min_proj"]:
    mats, meta = parse_matrix_set(fixture_path(name))
    ball = generate_ball(mats, 6, names=meta["names"])
    diag = same_range_diagnosis(ball)
    ri = right_ideal_analysis(ball)
    print(f"{name}: {len(ball)} rays, minrank {ball.minrank}, {len(diag.projections)} projections")
    print(f"  diagnosis {diag.kind}, max range angle {diag.evidence['max_range_angle']:.3f}")
    print(f"  right-ideal conditions {ri.conditions}")

# %% [markdown]
# The pair A = I + E12, B = E21 has minimal rank one, but its ball never
# contains the identity: the only rank-two rays are powers of A.

# %%
mats, meta = parse_matrix_set(fixture_path("jordan_pair"))
ball = generate_ball(mats, 12, names=meta["names"])
print("letters:", [l.name for l in ball.letters])
print("rank-2 rays:", [ball.word_name(e.word) for e in ball.elements if e.rank == 2])
print("identity in ball:", ball.find([[1.0, 0.0], [0.0, 1.0]]) is not None)
