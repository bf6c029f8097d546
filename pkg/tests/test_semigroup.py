import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irrsemigroup.errors import BallExplosion, InconclusiveError, InputError
from irrsemigroup.random_models import random_irreducible, random_sparse_family
from irrsemigroup.semigroup import (
    RayIndex,
    flanking_projections,
    generate_ball,
    left_ideal_analysis,
    minrank,
    range_angle,
    right_ideal_analysis,
)

from oracles import ball_rays_naive, ray_dist

A = np.array([[1.0, 1.0], [0.0, 1.0]])
B = np.array([[0.0, 0.0], [1.0, 0.0]])
P_NOSR = np.array([[0.5, 0.5], [0.5, 0.5]])
Q_NOSR = np.array([[1 / 3, 1 / 3], [2 / 3, 2 / 3]])
Q_NONUNIQ = np.array([[1 / 3, 2 / 3], [1 / 3, 2 / 3]])
P_NONIRR = np.array([[1.0, 0.0], [1.0, 0.0]])
Q_NONIRR = np.array([[0.0, 1.0], [0.0, 1.0]])
CYCLE3 = np.roll(np.eye(3), 1, axis=0)


def test_ray_index_finds_near_duplicates_only():
    idx = RayIndex(2, 1e-9)
    M = np.array([[0.6, 0.8], [0.0, 0.0]])
    idx.add(M)
    assert idx.find(M + 1e-11) == 0
    assert idx.find(M + 1e-6) is None


def test_jordan_pair_ball():
    ball = generate_ball([A, B], 12, names=["A", "B"])
    assert ball.minrank == 1 == minrank(ball)
    rank2 = [e for e in ball.elements if e.rank == 2]
    powers = [np.linalg.matrix_power(A, k) for k in range(1, 13)]
    assert len(rank2) == 12
    for e in rank2:
        assert min(ray_dist(e.matrix, M) for M in powers) < 1e-8
    assert ball.find(np.eye(2)) is None
    assert [l.name for l in ball.letters] == ["A", "B", "lim[A]"]


def test_three_cycle_ball_has_three_rays():
    ball = generate_ball([CYCLE3], 5)
    assert len(ball) == 3 and ball.minrank == 3
    assert ball.find(np.eye(3)) is not None
    assert len(ball.projections) == 1
    assert np.allclose(ball.projections[0].P, np.eye(3))


def test_minrank_needs_asymptotic_letters_for_a_primitive_generator():
    T = np.array([[1.0, 1.0], [1.0, 2.0]])
    plain = generate_ball([T], 6, asymptotic=False)
    assert plain.minrank == 2
    full = generate_ball([T], 6)
    assert full.minrank == 1


def test_nilpotent_only_ball():
    N = np.array([[0.0, 1.0], [0.0, 0.0]])
    ball = generate_ball([N], 3)
    assert ball.zero_word == (0, 0)
    with pytest.raises(InconclusiveError):
        _ = ball.projections


def test_zero_generator_gives_infinite_minrank():
    ball = generate_ball([np.zeros((2, 2))], 3)
    assert ball.minrank == math.inf


def test_cap_raises_ball_explosion():
    rng = np.random.default_rng(0)
    gens = [rng.random((3, 3)) for _ in range(3)]
    with pytest.raises(BallExplosion) as exc:
        generate_ball(gens, 8, cap=50, asymptotic=False)
    assert exc.value.stats["rays"] == 50


def test_invalid_length():
    with pytest.raises(InputError):
        generate_ball([A], 0)


def test_example_projection_sets():
    for P, Q in [(P_NOSR, Q_NOSR), (P_NOSR, Q_NONUNIQ), (P_NONIRR, Q_NONIRR)]:
        ball = generate_ball([P, Q], 6)
        assert len(ball) == 2
        projs = ball.projections
        assert len(projs) == 2
        got = sorted((p.P for p in projs), key=lambda M: tuple(M.ravel()))
        want = sorted((P, Q), key=lambda M: tuple(M.ravel()))
        for g, w in zip(got, want):
            assert np.allclose(g, w, atol=1e-12)
        assert all(p.label == "ball_ray" for p in projs)


def test_range_angles():
    assert range_angle(P_NOSR, Q_NOSR) > 0.1
    assert range_angle(P_NOSR, Q_NONUNIQ) < 1e-8
    assert range_angle(P_NONIRR, Q_NONIRR) < 1e-8


def test_flanking_projections():
    ball = generate_ball([A, B], 8)
    for i in ball.S_r[:20]:
        left, right = flanking_projections(ball, i)
        S = ball.elements[i].matrix
        assert np.allclose(left.P @ S, S, atol=1e-7)
        assert np.allclose(S @ right.P, S, atol=1e-7)
    with pytest.raises(InputError):
        flanking_projections(ball, next(i for i, e in enumerate(ball.elements) if e.rank == 2))


@pytest.mark.parametrize(
    "gens,expected",
    [
        ([P_NOSR, Q_NOSR], False),
        ([P_NOSR, Q_NONUNIQ], True),
        ([P_NONIRR, Q_NONIRR], True),
        ([CYCLE3], True),
        ([A, B], False),
    ],
)
def test_right_ideal_conditions_agree(gens, expected):
    rep = right_ideal_analysis(generate_ball(gens, 6))
    assert rep.consistent
    assert set(rep.conditions.values()) == {expected}


def test_left_ideals_mirror_ranges_of_transposes():
    # transposes of the non-unique example have distinct ranges
    rep = left_ideal_analysis(generate_ball([P_NOSR, Q_NONUNIQ], 6))
    assert rep.consistent and not rep.same_range


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4))
def test_ball_matches_naive_enumeration(seed, n, L):
    rng = np.random.default_rng(seed)
    gens = random_sparse_family(rng, n, k=2, density=0.6)
    ball = generate_ball(gens, L, asymptotic=False)
    naive = ball_rays_naive([np.asarray(g) for g in gens], L)
    assert len(ball) == len(naive)
    for R in naive:
        assert ball.find(R) is not None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 5))
def test_projection_invariants(seed, n):
    rng = np.random.default_rng(seed)
    T = random_irreducible(rng, n)
    ball = generate_ball([T], 6)
    for p in ball.projections:
        assert np.allclose(p.P @ p.P, p.P, atol=1e-7)
        assert p.P.min() >= 0
        assert np.linalg.matrix_rank(p.P, tol=1e-8) == ball.minrank
