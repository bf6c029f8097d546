import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irrsemigroup.errors import QuasinilpotentError, ReducibleError
from irrsemigroup.random_models import random_irreducible
from irrsemigroup.spectral import (
    classify_dichotomy,
    cluster_eigenvalues,
    combinatorial_projection,
    cyclic_classes,
    jordan_chevalley,
    nilpotency_index,
    peripheral_spectrum,
    peripheral_split,
    period,
    perron_vectors,
    spectral_radius,
)

from oracles import (
    perron_by_power_iteration,
    period_by_closed_walks,
    projection_by_powers,
)

SQRT6 = 2.4494897427831781  # exact eigenvalue of [[0,2],[3,0]], sympy
JORDAN = np.array([[1.0, 1.0], [0.0, 1.0]])
SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])
CYCLE3 = np.roll(np.eye(3), 1, axis=0)


def test_radius_of_weighted_transposition():
    assert abs(spectral_radius([[0, 2], [3, 0]]) - SQRT6) < 1e-14
    ps = peripheral_spectrum([[0, 2], [3, 0]])
    assert len(ps) == 2
    assert np.allclose(sorted(ps.eigenvalues.real), [-SQRT6, SQRT6])


def test_defective_eigenvalue_clusters_to_one_centre():
    centres, members = cluster_eigenvalues(np.linalg.eigvals(JORDAN + 1e-14 * np.random.default_rng(0).random((2, 2))))
    assert len(centres) == 1 and len(members[0]) == 2


def test_quasinilpotent_is_reported():
    N = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert peripheral_spectrum(N).quasinilpotent
    with pytest.raises(QuasinilpotentError):
        peripheral_split(N)


def test_jordan_block_split():
    d = peripheral_split(JORDAN)
    assert d.r == 1.0
    assert np.allclose(d.P, np.eye(2))
    assert d.k == 1
    assert np.allclose(d.N_full, [[0, 1], [0, 0]], atol=1e-10)
    assert np.allclose(d.U_full, np.eye(2), atol=1e-10)


def test_jordan_chevalley_recombines():
    rng = np.random.default_rng(4)
    S = rng.random((4, 4))
    J = np.diag([2.0, 2.0, 1.0, -1.0]) + np.diag([1.0, 0, 0], 1)
    M = S @ J @ np.linalg.inv(S)
    D, N = jordan_chevalley(M)
    assert np.allclose(D + N, M, atol=1e-8)
    assert np.allclose(D @ N, N @ D, atol=1e-7)
    assert nilpotency_index(N) == 1


def test_dichotomy_nilpotent_case():
    d = classify_dichotomy(JORDAN)
    assert d.kind == "nilpotent"
    limit = d.limit / np.linalg.norm(d.limit)
    assert np.linalg.norm(limit - np.array([[0, 1], [0, 0]])) < 1e-8
    assert d.errors[-1] < 1e-5
    for m, rj, c in zip(d.m_j, d.r_j, d.c_j):
        assert rj == m + 1 and np.isclose(c, 1.0 / rj)


def test_dichotomy_unimodular_cases():
    d = classify_dichotomy(SWAP)
    assert d.kind == "unimodular" and d.m_j == [2, 4, 6, 8, 10]
    d = classify_dichotomy(2 * CYCLE3)
    assert d.m_j == [3, 6, 9, 12, 15]
    assert max(d.errors) < 1e-12


def test_projection_of_rank_one_projection_is_itself():
    Q = np.array([[1 / 3, 1 / 3], [2 / 3, 2 / 3]])
    assert np.allclose(peripheral_split(Q).P, Q)


def test_period_examples():
    assert period(SWAP) == 2
    assert period(np.ones((2, 2))) == 1
    assert period(CYCLE3) == 3
    five = np.roll(np.eye(5), 1, axis=0)
    five[0, 2] = 1.0  # chord creating a 3-cycle next to the 5-cycle
    assert period(five) == 1
    with pytest.raises(ReducibleError):
        period(np.array([[1.0, 0.0], [1.0, 1.0]]))


def test_cyclic_classes_shift_by_one():
    T = np.array([[0, 0, 1, 2], [0, 0, 3, 1], [2, 1, 0, 0], [1, 1, 0, 0]], float)
    h, classes = cyclic_classes(T)
    assert h == 2
    assert sorted(map(sorted, classes)) == [[0, 1], [2, 3]]


def test_perron_vector_of_two_block_operator():
    T = np.array([[0, 0, 1, 2], [0, 0, 3, 1], [2, 1, 0, 0], [1, 1, 0, 0]], float)
    v, w = perron_vectors(T)
    assert np.allclose(T @ v, spectral_radius(T) * v, atol=1e-12)
    assert np.allclose(T.T @ w, spectral_radius(T) * w, atol=1e-12)
    # r(T)^2 = 4 + sqrt(21) from the characteristic polynomial of T^2
    assert abs(spectral_radius(T) - 2.9296033340634769) < 1e-13
    assert np.isclose(v[0] / v[1], 0.6546536707079771)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7))
def test_period_matches_closed_walk_oracle(seed, n):
    rng = np.random.default_rng(seed)
    A = random_irreducible(rng, n)
    h = period(A)
    assert h == period_by_closed_walks(A)
    assert len(peripheral_spectrum(A)) == h


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7))
def test_projection_properties(seed, n):
    rng = np.random.default_rng(seed)
    A = random_irreducible(rng, n)
    d = peripheral_split(A)
    P = d.P
    assert np.allclose(P @ P, P, atol=1e-8)
    assert np.allclose(P @ A, A @ P, atol=1e-8 * d.r)
    assert np.linalg.norm(P - combinatorial_projection(A)) < 1e-6
    h = period(A)
    assert np.linalg.norm(P - projection_by_powers(A, h, d.r)) < 1e-6


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7))
def test_perron_vectors_match_power_iteration(seed, n):
    rng = np.random.default_rng(seed)
    A = random_irreducible(rng, n)
    v, w = perron_vectors(A)
    assert np.all(v > 0) and np.all(w > 0)
    assert np.allclose(v, perron_by_power_iteration(A), atol=1e-8)
    assert np.allclose(w, perron_by_power_iteration(A.T), atol=1e-8)
