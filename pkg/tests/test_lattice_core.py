import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from irrsemigroup.errors import InputError
from irrsemigroup.lattice_core import (
    CoordinateIdeal,
    as_matrices,
    as_matrix,
    disjoint,
    ideal_closure,
    is_invariant,
    maps_into,
    numerical_rank,
    ray,
    ray_distance,
)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


def test_clamps_tiny_negatives_and_rejects_real_ones():
    M = as_matrix([[1, -1e-13], [0, 2]])
    assert M[0, 1] == 0.0
    with pytest.raises(InputError, match="negative entry"):
        as_matrix([[1, -1e-6], [0, 2]])


def test_shape_errors():
    with pytest.raises(InputError):
        as_matrix([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(InputError):
        as_matrices([])
    with pytest.raises(InputError, match="dimension"):
        as_matrices([np.eye(2), np.eye(3)])
    with pytest.raises(InputError, match="non-finite"):
        as_matrix([[np.nan]])


def test_validated_matrix_is_read_only():
    M = as_matrix(np.eye(2))
    with pytest.raises(ValueError):
        M[0, 0] = 3.0


def test_disjoint_examples():
    assert disjoint([1, 0, 0], [0, 2, 3])
    assert not disjoint([1, 1e-3, 0], [0, 2, 3])
    assert disjoint([1, 1e-12, 0], [0, 2, 3], tol=1e-9)


@given(arrays(float, 5, elements=finite), arrays(float, 5, elements=finite))
def test_disjoint_is_symmetric(x, y):
    assert disjoint(x, y) == disjoint(y, x)


@given(arrays(float, 5, elements=finite))
def test_vector_disjoint_from_zero(x):
    assert disjoint(x, np.zeros(5))


def test_ideal_closure_and_order():
    J = ideal_closure([[1, 0, 0, 0], [0, 0, 2, 0]])
    assert J.indices == [0, 2]
    assert J.is_proper
    assert CoordinateIdeal(4, {0}) <= J
    assert ideal_closure([], n=3).is_zero
    assert ideal_closure([[1, 1, 1]]).is_full
    with pytest.raises(InputError):
        CoordinateIdeal(3, {5})


@given(st.lists(arrays(float, 4, elements=st.floats(0, 1)), min_size=1, max_size=4))
def test_ideal_closure_contains_each_vector(vs):
    J = ideal_closure(vs)
    for v in vs:
        assert ideal_closure([v], 4) <= J


def test_invariance_of_coordinate_ideals():
    T = np.array([[1.0, 0.0], [1.0, 0.0]])
    assert is_invariant([T], CoordinateIdeal(2, {1}))
    assert not is_invariant([T], CoordinateIdeal(2, {0}))
    assert maps_into(T, CoordinateIdeal(2, {0}), CoordinateIdeal(2, {0, 1}))


def test_numerical_rank_and_rays():
    assert numerical_rank(np.ones((3, 3))) == 1
    assert numerical_rank(np.zeros((3, 3))) == 0
    assert numerical_rank(np.diag([1.0, 1e-9])) == 1
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.isclose(np.linalg.norm(ray(A)), 1.0)
    assert ray_distance(A, 7.5 * A) < 1e-15


@settings(max_examples=50)
@given(arrays(float, (3, 3), elements=st.floats(0.01, 10)), st.floats(0.1, 100))
def test_ray_distance_is_scale_invariant(A, c):
    assert ray_distance(A, c * A) < 1e-12
