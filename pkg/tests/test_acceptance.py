"""Acceptance criteria 1-10, each at its stated tolerance and runtime budget.

Every test prints one ``ACCEPTANCE <k> PASS|FAIL`` line (outside pytest's
capture) with its wall time, then re-raises any failure.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from irrsemigroup.cli import fixture_path, parse_matrix_set
from irrsemigroup.irreducibility import invariant_subset_masks, is_ideal_irreducible
from irrsemigroup.random_models import (
    random_circulant_pair,
    random_irreducible,
    random_polynomial_pair,
    random_sparse_family,
)
from irrsemigroup.semigroup import generate_ball, range_angle, right_ideal_analysis
from irrsemigroup.spectral import (
    classify_dichotomy,
    peripheral_spectrum,
    peripheral_split,
    period,
    perron_vectors,
)
from irrsemigroup.structure import (
    Diagnosis,
    analyze_commuting_pair,
    analyze_single,
    common_eigenspace_dimension,
    common_eigenvector,
    compose,
    permutation_structure,
    same_range_diagnosis,
    verify_structure_theorems,
)


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, budget):
        t0 = time.perf_counter()
        ok, err = True, None
        try:
            yield
        except BaseException as exc:  # report, then re-raise
            ok, err = False, exc
        elapsed = time.perf_counter() - t0
        if ok and elapsed >= budget:
            ok = False
            err = AssertionError(f"runtime {elapsed:.2f}s exceeds {budget}s")
        with capsys.disabled():
            tag = "PASS" if ok else "FAIL"
            print(f"\nACCEPTANCE {number:2d} {tag} ({elapsed:.2f}s / {budget}s) {title}")
        if err is not None:
            raise err

    return run


def _ray(M):
    return M / np.linalg.norm(M)


def _fixture(name):
    mats, _ = parse_matrix_set(fixture_path(name))
    return mats


def test_criterion_01_jordan_pair(criterion):
    with criterion(1, "A=I+E12, B=E21: minrank 1, rank-2 rays are powers of A", 2.0):
        A = np.array([[1.0, 1.0], [0.0, 1.0]])
        B = np.array([[0.0, 0.0], [1.0, 0.0]])
        assert is_ideal_irreducible([A, B]).irreducible
        ball = generate_ball([A, B], 12, names=["A", "B"])
        assert ball.minrank == 1
        powers = [_ray(np.linalg.matrix_power(A, k)) for k in range(1, 13)]
        rank2 = [e.matrix for e in ball.elements if e.rank == 2]
        assert rank2
        for R in rank2:
            assert min(np.linalg.norm(R - Q) for Q in powers) <= 1e-8
        assert ball.find(np.eye(2)) is None
        d = classify_dichotomy(A)
        assert d.kind == "nilpotent"
        assert np.linalg.norm(_ray(d.limit) - np.array([[0.0, 1.0], [0.0, 0.0]])) <= 1e-8


def test_criterion_02_distinct_ranges(criterion):
    with criterion(2, "two projections with different ranges, no common eigenvector", 1.0):
        ball = generate_ball(_fixture("ex_no_sr"), 6)
        projs = ball.projections
        assert len(projs) == 2 and all(p.rank == 1 for p in projs)
        assert range_angle(projs[0].P, projs[1].P) > 0.1
        assert same_range_diagnosis(ball).kind is Diagnosis.DISTINCT_RANGES
        assert common_eigenspace_dimension([e.matrix for e in ball.elements]) == 0


def test_criterion_03_same_range_two_projections(criterion):
    with criterion(3, "two projections, one range, x0=(1,1), dual refused", 1.0):
        P, Q = _fixture("ex_non_uniq_proj")
        ball = generate_ball([P, Q], 6)
        d = same_range_diagnosis(ball)
        assert d.kind is Diagnosis.SAME_RANGE_MULTIPLE and len(d.projections) == 2
        assert np.linalg.norm(d.projections[0].P - d.projections[1].P) > 0.1
        assert range_angle(d.projections[0].P, d.projections[1].P) <= 1e-8
        ps = permutation_structure(ball, diagnosis=d)
        ce = common_eigenvector(ps, ball)
        x0 = ce.x0 / ce.x0.max()
        assert np.allclose(x0, [1.0, 1.0], atol=1e-8)
        assert np.linalg.norm(P @ x0 - x0) <= 1e-8 and np.linalg.norm(Q @ x0 - x0) <= 1e-8
        assert ce.x0star is None and "unique minimal projection" in ce.dual_refused


def test_criterion_04_non_irreducible_projections(criterion):
    with criterion(4, "reducible P, Q generating an irreducible semigroup; P e2 = 0", 1.0):
        P, Q = _fixture("ex_non_irr_proj")
        wp = is_ideal_irreducible([P])
        wq = is_ideal_irreducible([Q])
        assert not wp.irreducible and not wq.irreducible
        assert wp.witness.indices == [1] and wq.witness.indices == [0]
        assert is_ideal_irreducible([P, Q]).irreducible
        ball = generate_ball([P, Q], 6)
        ri = right_ideal_analysis(ball)
        assert ri.unique_minimal
        ps = permutation_structure(ball)
        chk = verify_structure_theorems(ball, ps)["strongly_expanding_iff_rank_one"]
        key = next(f"P{k}" for k, p in enumerate(ball.projections) if np.allclose(p.P, P))
        assert 1 in chk.evidence["projections"][key]["zero_images"]


def test_criterion_05_perron_frobenius_battery(criterion):
    with criterion(5, "200 random irreducible matrices: period, projections, Perron vector", 20.0):
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(1, 9))
            A = random_irreducible(rng, n)
            h = period(A)
            ps = peripheral_spectrum(A)
            r = ps.r
            assert len(ps) == h
            roots = r * np.exp(2j * np.pi * np.arange(h) / h)
            for z in roots:
                assert np.abs(ps.eigenvalues - z).min() <= 1e-6 * r
            split = peripheral_split(A)
            assert split.route == "eigensolver"
            assert np.linalg.norm(split.P - split.P_combinatorial) <= 1e-6
            v, _ = perron_vectors(A)
            assert (v / v.sum()).min() > 1e-10


def test_criterion_06_single_operator_battery(criterion):
    with criterion(6, "100 random irreducible T: full cycle, three radii agree", 15.0):
        rng = np.random.default_rng(6)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            T = random_irreducible(rng, n)
            rep = analyze_single(T)
            r = rep.r
            cyc, i = [0], rep.sigma[0]
            while i != 0:
                cyc.append(i)
                i = rep.sigma[i]
            assert len(cyc) == r
            for i in range(r):
                target = rep.x[:, rep.sigma[i]]
                assert np.linalg.norm(T @ rep.x[:, i] - rep.r_T * target) <= 1e-6 * rep.r_T * np.linalg.norm(target)
            assert rep.disjoint
            assert rep.r_period == rep.r_minrank == rep.r_multiplicity


def test_criterion_07_permutation_structure_battery(criterion):
    with criterion(7, "circulant pairs: scaled permutations and group law", 10.0):
        rng = np.random.default_rng(7)
        for t in range(40):
            n = int(rng.integers(2, 7))
            S, K = random_circulant_pair(rng, n, imprimitive=bool(t % 2))
            ball = generate_ball([S, K], 4)
            ps = permutation_structure(ball)
            for e, a in zip(ball.elements, ps.table):
                for i in range(ps.r):
                    target = ps.x[:, a.pi[i]]
                    assert np.linalg.norm(e.matrix @ ps.x[:, i] - a.c * target) <= 1e-6 * a.c * np.linalg.norm(target)
            mats = [e.matrix for e in ball.elements]
            for i, U in enumerate(mats):
                for j, V in enumerate(mats):
                    a = ps.act(U @ V)
                    assert a.pi == compose(ps.table[i].pi, ps.table[j].pi)
                    assert abs(a.c - ps.table[i].c * ps.table[j].c) <= 1e-6 * a.c


def test_criterion_08_commuting_pair_battery(criterion):
    with criterion(8, "50 commuting pairs: eigen-identities and local radii at n=200", 20.0):
        rng = np.random.default_rng(8)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            S, K = random_polynomial_pair(rng, n)
            rep = analyze_commuting_pair(S, K, N=200, samples=10, seed=int(rng.integers(2**31)))
            assert max(rep.residuals.values()) <= 1e-6
            assert rep.strictly_positive
            assert np.all(np.abs(rep.final_ratios["K"] - 1) <= 0.01)
            assert np.all(np.abs(rep.final_ratios["K*"] - 1) <= 0.01)


def test_criterion_09_irreducibility_oracle(criterion):
    with criterion(9, "SCC verdict equals exhaustive subset search, n <= 10", 10.0):
        rng = np.random.default_rng(9)
        for n in range(1, 11):
            for _ in range(100):
                gens = random_sparse_family(rng, n)
                exhaustive = invariant_subset_masks(gens).size == 0
                assert is_ideal_irreducible(gens, certify=False).irreducible == exhaustive


def test_criterion_10_right_ideal_equivalence(criterion):
    with criterion(10, "four fixture balls: the four right-ideal conditions agree", 2.0):
        expected = {"ex_2_min_proj": False, "ex_no_sr": False, "ex_non_uniq_proj": True, "ex_non_irr_proj": True}
        for name, value in expected.items():
            rep = right_ideal_analysis(generate_ball(_fixture(name), 6))
            assert set(rep.conditions.values()) == {value}, (name, rep.conditions)
