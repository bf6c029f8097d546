"""Lattice and permutation structure of minimal projections.

Given a ball approximation, this module extracts the disjoint positive
basis on which the semigroup acts by scaled permutations, the common
eigenvector and eigenfunctional, the block decomposition, and runs a
battery of consequences of that structure.  Single operators and commuting
pairs have dedicated front ends.
"""

from dataclasses import dataclass, field
from enum import Enum
from math import factorial
import math

import numpy as np
import scipy.linalg

from .errors import InputError, ReducibleError, StructureError
from .irreducibility import is_ideal_irreducible
from .lattice_core import (
    as_matrices,
    as_matrix,
    disjoint,
    frobenius,
    ideal_closure,
)
from .semigroup import (
    FLANK_RTOL,
    generate_ball,
    range_angle,
    range_basis,
)
from .spectral import (
    cluster_eigenvalues,
    eigenvalues,
    peripheral_spectrum,
    peripheral_split,
    period,
    spectral_radius,
)

ATOM_TOL = 1e-8
RANGE_TOL = 1e-6
ENTRY_RTOL = 1e-8
PERM_RTOL = 1e-6
COMMUTE_RTOL = 1e-9


@dataclass(frozen=True)
class RangeLattice:
    """Positive basis ``x`` (columns) of range(P) with ``P = x @ xstar``."""

    P: np.ndarray
    x: np.ndarray
    xstar: np.ndarray

    @property
    def r(self):
        return self.x.shape[1]


def _is_atom(c, cands, P, tol):
    for d in cands:
        m = P @ np.minimum(c, d)
        mn = np.abs(m).max()
        if mn <= tol:
            continue
        coef = float(m @ c) / float(c @ c)
        if np.abs(m - coef * c).max() > tol * max(1.0, mn):
            return False
    return True


def range_lattice(P, rank=None, tol=ATOM_TOL):
    """Atoms of the lattice range(P) with the order ``x <=* y``.

    The positive cone of range(P) is P(R^n_+), a simplicial cone spanned by
    the columns of P; its extreme rays are the atoms.  A column c is an atom
    exactly when every *-meet ``P(c ^ d)`` with another column d is zero or a
    multiple of c.  Atoms are normalised to unit sup-norm and ordered by
    their first support coordinate.
    """
    P = np.asarray(getattr(P, "P", P), dtype=float)
    n = P.shape[0]
    if rank is None:
        rank = range_basis(P).shape[1]
    if rank < 1:
        raise StructureError("range_lattice needs a nonzero projection")
    if P.min() < -tol * max(1.0, np.abs(P).max()):
        raise StructureError("range not numerically a lattice: projection has negative entries")
    P = np.where(P < 0, 0.0, P)
    cols = []
    for j in range(n):
        c = P[:, j]
        m = c.max()
        if m > tol:
            c = c / m
            if not any(np.abs(c - d).max() <= tol for d in cols):
                cols.append(c)
    atoms = [c for c in cols if _is_atom(c, cols, P, tol)]
    if len(atoms) != rank:
        raise StructureError(
            f"range not numerically a lattice: found {len(atoms)} atoms for rank {rank}"
        )
    atoms.sort(key=lambda c: (int(np.flatnonzero(c > tol)[0]), -float(c.sum())))
    x = np.column_stack(atoms)
    xstar = np.linalg.lstsq(x, P, rcond=None)[0]
    scale = max(1.0, np.abs(xstar).max())
    if xstar.min() < -1e-7 * scale:
        raise StructureError("range not numerically a lattice: dual functionals not positive")
    xstar = np.where(xstar < 0, 0.0, xstar)
    if frobenius(P - x @ xstar) > 1e-7 * frobenius(P):
        raise StructureError("range not numerically a lattice: P != sum x_i* (x) x_i")
    return RangeLattice(P=P, x=x, xstar=xstar)


class Diagnosis(str, Enum):
    DISTINCT_RANGES = "DistinctRanges"
    SAME_RANGE_MULTIPLE = "SameRangeMultiple"
    UNIQUE_PROJECTION = "UniqueProjection"

    def __str__(self):
        return self.value


@dataclass
class SameRangeDiagnosis:
    kind: Diagnosis
    projections: list
    evidence: dict = field(default_factory=dict)


def _range_invariant(P, mats, tol=FLANK_RTOL):
    """``S P = P S P`` for every S, i.e. S(range P) is inside range P."""
    return all(
        frobenius(S @ P - P @ S @ P) <= tol * max(frobenius(S @ P), 1e-300) or frobenius(S @ P) == 0
        for S in mats
    )


def same_range_diagnosis(approx, range_tol=RANGE_TOL):
    """Classify the minimal projections: distinct ranges, a common range, or one."""
    projs = approx.projections
    mats = [e.matrix for e in approx.elements]
    m = len(projs)
    angles = {}
    for a in range(m):
        for b in range(a + 1, m):
            angles[(a, b)] = range_angle(projs[a].P, projs[b].P, projs[a].rank)
    same = all(t <= range_tol for t in angles.values())
    ref = projs[0].P
    sr_angles = [range_angle(approx.elements[i].matrix, ref, projs[0].rank) for i in approx.S_r]
    invariant = [_range_invariant(p.P, mats) for p in projs]
    evidence = {
        "n_projections": m,
        "max_range_angle": max(angles.values(), default=0.0),
        "minimal_rank_rays_share_range": all(t <= range_tol for t in sr_angles),
        "some_range_invariant": any(invariant),
        "range_invariant": invariant,
    }
    evidence["equivalent_conditions_agree"] = (
        same == evidence["minimal_rank_rays_share_range"] == evidence["some_range_invariant"]
    )
    if not same:
        kind = Diagnosis.DISTINCT_RANGES
    elif m == 1:
        kind = Diagnosis.UNIQUE_PROJECTION
        P = projs[0].P
        comm = max(frobenius(P @ S - S @ P) for S in mats)
        evidence["max_commutator"] = comm
        evidence["commutes_with_all"] = comm <= 1e-7
    else:
        kind = Diagnosis.SAME_RANGE_MULTIPLE
    return SameRangeDiagnosis(kind, projs, evidence)


def _perm_matrix(pi):
    r = len(pi)
    M = np.zeros((r, r))
    M[list(pi), list(range(r))] = 1.0
    return M


def compose(p, q):
    """``(p o q)(i) = p[q[i]]``."""
    return tuple(p[i] for i in q)


def perm_order(p):
    k, q = 1, tuple(p)
    ident = tuple(range(len(p)))
    while q != ident:
        q = compose(p, q)
        k += 1
    return k


@dataclass(frozen=True)
class Action:
    c: float
    pi: tuple
    residual: float


@dataclass
class PermutationStructure:
    """Disjoint positive basis on which every element is ``c_S`` times ``pi_S``.

    ``x[:, i]`` and ``xstar[i]`` are the rescaled basis vectors and their
    biorthogonal functionals; ``table[e]`` is the :class:`Action` of ball
    element ``e``.
    """

    projection: object
    x: np.ndarray
    xstar: np.ndarray
    mu: np.ndarray
    table: list
    diagnosis: Diagnosis
    chosen: list = field(default_factory=list)

    @property
    def r(self):
        return self.x.shape[1]

    @property
    def G(self):
        return sorted({a.pi for a in self.table})

    @property
    def x0(self):
        return self.x.sum(axis=1)

    @property
    def x0star(self):
        return self.xstar.sum(axis=0)

    def compression(self, S):
        return self.xstar @ S @ self.x

    def act(self, S):
        """(c, pi) with ``S x_i = c x_{pi(i)}``, read off the compression."""
        return _read_action(self.compression(np.asarray(S, dtype=float)), S, self.x)

    def transitive(self):
        r = self.r
        reach = np.zeros((r, r), dtype=bool)
        for pi in self.G:
            reach[list(pi), list(range(r))] = True
        return bool(reach.all())


def _read_action(C, S, x):
    r = C.shape[0]
    mx = np.abs(C).max()
    if mx == 0:
        raise StructureError("element annihilates the common range")
    big = np.abs(C) > ENTRY_RTOL * mx
    if not (big.sum(axis=0) == 1).all() or not (big.sum(axis=1) == 1).all():
        raise StructureError("not a weighted permutation (tolerance breach)")
    pi = tuple(int(np.flatnonzero(big[:, i])[0]) for i in range(r))
    c = spectral_radius(C)
    res = 0.0
    for i in range(r):
        target = c * x[:, pi[i]]
        res = max(res, np.linalg.norm(S @ x[:, i] - target) / max(np.linalg.norm(target), 1e-300))
    return Action(c, pi, float(res))


def permutation_structure(approx, P=None, diagnosis=None):
    """Rescaled disjoint basis and the (c_S, pi_S) table of every ball ray."""
    diagnosis = diagnosis or same_range_diagnosis(approx)
    if diagnosis.kind is Diagnosis.DISTINCT_RANGES:
        raise StructureError("no global permutation structure: minimal projections have distinct ranges")
    rec = P if P is not None else diagnosis.projections[0]
    lat = range_lattice(rec.P, rec.rank)
    x, xstar = lat.x, lat.xstar
    r = lat.r
    comps = [xstar @ e.matrix @ x for e in approx.elements]
    mu = np.ones(r)
    chosen = [None] * r
    for i in range(1, r):
        for idx, C in enumerate(comps):
            if C[i, 0] > ENTRY_RTOL * max(np.abs(C).max(), 1e-300):
                mu[i] = C[i, 0] / spectral_radius(C)
                chosen[i] = idx
                break
        else:
            raise StructureError(f"no ball element maps x_0 onto x_{i}; increase L")
    x = x * mu
    xstar = xstar / mu[:, None]
    table = [_read_action(xstar @ e.matrix @ x, e.matrix, x) for e in approx.elements]
    return PermutationStructure(rec, x, xstar, mu, table, diagnosis.kind, chosen)


@dataclass
class CommonEigenvector:
    x0: np.ndarray
    scalars: list
    residuals: list
    fixed_space_dim: int
    quasi_interior: bool
    x0star: np.ndarray | None = None
    dual_residuals: list | None = None
    dual_refused: str | None = None


def fixed_space_dim(perms, r):
    if not perms:
        return r
    M = np.vstack([_perm_matrix(p) - np.eye(r) for p in perms])
    s = np.linalg.svd(M, compute_uv=False)
    return int(r - np.count_nonzero(s > 1e-10))


def common_eigenvector(ps, approx):
    """``x0 = sum x_i`` with ``S x0 = c_S x0``; dual only for a unique projection."""
    x0 = ps.x0
    mats = [e.matrix for e in approx.elements]
    scalars = [a.c for a in ps.table]
    res = [
        float(np.linalg.norm(S @ x0 - c * x0) / (c * np.linalg.norm(x0)))
        for S, c in zip(mats, scalars)
    ]
    out = CommonEigenvector(
        x0=x0, scalars=scalars, residuals=res,
        fixed_space_dim=fixed_space_dim(ps.G, ps.r),
        quasi_interior=bool(np.all(x0 > 0)),
    )
    if ps.diagnosis is Diagnosis.UNIQUE_PROJECTION:
        xs = ps.x0star
        out.x0star = xs
        out.dual_residuals = [
            float(np.linalg.norm(S.T @ xs - c * xs) / (c * np.linalg.norm(xs)))
            for S, c in zip(mats, scalars)
        ]
    else:
        out.dual_refused = (
            "dual common eigenfunctional requires a unique minimal projection; "
            "with several projections sharing one range the adjoint semigroup "
            "may have none"
        )
    return out


def _null_space(M, tol):
    _, s, Vh = np.linalg.svd(M)
    rank = int(np.count_nonzero(s > tol * max(s[0], 1.0))) if s.size else 0
    return Vh[rank:].conj().T


def _intersect(A, B, tol=1e-8):
    if A.shape[1] == 0 or B.shape[1] == 0:
        return A[:, :0]
    N = _null_space(np.hstack([A, -B]), tol)
    if N.shape[1] == 0:
        return A[:, :0]
    V = A @ N[: A.shape[1]]
    Q, s, _ = np.linalg.svd(V, full_matrices=False)
    return Q[:, s > tol * max(s.max(), 1e-300)]


def nonzero_eigenspaces(S, tol=1e-8):
    """Eigenspaces (complex bases) of S for its nonzero eigenvalues."""
    S = np.asarray(S, dtype=float)
    n = S.shape[0]
    centres, _ = cluster_eigenvalues(eigenvalues(S))
    scale = max(np.abs(centres).max(), 1e-300)
    out = []
    for lam in centres:
        if abs(lam) <= 1e-9 * scale:
            continue
        E = _null_space(S - lam * np.eye(n), 1e-7)
        if E.shape[1]:
            out.append(E)
    return out


def common_eigenspace_dimension(mats):
    """Largest dimension of a subspace of common eigenvectors with nonzero eigenvalues.

    Every vector of the subspace is an eigenvector of every matrix with a
    nonzero eigenvalue (one eigenvalue per matrix).
    """
    mats = [np.asarray(S, dtype=float) for S in mats]
    cands = nonzero_eigenspaces(mats[0])
    for S in mats[1:]:
        spaces = nonzero_eigenspaces(S)
        nxt = []
        for C in cands:
            for E in spaces:
                V = _intersect(C, E)
                if V.shape[1]:
                    nxt.append(V)
        cands = nxt
        if not cands:
            return 0
    return max((C.shape[1] for C in cands), default=0)


@dataclass
class BlockDecomposition:
    blocks: list
    patterns: list
    matches: list

    @property
    def all_match(self):
        return all(self.matches)


def block_decomposition(ps, approx, tol=1e-9):
    """Coordinate blocks ``supp(x_i)`` and each element's block pattern."""
    n = ps.x.shape[0]
    blocks = []
    for i in range(ps.r):
        xi = ps.x[:, i]
        blocks.append(ideal_closure([xi], n, tol * np.abs(xi).max()).indices)
    seen = set()
    for b in blocks:
        if seen & set(b):
            raise StructureError("disjointness violated: blocks overlap")
        seen |= set(b)
    if len(seen) != n:
        raise StructureError(f"blocks do not exhaust the coordinates: {sorted(set(range(n)) - seen)} uncovered")
    patterns, matches = [], []
    for e, a in zip(approx.elements, ps.table):
        S = e.matrix
        scale = np.abs(S).max()
        pat = np.zeros((ps.r, ps.r), dtype=bool)
        for i, bi in enumerate(blocks):
            for j, bj in enumerate(blocks):
                pat[j, i] = np.abs(S[np.ix_(bj, bi)]).max() > tol * scale
        patterns.append(pat)
        matches.append(bool((pat == (_perm_matrix(a.pi) > 0)).all()))
    return BlockDecomposition(blocks, patterns, matches)


@dataclass
class Check:
    name: str
    status: str
    statement: str
    evidence: dict = field(default_factory=dict)


@dataclass
class StructureVerificationReport:
    checks: list

    @property
    def failed(self):
        return [c for c in self.checks if c.status == "fail"]

    @property
    def passed(self):
        return not self.failed

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def local_radius_sequence(S, x, N):
    """``||S^n x||^(1/n)`` for n = 1..N, with log accumulation against overflow."""
    v = np.asarray(x, dtype=float)
    logn = 0.0
    seq = np.empty(N)
    for n in range(1, N + 1):
        v = S @ v
        nrm = np.linalg.norm(v)
        if nrm == 0.0:
            seq[n - 1:] = 0.0
            return seq
        logn += math.log(nrm)
        v = v / nrm
        seq[n - 1] = math.exp(logn / n)
    return seq


def _positive_samples(rng, n, k):
    """Entries uniform on (0, 1], rescaled to unit sup-norm.

    The rescaling drops the factor ||x||^(1/N) that otherwise dominates the
    finite-horizon error for short vectors.
    """
    x = 1.0 - rng.random((k, n))
    return x / x.max(axis=1, keepdims=True)


def verify_structure_theorems(approx, ps, N=200, delta=0.01, samples=10, seed=0,
                              pair_cap=None, radius_cap=25):
    """Run the structure consequences; every check reports pass/fail/skipped/n/a."""
    rng = np.random.default_rng(seed)
    elems = approx.elements
    mats = [e.matrix for e in elems]
    table = ps.table
    r = ps.r
    unique = ps.diagnosis is Diagnosis.UNIQUE_PROJECTION
    checks = []

    worst = max((a.residual for a in table), default=0.0)
    checks.append(Check(
        "scaled_permutation", "pass" if worst <= PERM_RTOL else "fail",
        "every element maps x_i to c_S x_pi(i)",
        {"max_relative_residual": worst},
    ))
    checks.append(Check(
        "transitive_group", "pass" if ps.transitive() else "fail",
        "the permutations pi_S act transitively on the basis",
        {"group_order": len(ps.G)},
    ))
    dis = all(disjoint(ps.x[:, i], ps.x[:, j], 1e-9) for i in range(r) for j in range(i + 1, r))
    dis_star = all(disjoint(ps.xstar[i], ps.xstar[j], 1e-9) for i in range(r) for j in range(i + 1, r))
    checks.append(Check(
        "disjoint_basis", "pass" if dis and dis_star else "fail",
        "x_1..x_r are pairwise disjoint, and so are x_1*..x_r*",
        {"vectors": dis, "functionals": dis_star},
    ))

    bad = [
        (i, a.c, e.r) for i, (a, e) in enumerate(zip(table, elems))
        if abs(a.c - e.r) > PERM_RTOL * max(a.c, e.r)
    ]
    checks.append(Check(
        "radius_on_range", "pass" if not bad else "fail",
        "r(S restricted to the common range) equals r(S)",
        {"violations": bad[:5], "checked": len(elems)},
    ))

    idx = list(range(len(mats))) if pair_cap is None else list(range(min(pair_cap, len(mats))))
    radii = np.array([elems[i].r for i in idx])
    worst_mult, worst_law, law_fail = 0.0, 0.0, []
    for a in idx:
        prods = np.array([mats[a] @ mats[b] for b in idx])
        rp = np.abs(np.linalg.eigvals(prods)).max(axis=1)
        rel = np.abs(rp - radii[a] * radii) / np.maximum(rp, 1e-300)
        worst_mult = max(worst_mult, float(rel.max()))
        for bi, b in enumerate(idx):
            act = ps.act(prods[bi])
            c_expect = table[a].c * table[b].c
            err = abs(act.c - c_expect) / c_expect
            worst_law = max(worst_law, err)
            if act.pi != compose(table[a].pi, table[b].pi) or err > PERM_RTOL:
                law_fail.append((a, b))
    checks.append(Check(
        "radius_multiplicative", "pass" if worst_mult <= PERM_RTOL else "fail",
        "r(ST) = r(S) r(T) on the semigroup",
        {"max_relative_error": worst_mult, "pairs": len(idx) ** 2},
    ))
    checks.append(Check(
        "group_law", "pass" if not law_fail else "fail",
        "pi_ST = pi_S o pi_T and c_ST = c_S c_T",
        {"failures": law_fail[:5], "max_relative_error": worst_law, "pairs": len(idx) ** 2},
    ))

    m = factorial(r) if r <= 8 else None
    bad = []
    for i, (S, a) in enumerate(zip(mats, table)):
        w = eigenvalues(S / a.c)
        on_circle = int(np.count_nonzero(np.abs(np.abs(w) - 1.0) <= 1e-6))
        wy = eigenvalues(ps.compression(S) / a.c)
        mm = m if m is not None else perm_order(a.pi)
        roots = bool(np.all(np.abs(wy ** mm - 1.0) <= 1e-6))
        if on_circle < r or not roots:
            bad.append((i, on_circle, roots))
    checks.append(Check(
        "peripheral_roots_of_unity", "pass" if not bad else "fail",
        f"S / c_S has >= r unimodular eigenvalues; those on the range satisfy lambda^{m or 'ord(pi)'} = 1",
        {"violations": bad[:5], "exponent": m if m is not None else "order of pi_S"},
    ))

    n = approx.n
    xs = _positive_samples(rng, n, samples)
    xss = _positive_samples(rng, n, samples)
    worst_p, worst_d = np.inf, np.inf
    for i in range(min(radius_cap, len(mats))):
        c = table[i].c
        for x, xd in zip(xs, xss):
            worst_p = min(worst_p, local_radius_sequence(mats[i], x, N)[-1] / c)
            worst_d = min(worst_d, local_radius_sequence(mats[i].T, xd, N)[-1] / c)
    if unique:
        checks.append(Check(
            "local_radius_primal", "pass" if worst_p >= 1 - delta else "fail",
            f"||S^n x||^(1/n) >= c_S (1 - {delta}) at n = {N} for sampled x > 0",
            {"min_ratio": float(worst_p), "N": N, "samples": samples},
        ))
    else:
        checks.append(Check(
            "local_radius_primal", "n/a",
            f"||S^n x||^(1/n) >= c_S (1 - {delta}) at n = {N} for sampled x > 0",
            {"min_ratio": float(worst_p), "N": N, "samples": samples,
             "note": "the primal bound is asserted only with a unique minimal projection"},
        ))
    checks.append(Check(
        "local_radius_dual", "pass" if worst_d >= 1 - delta else "fail",
        f"||S*^n x*||^(1/n) >= c_S (1 - {delta}) at n = {N} for sampled x* > 0",
        {"min_ratio": float(worst_d), "N": N, "samples": samples},
    ))

    expanding = {}
    for k, p in enumerate(approx.projections):
        cols = [j for j in range(n) if not np.all(p.P[:, j] > 1e-12)]
        zero = [j for j in range(n) if np.abs(p.P[:, j]).max() <= 1e-12]
        expanding[f"P{k}"] = {"not_quasi_interior_images": cols, "zero_images": zero}
    if unique:
        strongly = not expanding["P0"]["not_quasi_interior_images"]
        status = "pass" if strongly == (r == 1) else "fail"
        note = ""
    else:
        status = "n/a"
        note = ("applies only with a unique minimal projection; with several "
                "projections sharing a range they need not be strictly positive")
    checks.append(Check(
        "strongly_expanding_iff_rank_one", status,
        "the minimal projection is strongly expanding iff r = 1",
        {"r": r, "projections": expanding, "note": note},
    ))

    if unique:
        worst = 0.0
        for S, a in zip(mats, table):
            inv = np.argsort(a.pi)
            for i in range(r):
                target = a.c * ps.xstar[inv[i]]
                worst = max(worst, np.linalg.norm(S.T @ ps.xstar[i] - target) / np.linalg.norm(target))
        checks.append(Check(
            "dual_permutation", "pass" if worst <= PERM_RTOL else "fail",
            "S* maps x_i* to c_S x*_{pi_S^-1(i)}",
            {"max_relative_residual": float(worst)},
        ))
    else:
        checks.append(Check(
            "dual_permutation", "n/a", "S* maps x_i* to c_S x*_{pi_S^-1(i)}",
            {"note": "applies only with a unique minimal projection"},
        ))

    if unique:
        bad, skipped = [], 0
        for i, S in enumerate(mats):
            w, V = scipy.linalg.eig(S)
            rr = np.abs(w).max()
            near = np.flatnonzero(np.abs(w - rr) <= 1e-6 * rr)
            if near.size != 1 or np.sum(np.abs(w - w[near[0]]) <= 1e-6 * rr) != 1:
                skipped += 1
                continue
            v = np.abs(V[:, near[0]].real)
            if np.linalg.norm(S @ v - rr * v) > 1e-6 * rr * np.linalg.norm(v):
                bad.append(i)
        status = "fail" if bad else ("skipped" if skipped == len(mats) else "pass")
        checks.append(Check(
            "eigenspace_sublattice", status,
            "the eigenspace of r(S) is closed under |.|",
            {"violations": bad[:5], "skipped_clustered": skipped},
        ))
    else:
        checks.append(Check(
            "eigenspace_sublattice", "n/a",
            "the eigenspace of r(S) is closed under |.|",
            {"note": "applies only with a unique minimal projection"},
        ))
    return StructureVerificationReport(checks)


@dataclass
class SingleOperatorReport:
    """Cyclic structure of one irreducible nonnegative operator.

    ``x[:, i]`` is mapped by T onto ``r_T x[:, sigma[i]]``, sigma a full cycle.
    ``asymptotic[k]`` is the ray of ``P (T / r_T)^k``.
    """

    T: np.ndarray
    r_T: float
    r: int
    x: np.ndarray
    sigma: tuple
    sigma_per: np.ndarray
    P: np.ndarray
    asymptotic: list
    r_period: int
    r_minrank: int
    r_multiplicity: int
    residual: float
    disjoint: bool

    @property
    def radii_agree(self):
        return self.r_period == self.r_minrank == self.r_multiplicity


def analyze_single(T, L=None, ball=True):
    """Perron-Frobenius cyclic structure of an irreducible nonnegative T."""
    T = as_matrix(T, "T")
    n = T.shape[0]
    rep = is_ideal_irreducible([T], certify=False)
    if not rep.irreducible:
        raise ReducibleError("analyze_single needs an irreducible operator", witness=rep.witness)
    h = period(T)
    split = peripheral_split(T)
    rT = split.r
    lat = range_lattice(split.P, split.rank)
    C = lat.xstar @ T @ lat.x
    act = _read_action(C, T, lat.x)
    order = [0]
    while len(order) < lat.r:
        nxt = act.pi[order[-1]]
        if nxt == 0:
            cyc = [int(i) for i in order]
            J = ideal_closure([lat.x[:, i] for i in cyc], n, 1e-9)
            invariant = bool(np.all(np.abs(T[np.ix_(~J.mask(), J.mask())]) <= 1e-12))
            raise StructureError(
                f"sub-cycle of length {len(cyc)} < {lat.r}; witness ideal {J.indices} "
                f"{'is' if invariant else 'is not'} T-invariant"
            )
        order.append(nxt)
    y = [lat.x[:, 0] / np.abs(lat.x[:, 0]).max()]
    for _ in range(lat.r - 1):
        y.append(T @ y[-1] / rT)
    x = np.column_stack(y)
    r = lat.r
    sigma = tuple((i + 1) % r for i in range(r))
    res = max(
        np.linalg.norm(T @ x[:, i] - rT * x[:, sigma[i]]) / (rT * np.linalg.norm(x[:, sigma[i]]))
        for i in range(r)
    )
    dis = all(disjoint(x[:, i], x[:, j], 1e-9) for i in range(r) for j in range(i + 1, r))
    asym = []
    M = split.P.copy()
    for _ in range(r):
        asym.append(M / frobenius(M))
        M = M @ T / rT
    if ball:
        approx = generate_ball([T], L if L is not None else n * n, names=["T"])
        r_min = int(approx.minrank)
    else:
        r_min = -1
    return SingleOperatorReport(
        T=T, r_T=rT, r=r, x=x, sigma=sigma,
        sigma_per=peripheral_spectrum(T).eigenvalues,
        P=split.P, asymptotic=asym, r_period=h, r_minrank=r_min,
        r_multiplicity=len(peripheral_spectrum(T)), residual=float(res), disjoint=dis,
    )


@dataclass
class PairReport:
    S: np.ndarray
    K: np.ndarray
    lam: float
    rK: float
    x0: np.ndarray
    x0star: np.ndarray
    residuals: dict
    local_radius: dict
    final_ratios: dict

    @property
    def strictly_positive(self):
        return bool(np.all(self.x0 > 0) and np.all(self.x0star > 0))


def analyze_commuting_pair(S, K, N=200, samples=10, seed=0, L=3):
    """Common eigenvector/eigenfunctional and local radii for commuting S, K."""
    S, K = as_matrices([S, K])
    if frobenius(S) == 0 or frobenius(K) == 0:
        raise InputError("S and K must be nonzero")
    if frobenius(S @ K - K @ S) > COMMUTE_RTOL * frobenius(S) * frobenius(K):
        raise InputError("S and K do not commute")
    if not (is_ideal_irreducible([S], certify=False) or is_ideal_irreducible([K], certify=False)):
        raise ReducibleError("at least one of S, K must be ideal irreducible")
    approx = generate_ball([S, K], L, names=["S", "K"])
    diag = same_range_diagnosis(approx)
    if diag.kind is not Diagnosis.UNIQUE_PROJECTION:
        raise StructureError(f"commuting pair gave {diag.kind}; expected a unique minimal projection")
    ps = permutation_structure(approx, diagnosis=diag)
    lam = ps.act(S).c
    rK = spectral_radius(K)
    x0 = ps.x0 / np.linalg.norm(ps.x0)
    xs = ps.x0star / np.linalg.norm(ps.x0star)
    residuals = {
        "S x0 = lam x0": float(np.linalg.norm(S @ x0 - lam * x0) / lam),
        "K x0 = r(K) x0": float(np.linalg.norm(K @ x0 - rK * x0) / rK),
        "S* x0* = lam x0*": float(np.linalg.norm(S.T @ xs - lam * xs) / lam),
        "K* x0* = r(K) x0*": float(np.linalg.norm(K.T @ xs - rK * xs) / rK),
    }
    rng = np.random.default_rng(seed)
    n = S.shape[0]
    seqs = {"K": [], "S": [], "K*": [], "S*": []}
    for x in _positive_samples(rng, n, samples):
        seqs["K"].append(local_radius_sequence(K, x, N))
        seqs["S"].append(local_radius_sequence(S, x, N))
    for x in _positive_samples(rng, n, samples):
        seqs["K*"].append(local_radius_sequence(K.T, x, N))
        seqs["S*"].append(local_radius_sequence(S.T, x, N))
    seqs = {k: np.array(v) for k, v in seqs.items()}
    final = {
        "K": seqs["K"][:, -1] / rK,
        "K*": seqs["K*"][:, -1] / rK,
        "S": seqs["S"][:, -1] / lam,
        "S*": seqs["S*"][:, -1] / lam,
    }
    return PairReport(S, K, float(lam), float(rK), x0, xs, residuals, seqs, final)
