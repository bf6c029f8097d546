"""Spectral data of a single matrix.

Eigenvalues come from LAPACK (Hessenberg QR).  Because a Jordan block of size
m smears its eigenvalue over a radius of order eps**(1/m), raw eigenvalues
are first grouped into clusters and every cluster is represented by its mean,
which is accurate to working precision.

The peripheral spectral projection is obtained from an ordered real Schur
form ``A = Z R Z^T`` with the peripheral eigenvalues leading: if
``R = [[R11, R12], [0, R22]]`` then ``[[I, Y], [0, 0]]`` with
``R11 Y - Y R22 = R12`` is the projection commuting with ``R``.

For irreducible nonnegative matrices a second route exists: the period h,
the cyclic classes, and the Perron projections of the diagonal blocks of
``A^h``.  The two are cross-checked; the combinatorial one wins on
disagreement.
"""

from dataclasses import dataclass, field
from math import comb, gcd

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceError,
    InputError,
    QuasinilpotentError,
    ReducibleError,
    ReturnHorizonExceeded,
    SpectralSeparationError,
)
from .lattice_core import as_matrix, frobenius

TOL_PER = 1e-8
TOL_GAP = 1e-6
TOL_CLUSTER = 1e-5
TOL_NIL = 1e-8
EPS_RET = 1e-6
TOL_LIMIT = 1e-5
M_MAX = 10**6
AGREE_TOL = 1e-6


def eigenvalues(A):
    """All eigenvalues of ``A`` (complex, with multiplicity)."""
    A = np.asarray(A, dtype=float)
    try:
        return scipy.linalg.eigvals(A, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceError(f"eigensolver failed: {exc}") from None


def cluster_eigenvalues(w, tol=TOL_CLUSTER):
    """Single-linkage clusters of radius ``tol * max|w|``.

    Returns ``(centres, members)`` with ``members[c]`` the indices into ``w``.
    """
    w = np.asarray(w, dtype=complex)
    scale = np.abs(w).max(initial=0.0)
    radius = tol * scale if scale > 0 else 0.0
    parent = list(range(w.size))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(w.size):
        close = np.flatnonzero(np.abs(w[i + 1:] - w[i]) <= radius) + i + 1
        for j in close:
            ri, rj = find(i), find(int(j))
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(w.size):
        groups.setdefault(find(i), []).append(i)
    members = [np.array(g) for g in groups.values()]
    centres = np.array([w[g].mean() for g in members], dtype=complex)
    return centres, members


def spectral_radius(A):
    """Largest eigenvalue modulus (cluster means, so defective roots are exact)."""
    A = as_matrix(A, nonnegative=False)
    centres, _ = cluster_eigenvalues(eigenvalues(A))
    return float(np.abs(centres).max())


@dataclass(frozen=True)
class PeripheralSpectrum:
    r: float
    eigenvalues: np.ndarray
    quasinilpotent: bool = False

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)


def _peripheral_partition(w, tol_per):
    centres, members = cluster_eigenvalues(w)
    mods = np.abs(centres)
    r = float(mods.max())
    per = mods >= r * (1.0 - tol_per)
    return r, centres, members, per


def peripheral_spectrum(A, tol_per=TOL_PER):
    """Eigenvalues of modulus r(A), listed with algebraic multiplicity.

    Returns ``{0}`` flagged ``quasinilpotent`` when r(A) = 0.
    """
    A = as_matrix(A, nonnegative=False)
    w = eigenvalues(A)
    r, centres, members, per = _peripheral_partition(w, tol_per)
    if r == 0.0:
        return PeripheralSpectrum(0.0, np.zeros(1, dtype=complex), True)
    vals = np.concatenate([np.full(len(members[c]), centres[c]) for c in np.flatnonzero(per)])
    order = np.lexsort((np.angle(vals) % (2 * np.pi),))
    return PeripheralSpectrum(r, vals[order])


@dataclass(frozen=True)
class PeripheralData:
    """Peripheral splitting ``X = X1 + X2`` of a matrix with r > 0.

    ``X1_basis`` is an orthonormal basis (columns) of the peripheral
    subspace X1 = range(P); X2 = ker(P).  ``T1`` is the matrix of A|X1 in that
    basis and ``T1 / r = U + N`` with U unimodular, N nilpotent, UN = NU.
    ``k`` is the largest exponent with N^k != 0 (0 when N = 0).
    """

    r: float
    sigma_per: np.ndarray
    P: np.ndarray
    X1_basis: np.ndarray
    T1: np.ndarray
    U: np.ndarray
    N: np.ndarray
    k: int
    r_gap: float
    P_combinatorial: np.ndarray | None = field(default=None, repr=False)
    route: str = "eigensolver"

    @property
    def rank(self):
        return self.X1_basis.shape[1]

    def lift(self, M):
        """Extend a map on X1 (in ``X1_basis`` coordinates) by 0 on X2."""
        Z = self.X1_basis
        return Z @ M @ Z.T @ self.P

    @property
    def U_full(self):
        return self.lift(self.U)

    @property
    def N_full(self):
        return self.lift(self.N)


def _ordered_schur(A, threshold, expected):
    def select(re, im):
        return np.hypot(re, im) > threshold

    try:
        R, Z, sdim = scipy.linalg.schur(A, output="real", sort=select)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SpectralSeparationError(f"Schur reordering failed: {exc}") from None
    if sdim != expected:
        raise SpectralSeparationError(
            f"peripheral set not numerically separated: Schur selected {sdim}, expected {expected}"
        )
    return R, Z


def _projection_from_schur(R, Z, k):
    n = R.shape[0]
    if k == n:
        return np.eye(n)
    R11, R12, R22 = R[:k, :k], R[:k, k:], R[k:, k:]
    Y = scipy.linalg.solve_sylvester(R11, -R22, R12)
    PR = np.zeros((n, n))
    PR[:k, :k] = np.eye(k)
    PR[:k, k:] = Y
    return Z @ PR @ Z.T


def jordan_chevalley(M, tol_cluster=TOL_CLUSTER):
    """Split ``M = S + N`` with S diagonalisable, N nilpotent, SN = NS.

    Generalised eigenspaces come from null spaces of ``(M - mu I)^m`` for each
    eigenvalue cluster (mean mu, size m).
    """
    M = np.asarray(M, dtype=float)
    k = M.shape[0]
    if k == 0:
        return M.copy(), M.copy()
    centres, members = cluster_eigenvalues(eigenvalues(M), tol_cluster)
    blocks, diag = [], []
    for mu, idx in zip(centres, members):
        m = len(idx)
        B = np.linalg.matrix_power(M - mu * np.eye(k), m)
        _, _, Vh = np.linalg.svd(B)
        blocks.append(Vh[k - m:].conj().T)
        diag.extend([mu] * m)
    V = np.hstack(blocks)
    if np.linalg.cond(V) > 1e10:
        raise SpectralSeparationError("generalised eigenvectors numerically dependent")
    S = V @ np.diag(diag) @ np.linalg.inv(V)
    if np.abs(S.imag).max(initial=0.0) > 1e-8 * max(1.0, np.abs(S).max()):
        raise SpectralSeparationError("semisimple part is not real")
    S = S.real
    return S, M - S


def nilpotency_index(N, tol=TOL_NIL):
    """Largest k with ||N^k|| > tol * max(1, ||N||); 0 when N is negligible."""
    scale = max(1.0, frobenius(N))
    k, Nk = 0, np.eye(N.shape[0])
    while True:
        Nk = Nk @ N
        if frobenius(Nk) <= tol * scale or k >= N.shape[0]:
            return k
        k += 1


def peripheral_split(A, tol_per=TOL_PER, tol_gap=TOL_GAP):
    """Spectral projection onto the peripheral subspace and the U + N split."""
    A = as_matrix(A, nonnegative=False)
    n = A.shape[0]
    w = eigenvalues(A)
    r, centres, members, per = _peripheral_partition(w, tol_per)
    if r == 0.0:
        raise QuasinilpotentError("quasinilpotent: no peripheral splitting")
    per_idx = np.concatenate([members[c] for c in np.flatnonzero(per)])
    rest_idx = np.setdiff1d(np.arange(n), per_idx)
    k = per_idx.size
    r_gap = float(np.abs(centres[~per]).max(initial=0.0))
    raw_per_min = float(np.abs(w[per_idx]).min())
    raw_rest_max = float(np.abs(w[rest_idx]).max(initial=0.0))
    if rest_idx.size and raw_per_min - raw_rest_max < tol_gap * r:
        raise SpectralSeparationError(
            f"peripheral set not numerically separated (gap {raw_per_min - raw_rest_max:.3e}, r {r:.6g})"
        )
    sigma_per = np.concatenate([np.full(len(members[c]), centres[c]) for c in np.flatnonzero(per)])

    if rest_idx.size:
        R, Z = _ordered_schur(A, 0.5 * (raw_per_min + raw_rest_max), k)
        P = _projection_from_schur(R, Z, k)
        Z1 = Z[:, :k]
    else:
        P = np.eye(n)
        Z1 = np.eye(n)

    P_comb = None
    route = "eigensolver"
    scale = np.abs(A).max()
    ambiguous = np.any((A > 0) & (A <= 1e-12 * scale))
    if np.all(A >= 0) and not ambiguous and _is_irreducible_pattern(A):
        # roundoff-level entries would fake edges, so the pattern must be clean
        P_comb = combinatorial_projection(A)
        if frobenius(P - P_comb) > AGREE_TOL:
            P = P_comb
            route = "combinatorial"
            U_, s_, _ = np.linalg.svd(P)
            k = int(np.count_nonzero(s_ > 1e-8 * s_[0]))
            Z1 = U_[:, :k]

    T1 = Z1.T @ A @ Z1
    U, N = jordan_chevalley(T1 / r)
    kk = nilpotency_index(N)
    if kk == 0:
        N = np.zeros_like(N)
        U = T1 / r
    return PeripheralData(
        r=r, sigma_per=sigma_per, P=P, X1_basis=Z1, T1=T1, U=U, N=N, k=kk,
        r_gap=r_gap, P_combinatorial=P_comb, route=route,
    )


@dataclass(frozen=True)
class DichotomyResult:
    """Which of the two asymptotic regimes ``A / r(A)`` is in.

    ``kind == "unimodular"``: ``m_j`` is a return sequence with
    ``(A/r)^{m_j} -> P``.  ``kind == "nilpotent"``: ``c_j (A/r)^{r_j}`` tends to
    the square-zero ``limit = N^k + 0`` where ``r_j = m_j + k`` and
    ``c_j = 1 / C(r_j, k)``.  ``errors`` holds the distance to the limit at
    each reported index.
    """

    kind: str
    m_j: list
    errors: list
    k: int = 0
    limit: np.ndarray | None = None
    r_j: list = field(default_factory=list)
    c_j: list = field(default_factory=list)
    period: int | None = None
    truncated: bool = False


def _return_period(U, M_max, eps):
    """First m with U^m = I to within eps, and whether it is exact."""
    k = U.shape[0]
    I = np.eye(k)
    W = I.copy()
    best = (None, np.inf)
    for m in range(1, M_max + 1):
        W = W @ U
        err = frobenius(W - I)
        if err < best[1]:
            best = (m, err)
        if err < eps:
            return m, err, best
    return None, None, best


def classify_dichotomy(A, M_max=M_MAX, eps_ret=EPS_RET, n_hits=5, tol_limit=TOL_LIMIT):
    """Unimodular/nilpotent classification of ``A / r(A)`` on its peripheral part."""
    A = as_matrix(A, nonnegative=False)
    split = peripheral_split(A)
    r = split.r
    At = A / r
    m0, _, best = _return_period(split.U, M_max, min(eps_ret, 1e-9))
    exact = m0 is not None
    if not exact:
        m0, _, best = _return_period(split.U, M_max, eps_ret)
    if m0 is None:
        raise ReturnHorizonExceeded(
            f"return horizon exceeded: no m <= {M_max} with ||U^m - I|| < {eps_ret}",
            best_m=best[0], best_error=best[1],
        )

    if split.k == 0:
        I1 = np.eye(split.rank)
        hits, errs = [], []
        m = m0
        while len(hits) < n_hits:
            if m > M_max:
                raise ReturnHorizonExceeded(
                    f"return horizon exceeded: only {len(hits)} returns within {M_max}",
                    best_m=hits[-1] if hits else m0,
                )
            if exact or frobenius(np.linalg.matrix_power(split.U, m) - I1) < eps_ret:
                err = frobenius(np.linalg.matrix_power(At, m) - split.P)
                if err < eps_ret:
                    hits.append(m)
                    errs.append(err)
            m += m0 if exact else 1
        return DichotomyResult("unimodular", hits, errs, period=m0 if exact else None)

    k = split.k
    limit = split.lift(np.linalg.matrix_power(split.N, k))

    def error_at(m):
        rj = m + k
        return frobenius(np.linalg.matrix_power(At, rj) / comb(rj, k) - limit)

    if not exact:
        raise ReturnHorizonExceeded(
            "nilpotent regime with a non-periodic unimodular part is not supported",
            best_m=m0,
        )
    j = 1
    err = error_at(m0)
    while err >= tol_limit:
        j *= 2
        if j * m0 > M_max:
            raise ReturnHorizonExceeded(
                f"return horizon exceeded: limit error {err:.3e} at m={j // 2 * m0}",
                best_m=j // 2 * m0, best_error=err,
            )
        err = error_at(j * m0)
    js = [max(1, j >> s) for s in range(n_hits - 1, -1, -1)]
    js = sorted(set(js))
    m_j = [jj * m0 for jj in js]
    r_j = [m + k for m in m_j]
    c_j = [1.0 / comb(rj, k) for rj in r_j]
    errs = [error_at(m) for m in m_j]
    return DichotomyResult(
        "nilpotent", m_j, errs, k=k, limit=limit, r_j=r_j, c_j=c_j, period=m0,
    )


def _is_irreducible_pattern(A, tol=0.0):
    from .irreducibility import strong_components

    pattern = np.asarray(A) > tol
    if pattern.shape[0] == 1:
        return bool(pattern[0, 0])
    return strong_components(pattern)[0] == 1


def _levels(pattern):
    n = pattern.shape[0]
    level = np.full(n, -1)
    level[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in np.flatnonzero(pattern[:, u]):
                if level[v] < 0:
                    level[v] = level[u] + 1
                    nxt.append(int(v))
        frontier = nxt
    return level


def _require_irreducible(A):
    from .irreducibility import is_ideal_irreducible

    if not (np.asarray(A) >= 0).all():
        raise InputError("period needs a nonnegative matrix")
    if A.shape[0] == 1:
        if A[0, 0] <= 0:
            raise ReducibleError("period undefined for the zero 1x1 matrix")
        return
    rep = is_ideal_irreducible([A], tol=0.0, certify=False)
    if not rep.irreducible:
        raise ReducibleError("period undefined for reducible matrix", witness=rep.witness)


def period(A):
    """Imprimitivity index: gcd of closed-walk lengths of the positivity digraph."""
    return cyclic_classes(A)[0]


def cyclic_classes(A):
    """``(h, classes)``; class c+1 (mod h) receives every edge leaving class c."""
    A = as_matrix(A)
    _require_irreducible(A)
    pattern = A > 0
    level = _levels(pattern)
    h = 0
    for u, v in zip(*np.nonzero(pattern.T)):
        h = gcd(h, int(abs(level[u] + 1 - level[v])))
    h = max(h, 1) if pattern.any() else 1
    cls = level % h
    return h, [np.flatnonzero(cls == c).tolist() for c in range(h)]


def _perron_projection_by_squaring(B, max_iter=200):
    """Limit of normalised powers of a primitive matrix, scaled to trace 1."""
    if B.shape[0] == 1:
        return np.ones((1, 1))
    M = B / frobenius(B)
    for _ in range(max_iter):
        M2 = M @ M
        M2 /= frobenius(M2)
        if frobenius(M2 - M) < 1e-15:
            return M2 / np.trace(M2)
        M = M2
    raise ConvergenceError("repeated squaring did not converge (block not primitive?)")


def combinatorial_projection(A):
    """Peripheral projection of an irreducible nonnegative matrix.

    Block diagonal over the cyclic classes, each block the Perron projection
    of the corresponding diagonal block of ``A^h``.
    """
    A = as_matrix(A)
    h, classes = cyclic_classes(A)
    B = np.linalg.matrix_power(A / np.abs(A).max(), h)
    P = np.zeros_like(A)
    for c in classes:
        P[np.ix_(c, c)] = _perron_projection_by_squaring(B[np.ix_(c, c)])
    return P


def perron_vectors(A):
    """Right and left Perron vectors of an irreducible nonnegative matrix.

    Both are normalised to unit sum; computed from the cyclic-class
    projections, not from the eigensolver.
    """
    A = as_matrix(A)
    h, classes = cyclic_classes(A)
    scale = np.abs(A).max()
    As = A / scale
    B = np.linalg.matrix_power(As, h)
    c0 = classes[0]
    P0 = _perron_projection_by_squaring(B[np.ix_(c0, c0)])
    rho_h = float(np.trace(B[np.ix_(c0, c0)] @ P0))
    rs = rho_h ** (1.0 / h)
    col = int(np.argmax(np.linalg.norm(P0, axis=0)))
    row = int(np.argmax(np.linalg.norm(P0, axis=1)))
    v = np.zeros(A.shape[0])
    w = np.zeros(A.shape[0])
    v[c0] = P0[:, col]
    w[c0] = P0[row, :]
    vs, ws = v.copy(), w.copy()
    for _ in range(h - 1):
        v = As @ v / rs
        w = As.T @ w / rs
        vs += v
        ws += w
    return vs / vs.sum(), ws / ws.sum()

