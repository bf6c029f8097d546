"""Finite-dimensional lattice primitives on R^n with the coordinatewise order.

Matrices, vectors and functionals are plain numpy arrays.  Closed ideals of
R^n are exactly the coordinate subspaces, represented by
:class:`CoordinateIdeal`.  Coordinates are 0-based throughout.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError

#: entries below this are rejected as genuinely negative
NEGATIVE_REJECT = 1e-12
#: default tolerance for ray deduplication
TOL_DUP = 1e-9
#: default tolerance for spectral assertions
TOL_SPEC = 1e-6
#: relative singular-value cut for numerical rank
RANK_RTOL = 1e-8


def as_matrix(A, name="matrix", nonnegative=True):
    """Validate and copy ``A`` as a square float matrix.

    With ``nonnegative`` set, entries in ``[-1e-12, 0)`` are clamped to zero
    and anything more negative raises :class:`InputError`.
    """
    try:
        M = np.array(A, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name}: not a numeric array ({exc})") from None
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise InputError(f"{name}: expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name}: non-finite entries")
    if nonnegative:
        worst = M.min()
        if worst < -NEGATIVE_REJECT:
            i, j = np.unravel_index(np.argmin(M), M.shape)
            raise InputError(f"{name}: negative entry {worst!r} at ({i}, {j})")
        M[M < 0] = 0.0
    M.setflags(write=False)
    return M


def as_matrices(mats, nonnegative=True):
    """Validate a non-empty list of square matrices of a common dimension."""
    mats = list(mats)
    if not mats:
        raise InputError("empty generator list")
    out = [as_matrix(A, f"generator {i}", nonnegative) for i, A in enumerate(mats)]
    n = out[0].shape[0]
    for i, M in enumerate(out):
        if M.shape[0] != n:
            raise InputError(f"generator {i}: dimension {M.shape[0]} differs from {n}")
    return out


def as_vector(x, n=None, name="vector"):
    v = np.array(x, dtype=float)
    if v.ndim != 1:
        raise InputError(f"{name}: expected a 1-d array, got shape {v.shape}")
    if n is not None and v.shape[0] != n:
        raise InputError(f"{name}: dimension {v.shape[0]} does not match {n}")
    return v


@dataclass(frozen=True)
class CoordinateIdeal:
    """The closed ideal spanned by the coordinates in ``support``."""

    n: int
    support: frozenset

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(int(i) for i in self.support))
        if self.n < 1:
            raise InputError("ideal dimension must be positive")
        bad = [i for i in self.support if not 0 <= i < self.n]
        if bad:
            raise InputError(f"ideal support {sorted(bad)} outside range(0, {self.n})")

    @property
    def indices(self):
        return sorted(self.support)

    @property
    def is_zero(self):
        return not self.support

    @property
    def is_full(self):
        return len(self.support) == self.n

    @property
    def is_proper(self):
        """Nonzero and not the whole space."""
        return not self.is_zero and not self.is_full

    def mask(self):
        m = np.zeros(self.n, dtype=bool)
        m[self.indices] = True
        return m

    def __contains__(self, i):
        return i in self.support

    def __le__(self, other):
        return self.support <= other.support

    def __repr__(self):
        return f"CoordinateIdeal(n={self.n}, support={self.indices})"


def disjoint(x, y, tol=0.0):
    """Lattice disjointness ``|x| ^ |y| = 0`` within ``tol``.

    Componentwise ``min(|x_i|, |y_i|) <= tol * (||x||_inf + ||y||_inf)``.
    """
    if tol < 0:
        raise InputError("tol must be nonnegative")
    x = as_vector(x, name="x")
    y = as_vector(y, x.shape[0], name="y")
    ax, ay = np.abs(x), np.abs(y)
    bound = tol * (ax.max(initial=0.0) + ay.max(initial=0.0))
    return bool(np.all(np.minimum(ax, ay) <= bound))


def ideal_closure(vectors, n=None, tol=0.0):
    """Smallest coordinate ideal containing every vector in ``vectors``.

    ``n`` is required when ``vectors`` is empty.
    """
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    if not vectors:
        if n is None:
            raise InputError("ideal_closure of an empty list needs the dimension n")
        return CoordinateIdeal(n, frozenset())
    n = vectors[0].shape[0] if n is None else n
    support = np.zeros(n, dtype=bool)
    for v in vectors:
        as_vector(v, n)
        support |= np.abs(v) > tol
    return CoordinateIdeal(n, frozenset(np.flatnonzero(support).tolist()))


def positivity_pattern(A, tol=NEGATIVE_REJECT):
    """Boolean matrix of entries strictly above ``tol``."""
    return np.asarray(A) > tol


def maps_into(S, source, target, tol=NEGATIVE_REJECT):
    """Does ``S`` map span(source) into span(target)?"""
    S = np.asarray(S)
    outside = ~target.mask()
    block = S[np.ix_(outside, source.mask())]
    return not np.any(np.abs(block) > tol)


def is_invariant(gens, ideal, tol=NEGATIVE_REJECT):
    """True when every matrix in ``gens`` leaves span(ideal) invariant."""
    return all(maps_into(S, ideal, ideal, tol) for S in gens)


def numerical_rank(A, rtol=RANK_RTOL):
    """Number of singular values above ``rtol * sigma_max``."""
    s = np.linalg.svd(np.asarray(A, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def frobenius(A):
    return float(np.linalg.norm(A, "fro"))


def ray(A):
    """Frobenius-normalised representative; the zero matrix maps to itself."""
    A = np.asarray(A, dtype=float)
    nrm = frobenius(A)
    return A / nrm if nrm > 0 else A.copy()


def ray_distance(A, B):
    """Frobenius distance between the normalised representatives."""
    return frobenius(ray(A) - ray(B))


def is_nonnegative(A, tol=NEGATIVE_REJECT):
    return bool(np.all(np.asarray(A) >= -tol))


def is_strictly_positive(x, tol=0.0):
    return bool(np.all(np.asarray(x) > tol))


def standard_basis(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e
