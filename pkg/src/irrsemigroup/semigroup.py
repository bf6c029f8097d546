"""Finite approximation of the R+-closed semigroup generated by a few matrices.

Elements are stored as rays (Frobenius norm one).  The ball holds every
product of at most ``L`` letters, deduplicated at ``tau_dup``.  Limits of
scaled powers are not searched for; for each generator the closed-form
asymptotic elements are injected as extra letters instead:

* unimodular regime: the peripheral projection P and ``P (g/r)^j`` for
  ``j < p`` where p is the return period of the unimodular part;
* nilpotent regime: the square-zero limit ``N^k + 0``.

Letters are indexed generators first, then injected elements.
"""

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product as iproduct
import math

import numpy as np
import scipy.linalg

from .errors import AnalysisError, BallExplosion, InconclusiveError, InputError
from .lattice_core import (
    RANK_RTOL,
    TOL_DUP,
    as_matrices,
    frobenius,
    numerical_rank,
)
from .spectral import _return_period, peripheral_split, spectral_radius

ELEMENT_CAP = 200_000
ZERO_RTOL = 1e-12
IDEMPOTENT_RTOL = 1e-8
FLANK_RTOL = 1e-7
PROJ_DUP = 1e-7
MEMBER_TOL = 1e-5
MAX_WORDS = 8


class RayIndex:
    """Tolerance lookup of matrices by Frobenius distance.

    Matrices are bucketed on three fixed random projections with a cell size
    far above the tolerance, so near-duplicates land in the same or an
    adjacent cell; candidates in the 27 neighbouring cells are compared
    exactly.
    """

    def __init__(self, n, tol, seed=20240601):
        self.tol = tol
        self.cell = max(1e-3, 100.0 * tol)
        dirs = np.random.default_rng(seed).standard_normal((3, n * n))
        self.dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
        self.buckets = {}
        self.items = []

    def _key(self, M):
        return tuple(np.floor(self.dirs @ M.ravel() / self.cell).astype(int))

    def find(self, M):
        k = self._key(M)
        best, best_d = None, self.tol
        for off in iproduct((-1, 0, 1), repeat=3):
            for idx in self.buckets.get((k[0] + off[0], k[1] + off[1], k[2] + off[2]), ()):
                d = frobenius(self.items[idx] - M)
                if d <= best_d:
                    best, best_d = idx, d
        return best

    def add(self, M):
        self.items.append(M)
        idx = len(self.items) - 1
        self.buckets.setdefault(self._key(M), []).append(idx)
        return idx


@dataclass
class Letter:
    name: str
    matrix: np.ndarray
    kind: str = "generator"
    source: int | None = None


@dataclass
class Element:
    matrix: np.ndarray
    word: tuple
    words: list
    r: float = float("nan")
    rank: int = -1

    @property
    def length(self):
        return len(self.word)


@dataclass
class ProjectionRecord:
    """A rank-minrank idempotent of the semigroup closure."""

    P: np.ndarray
    rank: int
    range_basis: np.ndarray
    route: str
    source: int | None = None
    side: str | None = None
    partner: tuple | None = None
    in_ball: bool = False

    @property
    def label(self):
        return "ball_ray" if self.in_ball else "peripheral_projection"


def _asymptotic_letters(g, gi, name):
    """Closed-form asymptotic elements of R+ g; empty when not applicable."""
    try:
        split = peripheral_split(g)
    except AnalysisError:
        return [], f"{name}: no peripheral splitting, nothing injected"
    if split.k:
        L = split.lift(np.linalg.matrix_power(split.N, split.k))
        return [Letter(f"lim[{name}]", L, "asymptotic", gi)], None
    p, _, _ = _return_period(split.U, 1000, 1e-9)
    if p is None:
        return [Letter(f"P[{name}]", split.P, "asymptotic", gi)], (
            f"{name}: unimodular part not periodic within 1000; injected P only"
        )
    out = []
    power = np.eye(g.shape[0])
    gs = g / split.r
    for j in range(p):
        out.append(Letter(f"P[{name}]" + (f"{name}^{j}" if j else ""), split.P @ power, "asymptotic", gi))
        power = power @ gs
    return out, None


@dataclass
class SemigroupApprox:
    gens: list
    names: list
    L: int
    tau_dup: float
    letters: list
    elements: list
    zero_word: tuple | None
    minrank: float
    S_r: list
    notes: list = field(default_factory=list)
    _index: RayIndex | None = field(default=None, repr=False)

    @property
    def n(self):
        return self.gens[0].shape[0]

    def __len__(self):
        return len(self.elements)

    def evaluate(self, word):
        """Unnormalised product of the letters in ``word``."""
        M = np.eye(self.n)
        for a in word:
            M = M @ self.letters[a].matrix
        return M

    def word_name(self, word):
        return "·".join(self.letters[a].name for a in word) or "I"

    def find(self, M, tol=None):
        """Index of the stored ray of ``M`` (None when absent or zero)."""
        nrm = frobenius(M)
        if nrm == 0:
            return None
        if tol is None:
            return self._index.find(np.asarray(M) / nrm)
        R = np.asarray(M) / nrm
        for i, e in enumerate(self.elements):
            if frobenius(e.matrix - R) <= tol:
                return i
        return None

    def matrices(self):
        return np.array([e.matrix for e in self.elements])

    @cached_property
    def projections(self):
        return rank_r_projections(self)


def generate_ball(gens, L, tau_dup=TOL_DUP, names=None, asymptotic=True, cap=ELEMENT_CAP):
    """All products of at most ``L`` letters, as deduplicated rays."""
    gens = as_matrices(gens)
    if L < 1:
        raise InputError("word length L must be >= 1")
    n = gens[0].shape[0]
    names = list(names) if names else [f"g{i}" for i in range(len(gens))]
    letters = [Letter(nm, G) for nm, G in zip(names, gens)]
    notes = []
    if asymptotic:
        for gi, G in enumerate(gens):
            extra, note = _asymptotic_letters(G, gi, names[gi])
            letters.extend(extra)
            if note:
                notes.append(note)

    index = RayIndex(n, tau_dup)
    elements = []
    zero_word = None

    def visit(M, word, scale):
        nonlocal zero_word
        nrm = frobenius(M)
        if nrm <= ZERO_RTOL * scale:
            if zero_word is None:
                zero_word = word
            return None
        R = M / nrm
        hit = index.find(R)
        if hit is not None:
            if len(elements[hit].words) < MAX_WORDS:
                elements[hit].words.append(word)
            return None
        if len(elements) >= cap:
            raise BallExplosion(
                f"ball explosion: more than {cap} rays",
                stats={"rays": len(elements), "length": len(word), "letters": len(letters)},
            )
        index.add(R)
        elements.append(Element(R, word, [word]))
        return len(elements) - 1

    frontier = []
    for a, letter in enumerate(letters):
        i = visit(letter.matrix, (a,), max(frobenius(letter.matrix), 1e-300))
        if i is not None:
            frontier.append(i)
    for _ in range(2, L + 1):
        nxt = []
        for i in frontier:
            e = elements[i]
            for a, letter in enumerate(letters):
                j = visit(e.matrix @ letter.matrix, e.word + (a,), frobenius(letter.matrix))
                if j is not None:
                    nxt.append(j)
        frontier = nxt
        if not frontier:
            break

    if elements:
        stack = np.array([e.matrix for e in elements])
        sv = np.linalg.svd(stack, compute_uv=False)
        ranks = np.count_nonzero(sv > RANK_RTOL * sv[:, :1], axis=1)
        radii = np.abs(np.linalg.eigvals(stack)).max(axis=1)
        for e, rk, rr in zip(elements, ranks, radii):
            e.rank = int(rk)
            e.r = float(rr)
        mr = int(ranks.min())
        S_r = [i for i, e in enumerate(elements) if e.rank == mr]
    else:
        mr, S_r = math.inf, []
    return SemigroupApprox(
        gens=gens, names=names, L=L, tau_dup=tau_dup, letters=letters,
        elements=elements, zero_word=zero_word, minrank=mr, S_r=S_r,
        notes=notes, _index=index,
    )


def minrank(approx):
    """Smallest rank of a nonzero ray; ``math.inf`` when only zero is present."""
    if not approx.elements:
        return math.inf
    return min(e.rank for e in approx.elements)


def range_basis(P, rank=None):
    U, s, _ = np.linalg.svd(P)
    if rank is None:
        rank = int(np.count_nonzero(s > RANK_RTOL * s[0])) if s[0] > 0 else 0
    return U[:, :rank]


def _scaled_idempotent(R):
    """``R / s`` when ``R @ R = s R`` for some s > 0, else None."""
    R2 = R @ R
    s = float(np.sum(R2 * R)) / float(np.sum(R * R))
    if s <= 1e-12:
        return None
    if frobenius(R2 - s * R) > IDEMPOTENT_RTOL * (1.0 + frobenius(s * R)):
        return None
    P = R / s
    if frobenius(P @ P - P) > IDEMPOTENT_RTOL * (1.0 + frobenius(P)):
        return None
    return P


def peripheral_projection(T, rank=None):
    """Spectral projection of T for its peripheral spectrum (None if nilpotent)."""
    if rank == 1:
        tr = float(np.trace(T))
        if tr <= 1e-12 * max(frobenius(T), 1e-300):
            return None
        return T / tr
    try:
        split = peripheral_split(T)
    except AnalysisError:
        return None
    if split.k:
        return None
    return split.P


def _clean_projection(P):
    if P.min() < -1e-9 * max(1.0, np.abs(P).max()):
        return None
    P = np.where(P < 0, 0.0, P)
    return P


def rank_r_projections(approx, max_partners=None):
    """Rank-minrank idempotents found in or constructed from the ball.

    Every scaled idempotent ball ray of minimal rank is taken as is.  Every
    minimal-rank ray S also yields the peripheral projections of S A and A S,
    with A the first element of ``{I} + ball`` making the product
    non-nilpotent; these are the projections with P S = S and S Q = S.
    """
    if approx.minrank == math.inf:
        raise InconclusiveError("only the zero ray present: minrank is infinite")
    r = approx.minrank
    n = approx.n
    records = []
    idx = RayIndex(n, PROJ_DUP)

    def add(P, **prov):
        P = _clean_projection(P)
        if P is None or numerical_rank(P) != r:
            return None
        hit = idx.find(P)
        if hit is not None:
            return hit
        rec = ProjectionRecord(P=P, rank=r, range_basis=range_basis(P, r), **prov)
        R = P / frobenius(P)
        rec.in_ball = approx.find(R) is not None or any(
            frobenius(approx.elements[i].matrix - R) <= MEMBER_TOL for i in approx.S_r
        )
        idx.add(P)
        records.append(rec)
        return len(records) - 1

    for i in approx.S_r:
        P = _scaled_idempotent(approx.elements[i].matrix)
        if P is not None:
            add(P, route="ball_ray", source=i)

    partners = [(None, np.eye(n))] + [(j, e.matrix) for j, e in enumerate(approx.elements)]
    if max_partners is not None:
        partners = partners[: max_partners + 1]
    for i in approx.S_r:
        S = approx.elements[i].matrix
        for side in ("right", "left"):
            for j, A in partners:
                T = S @ A if side == "right" else A @ S
                if spectral_radius(T) <= 1e-9 * max(frobenius(T), 1e-300) or frobenius(T) == 0:
                    continue
                P = peripheral_projection(T, rank=r if r == 1 else None)
                if P is None:
                    continue
                add(P, route="peripheral_projection", source=i, side=side,
                    partner=approx.elements[j].word if j is not None else ())
                break
    if not records:
        raise InconclusiveError("no non-nilpotent minimal-rank element in the ball; increase L")
    return records


def flanking_projections(approx, index):
    """Projections P, Q from the computed set with ``P S = S Q = S``."""
    e = approx.elements[index]
    if e.rank != approx.minrank:
        raise InputError(f"element {index} has rank {e.rank}, not minrank {approx.minrank}")
    S = e.matrix
    tol = FLANK_RTOL * frobenius(S)
    left = next((p for p in approx.projections if frobenius(p.P @ S - S) <= tol), None)
    right = next((p for p in approx.projections if frobenius(S @ p.P - S) <= tol), None)
    if left is None or right is None:
        raise InconclusiveError("flanking search failed; increase L")
    return left, right


def range_angle(P, Q, rank=None):
    """Largest principal angle between range(P) and range(Q)."""
    A, B = range_basis(P, rank), range_basis(Q, rank)
    if A.shape[1] != B.shape[1]:
        return math.pi / 2
    return float(np.max(scipy.linalg.subspace_angles(A, B)))


@dataclass
class RightIdealReport:
    """Minimal right ideals ``P S`` for P in the projection set."""

    ideals: list
    classes: list
    two_sided: list
    same_range: bool
    all_two_sided: bool
    some_two_sided: bool
    unique_minimal: bool
    evidence: dict = field(default_factory=dict)

    @property
    def conditions(self):
        return {
            "same_range": self.same_range,
            "all_two_sided": self.all_two_sided,
            "some_two_sided": self.some_two_sided,
            "unique_minimal": self.unique_minimal,
        }

    @property
    def consistent(self):
        return len(set(self.conditions.values())) == 1


def _right_ideal(P, approx):
    idx = RayIndex(approx.n, PROJ_DUP)
    out = []
    for M in [P] + [P @ e.matrix for e in approx.elements]:
        nrm = frobenius(M)
        if nrm <= ZERO_RTOL * max(1.0, frobenius(P)):
            continue
        R = M / nrm
        if idx.find(R) is None:
            idx.add(R)
            out.append(R)
    return out


def _absorbs(Q, rays, tol=FLANK_RTOL):
    """Every ray u satisfies Q u = u, i.e. lies in the right ideal Q S."""
    return all(frobenius(Q @ u - u) <= tol * frobenius(u) for u in rays)


def right_ideal_analysis(approx, sample=32, range_tol=1e-6):
    """Minimal right ideals on the ball and the four equivalent conditions.

    ``u`` in the semigroup lies in ``P S`` exactly when ``P u = u``; that
    membership test decides both coincidence of right ideals and
    two-sidedness (``S P T`` in ``P S`` for ball S and T in ``{I} + ball``).
    """
    projs = approx.projections
    ideals = [_right_ideal(p.P, approx) for p in projs]
    m = len(projs)
    same = np.eye(m, dtype=bool)
    for a in range(m):
        for b in range(a + 1, m):
            same[a, b] = same[b, a] = (
                _absorbs(projs[b].P, ideals[a]) and _absorbs(projs[a].P, ideals[b])
            )
    classes = []
    for a in range(m):
        for c in classes:
            if same[a, c[0]]:
                c.append(a)
                break
        else:
            classes.append([a])
    flank = [np.eye(approx.n)] + [e.matrix for e in approx.elements[:sample]]
    two_sided = []
    for p in projs:
        ok = True
        for e in approx.elements:
            SP = e.matrix @ p.P
            if not _absorbs(p.P, [SP @ T for T in flank if frobenius(SP @ T) > 0]):
                ok = False
                break
        two_sided.append(ok)
    angles = [
        range_angle(projs[a].P, projs[b].P, projs[a].rank)
        for a in range(m) for b in range(a + 1, m)
    ]
    same_range = all(t <= range_tol for t in angles)
    return RightIdealReport(
        ideals=ideals,
        classes=classes,
        two_sided=two_sided,
        same_range=same_range,
        all_two_sided=all(two_sided),
        some_two_sided=any(two_sided),
        unique_minimal=len(classes) == 1,
        evidence={"max_range_angle": max(angles, default=0.0), "ideal_sizes": [len(i) for i in ideals]},
    )


def left_ideal_analysis(approx):
    """Mirror of :func:`right_ideal_analysis` through transposition."""
    gens_t = [G.T for G in approx.gens]
    return right_ideal_analysis(generate_ball(gens_t, approx.L, approx.tau_dup, approx.names))
