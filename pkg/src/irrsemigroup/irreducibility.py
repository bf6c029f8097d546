"""Ideal irreducibility of finite families of nonnegative matrices.

A family is ideal irreducible when no proper nonzero coordinate subspace is
invariant under all members.  Invariance of span{e_i : i in J} under S means
``S[k, i] > 0`` with ``i in J`` forces ``k in J``; so we work on the union
positivity digraph with an edge ``i -> k`` whenever some generator has a
positive ``(k, i)`` entry.  Irreducible iff that digraph is strongly
connected.

Words are tuples of generator indices read as a matrix product from left to
right: ``(2, 0)`` means ``G[2] @ G[0]``.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InputError
from .lattice_core import (
    NEGATIVE_REJECT,
    CoordinateIdeal,
    as_matrices,
    as_vector,
)


def union_pattern(gens, tol=NEGATIVE_REJECT):
    """Boolean ``P[k, i]``: some generator has a positive ``(k, i)`` entry."""
    pat = np.zeros(np.asarray(gens[0]).shape, dtype=bool)
    for G in gens:
        pat |= np.asarray(G) > tol
    return pat


def successors(pattern):
    """Adjacency lists of the digraph ``i -> k`` for ``pattern[k, i]``."""
    return [np.flatnonzero(pattern[:, i]).tolist() for i in range(pattern.shape[0])]


def strong_components(pattern):
    """Label each vertex by its strongly connected component."""
    graph = csr_matrix(pattern.T.astype(np.int8))
    ncomp, labels = connected_components(graph, directed=True, connection="strong")
    return ncomp, labels


def sink_components(pattern):
    """Components with no edge leaving them, ordered by smallest member."""
    ncomp, labels = strong_components(pattern)
    has_exit = np.zeros(ncomp, dtype=bool)
    src, dst = np.nonzero(pattern.T)
    cross = labels[src] != labels[dst]
    has_exit[labels[src[cross]]] = True
    sinks = [np.flatnonzero(labels == c).tolist() for c in range(ncomp) if not has_exit[c]]
    return sorted(sinks, key=min)


@dataclass(frozen=True)
class IrreducibilityReport:
    """Verdict plus evidence.

    ``witness`` is a proper invariant ideal when reducible.  ``certificate``
    maps each entry ``(i, j)`` to a shortest nonempty word ``w`` with
    ``w[i, j] > 0`` when irreducible.
    """

    irreducible: bool
    n: int
    witness: CoordinateIdeal | None = None
    certificate: dict = field(default_factory=dict, repr=False)

    def __bool__(self):
        return self.irreducible


def _edge_labels(gens, tol):
    """Smallest generator index realising each edge ``i -> k``."""
    n = gens[0].shape[0]
    label = np.full((n, n), -1, dtype=int)
    for g in range(len(gens) - 1, -1, -1):
        label[np.asarray(gens[g]) > tol] = g
    return label


def _walk_words(gens, tol):
    """Shortest nonempty generator words from every source to every target."""
    n = gens[0].shape[0]
    label = _edge_labels(gens, tol)
    succ = successors(label >= 0)
    words = {}
    for j in range(n):
        seen = {}
        queue = deque()
        for k in succ[j]:
            if k not in seen:
                seen[k] = (int(label[k, j]),)
                queue.append(k)
        while queue:
            v = queue.popleft()
            for k in succ[v]:
                if k not in seen:
                    seen[k] = (int(label[k, v]),) + seen[v]
                    queue.append(k)
        for i, w in seen.items():
            words[(i, j)] = w
    return words


def is_ideal_irreducible(gens, tol=NEGATIVE_REJECT, certify=True):
    """Decide ideal irreducibility of the semigroup generated by ``gens``."""
    gens = as_matrices(gens)
    n = gens[0].shape[0]
    pattern = union_pattern(gens, tol)
    if n == 1:
        # R^1 has no proper nonzero ideal
        cert = _walk_words(gens, tol) if certify else {}
        return IrreducibilityReport(True, 1, None, cert)
    ncomp, _ = strong_components(pattern)
    if ncomp == 1:
        cert = _walk_words(gens, tol) if certify else {}
        return IrreducibilityReport(True, n, None, cert)
    witness = CoordinateIdeal(n, frozenset(sink_components(pattern)[0]))
    return IrreducibilityReport(False, n, witness, {})


def orbit_ideal(gens, x, tol=NEGATIVE_REJECT):
    """Smallest generator-invariant coordinate ideal containing ``x``."""
    gens = as_matrices(gens)
    n = gens[0].shape[0]
    x = as_vector(x, n, "x")
    if np.any(x < -NEGATIVE_REJECT):
        raise InputError("orbit_ideal needs a nonnegative vector")
    start = np.flatnonzero(x > tol).tolist()
    if not start:
        raise InputError("orbit_ideal needs a nonzero vector")
    succ = successors(union_pattern(gens, tol))
    seen = set(start)
    queue = deque(start)
    while queue:
        v = queue.popleft()
        for k in succ[v]:
            if k not in seen:
                seen.add(k)
                queue.append(k)
    return CoordinateIdeal(n, frozenset(seen))


def invariant_subset_masks(gens, tol=NEGATIVE_REJECT):
    """Brute force: bitmasks of all proper nonempty invariant coordinate sets.

    Enumerates all ``2**n - 2`` candidates; meant as an oracle for n <= 16.
    """
    gens = as_matrices(gens)
    n = gens[0].shape[0]
    if n > 20:
        raise InputError("exhaustive subset search limited to n <= 20")
    pattern = union_pattern(gens, tol)
    succ_mask = np.array(
        [sum(1 << int(k) for k in np.flatnonzero(pattern[:, i])) for i in range(n)],
        dtype=np.int64,
    )
    masks = np.arange(1, (1 << n) - 1, dtype=np.int64)
    bad = np.zeros(masks.shape, dtype=bool)
    for i in range(n):
        member = ((masks >> i) & 1).astype(bool)
        bad |= member & ((succ_mask[i] & ~masks) != 0)
    return masks[~bad]


def exhaustive_is_irreducible(gens, tol=NEGATIVE_REJECT):
    return invariant_subset_masks(gens, tol).size == 0


def mask_to_ideal(mask, n):
    return CoordinateIdeal(n, frozenset(i for i in range(n) if (int(mask) >> i) & 1))


def word_ball_pattern(gens, length, tol=NEGATIVE_REJECT):
    """Union of positivity patterns of all words of length 1..``length``.

    Nonnegative products cannot cancel, so the pattern of a word is the
    boolean product of its letters' patterns and the union over all words of
    length l is the l-th boolean power of the union pattern.
    """
    base = union_pattern(gens, tol).astype(np.int64)
    acc = base.astype(bool)
    power = base
    for _ in range(length - 1):
        power = ((power @ base) > 0).astype(np.int64)
        acc |= power.astype(bool)
    return acc


@dataclass(frozen=True)
class CrosscheckResult:
    consistent: bool
    scc: bool
    orbit: bool
    ball: bool
    inconclusive: bool = False
    detail: str = ""

    def __bool__(self):
        return self.consistent


def crosscheck_characterizations(gens, approx_ball_length, tol=NEGATIVE_REJECT):
    """Compare three independent irreducibility tests.

    * strong connectivity of the union digraph,
    * full orbit ideal from every standard basis vector,
    * every entry positive in some word of length <= ``approx_ball_length``.
    """
    gens = as_matrices(gens)
    n = gens[0].shape[0]
    scc = is_ideal_irreducible(gens, tol, certify=False).irreducible
    orbit = True
    orbit_detail = ""
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        J = orbit_ideal(gens, e, tol)
        if not J.is_full:
            orbit = False
            orbit_detail = f"orbit of e_{j} spans only {J.indices}"
            break
    pattern = word_ball_pattern(gens, approx_ball_length, tol)
    ball = bool(pattern.all()) or n == 1
    missing = np.argwhere(~pattern)
    if scc == orbit == ball:
        return CrosscheckResult(True, scc, orbit, ball, False, orbit_detail)
    if scc and orbit and not ball:
        i, j = missing[0]
        return CrosscheckResult(
            True, scc, orbit, ball, True,
            f"inconclusive at length {approx_ball_length}: entry ({i}, {j}) not yet positive",
        )
    if missing.size:
        i, j = missing[0]
        detail = f"disagreement: scc={scc} orbit={orbit} ball={ball}; entry ({i}, {j}) never positive"
    else:
        detail = f"disagreement: scc={scc} orbit={orbit} ball={ball}; {orbit_detail}"
    return CrosscheckResult(False, scc, orbit, ball, False, detail)


def ideal_of_word_pattern(gens, word, flank_length, tol=NEGATIVE_REJECT):
    """Union positivity pattern of ``{a w b : |a|, |b| <= flank_length}``.

    The empty flank is allowed on either side.
    """
    gens = as_matrices(gens)
    n = gens[0].shape[0]
    w = np.eye(n, dtype=bool)
    for g in word:
        w = (w.astype(np.int64) @ (gens[g] > tol).astype(np.int64)) > 0
    flank = word_ball_pattern(gens, flank_length, tol) | np.eye(n, dtype=bool)
    left = (flank.astype(np.int64) @ w.astype(np.int64)) > 0
    return (left.astype(np.int64) @ flank.astype(np.int64)) > 0

