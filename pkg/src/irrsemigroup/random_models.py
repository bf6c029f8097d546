"""Random generator families for the oracle batteries and demos.

Every function takes a ``numpy.random.Generator`` so that runs are
reproducible from a single seed.
"""

import numpy as np


def _weights(rng, shape, low=0.1, high=1.0):
    return rng.uniform(low, high, size=shape)


def cyclic_pattern(rng, n, period=1, density=0.3):
    """Strongly connected pattern on n vertices with period exactly ``period``.

    Vertices are split into ``period`` nonempty cyclic classes and edges only
    run from class c to class c+1.  A closed walk of length ``period``
    through the first vertex of every class fixes the gcd of cycle lengths,
    and a round-robin walk through all vertices makes the graph strongly
    connected.  ``pattern[k, i]`` is the edge ``i -> k``.
    """
    if not 1 <= period <= n:
        raise ValueError(f"period must lie in [1, {n}]")
    perm = rng.permutation(n)
    cuts = np.sort(rng.choice(np.arange(1, n), size=period - 1, replace=False)) if period > 1 else []
    classes = np.split(perm, cuts)
    pat = np.zeros((n, n), dtype=bool)
    m = max(len(c) for c in classes)
    walk = [classes[t % period][(t // period) % len(classes[t % period])] for t in range(period * m)]
    for a, b in zip(walk, walk[1:] + walk[:1]):
        pat[b, a] = True
    for c in range(period):
        src, dst = classes[c], classes[(c + 1) % period]
        pat[np.ix_(dst, src)] |= rng.random((len(dst), len(src))) < density
        pat[dst[0], src[0]] = True
    return pat


def random_irreducible(rng, n, period=None, density=0.3, low=0.1, high=1.0):
    """Irreducible nonnegative matrix; ``period`` defaults to a random choice."""
    if period is None:
        period = int(rng.integers(1, n + 1))
    pat = cyclic_pattern(rng, n, period, density)
    return np.where(pat, _weights(rng, (n, n), low, high), 0.0)


def random_sparse_family(rng, n, k=None, density=None):
    """Sparse generator set with no structure imposed; irreducible or not."""
    if k is None:
        k = int(rng.integers(1, 4))
    if density is None:
        density = rng.uniform(0.5, 2.5) / n
    return [np.where(rng.random((n, n)) < density, _weights(rng, (n, n)), 0.0) for _ in range(k)]


def circulant(c):
    """Circulant matrix with ``C[i, j] = c[(i - j) mod n]``; all circulants commute."""
    c = np.asarray(c, dtype=float)
    n = c.shape[0]
    idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
    return c[idx]


def random_circulant_pair(rng, n, imprimitive=False, density=0.5):
    """Two commuting nonnegative circulants generating an irreducible semigroup.

    With ``imprimitive`` set and n composite, every coefficient sits on a
    shift congruent to 1 modulo a proper divisor h of n, so the pair acts
    on h cyclic blocks.
    """
    divisors = [h for h in range(2, n) if n % h == 0]
    if imprimitive and divisors:
        h = int(rng.choice(divisors))
        allowed = np.array([s for s in range(n) if s % h == 1])
    else:
        allowed = np.arange(n)
    out = []
    for _ in range(2):
        c = np.zeros(n)
        pick = allowed[rng.random(allowed.size) < density]
        if pick.size == 0:
            pick = allowed[[int(rng.integers(allowed.size))]]
        c[pick] = _weights(rng, pick.size)
        out.append(c)
    # the shift by 1 is always present in one of them, which makes the pair irreducible
    if out[0][1 % n] == 0 and out[1][1 % n] == 0:
        out[0][1 % n] = _weights(rng, 1)[0]
    return circulant(out[0]), circulant(out[1])


def random_polynomial_pair(rng, n, degree=3, density=0.4):
    """(S, K) with K irreducible and S a polynomial in K with nonnegative coefficients."""
    K = random_irreducible(rng, n, density=density)
    coef = rng.uniform(0.0, 1.0, size=degree + 1)
    coef[rng.random(degree + 1) < 0.3] = 0.0
    if not coef[1:].any():
        coef[1] = 1.0
    S = np.zeros((n, n))
    power = np.eye(n)
    for a in coef:
        S += a * power
        power = power @ K
    return S, K


def jordan_family(n):
    """``A = I + superdiagonal`` and ``B = E[n-1, 0]``.

    For n = 2 this is the pair whose ball has no identity and whose rank-2
    rays are all powers of A.
    """
    A = np.eye(n) + np.eye(n, k=1)
    B = np.zeros((n, n))
    B[n - 1, 0] = 1.0
    return A, B
