"""Exact integer linear algebra: primitive vectors, kernel lattices, determinants."""
from __future__ import annotations

import itertools
from math import comb, gcd, isqrt, prod


def primitive(v) -> tuple:
    g = 0
    for c in v:
        g = gcd(g, int(c))
    if g == 0:
        return tuple(int(c) for c in v)
    return tuple(int(c) // g for c in v)


def canonical(v) -> tuple:
    """Primitive representative with first nonzero entry positive."""
    v = primitive(v)
    for c in v:
        if c:
            return v if c > 0 else tuple(-x for x in v)
    return v


def kernel_basis(alpha) -> list:
    """Rows spanning the lattice ``{v in Z^d : <v, alpha> = 0}``.

    Unimodular column reduction of the row ``alpha`` to ``(g, 0, ..., 0)``;
    the untouched columns of the transform are a lattice basis of the kernel.
    """
    a = [int(c) for c in alpha]
    d = len(a)
    if not any(a):
        raise ValueError("alpha must be nonzero")
    U = [[int(i == j) for j in range(d)] for i in range(d)]  # columns of U stored as rows here
    while sum(1 for c in a if c) > 1:
        i = min((k for k in range(d) if a[k]), key=lambda k: abs(a[k]))
        for j in range(d):
            if j != i and a[j]:
                q = a[j] // a[i]
                a[j] -= q * a[i]
                U[j] = [x - q * y for x, y in zip(U[j], U[i])]
    pivot = next(k for k in range(d) if a[k])
    return [U[j] for j in range(d) if j != pivot]


def bareiss_det(M) -> int:
    """Exact determinant of a square integer matrix (fraction-free elimination)."""
    A = [list(map(int, row)) for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def rank(M) -> int:
    """Rank over Q of an integer matrix."""
    rows = [list(map(int, r)) for r in M if any(r)]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        for i in range(r + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c]
                rows[i] = list(primitive([p[c] * x - f * y for x, y in zip(rows[i], p)]))
        r += 1
    return r


def count_square_minors(nrows: int, ncols: int) -> int:
    return sum(comb(nrows, k) * comb(ncols, k) for k in range(1, min(nrows, ncols) + 1))


def max_minor(M) -> int:
    """Largest absolute value of a square minor (exhaustive)."""
    M = [list(map(int, r)) for r in M]
    if not M:
        return 0
    best = 0
    nr, nc = len(M), len(M[0])
    for k in range(1, min(nr, nc) + 1):
        for rows in itertools.combinations(range(nr), k):
            for cols in itertools.combinations(range(nc), k):
                best = max(best, abs(bareiss_det([[M[i][j] for j in cols] for i in rows])))
    return best


def hadamard_bound(M) -> int:
    """Integer upper bound for every square minor of ``M``.

    Any k x k minor is at most the product of the k largest row norms.
    """
    norms = sorted((isqrt(sum(int(c) ** 2 for c in r)) + 1 for r in M), reverse=True)
    if not norms:
        return 0
    ncols = len(M[0])
    return prod(norms[: min(len(norms), ncols)])


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def primes_above(bound: int, count: int) -> list:
    """The ``count`` smallest primes strictly greater than ``bound``."""
    out = []
    p = max(bound + 1, 2)
    while len(out) < count:
        if is_prime(p):
            out.append(p)
        p += 1
    return out
