"""Dense linear algebra over prime fields F_p.

Matrices are plain 2-d numpy integer arrays with entries in ``range(p)``;
the modulus travels alongside as an explicit argument.  Vectors are rows,
so a linear map ``v -> v @ A`` has the source dimension as its row count.

Every elimination goes through :func:`rref`, whose output is the unique
reduced row-echelon form, so all solver tie-breaking is fixed.
"""

from __future__ import annotations

import numpy as np

PRIMES = (2, 3, 5, 7)


def _check_prime(p):
    if p not in PRIMES:
        raise ValueError(f"unsupported modulus {p}; expected one of {PRIMES}")


def inverse_table(p):
    _check_prime(p)
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


_INV = {p: inverse_table(p) for p in PRIMES}


def asmat(A, p, cols=None):
    """Coerce to a reduced int64 matrix; ``cols`` fixes the width of empty input."""
    A = np.asarray(A, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size or cols is None else A.reshape(0, cols)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    return A % p


def zeros(rows, cols):
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n):
    return np.eye(n, dtype=np.int64)


def matmul(A, B, p):
    """Exact product mod p.

    float64 BLAS is exact here because entries are < 7 and inner dimensions
    stay far below 2**46 / 36.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[-1] == 0 or (A.size and B.size and A.shape[-1] * (p - 1) ** 2 < 2**52):
        out = np.matmul(A.astype(np.float64), B.astype(np.float64))
        return np.rint(out).astype(np.int64) % p
    return np.matmul(A.astype(np.int64), B.astype(np.int64)) % p


def rref(A, p):
    """Reduced row-echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows and
    ``pivots[i]`` is the pivot column of row ``i``.
    """
    _check_prime(p)
    A = asmat(A, p).copy()
    rows, cols = A.shape
    inv = _INV[p]
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        if A[r, c] != 1:
            A[r, c:] = (A[r, c:] * inv[A[r, c]]) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit, c:] = (A[hit, c:] - np.outer(col[hit], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(A, p):
    return len(rref(A, p)[1])


def row_basis(A, p, cols=None):
    """Canonical basis (rref rows) of the row space."""
    return rref(asmat(A, p, cols), p)[0]


def solve(A, b, p):
    """Some ``x`` with ``A @ x == b`` (column convention), or ``None``.

    Free variables are set to zero, so the answer is determined by the
    reduced echelon form of ``[A | b]``.
    """
    A = asmat(A, p)
    b = np.asarray(b, dtype=np.int64) % p
    if b.ndim == 2:
        if b.shape[1] != 1:
            raise ValueError("solve expects a single column right-hand side")
        b = b[:, 0]
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"shape mismatch: A is {A.shape}, b has {b.shape[0]} rows")
    n = A.shape[1]
    R, piv = rref(np.hstack([A, b.reshape(-1, 1)]), p)
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = R[i, n]
    return x


def solve_rows(A, B, p):
    """Solve ``X @ A == B`` row by row; ``None`` if any row is inconsistent."""
    A = asmat(A, p)
    B = asmat(B, p, A.shape[1])
    if B.shape[1] != A.shape[1]:
        raise ValueError(f"shape mismatch: {A.shape} vs {B.shape}")
    k = A.shape[0]
    # one elimination of [A^T | B^T] handles every right-hand side at once
    R, piv = rref(np.hstack([A.T, B.T]), p)
    if any(c >= k for c in piv):
        return None
    X = np.zeros((B.shape[0], k), dtype=np.int64)
    for i, c in enumerate(piv):
        X[:, c] = R[i, k:]
    return X


def kernel_basis(A, p):
    """Rows spanning ``{x : A @ x == 0}``, in reduced canonical form."""
    A = asmat(A, p)
    n = A.shape[1]
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        K[t, f] = 1
        for i, c in enumerate(piv):
            K[t, c] = (-R[i, f]) % p
    return rref(K, p)[0] if len(free) else K


def left_kernel(A, p):
    """Rows ``v`` with ``v @ A == 0``."""
    return kernel_basis(asmat(A, p).T, p)


def reduce_mod(V, B, pivots, p):
    """Reduce rows of ``V`` modulo the row space of the rref matrix ``B``."""
    V = np.asarray(V, dtype=np.int64) % p
    if not len(pivots):
        return V
    return (V - matmul(V[..., pivots], B, p)) % p


def in_span(v, B, pivots, p):
    return not np.any(reduce_mod(v, B, pivots, p))


def contains(B, C, p):
    """Whether row space of ``C`` lies in that of the rref matrix ``B``."""
    C = np.asarray(C, dtype=np.int64)
    if C.size == 0:
        return True
    pivots = _pivots_of(B)
    return not np.any(reduce_mod(C, B, pivots, p))


def _pivots_of(B):
    return [int(np.flatnonzero(row)[0]) for row in B]


def pivots_of(B):
    """Pivot columns of a matrix already in rref."""
    return _pivots_of(B)


def same_span(B, C, p, cols):
    B = asmat(B, p, cols)
    C = asmat(C, p, cols)
    r = rank(np.vstack([B, C]), p)
    return r == rank(B, p) == rank(C, p)


def span_sum(B, C, p, cols):
    return row_basis(np.vstack([asmat(B, p, cols), asmat(C, p, cols)]), p, cols)


def intersection(B, C, p, cols):
    """Row-space intersection."""
    B = asmat(B, p, cols)
    C = asmat(C, p, cols)
    if not len(B) or not len(C):
        return zeros(0, cols)
    # x B = y C  <=>  [x y] @ [[B], [-C]] = 0
    K = left_kernel(np.vstack([B, (-C) % p]), p)
    if not len(K):
        return zeros(0, cols)
    return row_basis(matmul(K[:, : len(B)], B, p), p, cols)


def complement_columns(B, cols):
    """Non-pivot coordinates; their unit vectors span a complement."""
    piv = set(_pivots_of(B))
    return [c for c in range(cols) if c not in piv]


def coordinates(v, B, p):
    """Coordinates of rows ``v`` in the rref basis ``B`` (assumes membership)."""
    return np.asarray(v, dtype=np.int64)[..., _pivots_of(B)] % p


def is_invertible(A, p):
    A = asmat(A, p)
    return A.shape[0] == A.shape[1] and rank(A, p) == A.shape[0]


def inverse(A, p):
    A = asmat(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(np.hstack([A, identity(n)]), p)
    if piv[:n] != list(range(n)):
        return None
    return R[:, n:]


def batch_nonsingular(mats, p):
    """Vectorised full-rank test for a stack of square matrices."""
    M = np.array(mats, dtype=np.int64) % p
    if M.ndim != 3 or M.shape[1] != M.shape[2]:
        raise ValueError("expected a stack of square matrices")
    count, n, _ = M.shape
    inv = _INV[p]
    ok = np.ones(count, dtype=bool)
    idx = np.arange(count)
    for c in range(n):
        sub = M[:, c:, c]
        has = sub != 0
        found = has.any(axis=1)
        ok &= found
        first = c + np.argmax(has, axis=1)
        rows_c = M[idx, c].copy()
        M[idx, c] = M[idx, first]
        M[idx, first] = rows_c
        piv = M[:, c, c]
        scale = inv[piv]
        M[:, c, :] = (M[:, c, :] * scale[:, None]) % p
        factors = M[:, :, c].copy()
        factors[:, c] = 0
        M = (M - factors[:, :, None] * M[:, c, None, :]) % p
    return ok


def all_vectors(dim, p):
    """Every vector of F_p^dim, ordered by base-p code (little-endian)."""
    count = p**dim
    codes = np.arange(count, dtype=np.int64)
    out = np.zeros((count, dim), dtype=np.int64)
    for j in range(dim):
        out[:, j] = codes % p
        codes //= p
    return out


def encode(V, p):
    """Base-p integer codes of rows, matching :func:`all_vectors`."""
    V = np.asarray(V, dtype=np.int64)
    weights = p ** np.arange(V.shape[-1], dtype=np.int64)
    return V @ weights


def span_elements(B, p):
    """All vectors in the row space of ``B``."""
    B = np.asarray(B, dtype=np.int64)
    if not len(B):
        return np.zeros((1, B.shape[1]), dtype=np.int64)
    return matmul(all_vectors(len(B), p), B, p)
