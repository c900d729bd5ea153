"""Exact linear algebra over prime fields F_p.

Matrices are numpy int64 arrays with entries reduced mod p.  Everything here
is elimination-based and exact; the batched variants run one vectorized
Gaussian elimination across a whole stack of matrices, which is what keeps
the counting layer fast.
"""

from fractions import Fraction

import numpy as np

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113)


def is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def primes(count, minimum=2):
    """First `count` primes that are >= minimum."""
    out = []
    for q in _SMALL_PRIMES:
        if q >= minimum:
            out.append(q)
        if len(out) == count:
            return out
    q = _SMALL_PRIMES[-1]
    while len(out) < count:
        q += 2
        if is_prime(q):
            out.append(q)
    return out


def inverse_table(p):
    """inv[a] = a^-1 mod p (inv[0] = 0)."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


_INV_CACHE = {}


def _inv(p):
    if p not in _INV_CACHE:
        _INV_CACHE[p] = inverse_table(p)
    return _INV_CACHE[p]


def mat(rows, p):
    return np.asarray(rows, dtype=np.int64) % p


def matmul(a, b, p):
    return (a @ b) % p


def rref(m, p):
    """Row-reduce in place semantics; returns (rref matrix, pivot columns)."""
    a = m.copy() % p
    rows, cols = a.shape
    inv = _inv(p)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + nz[0]
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        a[r] = (a[r] * inv[a[r, c]]) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, p):
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def nullspace(m, p):
    """Basis of the right kernel, rows = basis vectors (RREF-style)."""
    rows, cols = m.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    a, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, c in enumerate(free):
        basis[k, c] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-a[i, c]) % p
    return basis


def solve(a, b, p):
    """One solution x of a x = b, or None if inconsistent. b may be a matrix."""
    rows, cols = a.shape
    single = b.ndim == 1
    bm = b.reshape(rows, -1) % p
    aug = np.concatenate([a % p, bm], axis=1)
    red, pivots = rref(aug, p)
    for i, pc in enumerate(pivots):
        if pc >= cols:
            return None
    x = np.zeros((cols, bm.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = red[i, cols:]
    return x[:, 0] if single else x


def rank_batched(stack, p):
    """Ranks of a (N, m, n) stack of matrices over F_p, vectorized.

    Runs a single masked Gaussian elimination across the batch axis.
    """
    a = np.asarray(stack)
    if a.ndim != 3:
        raise ValueError("expected (N, m, n) stack")
    n_items, rows, cols = a.shape
    if n_items == 0:
        return np.zeros(0, dtype=np.int64)
    if rows == 0 or cols == 0:
        return np.zeros(n_items, dtype=np.int64)
    # int32 keeps the row updates in cache; products stay below 2^31 for
    # any prime handled here
    dtype = np.int32 if p < 30000 else np.int64
    a = (a % p).astype(dtype)
    inv = _inv(p).astype(dtype)
    r = np.zeros(n_items, dtype=np.int64)  # current pivot row per item
    idx = np.arange(n_items)
    row_idx = np.arange(rows)
    for c in range(cols):
        active = r < rows
        if not active.any():
            break
        col = a[:, :, c]
        below = (row_idx[None, :] >= r[:, None]) & (col != 0) & active[:, None]
        has = below.any(axis=1)
        if not has.any():
            continue
        pos = np.argmax(below, axis=1)
        items = idx[has]
        prow = pos[has]
        crow = r[has]
        # swap pivot row up
        tmp = a[items, prow, :].copy()
        a[items, prow, :] = a[items, crow, :]
        a[items, crow, :] = tmp
        piv = a[items, crow, c]
        a[items, crow, :] = (a[items, crow, :] * inv[piv][:, None]) % p
        # eliminate strictly below the pivot row
        colv = a[items, :, c]
        mask = row_idx[None, :] > crow[:, None]
        factors = np.where(mask, colv, 0)
        a[items] = (a[items] - factors[:, :, None] * a[items, crow, :][:, None, :]) % p
        r[items] += 1
    return r


def rank_triple(m, p):
    """(rank, rref, pivots) in one pass for small matrices."""
    red, piv = rref(m, p)
    return len(piv), red, piv


def gaussian_binomial(n, k, q):
    """q-binomial [n choose k]_q; at q=1 this is the ordinary binomial."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q_int(n - i, q)
        den *= q_int(i + 1, q)
    assert num % den == 0
    return num // den


def q_int(n, q):
    return sum(q ** i for i in range(n))


def q_factorial(n, q):
    out = 1
    for k in range(1, n + 1):
        out *= q_int(k, q)
    return out


def subspace_count_total(n, p):
    """Total number of subspaces of F_p^n (all dimensions)."""
    return sum(gaussian_binomial(n, k, p) for k in range(n + 1))


def enumerate_subspaces(p, n, k, budget=None):
    """Yield each k-dim subspace of F_p^n once, as an RREF basis matrix (k, n).

    Enumerates by pivot-column pattern and free entries; canonical reduced
    echelon representatives guarantee no duplicates.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    total = gaussian_binomial(n, k, p)
    if budget is not None and total > budget:
        raise ResourceError(
            f"subspace enumeration of size {total} exceeds budget {budget}")
    if k == 0:
        yield np.zeros((0, n), dtype=np.int64)
        return
    from itertools import combinations, product
    for pivots in combinations(range(n), k):
        free_pos = []
        for i, pc in enumerate(pivots):
            nxt = pivots[i + 1] if i + 1 < k else n
            for c in range(pc + 1, n):
                if c not in pivots:
                    # entries right of the pivot, excluding later pivot columns
                    free_pos.append((i, c))
        base = np.zeros((k, n), dtype=np.int64)
        for i, pc in enumerate(pivots):
            base[i, pc] = 1
        usable = [(i, c) for (i, c) in free_pos]
        if not usable:
            yield base.copy()
            continue
        for vals in product(range(p), repeat=len(usable)):
            m = base.copy()
            for (i, c), v in zip(usable, vals):
                m[i, c] = v
            yield m


def subspace_list(p, n, k):
    """All k-subspaces as (bases stack, pivot pattern list).

    Returns list of (pivots tuple, stacked bases (N_pat, k, n)).
    """
    from itertools import combinations, product
    groups = []
    if k == 0:
        groups.append(((), np.zeros((1, 0, n), dtype=np.int64)))
        return groups
    for pivots in combinations(range(n), k):
        free_pos = []
        for i, pc in enumerate(pivots):
            for c in range(pc + 1, n):
                if c not in pivots:
                    free_pos.append((i, c))
        base = np.zeros((k, n), dtype=np.int64)
        for i, pc in enumerate(pivots):
            base[i, pc] = 1
        nfree = len(free_pos)
        count = p ** nfree
        stack = np.broadcast_to(base, (count, k, n)).copy()
        if nfree:
            vals = np.indices((p,) * nfree).reshape(nfree, -1).T
            for j, (i, c) in enumerate(free_pos):
                stack[:, i, c] = vals[:, j]
        groups.append((tuple(pivots), stack))
    return groups


class ResourceError(RuntimeError):
    """Raised when an enumeration would exceed the configured budget."""


def solve_exact_rational(a_rows, b):
    """Unique rational solution of an (overdetermined, consistent) system.

    a_rows: list of lists of ints/Fractions, b: list of ints/Fractions.
    Requires full column rank; raises ValueError otherwise.
    """
    m = [[Fraction(x) for x in row] + [Fraction(y)]
         for row, y in zip(a_rows, b)]
    rows = len(m)
    cols = len(a_rows[0]) if rows else 0
    piv_of_col = {}
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pivval = m[r][c]
        m[r] = [x / pivval for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_of_col[c] = r
        r += 1
    if len(piv_of_col) < cols:
        raise ValueError("system does not have full column rank")
    for i in range(r, rows):
        if m[i][cols] != 0:
            raise ValueError("inconsistent system")
    return [m[piv_of_col[c]][cols] for c in range(cols)]
