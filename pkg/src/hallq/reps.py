"""Concrete quiver representations over prime fields.

An FFRep assigns F_p^{d_i} to each vertex and one matrix to each arrow
(matrix shape = target dim x source dim, acting on column vectors).

The two families used throughout carry canonical models:

  cyclic   nilpotent representations of the cyclic quiver; isomorphism
           classes are r-tuples of partitions (one per vertex: the lengths
           of the chain summands with top at that vertex)
  kronecker  classes are (prep multiset, quasi-length partition, prei
           multiset); the quasi-length partition is geometric, i.e. a
           point of degree d with local type lambda contributes d copies
           of each part of lambda

Classification never searches orbits: it is driven entirely by rank
invariants (path ranks for the cyclic quiver, pencil/Toeplitz ranks for
the Kronecker quiver), which also batch across large stacks.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import fplinalg as fl
from .fplinalg import ResourceError
from .partitions import MultiPartition, Partition, partitions_of
from .quivers import Quiver, cyclic, kronecker

DEFAULT_SUBMODULE_BUDGET = 10 ** 7


class NonNilpotentError(ValueError):
    pass


class ClassifyError(RuntimeError):
    """Rank invariants inconsistent with every class: signals a bug."""


class FFRep:
    """A representation of `quiver` over F_p."""

    __slots__ = ("quiver", "p", "dims", "maps")

    def __init__(self, quiver, p, dims, maps):
        self.quiver = quiver
        self.p = int(p)
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != quiver.n:
            raise ValueError("dims length mismatch")
        self.maps = []
        for k, (s, t) in enumerate(quiver.arrows):
            m = np.asarray(maps[k], dtype=np.int64) % p
            if m.shape != (self.dims[t - 1], self.dims[s - 1]):
                raise ValueError(f"arrow {k}: matrix shape {m.shape} != "
                                 f"({self.dims[t - 1]}, {self.dims[s - 1]})")
            self.maps.append(m)

    @property
    def dim_total(self):
        return sum(self.dims)

    def direct_sum(self, other):
        assert self.quiver == other.quiver and self.p == other.p
        dims = tuple(a + b for a, b in zip(self.dims, other.dims))
        maps = []
        for k, (s, t) in enumerate(self.quiver.arrows):
            m = np.zeros((dims[t - 1], dims[s - 1]), dtype=np.int64)
            a, b = self.maps[k], other.maps[k]
            m[:a.shape[0], :a.shape[1]] = a
            m[a.shape[0]:, a.shape[1]:] = b
            maps.append(m)
        return FFRep(self.quiver, self.p, dims, maps)

    def conjugate(self, gs):
        """Basis change by graded invertible gs (list of matrices)."""
        maps = []
        for k, (s, t) in enumerate(self.quiver.arrows):
            gt = gs[t - 1]
            gsv = gs[s - 1]
            inv = fl.solve(gsv, np.eye(gsv.shape[0], dtype=np.int64), self.p)
            maps.append((gt @ self.maps[k] @ inv) % self.p)
        return FFRep(self.quiver, self.p, self.dims, maps)

    def to_json(self):
        return {"quiver": self.quiver.to_json(), "p": self.p,
                "dims": list(self.dims),
                "maps": [m.reshape(-1).tolist() for m in self.maps]}

    def __repr__(self):
        return f"FFRep(p={self.p}, dims={self.dims})"


def zero_rep(quiver, p):
    dims = (0,) * quiver.n
    maps = [np.zeros((0, 0), dtype=np.int64) for _ in quiver.arrows]
    return FFRep(quiver, p, dims, maps)


def simple_rep(quiver, p, i):
    dims = tuple(1 if j == i - 1 else 0 for j in range(quiver.n))
    maps = [np.zeros((dims[t - 1], dims[s - 1]), dtype=np.int64)
            for s, t in quiver.arrows]
    return FFRep(quiver, p, dims, maps)


# ---------------------------------------------------------------------------
# Hom / Ext

def hom_matrix(m, n):
    """Constraint matrix whose kernel is Hom(m, n).

    Unknowns are the row-major entries of phi_i in Hom(m_i, n_i); each
    arrow contributes phi_t a - b phi_s = 0, assembled with Kronecker
    products (row-major: vec(phi_t a) = (I (x) a^T) vec(phi_t) and
    vec(b phi_s) = (b (x) I) vec(phi_s)).
    """
    assert m.quiver == n.quiver and m.p == n.p
    q = m.quiver
    p = m.p
    offs = []
    tot = 0
    for i in range(q.n):
        offs.append(tot)
        tot += m.dims[i] * n.dims[i]
    rows = []
    for k, (s, t) in enumerate(q.arrows):
        a = m.maps[k]   # (mt, ms)
        b = n.maps[k]   # (nt, ns)
        mt, ms = m.dims[t - 1], m.dims[s - 1]
        nt, ns = n.dims[t - 1], n.dims[s - 1]
        if nt * ms == 0:
            continue
        blk = np.zeros((nt * ms, tot), dtype=np.int64)
        if mt:
            blk[:, offs[t - 1]:offs[t - 1] + nt * mt] = np.kron(
                np.eye(nt, dtype=np.int64), a.T)
        if ns:
            blk[:, offs[s - 1]:offs[s - 1] + ns * ms] -= np.kron(
                b, np.eye(ms, dtype=np.int64))
        rows.append(blk % p)
    if rows:
        big = np.concatenate(rows, axis=0)
    else:
        big = np.zeros((0, tot), dtype=np.int64)
    return big, tot


def hom_dim(m, n):
    big, tot = hom_matrix(m, n)
    return tot - fl.rank(big, m.p)


def hom_basis(m, n):
    """Basis of Hom(m, n), each element a list of per-vertex matrices."""
    big, tot = hom_matrix(m, n)
    ker = fl.nullspace(big, m.p)
    out = []
    for vec in ker:
        mats = []
        pos = 0
        for i in range(m.quiver.n):
            sz = m.dims[i] * n.dims[i]
            mats.append(vec[pos:pos + sz].reshape(n.dims[i], m.dims[i]))
            pos += sz
        out.append(mats)
    return out


def end_dim(m):
    return hom_dim(m, m)


def ext_dim(m, n):
    """dim Ext^1(m, n) = dim Hom(m, n) - <dim m, dim n> (hereditary)."""
    return hom_dim(m, n) - m.quiver.euler_form(m.dims, n.dims)


def is_exceptional(m):
    return ext_dim(m, m) == 0


# ---------------------------------------------------------------------------
# extensions

def extension_rep(quot, sub, cocycle):
    """Middle term of the extension of `quot` by `sub` given by a cocycle.

    cocycle: list of matrices phi_h in Hom(quot_{s(h)}, sub_{t(h)}).
    """
    q = quot.quiver
    dims = tuple(a + b for a, b in zip(sub.dims, quot.dims))
    maps = []
    for k, (s, t) in enumerate(q.arrows):
        st, ss = sub.dims[t - 1], sub.dims[s - 1]
        qt, qs = quot.dims[t - 1], quot.dims[s - 1]
        m = np.zeros((st + qt, ss + qs), dtype=np.int64)
        m[:st, :ss] = sub.maps[k]
        m[st:, ss:] = quot.maps[k]
        m[:st, ss:] = cocycle[k]
        maps.append(m)
    return FFRep(q, quot.p, dims, maps)


def nonsplit_extension(quot, sub):
    """A middle term for a nonzero class in Ext^1(quot, sub).

    Requires dim Ext^1(quot, sub) >= 1; deterministic choice.
    """
    q = quot.quiver
    p = quot.p
    # cocycle coordinates: one matrix per arrow, shape (sub_t, quot_s)
    sizes = [(sub.dims[t - 1], quot.dims[s - 1]) for s, t in q.arrows]
    tot = sum(a * b for a, b in sizes)
    # coboundary map: delta(f)_h = sub_h f_{s(h)} - f_{t(h)} quot_h,
    # f_i in Hom(quot_i, sub_i)
    fsizes = [(sub.dims[i], quot.dims[i]) for i in range(q.n)]
    ftot = sum(a * b for a, b in fsizes)
    offs_f = np.cumsum([0] + [a * b for a, b in fsizes])
    offs_c = np.cumsum([0] + [a * b for a, b in sizes])
    rows = np.zeros((tot, ftot), dtype=np.int64)
    for k, (s, t) in enumerate(q.arrows):
        st, qs = sizes[k]
        ss = sub.dims[s - 1]
        a = sub.maps[k]      # (st, ss)
        b = quot.maps[k]     # (qt, qs)
        for r_ in range(st):
            for c_ in range(qs):
                row = rows[offs_c[k] + r_ * qs + c_]
                # (sub_h f_s)[r_, c_] = sum_kk a[r_, kk] f_s[kk, c_]
                for kk in range(ss):
                    row[offs_f[s - 1] + kk * qs + c_] += a[r_, kk]
                # (f_t quot_h)[r_, c_] = sum_kk f_t[r_, kk] b[kk, c_]
                for kk in range(quot.dims[t - 1]):
                    row[offs_f[t - 1] + r_ * quot.dims[t - 1] + kk] -= b[kk, c_]
    rows %= p
    # image of delta inside cocycle space, as a row space
    im_basis, piv = fl.rref(rows.T % p, p)
    span = im_basis[:len(piv)]
    # first standard cocycle not in the image span gives a nonsplit class
    for j in range(tot):
        vec = np.zeros(tot, dtype=np.int64)
        vec[j] = 1
        test = np.concatenate([span, vec[None, :]], axis=0)
        if fl.rank(test, p) > len(span):
            coc = []
            pos = 0
            for k, (a, b) in enumerate(sizes):
                coc.append(vec[pos:pos + a * b].reshape(a, b))
                pos += a * b
            return extension_rep(quot, sub, coc)
    raise ValueError("Ext^1(quot, sub) = 0: no nonsplit extension")


# ---------------------------------------------------------------------------
# reflection functors

def reflection_apply(rep, i, direction="+"):
    """sigma_i^+ at a sink (direction '+') or sigma_i^- at a source ('-')."""
    q = rep.quiver
    p = rep.p
    if direction == "+":
        if not q.is_sink(i):
            raise ValueError(f"vertex {i} is not a sink")
        inc = q.arrows_into(i)
        blocks = [q.arrows[k][0] for k in inc]
        widths = [rep.dims[b - 1] for b in blocks]
        total = sum(widths)
        c = np.zeros((rep.dims[i - 1], total), dtype=np.int64)
        pos = 0
        for k, w in zip(inc, widths):
            c[:, pos:pos + w] = rep.maps[k]
            pos += w
        ker = fl.nullspace(c, p)  # rows = kernel basis in the big sum
        new_q = q.reflect(i)
        dims = list(rep.dims)
        dims[i - 1] = ker.shape[0]
        maps = [None] * len(q.arrows)
        pos = 0
        for idx, (k, w) in enumerate(zip(inc, widths)):
            # reversed arrow i -> s(h): projection of the kernel onto block
            maps[k] = ker[:, pos:pos + w].T % p
            pos += w
        for k, (s, t) in enumerate(q.arrows):
            if k not in inc:
                maps[k] = rep.maps[k]
        return FFRep(new_q, p, dims, maps)
    if direction == "-":
        if not q.is_source(i):
            raise ValueError(f"vertex {i} is not a source")
        out = q.arrows_out_of(i)
        blocks = [q.arrows[k][1] for k in out]
        heights = [rep.dims[b - 1] for b in blocks]
        total = sum(heights)
        d = np.zeros((total, rep.dims[i - 1]), dtype=np.int64)
        pos = 0
        for k, h in zip(out, heights):
            d[pos:pos + h, :] = rep.maps[k]
            pos += h
        # cokernel of d inside the stacked space
        im_basis, piv = fl.rref(d.T % p, p)
        b = im_basis[:len(piv)]          # rows span image
        pivots = piv
        nonpiv = [c_ for c_ in range(total) if c_ not in pivots]
        # cokernel coordinates: v -> (v - B^T v[J])[C], i.e.
        # proj = S_C - (B^T)[C,:] @ S_J with J/C the pivot/non-pivot columns
        proj = np.zeros((len(nonpiv), total), dtype=np.int64)
        for a_, c_ in enumerate(nonpiv):
            proj[a_, c_] = 1
        bt = b.T  # (total, k)
        sel_j = np.zeros((len(pivots), total), dtype=np.int64)
        for j_, pc in enumerate(pivots):
            sel_j[j_, pc] = 1
        proj = (proj - (bt[nonpiv, :] @ sel_j)) % p
        new_q = q.reflect(i)
        dims = list(rep.dims)
        dims[i - 1] = len(nonpiv)
        maps = [None] * len(q.arrows)
        pos = 0
        for k, h in zip(out, heights):
            # reversed arrow t(h) -> i: map V_t -> coker
            maps[k] = proj[:, pos:pos + h] % p
            pos += h
        for k in range(len(q.arrows)):
            if k not in out:
                maps[k] = rep.maps[k]
        return FFRep(new_q, p, dims, maps)
    raise ValueError("direction must be '+' or '-'")


def build_indecomposable(q, root, p, _depth=0):
    """The unique indecomposable with real-root dimension vector `root`.

    Built by a chain of reflection functors from a simple; deterministic.
    """
    root = tuple(int(x) for x in root)
    if _depth > 64:
        raise ValueError(f"root {root} not reachable by reflections")
    if sum(root) < 1 or min(root) < 0:
        raise ValueError(f"{root} is not a positive root")
    if sum(root) == 1:
        return simple_rep(q, p, root.index(1) + 1)
    for i in range(1, q.n + 1):
        if not (q.is_sink(i) or q.is_source(i)):
            continue
        beta = q.reflect_dim(i, root)
        if sum(beta) < sum(root) and min(beta) >= 0:
            q2 = q.reflect(i)
            sub = build_indecomposable(q2, beta, p, _depth + 1)
            direction = "-" if q.is_sink(i) else "+"
            # i is a source of q2 when it was a sink of q, and vice versa
            m = reflection_apply(sub, i, direction)
            if m.quiver != q:
                raise AssertionError("reflection did not return to base quiver")
            if m.dims != root:
                raise AssertionError(f"built {m.dims}, wanted {root}")
            return m
    raise ValueError(f"no admissible reflection decreases {root}")


# ---------------------------------------------------------------------------
# cyclic quiver: instantiation and classification

def _cyclic_part_dim(r, i, l):
    """Dimension vector of the chain with top at vertex i and length l."""
    d = [0] * r
    for t in range(l):
        d[(i - 1 + t) % r] += 1
    return tuple(d)


def cyclic_class_dim(pi):
    r = pi.r
    d = [0] * r
    for i, l in pi.pairs():
        for t in range(l):
            d[(i - 1 + t) % r] += 1
    return tuple(d)


def instantiate_cyclic(pi, p):
    """Canonical nilpotent model of the class `pi` over F_p."""
    r = pi.r
    q = cyclic(r)
    dims_parts = []
    for i, l in pi.pairs():
        dims_parts.append((i, l))
    alpha = cyclic_class_dim(pi)
    # per-vertex basis: one slot per (part index, depth) with that vertex
    slots = {j: [] for j in range(1, r + 1)}
    for idx, (i, l) in enumerate(dims_parts):
        for t in range(l):
            v = (i - 1 + t) % r + 1
            slots[v].append((idx, t))
    index = {}
    for v in range(1, r + 1):
        for pos, key in enumerate(slots[v]):
            index[key] = pos
    maps = []
    for s, t in q.arrows:
        m = np.zeros((alpha[t - 1], alpha[s - 1]), dtype=np.int64)
        for idx, (i, l) in enumerate(dims_parts):
            for dep in range(l - 1):
                v = (i - 1 + dep) % r + 1
                if v == s:
                    m[index[(idx, dep + 1)], index[(idx, dep)]] = 1
        maps.append(m)
    return FFRep(q, p, alpha, maps)


def enumerate_cyclic_classes(alpha, r):
    """All multipartitions pi with dim M(pi) = alpha, deterministic order."""
    alpha = tuple(alpha)
    total = sum(alpha)
    parts = []
    for i in range(1, r + 1):
        for l in range(1, total + 1):
            d = _cyclic_part_dim(r, i, l)
            if all(x <= y for x, y in zip(d, alpha)):
                parts.append((i, l, d))
    results = []

    def rec(k, remaining, acc):
        if all(x == 0 for x in remaining):
            comps = [[] for _ in range(r)]
            for i, l in acc:
                comps[i - 1].append(l)
            results.append(MultiPartition([sorted(c, reverse=True)
                                           for c in comps]))
            return
        if k == len(parts):
            return
        i, l, d = parts[k]
        cap = 0
        while all(x >= dd * (cap + 1) for x, dd in zip(remaining, d)):
            cap += 1
        for mult in range(cap, -1, -1):
            rec(k + 1, tuple(x - dd * mult for x, dd in zip(remaining, d)),
                acc + [(i, l)] * mult)

    rec(0, alpha, [])
    uniq = sorted(set(results), key=lambda m: m.sort_key())
    return uniq


@lru_cache(maxsize=None)
def _cyclic_solver(r, alpha):
    """Exact solver turning a path-rank table into part multiplicities.

    Returns (unknowns, eq_index, int_matrix, denominator): multiplicities =
    (int_matrix @ rank_vector[selected_rows]) / denominator.
    """
    alpha = tuple(alpha)
    total = sum(alpha)
    unknowns = []
    for i in range(1, r + 1):
        for l in range(1, total + 1):
            d = _cyclic_part_dim(r, i, l)
            if all(x <= y for x, y in zip(d, alpha)):
                unknowns.append((i, l))
    eqs = []      # (i, m)
    rows = []
    for i in range(1, r + 1):
        for m in range(0, total + 1):
            row = []
            for (j, l) in unknowns:
                # rank of length-m path starting at i on the chain (j, l)
                cnt = 0
                for t in range(0, l - m):
                    if (t - (i - j)) % r == 0:
                        cnt += 1
                row.append(cnt)
            eqs.append((i, m))
            rows.append(row)
    # select independent rows via rational elimination
    m_frac = [[Fraction(x) for x in row] for row in rows]
    ncol = len(unknowns)
    sel = []
    basis = []
    for ridx, row in enumerate(m_frac):
        if len(sel) == ncol:
            break
        cand = basis + [list(row)]
        # rank test by elimination
        mat = [r_[:] for r_ in cand]
        rank_ = 0
        for c in range(ncol):
            pr = next((i_ for i_ in range(rank_, len(mat)) if mat[i_][c] != 0),
                      None)
            if pr is None:
                continue
            mat[rank_], mat[pr] = mat[pr], mat[rank_]
            pv = mat[rank_][c]
            mat[rank_] = [x / pv for x in mat[rank_]]
            for i_ in range(len(mat)):
                if i_ != rank_ and mat[i_][c] != 0:
                    f = mat[i_][c]
                    mat[i_] = [x - f * y for x, y in zip(mat[i_], mat[rank_])]
            rank_ += 1
        if rank_ > len(basis):
            basis.append(list(row))
            sel.append(ridx)
    if len(sel) != ncol:
        raise ClassifyError("cyclic rank system is rank deficient")
    # invert the selected square system
    inv_cols = []
    sq = [rows[i] for i in sel]
    for k in range(ncol):
        rhs = [1 if i == k else 0 for i in range(ncol)]
        inv_cols.append(fl.solve_exact_rational(sq, rhs))
    denom = 1
    for col in inv_cols:
        for x in col:
            denom = denom * x.denominator // np.gcd(denom, x.denominator)
    int_matrix = np.zeros((ncol, ncol), dtype=np.int64)
    for k, col in enumerate(inv_cols):
        for i, x in enumerate(col):
            int_matrix[i, k] = int(x * denom)
    full_matrix = np.array(rows, dtype=np.int64)
    return (tuple(unknowns), tuple(sel), int_matrix, int(denom),
            tuple(eqs), full_matrix)


def classify_cyclic_batch(r, alpha, stacks, p):
    """Classify a stack of nilpotent cyclic reps with common dims alpha.

    stacks: list of r arrays, stacks[j] has shape (N, alpha[j+1 mod r],
    alpha[j]).  Returns a list of MultiPartition.
    """
    alpha = tuple(alpha)
    n_items = max((s.shape[0] for s in stacks), default=0)
    total = sum(alpha)
    if total == 0:
        return [MultiPartition([()] * r)] * n_items
    unknowns, sel, int_matrix, denom, eqs, full_matrix = _cyclic_solver(r, alpha)
    # path ranks: for each start vertex i, lengths m = 0..total
    ranks = {}
    for i in range(1, r + 1):
        ranks[(i, 0)] = np.full(n_items, alpha[i - 1], dtype=np.int64)
        cur = None
        for m in range(1, total + 1):
            arrow_vertex = (i - 1 + m - 1) % r  # arrow from this vertex
            x = stacks[arrow_vertex]
            if cur is None:
                cur = x.copy()
            else:
                cur = np.matmul(x, cur) % p
            ranks[(i, m)] = fl.rank_batched(cur, p)
    rank_rows = np.stack([ranks[eq] for eq in eqs], axis=1)  # (N, n_eq)
    nil = np.concatenate([ranks[(i, total)][:, None]
                          for i in range(1, r + 1)], axis=1)
    if (nil != 0).any():
        raise NonNilpotentError("representation is not nilpotent")
    sel_rows = rank_rows[:, list(sel)]                        # (N, ncol)
    mults = sel_rows @ int_matrix.T                           # (N, ncol)
    if (mults % denom != 0).any():
        raise ClassifyError("non-integer multiplicities in cyclic classify")
    mults //= denom
    if (mults < 0).any():
        raise ClassifyError("negative multiplicities in cyclic classify")
    # verify full consistency
    pred = mults @ full_matrix.T
    if (pred != rank_rows).any():
        raise NonNilpotentError(
            "rank table inconsistent with any nilpotent class")
    out = []
    for row in mults:
        comps = [[] for _ in range(r)]
        for (i, l), m_ in zip(unknowns, row):
            if m_:
                comps[i - 1].extend([l] * int(m_))
        out.append(MultiPartition([sorted(c, reverse=True) for c in comps]))
    return out


def classify_cyclic(rep):
    """Multipartition of a single nilpotent cyclic representation."""
    r = rep.quiver.n
    stacks = [rep.maps[j][None, :, :] for j in range(r)]
    return classify_cyclic_batch(r, rep.dims, stacks, rep.p)[0]


# ---------------------------------------------------------------------------
# Kronecker quiver: canonical models

def p1_points(p, count=None):
    """Canonical ordering of P^1(F_p): [1:0], [0:1], [1:1], ..., [1:p-1]."""
    pts = [(1, 0), (0, 1)] + [(1, b) for b in range(1, p)]
    if count is not None:
        if count > len(pts):
            raise ValueError(
                f"need {count} distinct points of P^1(F_{p}); only {len(pts)}"
                f" available (use a prime >= {count - 1})")
        return pts[:count]
    return pts


def kronecker_prep(m, p):
    """Preprojective indecomposable of dimension (m+1, m)."""
    x1 = np.zeros((m + 1, m), dtype=np.int64)
    x2 = np.zeros((m + 1, m), dtype=np.int64)
    for i in range(m):
        x1[i, i] = 1
        x2[i + 1, i] = 1
    return FFRep(kronecker(), p, (m + 1, m), [x1, x2])


def kronecker_prei(n, p):
    """Preinjective indecomposable of dimension (n, n+1)."""
    x1 = np.zeros((n, n + 1), dtype=np.int64)
    x2 = np.zeros((n, n + 1), dtype=np.int64)
    for i in range(n):
        x1[i, i] = 1
        x2[i, i + 1] = 1
    return FFRep(kronecker(), p, (n, n + 1), [x1, x2])


def kronecker_regular(point, l, p):
    """Regular indecomposable of quasi-length l at a rational point [a:b]."""
    a, b = point
    jord = np.zeros((l, l), dtype=np.int64)
    for i in range(l - 1):
        jord[i + 1, i] = 1
    eye = np.eye(l, dtype=np.int64)
    if a == 0:
        x1, x2 = jord, eye
    else:
        assert a == 1
        x1, x2 = eye, (b * eye + jord) % p
    return FFRep(kronecker(), p, (l, l), [x1, x2])


class KroneckerClass:
    """Decomposition class (prep multiset, regular partition, prei multiset)."""

    __slots__ = ("prep", "regular", "prei")

    def __init__(self, prep=(), regular=(), prei=()):
        self.prep = tuple(sorted(int(x) for x in prep))
        self.regular = Partition(regular)
        self.prei = tuple(sorted(int(x) for x in prei))
        if any(x < 0 for x in self.prep + self.prei):
            raise ValueError("negative entries")

    def dim(self):
        d1 = sum(m + 1 for m in self.prep) + self.regular.weight \
            + sum(n for n in self.prei)
        d2 = sum(m for m in self.prep) + self.regular.weight \
            + sum(n + 1 for n in self.prei)
        return (d1, d2)

    def key(self):
        return (self.prep, self.regular.parts, self.prei)

    def __eq__(self, other):
        return isinstance(other, KroneckerClass) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"KClass(prep={list(self.prep)}, reg={list(self.regular.parts)},"
                f" prei={list(self.prei)})")

    def to_json(self):
        return {"prep": list(self.prep), "regular": list(self.regular.parts),
                "prei": list(self.prei)}


def instantiate_kronecker(cls, p, points=None):
    """Canonical model of a Kronecker class over F_p.

    Regular summands are placed at pairwise distinct rational points, by
    default the first len(regular) points of the canonical P^1 ordering.
    """
    want = len(cls.regular)
    if points is None:
        points = p1_points(p, want) if want else []
    if len(points) < want:
        raise ValueError("need one point per regular summand")
    if len(set(points)) != len(points):
        raise ValueError("points must be pairwise distinct")
    rep = zero_rep(kronecker(), p)
    for m in cls.prep:
        rep = rep.direct_sum(kronecker_prep(m, p))
    for pt, l in zip(points, cls.regular.parts):
        rep = rep.direct_sum(kronecker_regular(pt, l, p))
    for n in cls.prei:
        rep = rep.direct_sum(kronecker_prei(n, p))
    return rep


def enumerate_kronecker_classes(gamma):
    """All Kronecker classes of dimension vector gamma, deterministic order."""
    d1, d2 = gamma
    out = []

    def prep_multisets(maxm, rem):
        yield ()
        top = min(maxm, rem[0] - 1, rem[1])
        for m in range(top, -1, -1):
            for rest in prep_multisets(m, (rem[0] - m - 1, rem[1] - m)):
                yield (m,) + rest

    def prei_multisets(maxn, rem):
        yield ()
        top = min(maxn, rem[0], rem[1] - 1)
        for n in range(top, -1, -1):
            for rest in prei_multisets(n, (rem[0] - n, rem[1] - n - 1)):
                yield (n,) + rest

    for prep in prep_multisets(d1, (d1, d2)):
        pd = (sum(m + 1 for m in prep), sum(prep))
        r1 = (d1 - pd[0], d2 - pd[1])
        if min(r1) < 0:
            continue
        for prei in prei_multisets(d2, r1):
            idm = (sum(prei), sum(n + 1 for n in prei))
            r2 = (r1[0] - idm[0], r1[1] - idm[1])
            if min(r2) < 0 or r2[0] != r2[1]:
                continue
            for om in partitions_of(r2[0]):
                out.append(KroneckerClass(prep, om, prei))
    uniq = sorted(set(out), key=lambda c: c.key())
    return uniq


@lru_cache(maxsize=None)
def irreducible_quadratics(p):
    """Monic irreducible t^2 + b t + c over F_p, as (b, c) pairs."""
    out = []
    for b in range(p):
        for c in range(p):
            if all((x * x + b * x + c) % p for x in range(p)):
                out.append((b, c))
    return tuple(out)


def _toeplitz_nullity(x1, x2, k, p):
    """Nullity of the k-step column Toeplitz map.

    x1, x2: stacks (N, d1, d2).  Counts polynomial-kernel dimensions,
    i.e. sum over wide minimal-index blocks I_n of max(k - n, 0).
    """
    n_items, d1, d2 = x1.shape
    big = np.zeros((n_items, (k + 1) * d1, k * d2), dtype=np.int64)
    for i in range(k):
        big[:, i * d1:(i + 1) * d1, i * d2:(i + 1) * d2] = x1
        big[:, (i + 1) * d1:(i + 2) * d1, i * d2:(i + 1) * d2] = x2
    return k * d2 - fl.rank_batched(big, p)


def _minimal_index_multiplicities(x1, x2, p, nmax, budget_dim):
    """Multiplicities t_n of wide minimal-index blocks, n = 0..nmax.

    Works incrementally: t_n needs the Toeplitz nullities u_{n-1}, u_n,
    u_{n+1}; stops early once the remaining column budget cannot host a
    deeper block (an index-n block uses n+1 columns of budget_dim).
    """
    n_items = x1.shape[0]
    t_mult = np.zeros((n_items, max(nmax + 1, 0)), dtype=np.int64)
    if nmax < 0:
        return t_mult
    zero = np.zeros(n_items, dtype=np.int64)
    u = [zero, zero]     # u(-1), u(0)
    consumed = np.zeros(n_items, dtype=np.int64)
    for n in range(0, nmax + 1):
        u.append(_toeplitz_nullity(x1, x2, n + 1, p))
        t_mult[:, n] = u[n + 2] - 2 * u[n + 1] + u[n]
        consumed += t_mult[:, n] * (n + 1)
        # a deeper block of index >= n+1 needs at least n+2 free columns
        if n + 1 <= nmax and not (budget_dim - consumed >= n + 2).any():
            break
    return t_mult


def _point_matrix(x1, x2, point, p):
    a, b = point
    return (b * x1 - a * x2) % p


def _chain_nullities(amat, bmat, kmax, p, items=None):
    """nullity of the k-block lower-bidiagonal matrix [[A],[B,A],...]."""
    n_items, d1, d2 = amat.shape
    sel = slice(None) if items is None else items
    a = amat[sel]
    bm = bmat[sel]
    n_sel = a.shape[0]
    outs = []
    for k in range(1, kmax + 1):
        big = np.zeros((n_sel, k * d1, k * d2), dtype=np.int64)
        for i in range(k):
            big[:, i * d1:(i + 1) * d1, i * d2:(i + 1) * d2] = a
            if i + 1 < k:
                big[:, (i + 1) * d1:(i + 2) * d1, i * d2:(i + 1) * d2] = bm
        outs.append(k * d2 - fl.rank_batched(big, p))
    return outs


def _quadratic_probe(x1, x2, coeffs, p, items=None):
    """nullity of the degree-2 'evaluation' map at t^2 + b t + c.

    Kernel dimension = 2 * (#parts at that closed point) + 2 * (#prei).
    """
    b, c = coeffs
    sel = slice(None) if items is None else items
    a1 = x1[sel]
    a2 = x2[sel]
    n_sel, d1, d2 = a1.shape
    big = np.zeros((n_sel, 2 * d1, 2 * d2), dtype=np.int64)
    # unknowns (v, w); rows: X2 v - X1 w ; c X1 v + (X2 + b X1) w
    big[:, :d1, :d2] = a2
    big[:, :d1, d2:] = (-a1) % p
    big[:, d1:, :d2] = (c * a1) % p
    big[:, d1:, d2:] = (a2 + b * a1) % p
    return 2 * d2 - fl.rank_batched(big, p)


def classify_kronecker_batch(dims, x1, x2, p):
    """Classify a stack of Kronecker representations with common dims.

    x1, x2: (N, d1, d2) stacks.  Returns list of KroneckerClass.
    """
    d1, d2 = dims
    n_items = x1.shape[0]
    if n_items == 0:
        return []
    if d1 + d2 == 0:
        return [KroneckerClass()] * n_items
    # preinjective multiplicities from column Toeplitz nullities
    nmax = min(d1, d2 - 1) if d2 >= 1 else -1
    t_mult = _minimal_index_multiplicities(x1, x2, p, nmax, d2)
    # preprojective multiplicities from the transposed pencil
    mmax = min(d2, d1 - 1) if d1 >= 1 else -1
    xt1 = np.swapaxes(x1, 1, 2)
    xt2 = np.swapaxes(x2, 1, 2)
    s_mult = _minimal_index_multiplicities(xt1, xt2, p, mmax, d1)
    if (s_mult < 0).any() or (t_mult < 0).any():
        raise ClassifyError("negative prep/prei multiplicities")
    prep_d1 = s_mult @ np.arange(1, mmax + 2) if mmax >= 0 else np.zeros(n_items, dtype=np.int64)
    prep_d2 = s_mult @ np.arange(0, mmax + 1) if mmax >= 0 else np.zeros(n_items, dtype=np.int64)
    prei_d1 = t_mult @ np.arange(0, nmax + 1) if nmax >= 0 else np.zeros(n_items, dtype=np.int64)
    prei_d2 = t_mult @ np.arange(1, nmax + 2) if nmax >= 0 else np.zeros(n_items, dtype=np.int64)
    rho1 = d1 - prep_d1 - prei_d1
    rho2 = d2 - prep_d2 - prei_d2
    if (rho1 != rho2).any() or (rho1 < 0).any():
        raise ClassifyError("regular part dimensions inconsistent")
    rho = rho1
    t_tot = t_mult.sum(axis=1)
    # rational point data: all p+1 pencil evaluations in one batched rank
    pts = p1_points(p)
    reg_parts = [[] for _ in range(n_items)]
    found = np.zeros(n_items, dtype=np.int64)
    if (rho > 0).any():
        stacked = np.concatenate(
            [_point_matrix(x1, x2, pt, p) for pt in pts], axis=0)
        all_null = d2 - fl.rank_batched(stacked, p)
    else:
        all_null = np.tile(t_tot, len(pts))
    for ptidx, pt in enumerate(pts):
        null1 = all_null[ptidx * n_items:(ptidx + 1) * n_items]
        parts1 = null1 - t_tot
        if (parts1 < 0).any():
            raise ClassifyError("negative part count at a point")
        hot = np.nonzero(parts1 > 0)[0]
        if hot.size == 0:
            continue
        amat = _point_matrix(x1, x2, pt, p)
        # deeper chains only where a part could exceed 1
        other = pts[0] if pt != pts[0] else pts[1]
        bmat = _point_matrix(x1, x2, other, p)
        kmax = int(rho[hot].max())
        nulls = _chain_nullities(amat, bmat, kmax, p, items=hot)
        f_prev = np.zeros(hot.size, dtype=np.int64)
        lam_cols = []
        for k in range(1, kmax + 1):
            fk = nulls[k - 1] - k * t_tot[hot]
            lam_cols.append(fk - f_prev)   # number of parts >= k
            f_prev = fk
        for a_, item in enumerate(hot):
            for k, col in enumerate(lam_cols, start=1):
                cnt_ge_k = col[a_]
                nxt = lam_cols[k][a_] if k < len(lam_cols) else 0
                exact = cnt_ge_k - nxt
                if exact < 0:
                    raise ClassifyError("invalid chain nullities")
                reg_parts[item].extend([k] * int(exact))
                found[item] += k * exact
    m_rem = rho - found
    if (m_rem < 0).any():
        raise ClassifyError("rational regular parts exceed regular dimension")
    if (m_rem == 1).any() or (m_rem >= 6).any():
        bad = int(m_rem[(m_rem == 1) | (m_rem >= 6)][0])
        raise ClassifyError(
            f"unresolvable non-rational regular remainder {bad}")
    need4 = np.nonzero(m_rem == 4)[0]
    if need4.size:
        # distinguish one local type (2) at a quadratic point from all-1 types
        tparts = np.zeros(need4.size, dtype=np.int64)
        for coeffs in irreducible_quadratics(p):
            nul = _quadratic_probe(x1, x2, coeffs, p, items=need4)
            loc = (nul - 2 * t_tot[need4])
            if (loc % 2 != 0).any() or (loc < 0).any():
                raise ClassifyError("bad quadratic probe nullity")
            tparts += loc // 2
        for a_, item in enumerate(need4):
            if tparts[a_] == 1:
                reg_parts[item].extend([2, 2])
            else:
                reg_parts[item].extend([1, 1, 1, 1])
    for item in np.nonzero(m_rem == 2)[0]:
        reg_parts[item].extend([1, 1])
    for item in np.nonzero(m_rem == 3)[0]:
        reg_parts[item].extend([1, 1, 1])
    for item in np.nonzero(m_rem == 5)[0]:
        reg_parts[item].extend([1, 1, 1, 1, 1])
    out = []
    interned = {}
    for i in range(n_items):
        prep = []
        for m in range(0, mmax + 1):
            prep.extend([m] * int(s_mult[i, m]))
        prei = []
        for n in range(0, nmax + 1):
            prei.extend([n] * int(t_mult[i, n]))
        key = (tuple(prep), tuple(sorted(reg_parts[i], reverse=True)),
               tuple(prei))
        cls = interned.get(key)
        if cls is None:
            cls = KroneckerClass(*key)
            interned[key] = cls
        out.append(cls)
    return out


def classify_kronecker(rep):
    """Decomposition class of a single Kronecker representation."""
    return classify_kronecker_batch(
        rep.dims, rep.maps[0][None, :, :], rep.maps[1][None, :, :], rep.p)[0]


# ---------------------------------------------------------------------------
# graded submodule enumeration (small scale, exact)

def submodule_tuple_count(dims, p):
    return int(np.prod([fl.subspace_count_total(d, p) for d in dims]))


def enumerate_submodules(rep, sub_dims=None, budget=DEFAULT_SUBMODULE_BUDGET):
    """Yield (sub FFRep, quot FFRep, bases) for every stable graded subspace.

    If sub_dims is given, restrict to subspaces with those graded dimensions.
    """
    q = rep.quiver
    p = rep.p
    total = 1
    dims_choices = []
    for i, d in enumerate(rep.dims):
        if sub_dims is None:
            ks = range(d + 1)
        else:
            if sub_dims[i] > d:
                return
            ks = [sub_dims[i]]
        per = []
        for k in ks:
            per.extend([m for _, stack in fl.subspace_list(p, d, k)
                        for m in stack])
        dims_choices.append(per)
        total *= len(per)
    if total > budget:
        raise ResourceError(
            f"{total} graded subspace tuples exceed budget {budget}")
    for combo in product(*dims_choices):
        stable = True
        for k, (s, t) in enumerate(q.arrows):
            ws = combo[s - 1]
            wt = combo[t - 1]
            if ws.shape[0] == 0:
                continue
            img = (rep.maps[k] @ ws.T) % p
            # img columns must lie in row space of wt
            if wt.shape[0] == 0:
                if img.any():
                    stable = False
                    break
            else:
                test = np.concatenate([wt, img.T], axis=0)
                if fl.rank(test, p) > wt.shape[0]:
                    stable = False
                    break
        if not stable:
            continue
        yield _sub_quot_pair(rep, combo)


def _sub_quot_pair(rep, bases):
    q = rep.quiver
    p = rep.p
    sub_dims = tuple(b.shape[0] for b in bases)
    quot_dims = tuple(d - k for d, k in zip(rep.dims, sub_dims))
    piv = []
    nonpiv = []
    for i, b in enumerate(bases):
        pv = []
        for row in b:
            nz = np.nonzero(row)[0]
            pv.append(int(nz[0]))
        piv.append(pv)
        nonpiv.append([c for c in range(rep.dims[i]) if c not in pv])
    sub_maps = []
    quot_maps = []
    for k, (s, t) in enumerate(q.arrows):
        x = rep.maps[k]
        bs, bt = bases[s - 1], bases[t - 1]
        img = (x @ bs.T) % p          # (d_t, k_s)
        sub_maps.append(img[piv[t - 1], :] % p)
        # quotient map on complement coordinates
        comp_src = nonpiv[s - 1]
        xc = x[:, comp_src] if comp_src else np.zeros((rep.dims[t - 1], 0),
                                                      dtype=np.int64)
        if bt.shape[0]:
            red = (xc - bt.T @ xc[piv[t - 1], :]) % p
        else:
            red = xc % p
        quot_maps.append(red[nonpiv[t - 1], :] % p)
    sub = FFRep(q, p, sub_dims, sub_maps)
    quot = FFRep(q, p, quot_dims, quot_maps)
    return sub, quot, bases


def count_filtrations(rep, quot_pred, sub_pred, sub_dims=None,
                      budget=DEFAULT_SUBMODULE_BUDGET):
    """#{N <= rep : sub_pred(N) and quot_pred(rep/N)} over F_p."""
    count = 0
    for sub, quot, _ in enumerate_submodules(rep, sub_dims=sub_dims,
                                             budget=budget):
        if sub_pred(sub) and quot_pred(quot):
            count += 1
    return count
