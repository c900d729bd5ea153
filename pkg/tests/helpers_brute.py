"""Brute-force decomposition oracle used only by the test suite.

Classifies a representation by exhaustively splitting off direct summands
(searching stable graded subspaces with stable complements), then labelling
each indecomposable piece from first principles.  Completely independent of
the rank-invariant classifiers in hallq.reps.
"""

from itertools import product

import numpy as np

from hallq import fplinalg as fl
from hallq import reps as rp


_TAME_MODELS = {}


def _tame_models(p):
    if p not in _TAME_MODELS:
        from hallq.tame import TameModels
        _TAME_MODELS[p] = TameModels(p)
    return _TAME_MODELS[p]


def all_reps(quiver, dims, p, nilpotent_only=False):
    """Every representation with the given dims, as FFRep."""
    shapes = [(dims[t - 1], dims[s - 1]) for s, t in quiver.arrows]
    sizes = [a * b for a, b in shapes]
    total = sum(sizes)
    for flat in product(range(p), repeat=total):
        maps = []
        pos = 0
        for (a, b), sz in zip(shapes, sizes):
            maps.append(np.array(flat[pos:pos + sz],
                                 dtype=np.int64).reshape(a, b))
            pos += sz
        rep = rp.FFRep(quiver, p, dims, maps)
        if nilpotent_only and not _is_nilpotent(rep):
            continue
        yield rep


def _is_nilpotent(rep):
    q = rep.quiver
    n = rep.dim_total
    # compose all length-n paths: build the big adjacency-style operator
    size = sum(rep.dims)
    offs = np.cumsum([0] + list(rep.dims))
    big = np.zeros((size, size), dtype=np.int64)
    for k, (s, t) in enumerate(q.arrows):
        big[offs[t - 1]:offs[t], offs[s - 1]:offs[s]] = rep.maps[k]
    cur = big.copy()
    for _ in range(n):
        cur = (cur @ big) % rep.p
    return not cur.any()


def stable_subspaces(rep):
    """All stable graded subspace tuples (as tuples of RREF bases)."""
    out = []
    for sub, quot, bases in rp.enumerate_submodules(rep):
        out.append(bases)
    return out


def _complementary(bases_a, bases_b, dims, p):
    for ba, bb, d in zip(bases_a, bases_b, dims):
        if ba.shape[0] + bb.shape[0] != d:
            return False
        both = np.concatenate([ba, bb], axis=0)
        if fl.rank(both, p) != d:
            return False
    return True


def decompose(rep):
    """List of indecomposable summands (as FFReps)."""
    if rep.dim_total == 0:
        return []
    stables = stable_subspaces(rep)
    for ba in stables:
        ka = sum(b.shape[0] for b in ba)
        if ka == 0 or ka == rep.dim_total:
            continue
        for bb in stables:
            kb = sum(b.shape[0] for b in bb)
            if ka + kb != rep.dim_total:
                continue
            if _complementary(ba, bb, rep.dims, rep.p):
                part_a = rp._sub_quot_pair(rep, ba)[0]
                part_b = rp._sub_quot_pair(rep, bb)[0]
                return decompose(part_a) + decompose(part_b)
    return [rep]


def _end_structure(rep):
    """(end dim, radical dim) of End(rep), by counting units exhaustively."""
    basis = rp.hom_basis(rep, rep)
    e = len(basis)
    p = rep.p
    units = 0
    for coeffs in product(range(p), repeat=e):
        if all(c == 0 for c in coeffs):
            continue
        mats = []
        ok = True
        for i in range(rep.quiver.n):
            d = rep.dims[i]
            m = np.zeros((d, d), dtype=np.int64)
            for c, b in zip(coeffs, basis):
                m = (m + c * b[i]) % p
            mats.append(m)
        for m in mats:
            if m.shape[0] and fl.rank(m, p) != m.shape[0]:
                ok = False
                break
        if ok:
            units += 1
    nonunits = p ** e - units
    rad_dim = 0
    while p ** rad_dim < nonunits:
        rad_dim += 1
    assert p ** rad_dim == nonunits, "End ring is not local"
    return e, rad_dim


def brute_classify_kronecker(rep):
    """Decomposition class via exhaustive splitting, independent labelling."""
    prep, reg, prei = [], [], []
    for piece in decompose(rep):
        d1, d2 = piece.dims
        if d1 == d2 + 1:
            prep.append(d2)
        elif d2 == d1 + 1:
            prei.append(d1)
        elif d1 == d2:
            e, rad = _end_structure(piece)
            deg = e - rad
            assert deg >= 1 and e % deg == 0
            local_len = e // deg
            assert deg * local_len == d1
            reg.extend([local_len] * deg)
        else:
            raise AssertionError(f"impossible indecomposable dims {piece.dims}")
    return rp.KroneckerClass(prep, reg, prei)


def brute_classify_tame(rep):
    """Independent decomposition-class labelling for the three-vertex quiver.

    Uses only: exhaustive splitting, dimension-vector lookups for real
    roots, Hom probes against the two quasi-simples for tube membership,
    and End-radical data for the geometric homogeneous parts.
    """
    from hallq.tame import TameClass, TameModels, root_system, tube_data
    from hallq.partitions import MultiPartition
    delta, prep_roots, prei_roots, _ = root_system()
    td = tube_data()
    models = _tame_models(rep.p)
    total = rep.dim_total
    chain_lookup = {}
    for i in (1, 2):
        l = 1
        while sum(td.chain_dim(i, l)) <= total:
            if l % 2 == 1:
                chain_lookup[td.chain_dim(i, l)] = (i, l)
            l += 1
    prep, prei, homog = [], [], []
    tube_parts = [[], []]
    for piece in decompose(rep):
        d = piece.dims
        if d in chain_lookup:
            i, l = chain_lookup[d]
            tube_parts[i - 1].append(l)
            continue
        if d in prep_roots:
            prep.append(d)
            continue
        if d in prei_roots:
            prei.append(d)
            continue
        n = d[0]
        assert d == tuple(n * x for x in delta), f"unexpected dims {d}"
        q1 = models.real_root_model(td.quasi_roots[0])
        q2 = models.real_root_model(td.quasi_roots[1])
        h1 = rp.hom_dim(piece, q1)
        h2 = rp.hom_dim(piece, q2)
        if h1 or h2:
            # tube member of quasi-length 2n with quasi-top the hom target
            assert (h1 > 0) != (h2 > 0)
            tube_parts[0 if h1 else 1].append(2 * n)
        else:
            e, rad = _end_structure(piece)
            deg = e - rad
            assert deg >= 1 and e % deg == 0 and deg * (e // deg) == e
            local_len = e // deg
            assert deg * local_len == n
            homog.extend([local_len] * deg)
    return TameClass(prep,
                     MultiPartition([sorted(c, reverse=True)
                                     for c in tube_parts]),
                     homog, prei)


def brute_classify_cyclic(rep):
    r = rep.quiver.n
    comps = [[] for _ in range(r)]
    for piece in decompose(rep):
        length = piece.dim_total
        tops = []
        for i in range(1, r + 1):
            into = rep.quiver.arrows_into(i)
            img_rows = [piece.maps[k].T for k in into
                        if piece.maps[k].shape[0]]
            stacked = (np.concatenate(img_rows, axis=0)
                       if img_rows else np.zeros((0, piece.dims[i - 1]),
                                                 dtype=np.int64))
            top_dim = piece.dims[i - 1] - fl.rank(stacked, piece.p)
            if top_dim:
                tops.append((i, top_dim))
        assert len(tops) == 1 and tops[0][1] == 1, "not a chain module"
        comps[tops[0][0] - 1].append(length)
    from hallq.partitions import MultiPartition
    return MultiPartition([sorted(c, reverse=True) for c in comps])
