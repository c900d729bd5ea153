"""The tame three-vertex quiver: embedding, tube basis and the assembled basis.

Shipped orientation (the acyclic orientation of the triangle, unique up to
symmetry): arrows 1->2, 2->3, 1->3.  Its regular category has exactly one
non-homogeneous tube, of rank two; the tube is discovered computationally:
the quasi-simples are the regular real roots below delta and the tube rank
is the length of their tau-orbit.

Decomposition classes are quadruples

  (preprojective root multiset, tube pair of partitions,
   homogeneous partition, preinjective root multiset)

and the main basis elements are the ordered products
1_P * E_{pi,1} * M(omega) * 1_I.
"""

from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import engine as eng
from . import fplinalg as fl
from . import reports
from . import reps as rp
from .partitions import MultiPartition, Partition, partitions_of
from .quivers import a2tilde, radical_vector


# ---------------------------------------------------------------------------
# roots and tube data for the fixed orientation

@lru_cache(maxsize=1)
def root_system(max_height=40):
    """(delta, prep roots, prei roots, quasi-simple roots), generated."""
    q = a2tilde()
    delta = radical_vector(q)
    prep = []
    states = [tuple(v) for v in _projective_dims(q)]
    while True:
        fresh = [v for v in states if sum(v) <= max_height]
        if not fresh:
            break
        prep.extend(sorted(states, key=lambda a: (sum(a), a)))
        states = [q.coxeter_apply(v, inverse=True) for v in states]
    prei = []
    states = [tuple(v) for v in _injective_dims(q)]
    while True:
        fresh = [v for v in states if sum(v) <= max_height]
        if not fresh:
            break
        prei.extend(sorted(states, key=lambda a: (sum(a), a)))
        states = [q.coxeter_apply(v) for v in states]
    # regular real roots below delta = the quasi-simples of the tube
    quasi = []
    for v in _vectors_below(delta):
        if sum(v) == 0 or v == delta:
            continue
        if q.symmetric_euler(v, v) == 2 and q.euler_form(delta, v) == 0:
            quasi.append(v)
    return delta, tuple(prep), tuple(prei), tuple(sorted(quasi))


def _projective_dims(q):
    from .quivers import projective_dims
    return projective_dims(q)


def _injective_dims(q):
    from .quivers import injective_dims
    return injective_dims(q)


def _vectors_below(delta):
    out = []

    def rec(i, acc):
        if i == len(delta):
            out.append(tuple(acc))
            return
        for x in range(delta[i] + 1):
            rec(i + 1, acc + [x])

    rec(0, [])
    return out


class TubeData:
    """Discovered structure of the rank-two tube, with concrete models."""

    def __init__(self):
        q = a2tilde()
        delta, prep, prei, quasi = root_system()
        if len(quasi) != 2:
            raise RuntimeError(f"expected two quasi-simple roots, got {quasi}")
        # label quasi-simples so that tau(Q_1) = Q_2 (tau-orbit of length 2)
        r0 = quasi[0]
        r1 = tuple(q.coxeter_apply(r0))
        if r1 not in quasi or r1 == r0:
            raise RuntimeError("quasi-simple tau-orbit is not of length two")
        if tuple(q.coxeter_apply(r1)) != r0:
            raise RuntimeError("tau-orbit of the quasi-simples exceeds two")
        self.rank = 2
        self.quasi_roots = (r0, r1)
        self.delta = delta

    def chain_dim(self, i, l):
        """Dimension vector of the tube module with quasi-top i, length l."""
        d = (0, 0, 0)
        for t in range(l):
            d = tuple(x + y for x, y in
                      zip(d, self.quasi_roots[(i - 1 + t) % 2]))
        return d

    def multipartition_dim(self, pi):
        d = (0, 0, 0)
        for i, l in pi.pairs():
            d = tuple(x + y for x, y in zip(d, self.chain_dim(i, l)))
        return d


@lru_cache(maxsize=1)
def tube_data():
    return TubeData()


# ---------------------------------------------------------------------------
# class symbols

class TameClass:
    """(prep roots, tube pair of partitions, homogeneous partition,
    prei roots)."""

    __slots__ = ("prep", "tube", "homog", "prei")

    def __init__(self, prep=(), tube=((), ()), homog=(), prei=()):
        self.prep = tuple(sorted(tuple(v) for v in prep))
        self.tube = tube if isinstance(tube, MultiPartition) \
            else MultiPartition(tube)
        if self.tube.r != 2:
            raise ValueError("tube part must have two components")
        self.homog = Partition(homog)
        self.prei = tuple(sorted(tuple(v) for v in prei))

    def dim(self):
        td = tube_data()
        d = [0, 0, 0]
        for v in self.prep:
            d = [x + y for x, y in zip(d, v)]
        dt = td.multipartition_dim(self.tube)
        d = [x + y for x, y in zip(d, dt)]
        n = self.homog.weight
        d = [x + n * y for x, y in zip(d, td.delta)]
        for v in self.prei:
            d = [x + y for x, y in zip(d, v)]
        return tuple(d)

    def key(self):
        return (self.prep, self.tube.sort_key(), self.homog.parts, self.prei)

    def __eq__(self, other):
        return isinstance(other, TameClass) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"TClass(prep={list(self.prep)}, "
                f"tube={[list(c.parts) for c in self.tube.components]}, "
                f"homog={list(self.homog.parts)}, prei={list(self.prei)})")

    def to_json(self):
        return {"prep": [list(v) for v in self.prep],
                "tube": self.tube.to_json(),
                "homog": list(self.homog.parts),
                "prei": [list(v) for v in self.prei]}

    @staticmethod
    def from_json(data):
        return TameClass([tuple(v) for v in data["prep"]],
                         MultiPartition.from_json(data["tube"]),
                         tuple(data["homog"]),
                         [tuple(v) for v in data["prei"]])


# ---------------------------------------------------------------------------
# the Kronecker embedding (representation level)

def embed_kronecker_rep(krep):
    """Exact fully faithful embedding of Kronecker representations.

    (V1 <= V2 with maps f, g: V2 -> V1)  |->  (V2, V2, V1; id, f, g).
    Sends preprojectives to preprojectives, preinjectives to preinjectives,
    regulars at [a:b] != [0:1] into homogeneous tubes, and the tube at
    [0:1] onto the rank-two tube with quasi-lengths doubled.
    """
    d1, d2 = krep.dims
    q = a2tilde()
    eye = np.eye(d2, dtype=np.int64)
    return rp.FFRep(q, krep.p, (d2, d2, d1),
                    [eye, krep.maps[0], krep.maps[1]])


# ---------------------------------------------------------------------------
# concrete models over F_p

class TameModels:
    """Canonical representatives of indecomposables for one prime."""

    def __init__(self, p):
        self.p = p
        self.q = a2tilde()
        self.td = tube_data()
        self._real = {}
        self._tube = {}

    def real_root_model(self, root):
        root = tuple(root)
        if root not in self._real:
            self._real[root] = rp.build_indecomposable(self.q, root, self.p)
        return self._real[root]

    def tube_model(self, i, l):
        """Tube module with quasi-top Q_i and quasi-length l."""
        key = (i, l)
        if key in self._tube:
            return self._tube[key]
        if l == 1:
            m = self.real_root_model(self.td.quasi_roots[i - 1])
        else:
            sub = self.tube_model(i % 2 + 1, l - 1)
            top = self.real_root_model(self.td.quasi_roots[i - 1])
            m = rp.nonsplit_extension(top, sub)
        self._tube[key] = m
        return m

    def homogeneous_model(self, idx, l):
        """The idx-th homogeneous-point module of quasi-length l.

        Realized through the Kronecker embedding at the rational points
        [1:lam], lam in F_p, which avoid the non-homogeneous tube.
        """
        if idx >= self.p:
            raise ValueError(
                f"only {self.p} homogeneous rational points over F_{self.p}")
        point = (1, idx)
        return embed_kronecker_rep(rp.kronecker_regular(point, l, self.p))

    def instantiate(self, cls):
        rep = rp.zero_rep(self.q, self.p)
        for v in cls.prep:
            rep = rep.direct_sum(self.real_root_model(v))
        for i, l in cls.tube.pairs():
            rep = rep.direct_sum(self.tube_model(i, l))
        for idx, l in enumerate(cls.homog.parts):
            rep = rep.direct_sum(self.homogeneous_model(idx, l))
        for v in cls.prei:
            rep = rep.direct_sum(self.real_root_model(v))
        return rep


# ---------------------------------------------------------------------------
# classification

class TameClassifier:
    def __init__(self, p):
        self.p = p
        self.q = a2tilde()
        self.td = tube_data()
        self.models = TameModels(p)
        self.delta, self.prep_roots, self.prei_roots, _ = root_system()
        self._sink_seq = self._admissible_sequence(sink=True)
        self._source_seq = self._admissible_sequence(sink=False)
        self._hom_cache = {}

    def _admissible_sequence(self, sink):
        q = self.q
        seq = []
        for _ in range(3):
            cand = [i for i in range(1, 4)
                    if (q.is_sink(i) if sink else q.is_source(i))
                    and i not in seq]
            if len(cand) != 1:
                raise RuntimeError("ambiguous admissible sequence")
            seq.append(cand[0])
            q = q.reflect(cand[0])
        return tuple(seq)

    def _peel(self, rep, sink):
        """Multiplicities of prep (sink=True) or prei summands, by root.

        Walks the admissible sink (resp. source) sequence; the simple killed
        at each stage corresponds to the next root of the preprojective
        (resp. preinjective) order, so regular and opposite-side summands
        are never touched.
        """
        seq = self._sink_seq if sink else self._source_seq
        found = {}
        cur = rep
        word = []
        stage = 0
        oversized = 0
        while cur.dim_total > 0 and oversized < 3:
            i = seq[stage % 3]
            root = _reflect_word(self.q, word, i)
            if sum(root) > rep.dim_total:
                oversized += 1
            else:
                oversized = 0
                mult = _simple_mult_at(cur, i, sink)
                if mult:
                    found[root] = found.get(root, 0) + mult
            cur = rp.reflection_apply(cur, i, "+" if sink else "-")
            word.append(i)
            stage += 1
        return found, cur

    def classify(self, rep):
        prep_found, _ = self._peel(rep, sink=True)
        prei_found, _ = self._peel(rep, sink=False)
        prep = []
        for root, m in prep_found.items():
            prep.extend([root] * m)
        prei = []
        for root, m in prei_found.items():
            prei.extend([root] * m)
        used = [0, 0, 0]
        for v in prep + prei:
            used = [x + y for x, y in zip(used, v)]
        rho = tuple(x - y for x, y in zip(rep.dims, used))
        if min(rho) < 0:
            raise rp.ClassifyError("prep/prei peel exceeded dimensions")
        # tube multiplicities from corrected Hom dimensions
        total_reg = sum(rho)
        lmax = 0
        probe = []
        l = 1
        while sum(self.td.chain_dim(1, l)) <= total_reg or \
                sum(self.td.chain_dim(2, l)) <= total_reg:
            probe.extend([(1, l), (2, l)])
            l += 1
        tube_mults = self._tube_solve(rep, probe, prei, rho)
        tube_pairs = []
        dt = [0, 0, 0]
        for (i, l), m in tube_mults.items():
            tube_pairs.extend([(i, l)] * m)
            for _ in range(m):
                dt = [x + y for x, y in zip(dt, self.td.chain_dim(i, l))]
        hom_dimvec = tuple(x - y for x, y in zip(rho, dt))
        if min(hom_dimvec) < 0:
            raise rp.ClassifyError("tube part exceeds regular dimensions")
        if len(set(hom_dimvec)) > 1:
            raise rp.ClassifyError("homogeneous part is not a delta multiple")
        n = hom_dimvec[0]
        homog = self._homog_partition(rep, n, prep, prei, tube_pairs)
        comps = [[], []]
        for i, l in tube_pairs:
            comps[i - 1].append(l)
        return TameClass(prep,
                         MultiPartition([sorted(c, reverse=True)
                                         for c in comps]),
                         homog, prei)

    def _hom(self, a, b):
        key = (id(a), id(b))
        # id-keyed cache is safe: models are cached per classifier lifetime
        if key not in self._hom_cache:
            self._hom_cache[key] = rp.hom_dim(a, b)
        return self._hom_cache[key]

    def _tube_solve(self, rep, probe, prei, rho):
        if not probe:
            return {}
        td = self.td
        # corrected Hom dims: subtract preinjective contributions
        rows = []
        rhs = []
        unknowns = [key for key in probe
                    if all(x <= y for x, y in
                           zip(td.chain_dim(*key), rho))]
        if not unknowns:
            return {}
        for key in probe:
            t_model = self.models.tube_model(*key)
            # Hom(T, rep) sees the tube part plus preinjective corrections
            h = rp.hom_dim(t_model, rep)
            for v in prei:
                h -= self._hom(t_model, self.models.real_root_model(v))
            rows.append([self._hom(t_model, self.models.tube_model(*u))
                         for u in unknowns])
            rhs.append(h)
        return _solve_nonneg_int(rows, rhs, unknowns)

    def _homog_partition(self, rep, n, prep, prei, tube_pairs):
        if n == 0:
            return Partition()
        parts = []
        found = 0
        for idx in range(self.p):
            hs = []
            for k in range(1, n + 1):
                model = self.models.homogeneous_model(idx, k)
                h = rp.hom_dim(model, rep)
                for v in prei:
                    h -= self._hom(model, self.models.real_root_model(v))
                hs.append(h)
            lam = []
            fprev = 0
            for k in range(1, n + 1):
                lam.append(hs[k - 1] - fprev)   # number of parts >= k
                fprev = hs[k - 1]
            for k in range(n, 0, -1):
                cnt = lam[k - 1] - (lam[k] if k < n else 0)
                if cnt < 0:
                    raise rp.ClassifyError("bad homogeneous Hom profile")
                parts.extend([k] * cnt)
                found += k * cnt
        m_rem = n - found
        if m_rem == 0:
            pass
        elif m_rem == 2:
            parts.extend([1, 1])
        elif m_rem == 3:
            parts.extend([1, 1, 1])
        else:
            raise rp.ClassifyError(
                f"unresolvable homogeneous remainder {m_rem}")
        return Partition(parts)


def _reflect_word(q, word, i):
    """s_{w1} s_{w2} ... s_{wk} (e_i) on dimension vectors."""
    from .quivers import unit
    v = unit(i, q.n)
    for j in reversed(word):
        v = q.reflect_dim(j, v)
    return tuple(v)


def _simple_mult_at(rep, i, sink):
    """Multiplicity of the simple S_i as a summand (i a sink or source)."""
    q = rep.quiver
    p = rep.p
    if sink:
        inc = q.arrows_into(i)
        if not inc:
            return rep.dims[i - 1]
        mats = [rep.maps[k] for k in inc]
        big = np.concatenate(mats, axis=1) if mats else None
        return rep.dims[i - 1] - fl.rank(big, p)
    out = q.arrows_out_of(i)
    if not out:
        return rep.dims[i - 1]
    mats = [rep.maps[k] for k in out]
    big = np.concatenate(mats, axis=0)
    # S_i summands at a source = kernel of the combined outgoing map
    return big.shape[1] - fl.rank(big, p)


def _solve_nonneg_int(rows, rhs, unknowns):
    ncol = len(unknowns)
    sol = fl.solve_exact_rational([r[:ncol] for r in rows], rhs) \
        if rows and len(rows) >= ncol else None
    if sol is None:
        raise rp.ClassifyError("tube Hom system unsolvable")
    out = {}
    for key, val in zip(unknowns, sol):
        if val.denominator != 1 or val < 0:
            raise rp.ClassifyError(f"tube multiplicity {val} at {key}")
        if val:
            out[key] = int(val)
    return out


# ---------------------------------------------------------------------------
# the engine family

class TameFamily:
    orbit_exact = False

    def __init__(self):
        self.quiver = a2tilde()
        self.tag = "a2tilde:1"
        self.td = tube_data()
        self._classifiers = {}
        self._simple_classes = None

    def zero_class(self):
        return TameClass()

    def _classifier(self, p):
        if p not in self._classifiers:
            self._classifiers[p] = TameClassifier(p)
        return self._classifiers[p]

    def simple_class(self, i):
        if self._simple_classes is None:
            cl = self._classifier(2)
            self._simple_classes = {
                j: cl.classify(rp.simple_rep(self.quiver, 2, j))
                for j in (1, 2, 3)}
        return self._simple_classes[i]

    def dim(self, cls):
        return cls.dim()

    def classes_of_dim(self, gamma):
        return enumerate_tame_classes(tuple(gamma))

    def instantiate(self, cls, p):
        if len(cls.homog) > p:
            raise ValueError(
                f"class needs {len(cls.homog)} homogeneous points; only "
                f"{p} rational ones over F_{p}")
        return TameModels(p).instantiate(cls) if p not in self._classifiers \
            else self._classifiers[p].models.instantiate(cls)

    def min_prime(self, cls):
        need = len(cls.homog)
        p = 2
        while p < need:
            p = fl.primes(1, p + 1)[0]
        return p

    def classify_stack(self, dims, stacks, p):
        cl = self._classifier(p)
        n_items = max((s.shape[0] for s in stacks), default=0)
        out = []
        for k in range(n_items):
            rep = rp.FFRep(self.quiver, p, dims,
                           [s[k] for s in stacks])
            out.append(cl.classify(rep))
        return out

    def scale(self, cls, n):
        return TameClass(cls.prep * n,
                         MultiPartition([tuple(c.parts) * n
                                         for c in cls.tube.components]),
                         tuple(cls.homog.parts) * n,
                         cls.prei * n)

    def class_sum(self, a, b):
        return TameClass(
            a.prep + b.prep,
            MultiPartition([tuple(x.parts) + tuple(y.parts) for x, y in
                            zip(a.tube.components, b.tube.components)]),
            tuple(a.homog.parts) + tuple(b.homog.parts),
            a.prei + b.prei)

    def sort_key(self, cls):
        return cls.key()

    def class_flags(self, cls):
        return (bool(cls.prep),
                bool(cls.tube.weight() or cls.homog.parts),
                bool(cls.prei))

    def class_to_json(self, cls):
        return cls.to_json()

    def class_from_json(self, data):
        return TameClass.from_json(data)

    def class_label(self, cls):
        return (f"P{[list(v) for v in cls.prep]}"
                f"T{[list(c.parts) for c in cls.tube.components]}"
                f"H{list(cls.homog.parts)}I{[list(v) for v in cls.prei]}")


@lru_cache(maxsize=None)
def enumerate_tame_classes(gamma):
    """All decomposition classes of dimension vector gamma, sorted."""
    td = tube_data()
    delta, prep_roots, prei_roots, _ = root_system()
    preps = [v for v in prep_roots if all(x <= y for x, y in zip(v, gamma))]
    preis = [v for v in prei_roots if all(x <= y for x, y in zip(v, gamma))]
    tubes = []
    l = 1
    while True:
        c1 = td.chain_dim(1, l)
        c2 = td.chain_dim(2, l)
        any_fit = False
        for i, c in ((1, c1), (2, c2)):
            if all(x <= y for x, y in zip(c, gamma)):
                tubes.append((i, l))
                any_fit = True
        if not any_fit:
            break
        l += 1
    out = []

    def choose_multiset(items, dim_of, rem, acc, k, emit):
        emit(acc, rem)
        for idx in range(k, len(items)):
            d = dim_of(items[idx])
            nrem = tuple(x - y for x, y in zip(rem, d))
            if min(nrem) < 0:
                continue
            choose_multiset(items, dim_of, nrem, acc + [items[idx]], idx, emit)

    def after_prep(prep_acc, rem1):
        def after_tube(tube_acc, rem2):
            def after_prei(prei_acc, rem3):
                if len(set(rem3)) == 1:
                    n = rem3[0]
                    for om in partitions_of(n):
                        comps = [[], []]
                        for i, l_ in tube_acc:
                            comps[i - 1].append(l_)
                        out.append(TameClass(
                            prep_acc,
                            MultiPartition([sorted(c, reverse=True)
                                            for c in comps]),
                            om, prei_acc))
            choose_multiset(preis, lambda v: v, rem2, [], 0, after_prei)
        choose_multiset(tubes, lambda t: td.chain_dim(*t), rem1, [], 0,
                        after_tube)

    choose_multiset(preps, lambda v: v, gamma, [], 0, after_prep)
    uniq = sorted(set(out), key=lambda c: c.key())
    return uniq
