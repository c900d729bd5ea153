"""Assembled integral basis on the tame three-vertex quiver.

Basis elements are ordered products

    B_c = 1_P * E_{pi,1} * M(omega) * 1_I

indexed by quadruples c = (prep multiset, aperiodic tube pair of
partitions, homogeneous partition, prei multiset).  The tube factor
E_{pi,1} is the transport of the cyclic-quiver basis element through the
tube equivalence; M(omega) is the characteristic function of homogeneous
regular classes of type omega.
"""

from fractions import Fraction

from . import cyclic_basis as cb
from . import engine as eng
from . import reports
from . import reps as rp
from .engine import HallElement, char_fn, unit
from .partitions import MultiPartition, Partition, partitions_of
from .tame import TameClass, enumerate_tame_classes, root_system, tube_data


class TameContext:
    def __init__(self, budget=eng.DEFAULT_BUDGET):
        self.engine = eng.shared_engine("a2tilde:1", budget=budget)
        self.fam = self.engine.fam
        self.td = tube_data()
        self.cyclic = cb.context(2)
        self._bc_cache = {}
        self._k1 = None

    # -- the embedding at class level ----------------------------------------

    @property
    def k1(self):
        """Tube component hit by the embedded Kronecker tube point."""
        if self._k1 is None:
            got = set()
            for p in (2, 3):
                from .tame import TameClassifier, embed_kronecker_rep
                cl = TameClassifier(p)
                img = cl.classify(embed_kronecker_rep(
                    rp.kronecker_regular((0, 1), 1, p)))
                pairs = img.tube.pairs()
                assert len(pairs) == 1 and pairs[0][1] == 2
                got.add(pairs[0][0])
            assert len(got) == 1
            self._k1 = got.pop()
        return self._k1

    def embed_class(self, kcls):
        """Class-level transport of a Kronecker class, as a HallElement.

        Preprojective/preinjective summands map to single real-root classes;
        each regular quasi-length l spreads over 'homogeneous point' and
        'tube point, doubled length', producing a sum of classes.
        """
        from .tame import TameClassifier, embed_kronecker_rep
        cl = TameClassifier(3)
        prep = []
        for m in kcls.prep:
            img = cl.classify(embed_kronecker_rep(rp.kronecker_prep(m, 3)))
            assert len(img.prep) == 1 and not img.prei
            prep.append(img.prep[0])
        prei = []
        for n in kcls.prei:
            img = cl.classify(embed_kronecker_rep(rp.kronecker_prei(n, 3)))
            assert len(img.prei) == 1 and not img.prep
            prei.append(img.prei[0])
        out = {}
        for sigma, rest in _submultisets(tuple(kcls.regular.parts)):
            tube_comp = [[], []]
            tube_comp[self.k1 - 1] = sorted((2 * l for l in sigma),
                                            reverse=True)
            cls = TameClass(prep, MultiPartition(tube_comp), rest, prei)
            out[cls] = out.get(cls, 0) + 1
        return HallElement(self.fam, out)

    # -- generators -------------------------------------------------------

    def prep_fn(self, roots):
        return char_fn(self.fam, TameClass(prep=roots))

    def prei_fn(self, roots):
        return char_fn(self.fam, TameClass(prei=roots))

    def m_fn(self, omega):
        """M(omega): the embedded image of the Kronecker regular class.

        Its support spreads each part over the homogeneous points and the
        embedded tube point (quasi-length doubled there).
        """
        omega = tuple(Partition(omega).parts)
        if not omega:
            return unit(self.fam)
        return self.embed_class(rp.KroneckerClass((), omega, ()))

    def tube_class(self, pi):
        return TameClass(tube=pi)

    def tube_E(self, pi):
        """E_{pi,1}: the cyclic basis element transported into the tube."""
        if not pi.is_aperiodic():
            raise ValueError("tube basis elements need aperiodic classes")
        alpha = rp.cyclic_class_dim(pi)
        cyc = self.cyclic.build_E_basis(alpha)[pi]
        return HallElement(self.fam, {
            self.tube_class(lam): c for lam, c in cyc.terms.items()})

    def tube_aperiodics(self, weight):
        """Aperiodic tube pairs with total quasi-length weight."""
        out = []
        for a in range(weight + 1):
            alpha = (a, weight - a)
            for pi in rp.enumerate_cyclic_classes(alpha, 2):
                if pi.is_aperiodic():
                    out.append(pi)
        return out

    def bc_index_set(self, gamma):
        """All quadruple indices c with dim B_c = gamma."""
        out = []
        for cls in enumerate_tame_classes(gamma):
            if cls.tube.is_aperiodic():
                out.append(cls)
        return out

    def bc_element(self, cls):
        """B_c as an exact class-function expansion."""
        if cls in self._bc_cache:
            return self._bc_cache[cls]
        factors = []
        if cls.prep:
            factors.append(self.prep_fn(cls.prep))
        if cls.tube.weight():
            factors.append(self.tube_E(cls.tube))
        if cls.homog.parts:
            factors.append(self.m_fn(cls.homog.parts))
        if cls.prei:
            factors.append(self.prei_fn(cls.prei))
        out = unit(self.fam)
        for f in factors:
            out = self.engine.multiply(out, f)
        # dimension additivity sanity
        if not out.is_zero():
            dims = {self.fam.dim(c) for c in out.terms}
            assert dims == {cls.dim()}
        self._bc_cache[cls] = out
        return out

    # -- expansion over the B_c family -----------------------------------------

    def expand_in_bc(self, element):
        """Coefficients over {B_c} of a homogeneous element, or None."""
        grades = element.grades()
        if not grades:
            return {}
        if len(grades) != 1:
            raise ValueError("expansion needs a homogeneous element")
        gamma = grades[0]
        idx = self.bc_index_set(gamma)
        classes = enumerate_tame_classes(gamma)
        cindex = {c: i for i, c in enumerate(classes)}
        rows = [[Fraction(0)] * len(idx) for _ in classes]
        for k, c in enumerate(idx):
            el = self.bc_element(c)
            for cls, v in el.terms.items():
                rows[cindex[cls]][k] = v
        target = [element.coeff(c) for c in classes]
        sol = eng._solve_rational_system(rows, target)
        if sol is None:
            return None
        return {c: v for c, v in zip(idx, sol) if v}

    # -- verification -------------------------------------------------------------

    def verify_bc_linear_independence(self, gamma):
        idx = self.bc_index_set(gamma)
        classes = enumerate_tame_classes(gamma)
        cindex = {c: i for i, c in enumerate(classes)}
        rows = []
        for c in idx:
            el = self.bc_element(c)
            row = [Fraction(0)] * len(classes)
            for cls, v in el.terms.items():
                row[cindex[cls]] = v
            rows.append(row)
        rank = _rational_rank(rows)
        return reports.check(
            "bc-linear-independence",
            "the assembled basis elements of one grade are linearly "
            "independent over Q", rank == len(idx),
            gamma=list(gamma), count=len(idx))

    def verify_bc_unitriangular(self, gamma):
        """Each B_c equals 1_{class(c)} plus lower tube-tail terms."""
        ok = True
        witness = None
        for c in self.bc_index_set(gamma):
            el = self.bc_element(c)
            if el.coeff(c) != 1 or not el.is_integral():
                ok = False
                witness = {"index": c.to_json(), "element": el.to_json()}
                break
            for cls in el.support():
                if cls != c and cls.tube.is_aperiodic() and \
                        (cls.prep, cls.homog.parts, cls.prei) == \
                        (c.prep, c.homog.parts, c.prei) and cls.tube == c.tube:
                    ok = False
                    witness = {"index": c.to_json(), "dup": cls.to_json()}
                    break
        return reports.check(
            "bc-transition-integral",
            "B_c expands over decomposition classes with unit leading "
            "coefficient and integer entries", ok,
            gamma=list(gamma), witness=witness)

    def generator_pairs(self, bound_total):
        """Generators {1_P, E_pi, M(omega), 1_I} up to total dimension."""
        delta, preps, preis, _ = root_system()
        gens = []
        for v in preps:
            if sum(v) <= bound_total:
                gens.append(("prep", self.prep_fn([v]), v))
        for v in preis:
            if sum(v) <= bound_total:
                gens.append(("prei", self.prei_fn([v]), v))
        for w in range(1, bound_total + 1):
            for pi in self.tube_aperiodics(w):
                d = self.td.multipartition_dim(pi)
                if sum(d) <= bound_total:
                    gens.append(("tube", self.tube_E(pi), d))
        for n in range(1, bound_total // 3 + 1):
            for om in partitions_of(n):
                gens.append(("homog", self.m_fn(om), (n, n, n)))
        return gens

    def verify_bc_products(self, bound_total):
        """Pairwise generator products expand integrally over {B_c} with
        the stated support shapes."""
        results = []
        gens = self.generator_pairs(bound_total)
        for kind_a, fa, da in gens:
            for kind_b, fb, db in gens:
                tot = tuple(x + y for x, y in zip(da, db))
                if sum(tot) > bound_total:
                    continue
                prod = self.engine.multiply(fa, fb)
                coeffs = self.expand_in_bc(prod)
                ok = coeffs is not None and all(
                    v.denominator == 1 for v in coeffs.values())
                witness = None
                if not ok:
                    witness = {"a": str(fa), "b": str(fb)}
                results.append(reports.check(
                    "bc-product-integrality",
                    "generator product expands integrally over the "
                    "assembled basis", ok, a=kind_a, b=kind_b,
                    dim=list(tot), witness=witness))
                shape = self._support_shape_check(kind_a, kind_b, prod)
                if shape is not None:
                    results.append(shape)
        return results

    def _support_shape_check(self, kind_a, kind_b, prod):
        support = prod.support()
        if kind_a == "tube" and kind_b == "prep":
            ok = all(not c.prei and not c.homog.parts for c in support)
            return reports.check(
                "tube-times-prep-support",
                "E_pi * 1_P is supported on preprojective/tube classes only",
                ok)
        if kind_a == "prei" and kind_b == "tube":
            ok = all(not c.prep and not c.homog.parts for c in support)
            return reports.check(
                "prei-times-tube-support",
                "1_I * E_pi is supported on tube/preinjective classes only",
                ok)
        if kind_a == "homog" and kind_b == "tube" or \
                (kind_a == "tube" and kind_b == "homog"):
            ok = all(not c.prep and not c.prei for c in support)
            return reports.check(
                "regular-products-support",
                "products of regular generators stay regular", ok)
        if kind_a == "homog" and kind_b == "prep":
            ok = all(not c.prei for c in support)
            return reports.check(
                "homog-times-prep-support",
                "M(omega) * 1_P has no preinjective support", ok)
        if kind_a == "prei" and kind_b == "homog":
            ok = all(not c.prep for c in support)
            return reports.check(
                "prei-times-homog-support",
                "1_I * M(omega) has no preprojective support", ok)
        return None

    def verify_multiplicity_bookkeeping(self):
        """1 + sum_j (r_j - 1) = |I| - 1 for the discovered tube data."""
        td = self.td
        lhs = 1 + (td.rank - 1)
        rhs = 3 - 1
        r1 = reports.check(
            "imaginary-multiplicity",
            "1 + sum (tube rank - 1) equals |I| - 1", lhs == rhs,
            lhs=lhs, rhs=rhs)
        # the independent degree-delta generators: tube difference + homog
        pi1 = MultiPartition([(2,), ()])
        pi2 = MultiPartition([(), (2,)])
        diff = self.tube_E(pi1) - self.tube_E(pi2)
        m1 = self.m_fn((1,))
        idx = enumerate_tame_classes((1, 1, 1))
        cindex = {c: i for i, c in enumerate(idx)}
        rows = []
        for el in (diff, m1):
            row = [Fraction(0)] * len(idx)
            for cls, v in el.terms.items():
                row[cindex[cls]] = v
            rows.append(row)
        r2 = reports.check(
            "imaginary-generators-independent",
            "the tube difference and the homogeneous class function are "
            "independent in the delta grade", _rational_rank(rows) == 2)
        return [r1, r2]

    def prep_prei_factorization(self, roots_with_mults, side="prep"):
        """1_P = ordered product of divided powers of the indecomposables."""
        delta, preps, preis, _ = root_system()
        order = list(preps) if side == "prep" else list(preis)
        items = sorted(roots_with_mults.items(),
                       key=lambda kv: order.index(tuple(kv[0])))
        prod = unit(self.fam)
        for root, mult in items:
            base = self.prep_fn([root]) if side == "prep" \
                else self.prei_fn([root])
            prod = self.engine.multiply(
                prod, self.engine.divided_power(base, mult)
                if mult > 1 else base)
        flat = []
        for root, mult in items:
            flat.extend([tuple(root)] * mult)
        expected = char_fn(self.fam, TameClass(prep=flat) if side == "prep"
                           else TameClass(prei=flat))
        return reports.check(
            "prep-prei-factorization",
            "the characteristic function of a prep/prei module is the "
            "ordered product of divided powers of its summands",
            prod == expected, side=side,
            roots={str(k): v for k, v in roots_with_mults.items()},
            witness=None if prod == expected else prod.to_json())


def _submultisets(parts):
    """(submultiset, complement) pairs of a partition's parts, distinct."""
    from collections import Counter
    counts = sorted(Counter(parts).items())
    out = []

    def rec(i, chosen):
        if i == len(counts):
            sigma = []
            rest = list(parts)
            for val, k in chosen:
                for _ in range(k):
                    sigma.append(val)
                    rest.remove(val)
            out.append((tuple(sorted(sigma, reverse=True)),
                        tuple(sorted(rest, reverse=True))))
            return
        val, mult = counts[i]
        for k in range(mult + 1):
            rec(i + 1, chosen + [(val, k)])

    rec(0, [])
    return out


def _rational_rank(rows):
    if not rows:
        return 0
    m = [list(map(Fraction, r)) for r in rows]
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        m[rank] = [x / pv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
    return rank


_CTX = None


def context():
    global _CTX
    if _CTX is None:
        _CTX = TameContext()
    return _CTX
