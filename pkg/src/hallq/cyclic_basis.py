"""Integral basis machinery for the cyclic quiver.

Generic extensions give a monoid structure on nilpotent classes; words map
onto aperiodic classes; each aperiodic class gets a distinguished word whose
divided monomial has a unitriangular expansion, and the triangular
correction of those monomials produces the integral basis elements E_pi.

The degeneration (orbit closure) order is realized by the path-rank
criterion: lam <= mu iff every path rank of M(lam) is at most the matching
rank of M(mu).
"""

import json
from fractions import Fraction
from functools import lru_cache

from . import engine as eng
from . import fplinalg as fl
from . import reports
from .partitions import MultiPartition, Word, tight_words_of_content
from .reps import cyclic_class_dim, enumerate_cyclic_classes


# ---------------------------------------------------------------------------
# combinatorial rank tables and the degeneration order

@lru_cache(maxsize=None)
def _rank_table(r, pairs, total):
    """Path ranks of M(pi): table[(i, m)] for i in 1..r, 0 <= m <= total."""
    table = {}
    for i in range(1, r + 1):
        for m in range(total + 1):
            cnt = 0
            for (j, l) in pairs:
                for t in range(0, l - m):
                    if (t - (i - j)) % r == 0:
                        cnt += 1
            table[(i, m)] = cnt
    return table


def rank_table(pi):
    dim = cyclic_class_dim(pi)
    return _rank_table(pi.r, tuple(pi.pairs()), sum(dim))


def degeneration_leq(lam, mu):
    """Orbit-closure order via the rank criterion (same dimension vector)."""
    if cyclic_class_dim(lam) != cyclic_class_dim(mu):
        raise ValueError("degeneration order needs equal dimension vectors")
    ta, tb = rank_table(lam), rank_table(mu)
    return all(ta[k] <= tb[k] for k in ta)


@lru_cache(maxsize=None)
def _chain_hom_dim(r, i, l, j, m):
    """dim Hom(S_i[l], S_j[m]) for chain modules over C_r."""
    cnt = 0
    for t in range(max(0, m - l), m):
        if (j + t - i) % r == 0:
            cnt += 1
    return cnt


def end_dim_class(pi):
    """dim End M(pi), computed combinatorially."""
    pairs = pi.pairs()
    return sum(_chain_hom_dim(pi.r, i, l, j, m)
               for (i, l) in pairs for (j, m) in pairs)


# ---------------------------------------------------------------------------
# generic extensions and the word monoid

class CyclicContext:
    """Holds an engine plus the section / basis caches for one rank r."""

    def __init__(self, r, budget=eng.DEFAULT_BUDGET):
        self.r = r
        self.engine = eng.shared_engine(f"cyclic:{r}", budget=budget)
        self.fam = self.engine.fam
        self._gen_ext_cache = {}
        self._section = {}
        self._ebasis = {}

    # -- generic extension ------------------------------------------------

    def generic_extension(self, lam, mu):
        """The unique maximal extension class with quotient lam, sub mu."""
        key = (lam, mu)
        if key in self._gen_ext_cache:
            return self._gen_ext_cache[key]
        da = cyclic_class_dim(lam)
        db = cyclic_class_dim(mu)
        gamma = tuple(x + y for x, y in zip(da, db))
        candidates = []
        for nu in enumerate_cyclic_classes(gamma, self.r):
            ok = True
            for p in (2, 3):
                hist = self.engine.filtration_histogram(nu, db, p)
                if hist.get((lam, mu), 0) == 0:
                    ok = False
                    break
            if ok:
                candidates.append(nu)
        if not candidates:
            raise RuntimeError("no extension class found (engine bug)")
        maxima = [nu for nu in candidates
                  if all(degeneration_leq(other, nu) for other in candidates)]
        if len(maxima) != 1:
            raise RuntimeError(
                f"generic extension not unique: {maxima} (engine bug)")
        top = maxima[0]
        # the dense class also minimizes the endomorphism dimension
        emin = min(end_dim_class(nu) for nu in candidates)
        if end_dim_class(top) != emin:
            raise RuntimeError("rank-order maximum does not minimize End")
        self._gen_ext_cache[key] = top
        return top

    def wp(self, word):
        """The aperiodic class of the word monoid image."""
        letters = word.letters if isinstance(word, Word) else tuple(word)
        cur = self.fam.zero_class()
        for j in letters:
            cur = self.generic_extension(cur, self.fam.simple_class(j))
        if not cur.is_aperiodic():
            raise RuntimeError(f"word image {cur} is not aperiodic")
        return cur

    # -- distinguished words ------------------------------------------------

    def layered_count(self, pi, word, p):
        """Number over F_p of filtrations of M(pi) with layers e_k S_{j_k}."""
        w = word if isinstance(word, Word) else Word.from_tight(word)
        single = self._single_chain_count(pi, tuple(w.letters), p)
        flag = 1
        for _, e in w.tight():
            flag *= fl.q_factorial(e, p)
        assert single % flag == 0
        return single // flag

    def _single_chain_count(self, cls, letters, p, _memo=None):
        if _memo is None:
            _memo = {}
        key = (cls, letters)
        if key in _memo:
            return _memo[key]
        if not letters:
            val = 1 if sum(cyclic_class_dim(cls)) == 0 else 0
            _memo[key] = val
            return val
        gamma = cyclic_class_dim(cls)
        j = letters[0]
        if gamma[j - 1] == 0:
            _memo[key] = 0
            return 0
        b = tuple(c - (1 if i == j - 1 else 0) for i, c in enumerate(gamma))
        hist = self.engine.filtration_histogram(cls, b, p)
        sj = self.fam.simple_class(j)
        total = 0
        for (qc, sc), v in hist.items():
            if qc == sj:
                tail = self._single_chain_count(sc, letters[1:], p, _memo)
                total += v * tail
        _memo[key] = total
        return total

    def is_distinguished(self, word, pi=None):
        w = word if isinstance(word, Word) else Word.from_tight(word)
        target = self.wp(w)
        if pi is not None and target != pi:
            return False
        return all(self.layered_count(target, w, p) == 1 for p in (2, 3))

    def find_distinguished_word(self, pi):
        """First certified distinguished word for an aperiodic class."""
        if pi in self._section:
            return self._section[pi]
        if not pi.is_aperiodic():
            raise ValueError(f"{pi} is not aperiodic")
        alpha = cyclic_class_dim(pi)
        for w in tight_words_of_content(alpha):
            if self.wp(w) != pi:
                continue
            if self.is_distinguished(w, pi):
                # cross-check against the engine's exact coefficient
                coeff = self.engine.monomial_hall_element(w).coeff(pi)
                if coeff != 1:
                    raise RuntimeError(
                        "certified word has leading coefficient != 1")
                self._section[pi] = w
                return w
        raise RuntimeError(
            f"no distinguished word found for {pi} within the tight words of "
            f"weight {alpha} (search-bound or engine bug)")

    def section_for(self, alpha):
        """Distinguished words for every aperiodic class of dimension alpha."""
        out = {}
        for pi in enumerate_cyclic_classes(alpha, self.r):
            if pi.is_aperiodic():
                out[pi] = self.find_distinguished_word(pi)
        return out

    def save_section(self, path):
        data = [{"class": pi.to_json(), "word": w.to_json()}
                for pi, w in sorted(self._section.items(),
                                    key=lambda kv: kv[0].sort_key())]
        with open(path, "w") as fh:
            json.dump(data, fh, indent=1)

    def load_section(self, path):
        with open(path) as fh:
            data = json.load(fh)
        for entry in data:
            pi = MultiPartition.from_json(entry["class"])
            w = Word.from_tight([tuple(x) for x in entry["word"]])
            if not self.is_distinguished(w, pi):
                raise ValueError(f"stored word for {pi} fails certification")
            self._section[pi] = w
        return len(data)

    # -- monomial expansion -------------------------------------------------

    def monomial_expand(self, word):
        """m^(w) as a HallElement, with the support bound asserted."""
        w = word if isinstance(word, Word) else Word.from_tight(word)
        el = self.engine.monomial_hall_element(w)
        top = self.wp(w)
        for cls in el.support():
            if not degeneration_leq(cls, top):
                raise RuntimeError(
                    f"support class {cls} not below the word image {top}")
        return el

    # -- the integral basis ---------------------------------------------------

    def aperiodic_order(self, alpha):
        """Aperiodic classes of dim alpha, topologically sorted upward."""
        aper = [pi for pi in enumerate_cyclic_classes(alpha, self.r)
                if pi.is_aperiodic()]
        aper.sort(key=lambda pi: (sum(rank_table(pi).values()),
                                  pi.sort_key()))
        return aper

    def build_E_basis(self, alpha):
        """{pi: E_pi} for all aperiodic classes of dimension alpha."""
        alpha = tuple(alpha)
        if alpha in self._ebasis:
            return self._ebasis[alpha]
        out = {}
        for pi in self.aperiodic_order(alpha):
            w = self.find_distinguished_word(pi)
            el = self.monomial_expand(w)
            for lam in list(out):
                if lam != pi and degeneration_leq(lam, pi):
                    c = el.coeff(lam)
                    if c:
                        el = el - out[lam].scale(c)
            # sanity: E_pi = 1_{M(pi)} + integer terms at non-aperiodic lower
            if el.coeff(pi) != 1:
                raise RuntimeError(f"E_{pi} has leading coefficient "
                                   f"{el.coeff(pi)}")
            for cls in el.support():
                if cls == pi:
                    continue
                if cls.is_aperiodic():
                    raise RuntimeError(
                        f"E_{pi} has an aperiodic tail term at {cls}")
                if not degeneration_leq(cls, pi):
                    raise RuntimeError(f"E_{pi} tail term {cls} not lower")
                if el.coeff(cls).denominator != 1:
                    raise RuntimeError(f"E_{pi} has a non-integer tail")
            out[pi] = el
        self._ebasis[alpha] = out
        return out

    # -- verification -----------------------------------------------------------

    def verify_suite(self, alpha):
        """Unitriangularity, monomial span, and the root-vector relations."""
        alpha = tuple(alpha)
        results = []
        basis = self.build_E_basis(alpha)
        aper = self.aperiodic_order(alpha)
        # (a) transition to characteristic functions is unitriangular, integer
        ok = True
        witness = None
        for pi in aper:
            el = basis[pi]
            if el.coeff(pi) != 1 or not el.is_integral():
                ok = False
                witness = {"class": pi.to_json(), "element": el.to_json()}
                break
        results.append(reports.check(
            "e-basis-unitriangular",
            "E elements are unitriangular with integer entries over the "
            "characteristic functions", ok, witness=witness,
            r=self.r, alpha=list(alpha)))
        # (b) every divided monomial of this weight is an integer combination
        ok = True
        witness = None
        for w in tight_words_of_content(alpha):
            el = self.engine.monomial_hall_element(w)
            rem = el
            coeffs = {}
            for pi in reversed(aper):
                c = rem.coeff(pi)
                if c:
                    coeffs[pi] = c
                    rem = rem - basis[pi].scale(c)
            if not rem.is_zero() or any(c.denominator != 1
                                        for c in coeffs.values()):
                ok = False
                witness = {"word": w.to_json(),
                           "remainder": rem.to_json()}
                break
        results.append(reports.check(
            "monomials-in-span",
            "every divided monomial lies in the integer span of the E basis",
            ok, witness=witness, r=self.r, alpha=list(alpha)))
        # (c) root-vector relations: single chains S_i[l]
        total = sum(alpha)
        for i in range(1, self.r + 1):
            pi = _single_chain_class(self.r, i, total)
            if cyclic_class_dim(pi) != alpha:
                continue
            if total % self.r != 0:
                el = basis.get(pi)
                ok = el == eng.char_fn(self.fam, pi)
                results.append(reports.check(
                    "real-root-chain",
                    "for chains of length not divisible by r, E equals the "
                    "characteristic function", ok,
                    r=self.r, vertex=i, length=total))
            else:
                pi2 = _single_chain_class(self.r, i % self.r + 1, total)
                lhs = (eng.char_fn(self.fam, pi)
                       - eng.char_fn(self.fam, pi2))
                rhs = basis[pi] - basis[pi2]
                results.append(reports.check(
                    "imaginary-root-difference",
                    "differences of full-period chains agree with E "
                    "differences", lhs == rhs,
                    r=self.r, vertex=i, length=total))
        return results


def _single_chain_class(r, i, l):
    return MultiPartition([(l,) if j == i - 1 else () for j in range(r)])


_CONTEXTS = {}


def context(r):
    if r not in _CONTEXTS:
        _CONTEXTS[r] = CyclicContext(r)
    return _CONTEXTS[r]
