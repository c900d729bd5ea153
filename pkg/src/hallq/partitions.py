"""Partitions, multipartitions, words and e/h/m transition data.

Partitions are stored weakly decreasing with no trailing zeros; canonical
form is enforced at construction so values are usable as dict keys.
Symmetric functions only ever appear through finite per-degree transition
matrices in the monomial basis.
"""

from functools import lru_cache
from itertools import product


class Partition:
    """A partition: weakly decreasing tuple of positive integers."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(x) for x in parts if int(x) != 0)
        if any(x < 0 for x in parts):
            raise ValueError("negative part")
        if list(parts) != sorted(parts, reverse=True):
            parts = tuple(sorted(parts, reverse=True))
        self.parts = parts

    @property
    def weight(self):
        return sum(self.parts)

    def conjugate(self):
        if not self.parts:
            return Partition()
        out = []
        for i in range(1, self.parts[0] + 1):
            out.append(sum(1 for x in self.parts if x >= i))
        return Partition(out)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __lt__(self, other):
        return self.parts < other.parts

    def __repr__(self):
        return f"Partition{self.parts}"

    def to_json(self):
        return list(self.parts)


def conjugate(parts):
    """Tuple-level conjugate (transpose of the Young diagram)."""
    return Partition(parts).conjugate().parts


def dominance_leq(lam, mu):
    """lam <= mu in dominance order.  Both must have the same weight."""
    a = tuple(Partition(lam).parts)
    b = tuple(Partition(mu).parts)
    if sum(a) != sum(b):
        raise ValueError("dominance order needs equal weights")
    ta = tb = 0
    for i in range(max(len(a), len(b))):
        ta += a[i] if i < len(a) else 0
        tb += b[i] if i < len(b) else 0
        if ta > tb:
            return False
    return True


@lru_cache(maxsize=None)
def partitions_of(n, max_part=None):
    """All partitions of n as tuples, decreasing lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


class MultiPartition:
    """An r-tuple of partitions, indexing nilpotent cyclic-quiver classes."""

    __slots__ = ("components", "r")

    def __init__(self, components):
        self.components = tuple(Partition(c) for c in components)
        self.r = len(self.components)
        if self.r < 1:
            raise ValueError("need at least one component")

    def weight(self):
        return sum(c.weight for c in self.components)

    def is_aperiodic(self):
        """True iff every part size is missing from at least one component."""
        sizes = set()
        for c in self.components:
            sizes.update(c.parts)
        for l in sizes:
            if all(l in c.parts for c in self.components):
                return False
        return True

    def pairs(self):
        """Multiset of (component index, part) pairs, 1-based index."""
        out = []
        for i, c in enumerate(self.components):
            out.extend((i + 1, x) for x in c.parts)
        return out

    def __eq__(self, other):
        return (isinstance(other, MultiPartition)
                and self.components == other.components)

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        body = ",".join(str(c.parts) for c in self.components)
        return f"MultiPartition[{body}]"

    def sort_key(self):
        return tuple(c.parts for c in self.components)

    def to_json(self):
        return [list(c.parts) for c in self.components]

    @staticmethod
    def from_json(data):
        return MultiPartition([tuple(c) for c in data])


def is_aperiodic(mp):
    return MultiPartition(mp.components if isinstance(mp, MultiPartition) else mp).is_aperiodic()


class Word:
    """A word over the vertex alphabet 1..r, with its tight form."""

    __slots__ = ("letters",)

    def __init__(self, letters):
        self.letters = tuple(int(x) for x in letters)
        if any(x < 1 for x in self.letters):
            raise ValueError("letters are 1-based vertex indices")

    @staticmethod
    def from_tight(tight):
        letters = []
        prev = None
        for v, e in tight:
            if e < 1:
                raise ValueError("exponents must be >= 1")
            if v == prev:
                raise ValueError("adjacent tight letters must differ")
            letters.extend([v] * e)
            prev = v
        return Word(letters)

    def tight(self):
        """Tight form: list of (vertex, exponent), adjacent vertices distinct."""
        out = []
        for x in self.letters:
            if out and out[-1][0] == x:
                out[-1][1] += 1
            else:
                out.append([x, 1])
        return [(v, e) for v, e in out]

    def content(self, r):
        vec = [0] * r
        for x in self.letters:
            vec[x - 1] += 1
        return tuple(vec)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return len(self.letters)

    def __repr__(self):
        return "Word(" + "".join(str(x) for x in self.letters) + ")"

    def to_json(self):
        return [[v, e] for v, e in self.tight()]


def tight_words_of_content(content):
    """All tight-form words over 1..r with the given content vector.

    Returned as Word objects, ordered by (#letters in tight form, lex).
    Deterministic; used both for monomial families and word searches.
    """
    r = len(content)
    results = []

    def rec(remaining, prev, acc):
        if all(x == 0 for x in remaining):
            results.append(tuple(acc))
            return
        for v in range(1, r + 1):
            if v == prev or remaining[v - 1] == 0:
                continue
            for e in range(remaining[v - 1], 0, -1):
                rem2 = list(remaining)
                rem2[v - 1] -= e
                rec(rem2, v, acc + [(v, e)])

    rec(list(content), None, [])
    results.sort(key=lambda t: (len(t), t))
    return [Word.from_tight(t) for t in results]


# ---------------------------------------------------------------------------
# symmetric function transitions (independent combinatorial oracle)

@lru_cache(maxsize=None)
def _matrix_count(rows, cols, zero_one):
    """Number of (0/1 or nonneg integer) matrices with given row/column sums."""
    rows = tuple(rows)
    cols = tuple(cols)
    if sum(rows) != sum(cols):
        return 0
    if not rows:
        return 1 if all(c == 0 for c in cols) else 0
    first = rows[0]
    total = 0
    # distribute `first` among the columns
    ranges = [range(0, min(1, c) + 1) if zero_one else range(0, c + 1)
              for c in cols]

    def rec(i, left, used):
        nonlocal total
        if left == 0:
            newcols = tuple(c - u for c, u in zip(cols, used + [0] * (len(cols) - len(used))))
            total += _matrix_count(rows[1:], newcols, zero_one)
            return
        if i == len(cols):
            return
        cap = min(left, 1 if zero_one else cols[i])
        cap = min(cap, cols[i])
        for v in range(cap + 1):
            rec(i + 1, left - v, used + [v])

    rec(0, first, [])
    return total


def h_to_m_entry(lam, mu):
    """Coefficient of m_mu in h_lam (nonneg integer matrices count)."""
    return _matrix_count(tuple(lam), tuple(mu), False)


def e_to_m_entry(lam, mu):
    """Coefficient of m_mu in e_lam (0/1 matrices count)."""
    return _matrix_count(tuple(lam), tuple(mu), True)


def symfun_transition(n):
    """Transition matrices at degree n: expansions of e_lam and h_lam in m_mu.

    Returns (index, E, H) where index is the tuple of partitions of n in
    decreasing lexicographic order, and E[i][j] = coefficient of m_{index[j]}
    in e_{index[i]} (same layout for H).
    """
    idx = partitions_of(n)
    e_mat = [[e_to_m_entry(lam, mu) for mu in idx] for lam in idx]
    h_mat = [[h_to_m_entry(lam, mu) for mu in idx] for lam in idx]
    return idx, e_mat, h_mat


def multiset_permutations(items):
    """Distinct permutations of a multiset, lexicographic."""
    items = sorted(items)
    n = len(items)
    if n == 0:
        yield ()
        return
    cur = list(items)
    while True:
        yield tuple(cur)
        i = n - 2
        while i >= 0 and cur[i] >= cur[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while cur[j] <= cur[i]:
            j -= 1
        cur[i], cur[j] = cur[j], cur[i]
        cur[i + 1:] = reversed(cur[i + 1:])


def monomial_product_coeff(lam, mu, nu):
    """Coefficient of m_nu in m_lam * m_mu.

    Counts padded rearrangements a of lam with nu - a a rearrangement of mu;
    iterates over the shorter factor only.
    """
    lam = tuple(Partition(lam).parts)
    mu = tuple(Partition(mu).parts)
    nu = tuple(Partition(nu).parts)
    if sum(lam) + sum(mu) != sum(nu):
        return 0
    if len(lam) > len(mu):
        lam, mu = mu, lam
    nvars = len(nu)
    if len(lam) > nvars or len(mu) > nvars:
        return 0
    padded = tuple(lam) + (0,) * (nvars - len(lam))
    mu_sorted = tuple(sorted(mu, reverse=True))
    count = 0
    for a in multiset_permutations(padded):
        rest = tuple(x - y for x, y in zip(nu, a))
        if min(rest, default=0) < 0:
            continue
        if tuple(sorted((x for x in rest if x), reverse=True)) == mu_sorted:
            count += 1
    return count


def monomial_product(lam, mu):
    """Expansion of m_lam * m_mu in the monomial basis, as {nu: coeff}."""
    n = Partition(lam).weight + Partition(mu).weight
    out = {}
    for nu in partitions_of(n):
        c = monomial_product_coeff(lam, mu, nu)
        if c:
            out[nu] = c
    return out


def newton_identity_holds(n):
    """Check sum_k (-1)^k e_k h_{n-k} = 0 in the monomial basis at degree n."""
    for nu in partitions_of(n):
        total = 0
        for k in range(n + 1):
            # e_k = m_{(1^k)}, h_{n-k} = sum over partitions of n-k of m_mu
            for mu in partitions_of(n - k):
                total += (-1) ** k * monomial_product_coeff(
                    tuple([1] * k), mu, nu)
        if total != 0:
            return False
    return True
