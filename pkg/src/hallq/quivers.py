"""Quivers, dimension vectors, Euler forms and root combinatorics.

Built-in quivers:
  kronecker      two vertices, two parallel arrows 2 -> 1, so the simple at
                 vertex 1 is projective and the preprojective real roots are
                 (1,0) < (2,1) < (3,2) < ...
  cyclic:r       vertices 1..r, arrows i -> i+1 (mod r); r = 1 is the one-loop
                 (Jordan) quiver, only meaningful for nilpotent representations
  a2tilde:1      the acyclic orientation of the triangle: 1->2, 2->3, 1->3

Dimension vectors are plain int tuples.
"""

import json

import numpy as np

from .fplinalg import solve_exact_rational


class Quiver:
    def __init__(self, n_vertices, arrows, name=None):
        self.n = int(n_vertices)
        self.arrows = tuple((int(s), int(t)) for s, t in arrows)
        for s, t in self.arrows:
            if not (1 <= s <= self.n and 1 <= t <= self.n):
                raise ValueError("arrow endpoint out of range")
        self.name = name or f"quiver({self.n},{self.arrows})"

    # -- basic structure ----------------------------------------------------

    @property
    def has_loops(self):
        return any(s == t for s, t in self.arrows)

    def arrows_into(self, i):
        return [k for k, (s, t) in enumerate(self.arrows) if t == i]

    def arrows_out_of(self, i):
        return [k for k, (s, t) in enumerate(self.arrows) if s == i]

    def is_sink(self, i):
        return not self.arrows_out_of(i)

    def is_source(self, i):
        return not self.arrows_into(i)

    def is_acyclic(self):
        # Kahn peeling
        indeg = {i: len(self.arrows_into(i)) for i in range(1, self.n + 1)}
        queue = [i for i, d in indeg.items() if d == 0]
        seen = 0
        while queue:
            i = queue.pop()
            seen += 1
            for k in self.arrows_out_of(i):
                t = self.arrows[k][1]
                indeg[t] -= 1
                if indeg[t] == 0:
                    queue.append(t)
        return seen == self.n

    def euler_matrix(self):
        """E with <a,b> = a E b^T;  E[i][j] = delta_ij - #arrows i->j."""
        e = np.eye(self.n, dtype=np.int64)
        for s, t in self.arrows:
            e[s - 1, t - 1] -= 1
        return e

    def euler_form(self, alpha, beta):
        a = _vec(alpha, self.n)
        b = _vec(beta, self.n)
        return int(a @ self.euler_matrix() @ b)

    def symmetric_euler(self, alpha, beta):
        return self.euler_form(alpha, beta) + self.euler_form(beta, alpha)

    def cartan_ok(self):
        """Check the symmetrization is a Cartan datum: (i,i)=2, (i,j)<=0."""
        if self.has_loops:
            return False
        for i in range(1, self.n + 1):
            ei = unit(i, self.n)
            if self.symmetric_euler(ei, ei) != 2:
                return False
            for j in range(1, self.n + 1):
                if i != j and self.symmetric_euler(ei, unit(j, self.n)) > 0:
                    return False
        return True

    def is_tame(self):
        """Affine type: symmetric form positive semidefinite with radical."""
        if self.has_loops:
            return False
        c = self.euler_matrix()
        sym = c + c.T
        eig = np.linalg.eigvalsh(sym.astype(float))
        return eig.min() > -1e-9 and abs(eig.min()) < 1e-9

    # -- reflections ---------------------------------------------------------

    def reflect(self, i):
        """sigma_i Q: reverse every arrow incident to i (i a sink or source)."""
        if not (self.is_sink(i) or self.is_source(i)):
            raise ValueError(f"vertex {i} is neither a sink nor a source")
        arrows = []
        for s, t in self.arrows:
            if s == i or t == i:
                arrows.append((t, s))
            else:
                arrows.append((s, t))
        return Quiver(self.n, arrows, name=f"s{i}({self.name})")

    def reflect_dim(self, i, alpha):
        """Simple reflection alpha - (alpha, e_i) e_i."""
        a = list(_vec(alpha, self.n))
        pairing = self.symmetric_euler(alpha, unit(i, self.n))
        a[i - 1] -= pairing
        return tuple(int(x) for x in a)

    def coxeter_matrix(self):
        """Phi with dim(tau M) = Phi . dim M for non-projective indecomposables.

        Phi = -E^{-1} E^T; validated against sink-ordered reflection
        composition in the tests.
        """
        e = self.euler_matrix().astype(object)
        einv = _int_inverse(e)
        return -(einv @ e.T.astype(object))

    def coxeter_apply(self, alpha, inverse=False):
        phi = self.coxeter_matrix()
        if inverse:
            phi = _int_inverse(phi)
        v = phi @ np.array(alpha, dtype=object)
        return tuple(int(x) for x in v)

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return {"vertices": self.n, "arrows": [list(a) for a in self.arrows],
                "name": self.name}

    @staticmethod
    def from_json(data):
        return Quiver(data["vertices"], data["arrows"], data.get("name"))

    @staticmethod
    def from_file(path):
        with open(path) as fh:
            return Quiver.from_json(json.load(fh))

    def __repr__(self):
        return f"Quiver<{self.name}>"

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.n == other.n
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.n, self.arrows))


def _vec(alpha, n):
    a = np.asarray(alpha, dtype=np.int64)
    if a.shape != (n,):
        raise ValueError(f"dimension vector must have length {n}")
    return a


def unit(i, n):
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def _int_inverse(m):
    """Exact inverse of an integer unimodular-ish matrix, as object array."""
    n = m.shape[0]
    cols = []
    rows = [[int(m[i, j]) for j in range(n)] for i in range(n)]
    for k in range(n):
        rhs = [1 if i == k else 0 for i in range(n)]
        cols.append(solve_exact_rational(rows, rhs))
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for k in range(n):
            x = cols[k][i]
            if x.denominator != 1:
                raise ValueError("matrix is not invertible over Z")
            out[i, k] = int(x)
    return out


# ---------------------------------------------------------------------------
# built-in quivers

def kronecker():
    return Quiver(2, [(2, 1), (2, 1)], name="kronecker")


def cyclic(r):
    if r < 1:
        raise ValueError("cyclic quiver needs r >= 1")
    arrows = [(i, i % r + 1) for i in range(1, r + 1)]
    return Quiver(r, arrows, name=f"cyclic:{r}")


def a2tilde(orientation=1):
    if orientation != 1:
        raise ValueError("only orientation 1 (1->2, 2->3, 1->3) is shipped")
    return Quiver(3, [(1, 2), (2, 3), (1, 3)], name="a2tilde:1")


def by_name(name):
    if name == "kronecker":
        return kronecker()
    if name.startswith("cyclic:"):
        return cyclic(int(name.split(":")[1]))
    if name.startswith("a2tilde"):
        ori = int(name.split(":")[1]) if ":" in name else 1
        return a2tilde(ori)
    raise ValueError(f"unknown quiver {name!r}")


# ---------------------------------------------------------------------------
# root data for tame acyclic quivers

class RootDatum:
    """delta plus ordered preprojective/preinjective real root lists.

    prep is ordered so Hom(M(a_i), M(a_j)) = 0 for i > j and
    Ext^1(M(a_i), M(a_j)) = 0 for i <= j; prei is listed smallest-last
    (the injective dimension vectors close the list).
    """

    def __init__(self, delta, prep, prei):
        self.delta = tuple(delta)
        self.prep = [tuple(a) for a in prep]
        self.prei = [tuple(a) for a in prei]


def radical_vector(q):
    """Minimal positive integer vector in the radical of the symmetric form."""
    e = q.euler_matrix()
    sym = e + e.T
    # integer kernel by rational elimination
    rows = [[int(x) for x in row] for row in sym]
    import fractions
    # find nullspace over Q via RREF on the transpose system
    n = q.n
    m = [[fractions.Fraction(rows[i][j]) for j in range(n)] for i in range(n)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, n) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(n):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ValueError("quiver is not tame (radical is not a line)")
    c = free[0]
    vec = [fractions.Fraction(0)] * n
    vec[c] = fractions.Fraction(1)
    for i, pc in enumerate(pivots):
        vec[pc] = -m[i][c]
    denom = 1
    for x in vec:
        denom = denom * x.denominator // _gcd(denom, x.denominator)
    ints = [int(x * denom) for x in vec]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    ints = [x // g for x in ints]
    if all(x <= 0 for x in ints):
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise ValueError("radical vector is not positive")
    return tuple(ints)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def projective_dims(q):
    """dim P(i) = number of paths from i to each vertex (acyclic only)."""
    if not q.is_acyclic():
        raise ValueError("projectives need an acyclic quiver")
    out = []
    for i in range(1, q.n + 1):
        counts = [0] * q.n
        stack = [i]
        while stack:
            v = stack.pop()
            counts[v - 1] += 1
            for k in q.arrows_out_of(v):
                stack.append(q.arrows[k][1])
        out.append(tuple(counts))
    return out


def injective_dims(q):
    if not q.is_acyclic():
        raise ValueError("injectives need an acyclic quiver")
    out = []
    for i in range(1, q.n + 1):
        counts = [0] * q.n
        stack = [i]
        while stack:
            v = stack.pop()
            counts[v - 1] += 1
            for k in q.arrows_into(v):
                stack.append(q.arrows[k][0])
        out.append(tuple(counts))
    return out


def prep_prei_root_orders(q, bound=10):
    """RootDatum with prep/prei roots generated by Coxeter orbits.

    `bound` is the number of roots kept on each side.  Roots are generated
    from the projective (resp. injective) dimension vectors by the inverse
    (resp. direct) Coxeter transformation and ordered by total dimension,
    which realizes the Hom/Ext vanishing pattern on these quivers (checked
    against concrete modules in the tests).
    """
    if bound <= 0:
        raise ValueError("bound must be positive")
    if not q.is_acyclic():
        raise ValueError("root orders need an acyclic quiver")
    delta = radical_vector(q)
    prep = []
    states = projective_dims(q)
    while len(prep) < bound:
        for v in sorted(states, key=lambda a: (sum(a), a)):
            prep.append(v)
        states = [q.coxeter_apply(v, inverse=True) for v in states]
    prei = []
    states = injective_dims(q)
    while len(prei) < bound:
        for v in sorted(states, key=lambda a: (sum(a), a)):
            prei.append(v)
        states = [q.coxeter_apply(v) for v in states]
    prep = prep[:bound]
    # prei listed with the injectives last: generate big-to-small then flip
    prei = list(reversed(prei[:bound]))
    return RootDatum(delta, prep, prei)
