"""Exact polynomials in the counting variable q, with rational coefficients."""

from fractions import Fraction


class QPolynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @staticmethod
    def const(c):
        return QPolynomial([Fraction(c)])

    @staticmethod
    def x():
        return QPolynomial([0, 1])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_integer(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def __call__(self, x):
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def at_one(self):
        v = self(1)
        return int(v) if v.denominator == 1 else v

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return QPolynomial([
            (self.coeffs[i] if i < len(self.coeffs) else 0)
            + (other.coeffs[i] if i < len(other.coeffs) else 0)
            for i in range(n)])

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return QPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return QPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPolynomial(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def exact_div(self, other):
        """Exact polynomial division; raises if the remainder is nonzero."""
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError
        if self.is_zero():
            return QPolynomial()
        rem = list(self.coeffs)
        out = [Fraction(0)] * (len(rem) - len(other.coeffs) + 1)
        if len(rem) < len(other.coeffs):
            raise ValueError("division is not exact")
        lead = other.coeffs[-1]
        for k in range(len(out) - 1, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            out[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
        if any(r != 0 for r in rem):
            raise ValueError("division is not exact")
        return QPolynomial(out)

    def __eq__(self, other):
        return self.coeffs == _coerce(other).coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "0"
        bits = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                bits.append(str(c))
            elif i == 1:
                bits.append(f"{c}*q" if c != 1 else "q")
            else:
                bits.append(f"{c}*q^{i}" if c != 1 else f"q^{i}")
        return " + ".join(bits)

    def to_json(self):
        return [[c.numerator, c.denominator] for c in self.coeffs]


def _coerce(x):
    if isinstance(x, QPolynomial):
        return x
    return QPolynomial([Fraction(x)])


ZERO = QPolynomial()
ONE = QPolynomial([1])


def q_int_poly(n):
    return QPolynomial([1] * n)


def q_factorial_poly(n):
    out = ONE
    for k in range(1, n + 1):
        out = out * q_int_poly(k)
    return out


def lagrange_interpolate(points):
    """Exact polynomial through (x, y) pairs with distinct x."""
    xs = [Fraction(x) for x, _ in points]
    ys = [Fraction(y) for _, y in points]
    n = len(points)
    out = QPolynomial()
    for i in range(n):
        num = QPolynomial([1])
        den = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            num = num * QPolynomial([-xs[j], 1])
            den *= xs[i] - xs[j]
        out = out + num * (ys[i] / den)
    return out


class NonPolynomialCountError(RuntimeError):
    """Counts failed the extra-node or integrality verification."""


def interpolate_counts(nodes, counts, degree_bound):
    """Interpolate counts with verification.

    Fits a polynomial of degree <= degree_bound through the first
    degree_bound+1 nodes, then checks it reproduces every remaining count
    and has integer coefficients.
    """
    if len(nodes) != len(counts):
        raise ValueError("node/count length mismatch")
    if len(nodes) < degree_bound + 3:
        raise ValueError("need degree_bound + 3 evaluation nodes")
    fit = lagrange_interpolate(list(zip(nodes, counts))[:degree_bound + 1])
    for x, y in list(zip(nodes, counts))[degree_bound + 1:]:
        if fit(x) != y:
            raise NonPolynomialCountError(
                f"count at q={x} is {y}, interpolant predicts {fit(x)}")
    if not fit.is_integer():
        raise NonPolynomialCountError(
            f"interpolated counting polynomial {fit} has non-integer "
            "coefficients")
    return fit
