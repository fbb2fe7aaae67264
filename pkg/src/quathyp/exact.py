"""Exact scalar types for the rational backend.

``QSqrt2`` is the real field Q(sqrt 2), needed because the Cayley matrix has
entries +-sqrt(2)/2. ``ExactComplex`` is a complex number whose real and
imaginary parts are ``Fraction`` or ``QSqrt2``.
"""

from fractions import Fraction
from numbers import Rational


def _frac(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, float):
        # decimal reading, so 0.1 means 1/10 rather than its binary expansion
        return Fraction(repr(v))
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"cannot convert {type(v).__name__} to an exact rational")


def to_exact(v):
    """Coerce ints, floats, strings and exact types into an exact real."""
    if isinstance(v, QSqrt2):
        return v.simplify()
    return _frac(v)


class QSqrt2:
    """``p + q*sqrt(2)`` with rational ``p`` and ``q``."""

    __slots__ = ("p", "q")

    def __init__(self, p=0, q=0):
        self.p = _frac(p)
        self.q = _frac(q)

    @staticmethod
    def _lift(o):
        if isinstance(o, QSqrt2):
            return o
        return QSqrt2(o, 0)

    def simplify(self):
        return self.p if self.q == 0 else self

    def __add__(self, o):
        if isinstance(o, (QSqrt2, int, Fraction)):
            o = self._lift(o)
            return QSqrt2(self.p + o.p, self.q + o.q).simplify()
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.p, -self.q)

    def __sub__(self, o):
        if isinstance(o, (QSqrt2, int, Fraction)):
            return self + (-self._lift(o))
        return NotImplemented

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, (QSqrt2, int, Fraction)):
            o = self._lift(o)
            return QSqrt2(self.p * o.p + 2 * self.q * o.q, self.p * o.q + self.q * o.p).simplify()
        return NotImplemented

    __rmul__ = __mul__

    def _inv(self):
        den = self.p * self.p - 2 * self.q * self.q
        if den == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 2)")
        return QSqrt2(self.p / den, -self.q / den)

    def __truediv__(self, o):
        if isinstance(o, (QSqrt2, int, Fraction)):
            return (self * self._lift(o)._inv())
        return NotImplemented

    def __rtruediv__(self, o):
        return self._inv() * o

    def sign(self):
        # sign of p + q sqrt2 without irrational arithmetic
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sp == sq or sq == 0:
            return sp
        if sp == 0:
            return sq
        lhs = self.p * self.p
        rhs = 2 * self.q * self.q
        if lhs == rhs:
            return 0
        return sp if lhs > rhs else sq

    def __eq__(self, o):
        if isinstance(o, (QSqrt2, int, Fraction)):
            o = self._lift(o)
            return self.p == o.p and self.q == o.q
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.q))

    def __lt__(self, o):
        return sign(self - o) < 0

    def __gt__(self, o):
        return sign(self - o) > 0

    def __le__(self, o):
        return not self > o

    def __ge__(self, o):
        return not self < o

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.p) + float(self.q) * 2.0 ** 0.5

    def __repr__(self):
        return f"QSqrt2({self.p}, {self.q})"

    def __str__(self):
        return f"{self.p}+{self.q}*sqrt2"


SQRT2_HALF = QSqrt2(0, Fraction(1, 2))


def sign(v):
    """Exact sign of an exact real."""
    if isinstance(v, QSqrt2):
        return v.sign()
    return (v > 0) - (v < 0)


class ExactComplex:
    """Complex number over an exact real field."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_exact(re)
        self.im = to_exact(im)

    @classmethod
    def lift(cls, o):
        if isinstance(o, ExactComplex):
            return o
        return cls(o, 0)

    def conjugate(self):
        return ExactComplex(self.re, -self.im)

    def __add__(self, o):
        o = ExactComplex.lift(o)
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, o):
        o = ExactComplex.lift(o)
        return ExactComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return ExactComplex.lift(o) - self

    def __mul__(self, o):
        o = ExactComplex.lift(o)
        return ExactComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o):
        if isinstance(o, int):
            return ExactComplex(self.re / o, self.im / o)
        o = ExactComplex.lift(o)
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("exact complex division by zero")
        num = self * o.conjugate()
        return ExactComplex(num.re / n, num.im / n)

    def __rtruediv__(self, o):
        return ExactComplex.lift(o) / self

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __eq__(self, o):
        if isinstance(o, (int, Fraction, QSqrt2, ExactComplex)):
            o = ExactComplex.lift(o)
            return self.re == o.re and self.im == o.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"


def exact_rank(rows):
    """Rank of a matrix of ``ExactComplex`` entries by Gaussian elimination."""
    M = [[ExactComplex.lift(v) for v in row] for row in rows]
    if not M:
        return 0
    nr, nc = len(M), len(M[0])
    rank = 0
    for col in range(nc):
        piv = next((r for r in range(rank, nr) if not M[r][col].is_zero()), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = 1 / M[rank][col]
        for r in range(nr):
            if r != rank and not M[r][col].is_zero():
                f = M[r][col] * inv
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
        if rank == nr:
            break
    return rank


def exact_det(rows):
    """Determinant over an exact field (fraction-free not needed at 4x4)."""
    M = [list(row) for row in rows]
    n = len(M)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col]
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return det


def exact_matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    zero = ExactComplex(0)
    out = []
    for i in range(n):
        # skipping zero factors matters: embeddings of structured members are sparse
        terms = [(A[i][k], B[k]) for k in range(m) if not A[i][k].is_zero()]
        row = []
        for j in range(p):
            acc = zero
            for a, brow in terms:
                b = brow[j]
                if not b.is_zero():
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def exact_charpoly(M):
    """Faddeev-LeVerrier over exact complex entries; coefficients x^n .. x^0."""
    n = len(M)
    M = [[ExactComplex.lift(v) for v in row] for row in M]
    coeffs = [ExactComplex(1)]
    Mk = [[ExactComplex(0) for _ in range(n)] for _ in range(n)]
    for k in range(1, n + 1):
        Mk = exact_matmul(M, Mk)
        for i in range(n):
            Mk[i][i] = Mk[i][i] + coeffs[k - 1]
        # only the trace of M Mk is needed
        tr = ExactComplex(0)
        for i in range(n):
            for j in range(n):
                if not M[i][j].is_zero() and not Mk[j][i].is_zero():
                    tr = tr + M[i][j] * Mk[j][i]
        coeffs.append(-tr / k)
    return coeffs
