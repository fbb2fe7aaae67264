"""Quaternion scalars and similarity classes.

A quaternion ``w + xi + yj + zk`` is stored as four real components. The
components may be floats or exact reals (``Fraction``, ``QSqrt2``); the
arithmetic below never forces a conversion.

Two quaternions are similar when ``p = u q u^-1`` for a unit ``u``. The class
of ``q`` is fixed by ``|q|`` and ``Re q`` and contains exactly one complex
conjugate pair; the representative ``r e^{i theta}`` with ``theta`` in
``[0, pi]`` is what this package reports as "the" eigenvalue.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .exact import QSqrt2, sign as exact_sign, to_exact

DEFAULT_TOL = 1e-9


class QuaternionDomainError(ValueError):
    """Raised for operations undefined at the given quaternion (e.g. zero)."""


@dataclass(frozen=True)
class Quaternion:
    w: object = 0.0
    x: object = 0.0
    y: object = 0.0
    z: object = 0.0

    # -- construction -------------------------------------------------------

    @classmethod
    def from_complex(cls, c) -> "Quaternion":
        c = complex(c)
        return cls(c.real, c.imag, 0.0, 0.0)

    @classmethod
    def from_split(cls, z1, z2) -> "Quaternion":
        """Inverse of :meth:`split`: ``q = z1 + j z2``."""
        z1 = complex(z1)
        z2 = complex(z2)
        return cls(z1.real, z1.imag, z2.real, -z2.imag)

    @classmethod
    def coerce(cls, v) -> "Quaternion":
        if isinstance(v, Quaternion):
            return v
        if isinstance(v, complex):
            return cls.from_complex(v)
        if isinstance(v, str):
            return parse_quaternion(v)
        if isinstance(v, (list, tuple)):
            if len(v) != 4:
                raise ValueError(f"quaternion array needs 4 components, got {len(v)}")
            return cls(*v)
        return cls(v, 0.0 * v if isinstance(v, float) else 0, 0.0 * v if isinstance(v, float) else 0,
                   0.0 * v if isinstance(v, float) else 0)

    # -- views ----------------------------------------------------------------

    def components(self) -> tuple:
        return (self.w, self.x, self.y, self.z)

    def split(self) -> tuple[complex, complex]:
        """Return ``(z1, z2)`` with ``q = z1 + j z2`` (``j z = conj(z) j``)."""
        return complex(float(self.w), float(self.x)), complex(float(self.y), -float(self.z))

    def is_complex(self, tol: float = 0.0) -> bool:
        if tol == 0.0:
            return self.y == 0 and self.z == 0
        return abs(float(self.y)) <= tol and abs(float(self.z)) <= tol

    def to_complex(self) -> complex:
        return complex(float(self.w), float(self.x))

    def is_exact(self) -> bool:
        return not any(isinstance(c, float) for c in self.components())

    # -- arithmetic -----------------------------------------------------------

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self):
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(float(self.norm2()))

    def real(self):
        return self.w

    def __add__(self, o):
        o = Quaternion.coerce(o)
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, o):
        return self + (-Quaternion.coerce(o))

    def __rsub__(self, o):
        return Quaternion.coerce(o) - self

    def __mul__(self, o):
        if isinstance(o, (int, float, Fraction, QSqrt2)):
            return Quaternion(self.w * o, self.x * o, self.y * o, self.z * o)
        return q_mul(self, Quaternion.coerce(o))

    def __rmul__(self, o):
        if isinstance(o, (int, float, Fraction, QSqrt2)):
            return Quaternion(o * self.w, o * self.x, o * self.y, o * self.z)
        return q_mul(Quaternion.coerce(o), self)

    def inverse(self) -> "Quaternion":
        n = self.norm2()
        if n == 0:
            raise QuaternionDomainError("zero quaternion has no inverse")
        c = self.conjugate()
        return Quaternion(c.w / n, c.x / n, c.y / n, c.z / n)

    def __truediv__(self, o):
        """Right division ``self * o^-1``."""
        if isinstance(o, (int, float, Fraction, QSqrt2)):
            return Quaternion(self.w / o, self.x / o, self.y / o, self.z / o)
        return self * Quaternion.coerce(o).inverse()

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components())

    def __str__(self) -> str:
        return format_quaternion(self)

    def to_json(self) -> list:
        return [_json_num(c) for c in self.components()]


def _json_num(c):
    if isinstance(c, float):
        return c
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else str(c)
    return str(c)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def q_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    p0, p1, p2, p3 = p.components()
    q0, q1, q2, q3 = q.components()
    return Quaternion(
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
        p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
        p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
    )


# ------------------------------------------------------------------ classes

@dataclass(frozen=True)
class SimilarityClass:
    """Class of ``modulus * e^{i angle}`` with ``angle`` in ``[0, pi]``."""

    modulus: float
    angle: float

    def representative(self) -> complex:
        return self.modulus * complex(math.cos(self.angle), math.sin(self.angle))

    def matches(self, other: "SimilarityClass", tol: float = DEFAULT_TOL) -> bool:
        return (abs(self.modulus - other.modulus) <= tol * max(1.0, self.modulus)
                and abs(math.cos(self.angle) - math.cos(other.angle)) <= tol)

    def is_real(self, tol: float = 1e-7) -> bool:
        return abs(math.sin(self.angle)) <= tol

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "angle": self.angle}


@dataclass(frozen=True)
class ExactSimilarityClass:
    """Exact-mode class data ``(|q|^2, Re q)``; avoids irrational square roots.

    Two exact classes are equal iff both fields are equal.
    """

    norm2: object
    real: object

    def matches(self, other: "ExactSimilarityClass", tol: float = 0.0) -> bool:
        return self.norm2 == other.norm2 and self.real == other.real

    def to_float(self) -> SimilarityClass:
        m = math.sqrt(float(self.norm2))
        return SimilarityClass(m, math.acos(max(-1.0, min(1.0, float(self.real) / m))))

    def to_json(self) -> dict:
        return {"norm2": _json_num(self.norm2), "real": _json_num(self.real)}


def similarity_representative(q: Quaternion, exact: bool = False):
    """Representative of the similarity class of ``q``.

    Float mode returns ``SimilarityClass(|q|, arccos(Re q / |q|))``. With
    ``exact=True`` the components are converted to exact reals and an
    :class:`ExactSimilarityClass` is returned.
    """
    q = Quaternion.coerce(q)
    if exact:
        comps = [to_exact(c) for c in q.components()]
        n2 = sum((c * c for c in comps), Fraction(0))
        if n2 == 0:
            raise QuaternionDomainError("zero quaternion has no similarity class")
        return ExactSimilarityClass(n2, comps[0])
    m = abs(q)
    if m == 0.0:
        raise QuaternionDomainError("zero quaternion has no similarity class")
    c = max(-1.0, min(1.0, float(q.w) / m))
    return SimilarityClass(m, math.acos(c))


def same_class(p: Quaternion, q: Quaternion, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``p`` and ``q`` are similar quaternions.

    Exact inputs (no float components) with ``tol == 0`` compare exactly.
    """
    p = Quaternion.coerce(p)
    q = Quaternion.coerce(q)
    if tol == 0 and p.is_exact() and q.is_exact():
        a = similarity_representative(p, exact=True)
        b = similarity_representative(q, exact=True)
        # Re p/|p| = Re q/|q|  <=>  equal signs and Re(p)^2 |q|^2 = Re(q)^2 |p|^2
        if a.norm2 != b.norm2:
            return False
        return exact_sign(a.real) == exact_sign(b.real) and a.real * a.real == b.real * b.real
    mp, mq = abs(p), abs(q)
    if mp == 0.0 or mq == 0.0:
        raise QuaternionDomainError("zero quaternion has no similarity class")
    return abs(mp - mq) <= tol * max(1.0, mp) and abs(float(p.w) / mp - float(q.w) / mq) <= tol


def similarity_conjugator(q: Quaternion) -> Quaternion:
    """Unit ``u`` with ``u q u^-1 = |q| e^{i theta}``, ``theta`` in ``[0, pi]``.

    Rotates the imaginary part of ``q`` onto the positive ``i`` axis.
    """
    q = Quaternion.coerce(q)
    v = (float(q.x), float(q.y), float(q.z))
    nv = math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
    if nv == 0.0:
        return ONE
    n = (v[0] / nv, v[1] / nv, v[2] / nv)
    # u ~ 1 - m n with m = i, i.e. (1 + n.m) + n x m
    w = 1.0 + n[0]
    if w < 1e-12:
        # imaginary part along -i: a half turn about j flips it
        return J
    u = Quaternion(w, 0.0, n[2], -n[1])
    s = abs(u)
    return Quaternion(u.w / s, u.x / s, u.y / s, u.z / s)


# --------------------------------------------------------------- text format

_TERM = re.compile(
    r"\s*([+-])?\s*((?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?)?\s*([ijk])?\s*"
)


def _num(tok: str, exact: bool):
    if "/" in tok:
        return Fraction(tok)
    if exact:
        return Fraction(tok)
    return float(tok)


def parse_quaternion(text: str, exact: bool = False) -> Quaternion:
    """Parse ``"w+xi+yj+zk"`` with any zero terms omitted (e.g. ``"1-2j"``).

    Components may be decimals, exponents or fractions ``p/q``. With
    ``exact=True`` every component becomes a ``Fraction``.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty quaternion string")
    comps = {"": None, "i": None, "j": None, "k": None}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse quaternion {text!r} at offset {pos}")
        sgn, num, unit = m.group(1), m.group(2), m.group(3) or ""
        if num is None and not unit:
            raise ValueError(f"cannot parse quaternion {text!r} at offset {pos}")
        if pos > 0 and sgn is None:
            raise ValueError(f"missing sign between terms in {text!r}")
        val = _num(num, exact) if num is not None else (Fraction(1) if exact else 1.0)
        if sgn == "-":
            val = -val
        if comps[unit] is not None:
            raise ValueError(f"repeated {unit or 'real'} term in {text!r}")
        comps[unit] = val
        pos = m.end()
    zero = Fraction(0) if exact else 0.0
    return Quaternion(*[comps[u] if comps[u] is not None else zero for u in ("", "i", "j", "k")])


def quaternion_from_json(v, exact: bool = False) -> Quaternion:
    """Accept ``[w, x, y, z]``, a text form, or a bare real number."""
    if isinstance(v, str):
        return parse_quaternion(v, exact=exact)
    if isinstance(v, bool):
        raise ValueError("boolean is not a quaternion")
    if isinstance(v, (int, float)):
        v = [v, 0, 0, 0]
    if not isinstance(v, (list, tuple)) or len(v) != 4:
        raise ValueError(f"quaternion must be [w,x,y,z] or a string, got {v!r}")
    out = []
    for c in v:
        if isinstance(c, bool) or not isinstance(c, (int, float, str)):
            raise ValueError(f"bad quaternion component {c!r}")
        if exact:
            out.append(to_exact(c))
        elif isinstance(c, str):
            out.append(float(Fraction(c)))
        else:
            out.append(float(c))
    return Quaternion(*out)


def _fmt(c) -> str:
    if isinstance(c, float):
        return repr(c) if c != int(c) or abs(c) >= 1e16 else str(int(c))
    return str(c)


def format_quaternion(q: Quaternion) -> str:
    parts = []
    for c, unit in zip(q.components(), ("", "i", "j", "k")):
        if c == 0:
            continue
        neg = (c < 0) if not isinstance(c, QSqrt2) else c.sign() < 0
        mag = -c if neg else c
        body = _fmt(mag)
        if unit and body == "1":
            body = ""
        parts.append(("-" if neg else "+") + body + unit)
    if not parts:
        return "0"
    out = "".join(parts)
    return out[1:] if out[0] == "+" else out
