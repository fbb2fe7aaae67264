"""Polynomial invariants of a 6x6 embedding.

The characteristic polynomial of ``A_C`` (or ``A_R``) of a group member is
self-dual,

    x^6 - a x^5 + b x^4 - c x^3 + b x^2 - a x + 1,

and ``t = x + 1/x`` reduces it to the resolvent cubic

    g(t) = t^3 - a t^2 + (b - 3) t - (c - 2a),   chi(x) = x^3 g(x + 1/x).

With ``t = s + a/3`` the cubic becomes ``s^3 + (H/3) s + G/27`` where

    G = 27(a - c) + 9ab - 2a^3,   H = 3(b - 3) - a^2,   Delta = G^2 + 4 H^3,

so ``Delta = -27 prod (t_i - t_j)^2``: positive for one real root, negative
for three distinct real roots, zero for a repeated root.

Every root ``t`` carries one eigenvalue class: ``|t| <= 2`` gives
``e^{+-i theta}`` with ``2 cos theta = t``; real ``|t| > 2`` gives the pair
``r, 1/r``; a non-real ``t`` gives ``r e^{i beta}`` and ``r^-1 e^{i beta}``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .exact import ExactComplex, QSqrt2, exact_charpoly, exact_det, exact_matmul, exact_rank
from .exact import sign as exact_sign


class MalformedInputError(ValueError):
    """Embedding does not come from a group member."""


@dataclass(frozen=True)
class Tolerances:
    """Every threshold used by the float pipeline.

    ``sign`` is relative to a term-magnitude scale of the quantity being
    tested (see :func:`sign_scales`); ``rank`` is relative to a bound on the
    norm of the matrix whose rank is taken. A decision within a factor 10 of
    its threshold is reported as borderline.
    """

    member: float = 1e-8
    sign: float = 1e-10
    root: float = 1e-7
    rank: float = 1e-8
    angle: float = 1e-7
    quat: float = 1e-9
    boundary: float = 1e-9
    self_dual: float = 1e-8
    cluster: float = 1e-3
    identity: float = 1e-7

    def to_json(self) -> dict:
        return asdict(self)

    def scaled(self, factor: float) -> "Tolerances":
        return Tolerances(**{k: v * factor for k, v in asdict(self).items()})


DEFAULT_TOL = Tolerances()


# --------------------------------------------------------------- data types

@dataclass(frozen=True)
class CharPoly6:
    """Coefficients of ``det(xI - M)`` from ``x^6`` down to ``x^0``."""

    coeffs: tuple
    self_dual_residual: object
    exact: bool = False

    def to_json(self) -> dict:
        return {"coeffs": [_num(c) for c in self.coeffs],
                "self_dual_residual": _num(self.self_dual_residual), "exact": self.exact}


@dataclass(frozen=True)
class ResolventCubic:
    """``t^3 - a t^2 + (b-3) t - (c-2a)`` with roots grouped by multiplicity."""

    coeffs: tuple
    roots: tuple  # ((root, multiplicity), ...); roots are float/complex or exact rationals

    def root_values(self) -> list:
        out = []
        for r, m in self.roots:
            out.extend([r] * m)
        return out

    def to_json(self) -> dict:
        return {"coeffs": [_num(c) for c in self.coeffs],
                "roots": [{"t": _num(r), "multiplicity": m} for r, m in self.roots]}


@dataclass(frozen=True)
class Factor:
    """Real irreducible factor of the minimal polynomial.

    ``coeffs`` run from the leading term down; ``char_multiplicity`` is its
    multiplicity in the characteristic polynomial and ``k`` the largest
    Jordan block size, i.e. its multiplicity in the minimal polynomial.
    """

    coeffs: tuple
    char_multiplicity: int
    k: int

    def label(self) -> str:
        return _poly_str(self.coeffs)

    def to_json(self) -> dict:
        return {"factor": self.label(), "coeffs": [_num(c) for c in self.coeffs],
                "char_multiplicity": self.char_multiplicity, "multiplicity": self.k}


@dataclass(frozen=True)
class InvariantRecord:
    a: object
    b: object
    c: object
    G: object
    H: object
    Delta: object
    min_degree: int
    factor_structure: tuple
    delta_sign: int
    g_sign: int
    exact: bool
    borderline: bool = False
    diagnostics: tuple = ()
    tolerances: Tolerances = DEFAULT_TOL
    resolvent: ResolventCubic | None = None
    charpoly: CharPoly6 | None = None

    def floats(self) -> tuple:
        return tuple(float(v) for v in (self.a, self.b, self.c, self.G, self.H, self.Delta))

    def to_json(self) -> dict:
        return {
            "a": _num(self.a), "b": _num(self.b), "c": _num(self.c),
            "G": _num(self.G), "H": _num(self.H), "Delta": _num(self.Delta),
            "delta_sign": self.delta_sign, "G_sign": self.g_sign,
            "min_degree": self.min_degree,
            "factor_structure": [f.to_json() for f in self.factor_structure],
            "resolvent": self.resolvent.to_json() if self.resolvent else None,
            "charpoly": self.charpoly.to_json() if self.charpoly else None,
            "exact": self.exact, "borderline": self.borderline,
            "diagnostics": list(self.diagnostics),
            "tolerances": None if self.exact else self.tolerances.to_json(),
        }


def _num(v):
    if isinstance(v, (Fraction, QSqrt2)):
        if isinstance(v, Fraction) and v.denominator == 1:
            return v.numerator
        return str(v)
    if isinstance(v, complex):
        return v.real if v.imag == 0 else [v.real, v.imag]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


def _poly_str(coeffs) -> str:
    n = len(coeffs) - 1
    terms = []
    for i, c in enumerate(coeffs):
        p = n - i
        cf = float(c)
        if cf == 0:
            continue
        mono = "" if p == 0 else ("x" if p == 1 else f"x^{p}")
        mag = abs(cf)
        body = (f"{mag:.12g}" if (mag != 1 or p == 0) else "") + mono
        terms.append(("- " if cf < 0 else "+ ") + body)
    s = " ".join(terms) if terms else "0"
    return s[2:] if s.startswith("+ ") else "-" + s[2:]


# ---------------------------------------------------------------- sign logic

def sign_scales(a, b, c) -> tuple:
    """Term-magnitude scales of ``G``, ``H`` and ``Delta``.

    Each is the sum of absolute values of the monomials, which bounds the
    rounding error of the quantity up to a small multiple of machine epsilon.
    """
    a, b, c = abs(float(a)), float(b), abs(float(c))
    gs = 27.0 * (a + c) + 9.0 * a * abs(b) + 2.0 * a ** 3
    hs = 3.0 * (abs(b) + 3.0) + a * a
    return gs, hs, gs * gs + 4.0 * hs ** 3


def decide_sign(value, scale: float, tol: float):
    """``(sign, borderline)``; exact values get their exact sign."""
    if isinstance(value, (Fraction, int, QSqrt2)):
        return exact_sign(value), False
    v = float(value)
    thr = tol * max(scale, 1.0)
    s = 0 if abs(v) <= thr else (1 if v > 0 else -1)
    borderline = thr / 10.0 < abs(v) <= thr * 10.0
    return s, borderline


# ------------------------------------------------------------ char poly etc.

def _is_exact_rows(M) -> bool:
    return isinstance(M, list) and M and isinstance(M[0], list)


def char_poly(M, tol: float = DEFAULT_TOL.self_dual) -> CharPoly6:
    """Characteristic polynomial of a 6x6 embedding by trace recursion.

    Exact input (lists of ``ExactComplex``/``Fraction`` rows) is handled
    exactly. Raises :class:`MalformedInputError` if a coefficient has a
    non-negligible imaginary part.
    """
    if _is_exact_rows(M):
        cs = exact_charpoly(M)
        if any(c.im != 0 for c in cs):
            raise MalformedInputError("characteristic polynomial has non-real coefficients")
        coeffs = tuple(c.re for c in cs)
        res = max(abs(coeffs[1] - coeffs[5]), abs(coeffs[2] - coeffs[4]), abs(coeffs[6] - 1))
        return CharPoly6(coeffs, res, exact=True)
    M = np.asarray(M)
    if M.shape != (6, 6):
        raise MalformedInputError(f"expected a 6x6 matrix, got shape {M.shape}")
    cs = kernels.charpoly(np.ascontiguousarray(M, dtype=np.complex128))
    scale = 1.0 + np.abs(cs.real)
    if np.max(np.abs(cs.imag) / scale) > tol:
        raise MalformedInputError(
            f"characteristic polynomial has imaginary parts up to {np.max(np.abs(cs.imag)):.3e}")
    re = cs.real
    res = max(abs(re[1] - re[5]) / (1 + abs(re[1])), abs(re[2] - re[4]) / (1 + abs(re[2])), abs(re[6] - 1.0))
    return CharPoly6(tuple(float(v) for v in re), float(res), exact=False)


def extract_abc(p: CharPoly6, tol: float = DEFAULT_TOL.self_dual) -> tuple:
    """``(a, b, c)`` with ``a = -coeff(x^5)``, ``b = coeff(x^4)``, ``c = -coeff(x^3)``."""
    if p.exact:
        if p.self_dual_residual != 0:
            raise MalformedInputError("characteristic polynomial is not self-dual")
    elif not p.self_dual_residual <= tol:
        raise MalformedInputError(
            f"characteristic polynomial is not self-dual (residual {p.self_dual_residual:.3e})")
    cs = p.coeffs
    return -cs[1], cs[2], -cs[3]


def ghd(a, b, c) -> tuple:
    G = 27 * (a - c) + 9 * a * b - 2 * a ** 3
    H = 3 * (b - 3) - a * a
    return G, H, G * G + 4 * H ** 3


def _snap(t: float, tol: float) -> float:
    for target in (2.0, -2.0):
        if abs(t - target) <= tol * (1.0 + abs(t)):
            return target
    return t


def resolvent(a, b, c, tol: Tolerances = DEFAULT_TOL, delta_sign: int | None = None,
              g_sign: int | None = None) -> ResolventCubic:
    """Roots of the resolvent cubic in closed form.

    The branch is chosen by the sign of ``Delta`` (and of ``G`` when
    ``Delta = 0``); pass the signs to reuse decisions already made. For
    exact coefficients the repeated-root branches return exact roots.
    """
    exact = all(isinstance(v, (Fraction, int, QSqrt2)) for v in (a, b, c))
    coeffs = (1, -a, b - 3, -(c - 2 * a))
    G, H, D = ghd(a, b, c)
    if delta_sign is None or g_sign is None:
        gs, _, ds = sign_scales(a, b, c)
        delta_sign = decide_sign(D, ds, tol.sign)[0] if delta_sign is None else delta_sign
        g_sign = decide_sign(G, gs, tol.sign)[0] if g_sign is None else g_sign
    if delta_sign == 0:
        if g_sign == 0:
            t = a / 3 if exact else _snap(float(a) / 3.0, tol.root)
            return ResolventCubic(coeffs, ((t, 3),))
        if exact:
            t0 = a / 3 - G / (6 * H)
            t1 = a / 3 + G / (3 * H)
        else:
            af, Gf, Hf = float(a), float(G), float(H)
            t0 = _snap(af / 3.0 - Gf / (6.0 * Hf), tol.root)
            t1 = _snap(af / 3.0 + Gf / (3.0 * Hf), tol.root)
        return ResolventCubic(coeffs, ((t0, 2), (t1, 1)))
    af, Gf, Hf = float(a), float(G), float(H)
    Gp, Hp = Gf / 27.0, Hf / 9.0
    if delta_sign < 0:
        if Hp >= 0:  # only reachable through a forced sign; fall back to a numeric solve
            roots = sorted(np.roots([1.0, -af, float(b) - 3.0, -(float(c) - 2 * af)]).real, reverse=True)
            return ResolventCubic(coeffs, tuple((_snap(float(t), tol.root), 1) for t in roots))
        m = 2.0 * math.sqrt(-Hp)
        arg = max(-1.0, min(1.0, -Gp / (2.0 * (-Hp) ** 1.5)))
        phi = math.acos(arg) / 3.0
        roots = [m * math.cos(phi - 2.0 * math.pi * k / 3.0) + af / 3.0 for k in range(3)]
        return ResolventCubic(coeffs, tuple((_snap(t, tol.root), 1) for t in sorted(roots, reverse=True)))
    Dq = float(D) / 2916.0
    sq = math.sqrt(max(Dq, 0.0))
    s1 = np.cbrt(-Gp / 2.0 + sq) + np.cbrt(-Gp / 2.0 - sq)
    disc = 3.0 * s1 * s1 + 12.0 * Hp
    im = math.sqrt(max(disc, 0.0)) / 2.0
    t_real = _snap(float(s1) + af / 3.0, tol.root)
    t_cplx = complex(-s1 / 2.0 + af / 3.0, im)
    return ResolventCubic(coeffs, ((t_real, 1), (t_cplx, 1), (t_cplx.conjugate(), 1)))


def resultant_check(a, b, c) -> tuple:
    """``(|R + 8G|, R)`` for ``R`` the Sylvester resultant of ``g`` and ``g''``.

    ``g'' = 6t - 2a``; the 4x4 Sylvester determinant is evaluated directly,
    independently of the closed form for ``G``.
    """
    exact = all(isinstance(v, (Fraction, int, QSqrt2)) for v in (a, b, c))
    z = 0 if exact else 0.0
    rows = [
        [1, -a, b - 3, -(c - 2 * a)],
        [6, -2 * a, z, z],
        [z, 6, -2 * a, z],
        [z, z, 6, -2 * a],
    ]
    G = ghd(a, b, c)[0]
    if exact:
        R = exact_det([[Fraction(v) if isinstance(v, int) else v for v in row] for row in rows])
        return abs(R + 8 * G), R
    R = float(np.linalg.det(np.array(rows, dtype=float)))
    return abs(R + 8.0 * float(G)), R


# --------------------------------------------------- minimal polynomial data

def _factor_specs(res: ResolventCubic):
    """Real irreducible factors and the polynomial used for their rank tests.

    Yields ``(factors, test_poly, char_multiplicity)`` per resolvent root,
    where ``test_poly`` is ``x^2 - t x + 1`` (or ``x -+ 1`` at ``t = +-2``)
    and ``char_multiplicity`` is the root's multiplicity in ``g``.
    """
    out = []
    seen_complex = False
    for t, m in res.roots:
        if isinstance(t, complex) and t.imag != 0:
            if seen_complex:
                continue
            seen_complex = True
            x1 = (t + cmath.sqrt(t * t - 4)) / 2
            x2 = (t - cmath.sqrt(t * t - 4)) / 2
            facs = [(1.0, -2.0 * x.real, abs(x) ** 2) for x in (x1, x2)]
            out.append((facs, None, m))
            continue
        if isinstance(t, complex):
            t = t.real
        if t == 2 or t == -2:
            lin = (1, -1) if t == 2 else (1, 1)
            out.append(([lin], lin, m))
        elif abs(float(t)) > 2:
            tf = float(t)
            d = math.sqrt(tf * tf - 4.0)
            r1, r2 = (tf + d) / 2.0, (tf - d) / 2.0
            out.append(([(1.0, -r1), (1.0, -r2)], (1, -t, 1), m))
        else:
            out.append(([(1, -t, 1)], (1, -t, 1), m))
    return out


def _poly_at(coeffs, M, I):
    """Evaluate a real polynomial (leading first) at a complex matrix."""
    out = np.zeros_like(M)
    for c in coeffs:
        out = out @ M + float(c) * I
    return out


def _block_size_float(M, poly, m, tol: Tolerances):
    """Smallest ``k`` with ``dim ker p(M)^k = 2m`` by a projected kernel chain.

    Each step takes ``ker(P p(M))`` where ``P`` projects away from the
    kernel found so far, so no matrix power is ever formed.
    """
    n = M.shape[0]
    I = np.eye(n, dtype=complex)
    F = _poly_at(poly, M, I)
    normM = float(np.linalg.norm(M, 2))
    bound = sum(abs(float(c)) * normM ** i for i, c in enumerate(reversed(poly)))
    thr = tol.rank * max(bound, 1.0)
    target = 2 * m
    Q = np.zeros((n, 0), dtype=complex)
    borderline = False
    notes = []
    for k in range(1, m + 1):
        B = F - Q @ (Q.conj().T @ F) if Q.shape[1] else F
        _, s, Vh = np.linalg.svd(B)
        null = s <= thr
        if np.any((s > thr / 10.0) & (s <= thr * 10.0)):
            borderline = True
            notes.append(f"rank decision near threshold for {_poly_str(poly)} at power {k}")
        Q = Vh[null].conj().T
        if Q.shape[1] >= target:
            if Q.shape[1] > target:
                borderline = True
                notes.append(f"kernel of {_poly_str(poly)} exceeds multiplicity")
            return k, borderline, notes
    notes.append(f"kernel chain of {_poly_str(poly)} did not reach dimension {target}")
    return m, True, notes


def _block_size_exact(M, poly, m):
    n = len(M)
    I = [[ExactComplex(1 if i == j else 0) for j in range(n)] for i in range(n)]
    Mx = [[ExactComplex.lift(v) for v in row] for row in M]
    F = [[ExactComplex(0)] * n for _ in range(n)]
    for c in poly:
        F = exact_matmul(F, Mx)
        F = [[F[i][j] + I[i][j] * c for j in range(n)] for i in range(n)]
    P = F
    for k in range(1, m + 1):
        if n - exact_rank(P) == 2 * m:
            return k
        P = exact_matmul(P, F)
    return m


def minimal_poly_structure(M, tol: Tolerances = DEFAULT_TOL, res: ResolventCubic | None = None):
    """Factor structure of the real minimal polynomial of ``M``.

    Returns ``(factors, min_degree, borderline, notes)`` where ``min_degree``
    is the sum of the minimal-polynomial multiplicities ``k`` over the real
    irreducible factors. Resolvent roots of multiplicity one always give
    ``k = 1``; repeated roots are resolved by kernel dimensions.
    """
    exact = _is_exact_rows(M)
    if res is None:
        cp = char_poly(M, tol.self_dual)
        res = resolvent(*extract_abc(cp, tol.self_dual), tol=tol)
    factors = []
    borderline = False
    notes = []
    for facs, test, m in _factor_specs(res):
        if m == 1 or test is None:
            k = 1
        elif exact:
            k = _block_size_exact(M, test, m)
        else:
            k, bl, nt = _block_size_float(np.asarray(M, dtype=complex), test, m, tol)
            borderline |= bl
            notes.extend(nt)
        # a linear factor at t = +-2 carries both roots of x^2 - t x + 1
        cm = 2 * m if test is not None and len(test) == 2 else m
        for f in facs:
            factors.append(Factor(tuple(f), cm, k))
    return tuple(factors), sum(f.k for f in factors), borderline, notes
