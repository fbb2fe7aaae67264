"""Dynamical type from the invariants of the 6x6 embedding.

Decision tree on ``(Delta, G, t0, min_degree)``:

* ``Delta > 0``: regular hyperbolic; ``Delta < 0``: regular elliptic.
* ``Delta = 0, G != 0``: with ``t0`` the double resolvent root, ``|t0| > 2``
  means a real eigenvalue pair ``r, 1/r`` off the unit circle (hyperbolic,
  strictly iff ``16(a+c)^2 = (a^2+4b+8)^2``), otherwise complex elliptic or
  screw parabolic by ``min_degree`` 2 or 3.
* ``Delta = 0, G = 0``: one class of multiplicity three; ``min_degree``
  1/2/3 gives simple elliptic / ellipto-translation / ellipto-parabolic,
  or identity / vertical / non-vertical Heisenberg translation when the class
  is 1, i.e. ``(a, b, c) = (6, 15, 20)``.

Over C the hyperbolic types collapse to loxodromic, ellipto-translations and
ellipto-parabolics act as Heisenberg translations and simple elliptics
(scalars) act as the identity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from . import invariants as inv
from . import qmatrix as qm
from .embed import complexify, realify
from .exact import QSqrt2
from .model import MembershipError, check_member, get_model, membership_residual
from .quaternion import SimilarityClass


class DynamicalType(enum.Enum):
    REGULAR_ELLIPTIC = "regular elliptic"
    COMPLEX_ELLIPTIC = "complex elliptic"
    SIMPLE_ELLIPTIC = "simple elliptic"
    REGULAR_HYPERBOLIC = "regular hyperbolic"
    STRICTLY_HYPERBOLIC = "strictly hyperbolic"
    SCREW_HYPERBOLIC = "screw hyperbolic"
    VERTICAL_HEISENBERG = "vertical Heisenberg translation"
    NON_VERTICAL_HEISENBERG = "non-vertical Heisenberg translation"
    ELLIPTO_TRANSLATION = "ellipto-translation"
    ELLIPTO_PARABOLIC = "ellipto-parabolic"
    SCREW_PARABOLIC = "screw parabolic"
    LOXODROMIC = "loxodromic"

    @property
    def slug(self) -> str:
        return self.name.lower().replace("_", "-")

    @classmethod
    def parse(cls, name: str) -> "DynamicalType":
        key = name.strip().lower().replace("_", "-").replace(" ", "-")
        aliases = {"vertical-heisenberg-translation": "vertical-heisenberg",
                   "non-vertical-heisenberg-translation": "non-vertical-heisenberg",
                   "identity": "simple-elliptic"}
        key = aliases.get(key, key)
        for t in cls:
            if t.slug == key or t.value.replace(" ", "-").lower() == key:
                return t
        raise ValueError(f"unknown dynamical type {name!r}")

    @property
    def family(self) -> str:
        if self in ELLIPTIC_TYPES:
            return "elliptic"
        if self in HYPERBOLIC_TYPES or self is DynamicalType.LOXODROMIC:
            return "hyperbolic"
        return "parabolic"


DT = DynamicalType
ELLIPTIC_TYPES = frozenset({DT.REGULAR_ELLIPTIC, DT.COMPLEX_ELLIPTIC, DT.SIMPLE_ELLIPTIC})
HYPERBOLIC_TYPES = frozenset({DT.REGULAR_HYPERBOLIC, DT.STRICTLY_HYPERBOLIC, DT.SCREW_HYPERBOLIC})
UNIPOTENT_TYPES = frozenset({DT.VERTICAL_HEISENBERG, DT.NON_VERTICAL_HEISENBERG})
QUATERNIONIC_TYPES = tuple(t for t in DT if t is not DT.LOXODROMIC)

_COLLAPSE_C = {
    DT.REGULAR_HYPERBOLIC: DT.LOXODROMIC,
    DT.STRICTLY_HYPERBOLIC: DT.LOXODROMIC,
    DT.SCREW_HYPERBOLIC: DT.LOXODROMIC,
    DT.ELLIPTO_TRANSLATION: DT.VERTICAL_HEISENBERG,
    DT.ELLIPTO_PARABOLIC: DT.NON_VERTICAL_HEISENBERG,
}


def collapse(t: DynamicalType, field: str) -> DynamicalType:
    """Type as seen by the action on the hyperbolic plane over ``field``."""
    return _COLLAPSE_C.get(t, t) if field == "C" else t


def normalize_field(field) -> str:
    f = str(field).strip().upper()
    if f not in ("H", "C"):
        raise ValueError(f"field must be 'H' or 'C', got {field!r}")
    return f


@dataclass(frozen=True)
class EigenClass:
    """One eigenvalue similarity class with its multiplicity data.

    ``signature`` is ``(negative, positive)`` for the form restricted to the
    eigenspace; it is filled in for elliptic elements only.
    """

    cls: SimilarityClass
    multiplicity: int
    block_size: int = 1
    signature: tuple | None = None

    def to_json(self) -> dict:
        out = {"modulus": self.cls.modulus, "angle": self.cls.angle,
               "multiplicity": self.multiplicity, "block_size": self.block_size}
        if self.signature is not None:
            out["signature"] = list(self.signature)
        return out


@dataclass(frozen=True)
class SignedClass:
    """Complex eigenvalue ``e^{i angle}`` of a U(2,1) elliptic (field C only)."""

    angle: float
    multiplicity: int
    signature: tuple

    def to_json(self) -> dict:
        return {"angle": self.angle, "multiplicity": self.multiplicity, "signature": list(self.signature)}


@dataclass(frozen=True)
class Classification:
    dtype: DynamicalType
    base_type: DynamicalType
    invariants: inv.InvariantRecord
    eigen_classes: tuple
    borderline: bool
    diagnostics: tuple
    field: str = "H"
    model: str = "ball"
    is_identity: bool = False
    alternatives: tuple = ()
    signed_classes: tuple = ()

    @property
    def display_name(self) -> str:
        if self.is_identity:
            return "simple elliptic (identity)"
        if self.field == "C" and self.base_type is DT.SIMPLE_ELLIPTIC:
            return "simple elliptic (acts as identity)"
        return self.dtype.value

    def to_json(self) -> dict:
        return {
            "type": self.display_name,
            "dtype": self.dtype.slug,
            "base_type": self.base_type.slug,
            "field": self.field,
            "model": self.model,
            "identity": self.is_identity,
            "invariants": self.invariants.to_json(),
            "eigen_classes": [e.to_json() for e in self.eigen_classes],
            "signed_classes": [s.to_json() for s in self.signed_classes],
            "borderline": self.borderline,
            "alternatives": [t.slug for t in self.alternatives],
            "diagnostics": list(self.diagnostics),
        }


# ----------------------------------------------------------------- pipeline

def _is_exact_number(v) -> bool:
    return isinstance(v, (Fraction, int, QSqrt2))


def _identity_relation(a, b, c, tol: inv.Tolerances):
    """``(holds, borderline, rel)`` for ``16(a+c)^2 = (a^2+4b+8)^2``."""
    lhs = 16 * (a + c) ** 2
    rhs = (a * a + 4 * b + 8) ** 2
    if all(_is_exact_number(v) for v in (a, b, c)):
        return lhs == rhs, False, float(abs(lhs - rhs))
    lhs, rhs = float(lhs), float(rhs)
    rel = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
    return rel <= tol.identity, tol.identity / 10 < rel <= tol.identity * 10, rel


def _eigen_classes(res: inv.ResolventCubic, factors) -> list:
    out = []
    seen_complex = False
    fi = 0
    for t, m in res.roots:
        if isinstance(t, complex) and t.imag != 0:
            if seen_complex:
                continue
            seen_complex = True
            d = np.sqrt(t * t - 4)
            for x in ((t + d) / 2, (t - d) / 2):
                out.append(EigenClass(SimilarityClass(abs(x), abs(math.atan2(x.imag, x.real))), 1, 1))
            fi += 2
            continue
        tf = float(t.real if isinstance(t, complex) else t)
        k = factors[fi].k if fi < len(factors) else 1
        if abs(tf) > 2:
            d = math.sqrt(tf * tf - 4.0)
            ang = 0.0 if tf > 0 else math.pi
            mult = max(m // 2, 1)
            for x in ((abs(tf) + d) / 2, (abs(tf) - d) / 2):
                out.append(EigenClass(SimilarityClass(x, ang), mult, k))
            fi += 2
        else:
            out.append(EigenClass(SimilarityClass(1.0, math.acos(max(-1.0, min(1.0, tf / 2)))), m, k))
            fi += 1
    return out


def _decide(record: inv.InvariantRecord, t0, tol):
    """Return ``(base_type, borderline, notes)`` from decided signs."""
    notes = []
    if record.delta_sign > 0:
        return DT.REGULAR_HYPERBOLIC, False, notes
    if record.delta_sign < 0:
        return DT.REGULAR_ELLIPTIC, False, notes
    md = record.min_degree
    if record.g_sign != 0:
        t0f = float(t0)
        borderline = False
        if not _is_exact_number(t0):
            band = tol.root * (1 + abs(t0f))
            borderline = 0 < abs(abs(t0f) - 2) <= 10 * band
        if abs(t0f) > 2:
            holds, bl, rel = _identity_relation(record.a, record.b, record.c, tol)
            notes.append(f"|t0| = {abs(t0f):.17g} > 2; 16(a+c)^2 vs (a^2+4b+8)^2 relative gap {rel:.3e}")
            return (DT.STRICTLY_HYPERBOLIC if holds else DT.SCREW_HYPERBOLIC), borderline or bl, notes
        notes.append(f"|t0| = {abs(t0f):.17g} <= 2")
        return (DT.SCREW_PARABOLIC if md >= 3 else DT.COMPLEX_ELLIPTIC), borderline, notes
    t = record.resolvent.roots[0][0] if record.resolvent else None
    unipotent = (record.a == 6 and record.b == 15 and record.c == 20) if record.exact else t == 2
    if unipotent:
        return {1: DT.SIMPLE_ELLIPTIC, 2: DT.VERTICAL_HEISENBERG}.get(md, DT.NON_VERTICAL_HEISENBERG), False, notes
    return {1: DT.SIMPLE_ELLIPTIC, 2: DT.ELLIPTO_TRANSLATION}.get(md, DT.ELLIPTO_PARABOLIC), False, notes


def compute_invariants(A, field: str = "H", tol: inv.Tolerances = inv.DEFAULT_TOL,
                       exact: bool = False, delta_sign=None, g_sign=None):
    """Invariant record of a member (membership is not checked here).

    Returns ``(record, M)`` with ``M`` the 6x6 embedding used.
    """
    field = normalize_field(field)
    M = realify(A, tol.quat) if field == "C" else complexify(A)
    if exact and not isinstance(M, list):
        raise TypeError("exact mode needs an exact matrix")
    cp = inv.char_poly(M, tol.self_dual)
    a, b, c = inv.extract_abc(cp, tol.self_dual)
    G, H, D = inv.ghd(a, b, c)
    gs, _, ds = inv.sign_scales(a, b, c)
    notes = []
    d_sign, d_bl = inv.decide_sign(D, ds, tol.sign)
    g_sgn, g_bl = inv.decide_sign(G, gs, tol.sign)
    if delta_sign is not None:
        d_sign = delta_sign
    if g_sign is not None:
        g_sgn = g_sign
    if d_bl:
        notes.append(f"Delta = {float(D):.6e} within 10x of its sign threshold {tol.sign * ds:.3e}")
    if g_bl and d_sign == 0:
        notes.append(f"G = {float(G):.6e} within 10x of its sign threshold {tol.sign * gs:.3e}")
    res = inv.resolvent(a, b, c, tol, d_sign, g_sgn)
    factors, md, mp_bl, mp_notes = inv.minimal_poly_structure(M, tol, res)
    notes.extend(mp_notes)
    record = inv.InvariantRecord(
        a=a, b=b, c=c, G=G, H=H, Delta=D, min_degree=md, factor_structure=factors,
        delta_sign=d_sign, g_sign=g_sgn, exact=cp.exact,
        borderline=bool(d_bl or (g_bl and d_sign == 0) or mp_bl),
        diagnostics=tuple(notes), tolerances=tol, resolvent=res, charpoly=cp)
    return record, M


def _prepare(A, field, exact):
    if exact:
        return qm.exact_matrix(A)
    if qm.is_exact_matrix(A):
        return qm.exact_to_float(A)
    return qm.qarray(A)


def classify(A, m="ball", field: str = "H", tol: inv.Tolerances = inv.DEFAULT_TOL,
             exact: bool = False, _signs=None) -> Classification:
    """Classify a member of the isometry group of model ``m``.

    Raises :class:`MembershipError` for non-members. In exact mode the input
    is converted to rationals and must be an exact member.
    """
    field = normalize_field(field)
    model = get_model(m)
    A = _prepare(A, field, exact)
    if exact:
        res = membership_residual(A, model)
        if res != 0:
            raise MembershipError(float(res), 0.0, model.name)
        if field == "C" and not qm.exact_is_complex(A):
            raise ValueError("field C needs complex entries; found j/k parts")
    else:
        check_member(A, model, tol.member)
        if field == "C" and not qm.is_complex_matrix(A, tol.quat * max(1.0, qm.qmaxabs(A))):
            raise ValueError("field C needs complex entries; found j/k parts")
    ds, gs = _signs if _signs else (None, None)
    record, M = compute_invariants(A, field, tol, exact, ds, gs)
    res = record.resolvent
    t0 = res.roots[0][0] if record.delta_sign == 0 and record.g_sign != 0 else None
    base, bl, notes = _decide(record, t0, tol)
    classes = _eigen_classes(res, record.factor_structure)
    borderline = record.borderline or bl
    diagnostics = list(record.diagnostics) + notes
    alternatives = ()
    if borderline and _signs is None and not exact:
        alternatives = _alternatives(A, model, field, tol, record, base)
        if alternatives:
            diagnostics.append("borderline; candidate types: " + ", ".join(
                t.value for t in (collapse(base, field),) + alternatives))
    is_identity = base is DT.SIMPLE_ELLIPTIC and (
        (record.a == 6 and record.b == 15 and record.c == 20) if record.exact
        else abs(float(res.roots[0][0]) - 2.0) == 0.0)
    signed = ()
    if base in ELLIPTIC_TYPES and not exact:
        classes, signed = _elliptic_detail(A, model, field, classes, tol)
    elif base in ELLIPTIC_TYPES and exact:
        classes, signed = _elliptic_detail(qm.exact_to_float(A), model, field, classes, tol)
    return Classification(
        dtype=collapse(base, field), base_type=base, invariants=record,
        eigen_classes=tuple(classes), borderline=borderline, diagnostics=tuple(diagnostics),
        field=field, model=model.name, is_identity=is_identity,
        alternatives=alternatives, signed_classes=signed)


def _alternatives(A, model, field, tol, record, base):
    """Types reached by flipping each near-threshold sign decision."""
    alts = []
    options = []
    if record.delta_sign != 0:
        options.append((0, None))
    else:
        D = float(record.Delta)
        options.append((1 if D > 0 else -1, None))
        options.append((0, 0 if record.g_sign != 0 else (1 if float(record.G) > 0 else -1)))
    for ds, gs in options:
        try:
            alt = classify(A, model, field, tol, _signs=(ds, gs))
        except (ValueError, ZeroDivisionError, np.linalg.LinAlgError):
            continue
        t = collapse(alt.base_type, field)
        if t is not collapse(base, field) and t not in alts:
            alts.append(t)
    return tuple(alts)


# ------------------------------------------------------- elliptic eigenspaces

def _form_signature(vectors: np.ndarray, J: np.ndarray, field: str) -> tuple:
    """``(neg, pos)`` of the form on the span of quaternion column vectors."""
    n = vectors.shape[1]
    Gm = np.zeros((n, n, 4))
    for i in range(n):
        for k in range(n):
            Gm[i, k] = qm.form_inner(vectors[:, i], vectors[:, k], J)
    if field == "C":
        ev = np.linalg.eigvalsh(qm.complex_part(Gm))
        scale = max(1.0, float(np.max(np.abs(ev))))
        return int(np.sum(ev < -1e-9 * scale)), int(np.sum(ev > 1e-9 * scale))
    ev = np.linalg.eigvalsh(qm.complexify(Gm))
    scale = max(1.0, float(np.max(np.abs(ev))))
    return int(np.sum(ev < -1e-9 * scale)) // 2, int(np.sum(ev > 1e-9 * scale)) // 2


def eigenspace(A: np.ndarray, lam: complex, dim: int, field: str = "H") -> np.ndarray:
    """Quaternion column basis ``(3, dim, 4)`` of ``{v : A v = v lam}``.

    Over H the kernel of ``A_C - lam I`` is read back as quaternion vectors.
    For non-real ``lam`` those vectors span the eigenspace over C and are
    returned as they are (quaternionic recombination would change the
    eigenvalue); for real ``lam`` the ``2 dim`` kernel vectors are reduced to
    ``dim`` right-independent ones. Over C the kernel of ``A - lam I`` is
    used directly.
    """
    if field == "C":
        Z = qm.complex_part(A)
        _, _, Vh = np.linalg.svd(Z - lam * np.eye(3))
        vs = Vh[-dim:].conj().T
        out = np.zeros((3, dim, 4))
        out[..., 0] = vs.real
        out[..., 1] = vs.imag
        return out
    M = qm.complexify(A)
    real_lam = abs(lam.imag) <= 1e-12 * max(1.0, abs(lam))
    _, _, Vh = np.linalg.svd(M - lam * np.eye(6))
    if not real_lam:
        return np.stack([qm.cvec_to_qvec(Vh[-1 - i].conj()) for i in range(dim)], axis=1)
    cands = [qm.cvec_to_qvec(Vh[-1 - i].conj()) for i in range(2 * dim)]
    return np.stack(right_independent(cands, dim), axis=1)


def right_independent(vectors, dim: int, tol: float = 1e-6) -> list:
    """Up to ``dim`` right-linearly independent unit vectors from ``vectors``."""
    basis = []
    for v in vectors:
        w = v.copy()
        for b in basis:
            w = w - qm.vec_right(b, np.sum(qm.hmul(qm.hconj(b), w), axis=0))
        nrm = float(np.sqrt(np.sum(w * w)))
        if nrm > tol:
            basis.append(w / nrm)
        if len(basis) == dim:
            break
    return basis


def _elliptic_detail(A, model, field, classes, tol):
    """Attach form signatures to eigen classes; signed classes over C."""
    J = model.form_matrix
    out = []
    for ec in classes:
        lam = complex(math.cos(ec.cls.angle), math.sin(ec.cls.angle))
        if ec.multiplicity == 3:
            # the eigenspace is the whole space
            out.append(replace(ec, signature=(1, 2)))
            continue
        try:
            sig = _form_signature(eigenspace(A, lam, ec.multiplicity, "H"), J, "H")
        except (ValueError, np.linalg.LinAlgError):
            sig = None
        out.append(replace(ec, signature=sig))
    signed = ()
    if field == "C":
        Z = qm.complex_part(A)
        scale = max(1.0, float(np.linalg.norm(Z, 2)))
        found = []
        for ec in classes:
            angs = [ec.cls.angle] if ec.cls.is_real(tol.angle) else [ec.cls.angle, -ec.cls.angle]
            for ang in angs:
                lam = complex(math.cos(ang), math.sin(ang))
                s = np.linalg.svd(Z - lam * np.eye(3), compute_uv=False)
                null = int(np.sum(s <= 1e-6 * scale))
                if null:
                    sig = _form_signature(eigenspace(A, lam, null, "C"), J, "C")
                    found.append(SignedClass(ang if not ec.cls.is_real(tol.angle) else
                                             (0.0 if ang < 1 else math.pi), null, sig))
        signed = tuple(found)
    return out, signed


# ----------------------------------------------------------- literal theorem

@dataclass(frozen=True)
class LiteralVerdict:
    """Outcome of applying the theorem's stated conditions verbatim.

    ``item`` names the clause that applied (``None`` if no clause's
    conditions hold) and ``dtype`` the type it assigns, if any.
    """

    item: str | None
    dtype: DynamicalType | None
    conditions: dict

    def to_json(self) -> dict:
        return {"item": self.item, "dtype": self.dtype.slug if self.dtype else None,
                "conditions": self.conditions}


def classify_literal_theorem(record: inv.InvariantRecord, tol: inv.Tolerances = inv.DEFAULT_TOL) -> LiteralVerdict:
    """Apply the main theorem's inequality conditions without the root rule."""
    a, b, c = float(record.a), float(record.b), float(record.c)
    ds, gs, md = record.delta_sign, record.g_sign, record.min_degree
    exact_abc = record.exact
    is_6_15_20 = (record.a == 6 and record.b == 15 and record.c == 20) if exact_abc else (
        abs(a - 6) <= 1e-9 * 6 and abs(b - 15) <= 1e-9 * 15 and abs(c - 20) <= 1e-9 * 20)
    item2_bounds = a > 6 and b > 15 and c > 20
    item3_bounds = abs(a) < 6 and abs(b) < 15 and abs(c) < 20
    cond = {"Delta_sign": ds, "G_sign": gs, "min_degree": md,
            "a>6,b>15,c>20": item2_bounds, "|a|<6,|b|<15,|c|<20": item3_bounds,
            "(a,b,c)=(6,15,20)": is_6_15_20}
    if ds > 0:
        return LiteralVerdict("1", DT.REGULAR_HYPERBOLIC, cond)
    if ds == 0 and gs != 0 and item2_bounds:
        holds = _identity_relation(record.a, record.b, record.c, tol)[0]
        cond["16(a+c)^2=(a^2+4b+8)^2"] = holds
        return LiteralVerdict("2", DT.STRICTLY_HYPERBOLIC if holds else DT.SCREW_HYPERBOLIC, cond)
    if is_6_15_20 and ds == 0 and gs == 0:
        t = {2: DT.VERTICAL_HEISENBERG, 3: DT.NON_VERTICAL_HEISENBERG}.get(md)
        return LiteralVerdict("3(iv)", t, cond)
    if ds <= 0 and item3_bounds:
        if ds < 0:
            return LiteralVerdict("3(i)", DT.REGULAR_ELLIPTIC, cond)
        if gs != 0:
            return LiteralVerdict("3(ii)", DT.SCREW_PARABOLIC if md == 3 else DT.COMPLEX_ELLIPTIC, cond)
        t = {1: DT.SIMPLE_ELLIPTIC, 2: DT.ELLIPTO_TRANSLATION, 3: DT.ELLIPTO_PARABOLIC}.get(md)
        return LiteralVerdict("3(iii)", t, cond)
    return LiteralVerdict(None, None, cond)
