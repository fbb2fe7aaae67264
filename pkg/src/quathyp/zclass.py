"""z-classes: conjugacy types of centralizers.

A label is the pair ``(family, case_id)``; the centralizer string is display
metadata. Case ids encode the angle-coincidence pattern and which angles are
real (``0`` or ``pi``):

* elliptic over H: ``distinct/<n>-real``, ``scalar/{real,nonreal}``,
  ``pair-definite/single-*/pair-*`` (the repeated class spans a positive
  plane) and ``pair-indefinite/pair-*`` (the repeated class contains the
  timelike direction);
* hyperbolic over H: ``beta-{positive,negative,nonreal}/theta-{real,nonreal}``
  by where the off-circle eigenvalue class sits;
* unipotent: ``translation`` and ``strictly-parabolic``;
* parabolic non-unipotent over H: ellipto-translation and ellipto-parabolic
  split by ``e^{i theta}`` real, screw parabolic by the reality of both
  ``e^{i theta}`` (repeated) and ``e^{i phi}``.

Over C elliptic labels come from the signed eigenvalues, hyperbolic elements
form one class, ellipto-translations one, ellipto-parabolics two and screw
parabolics one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .classifier import DT, ELLIPTIC_TYPES, HYPERBOLIC_TYPES, UNIPOTENT_TYPES, Classification
from .normal_forms import NormalForm, make_elliptic, make_hyperbolic, make_parabolic

FAMILIES = ("elliptic", "hyperbolic", "unipotent", "parabolic-non-unipotent")


class ZClassError(ValueError):
    """Classification data that does not fit any z-class case."""


@dataclass(frozen=True)
class ZClassLabel:
    family: str
    case_id: str
    centralizer: str = dc_field(default="", compare=False)

    def to_json(self) -> dict:
        return {"family": self.family, "case_id": self.case_id, "centralizer": self.centralizer}


def _rl(flag: bool) -> str:
    return "real" if flag else "nonreal"


def _s(flag_real: bool) -> str:
    return "S³" if flag_real else "S¹"


def zclass_label(c: Classification, field: str | None = None, angle_tol: float = 1e-7) -> ZClassLabel:
    """z-class label of a classified element.

    Over C the classification must have been made with ``field="C"`` (the
    elliptic case needs the signed eigenvalues).
    """
    field = (field or c.field).upper()
    if field == "C" and c.field != "C":
        raise ZClassError("a field C label needs a classification made over C")
    base = c.base_type
    classes = c.eigen_classes

    def real(ec) -> bool:
        return ec.cls.is_real(angle_tol)

    if base in ELLIPTIC_TYPES:
        return _elliptic_label(c, field, real)
    if base in HYPERBOLIC_TYPES:
        if field == "C":
            return ZClassLabel("hyperbolic", "loxodromic", "ℝ⁺ × S¹ × S¹")
        off = next(ec for ec in classes if ec.cls.modulus > 1.0)
        unit = next(ec for ec in classes if abs(ec.cls.modulus - 1.0) <= 1e-6)
        if real(off):
            where = "positive" if math.cos(off.cls.angle) > 0 else "negative"
        else:
            where = "nonreal"
        cent = f"ℝ⁺ × {'S³' if real(off) else 'S¹'} × {_s(real(unit))}"
        return ZClassLabel("hyperbolic", f"beta-{where}/theta-{_rl(real(unit))}", cent)
    if base in UNIPOTENT_TYPES:
        if base is DT.VERTICAL_HEISENBERG:
            return ZClassLabel("unipotent", "translation", "Z(U), a = 0")
        return ZClassLabel("unipotent", "strictly-parabolic", "Z(U), a ≠ 0")
    fam = "parabolic-non-unipotent"
    if base is DT.ELLIPTO_TRANSLATION:
        if field == "C":
            return ZClassLabel(fam, "ellipto-translation", "Z(T_c)")
        r = real(classes[0])
        return ZClassLabel(fam, f"ellipto-translation/{_rl(r)}", "Z(T)" if r else "Z(T_c)")
    if base is DT.ELLIPTO_PARABOLIC:
        r = real(classes[0])
        return ZClassLabel(fam, f"ellipto-parabolic/{_rl(r)}", "Z(T_o)" if r else "Z(T_theta)")
    if base is DT.SCREW_PARABOLIC:
        if field == "C":
            return ZClassLabel(fam, "screw", "Z(P_theta,phi)")
        jordan = max(classes, key=lambda e: e.block_size)
        simple = min(classes, key=lambda e: e.block_size)
        rt, rp = real(jordan), real(simple)
        name = {(True, True): "Z(P_o)", (True, False): "Z(P_o,phi)",
                (False, True): "Z(P_theta,o)", (False, False): "Z(P_theta,phi)"}[(rt, rp)]
        return ZClassLabel(fam, f"screw/theta-{_rl(rt)}/phi-{_rl(rp)}", name)
    raise ZClassError(f"no z-class for type {base!r}")


def _elliptic_label(c: Classification, field: str, real) -> ZClassLabel:
    fam = "elliptic"
    if field == "C":
        signed = c.signed_classes
        if len(signed) == 3:
            return ZClassLabel(fam, "distinct", "S¹ × S¹ × S¹")
        if len(signed) == 1:
            return ZClassLabel(fam, "scalar", "U(2,1)")
        pair = next(s for s in signed if s.multiplicity == 2)
        if pair.signature == (0, 2):
            return ZClassLabel(fam, "pair-definite", "S¹ × U(2)")
        return ZClassLabel(fam, "pair-indefinite", "U(1,1) × S¹")
    classes = c.eigen_classes
    if len(classes) == 3:
        n = sum(real(ec) for ec in classes)
        cent = {0: "S¹ × S¹ × S¹", 1: "S¹ × S¹ × S³", 2: "S³ × S³ × S¹"}[n]
        return ZClassLabel(fam, f"distinct/{n}-real", cent)
    if len(classes) == 1:
        r = real(classes[0])
        return ZClassLabel(fam, f"scalar/{_rl(r)}", "Sp(2,1)" if r else "U(2,1)")
    pair = next(ec for ec in classes if ec.multiplicity == 2)
    single = next(ec for ec in classes if ec.multiplicity == 1)
    if pair.signature is None:
        raise ZClassError("elliptic pair class without form signature")
    if pair.signature == (0, 2):
        rs, rp = real(single), real(pair)
        cent = f"{_s(rs)} × {'Sp(2)' if rp else 'U(2)'}"
        return ZClassLabel(fam, f"pair-definite/single-{_rl(rs)}/pair-{_rl(rp)}", cent)
    rp = real(pair)
    return ZClassLabel(fam, f"pair-indefinite/pair-{_rl(rp)}", "Sp(1,1) × S¹" if rp else "U(1,1) × S¹")


@dataclass(frozen=True)
class ZClassEntry:
    """A label with one normal form realizing it."""

    label: ZClassLabel
    base_type: DT
    normal_form: NormalForm

    def to_json(self) -> dict:
        out = self.label.to_json()
        out["type"] = self.base_type.value
        out["normal_form"] = self.normal_form.to_json()
        return out


_P = math.pi


def _cis(x):
    return complex(math.cos(x), math.sin(x))


def _representatives(field: str):
    """``(base_type, normal form)`` pairs, one per label."""
    E, Hy, Pa = make_elliptic, make_hyperbolic, make_parabolic
    out = []
    if field == "H":
        out += [(DT.REGULAR_ELLIPTIC, E(_P / 2, _P / 3, 2 * _P / 3)),
                (DT.REGULAR_ELLIPTIC, E(0.0, _P / 3, 2 * _P / 3)),
                (DT.REGULAR_ELLIPTIC, E(0.0, _P, _P / 2)),
                (DT.SIMPLE_ELLIPTIC, E(_P / 3, _P / 3, _P / 3)),
                (DT.SIMPLE_ELLIPTIC, E(0.0, 0.0, 0.0))]
        for th in (_P / 4, 0.0):
            for ph in (2 * _P / 3, _P):
                out.append((DT.COMPLEX_ELLIPTIC, E(th, ph, ph)))
        out += [(DT.COMPLEX_ELLIPTIC, E(_P / 3, _P / 3, 2 * _P / 3)),
                (DT.COMPLEX_ELLIPTIC, E(0.0, 0.0, _P / 2))]
        for beta in (0.0, _P, _P / 3):
            for th in (0.0, _P / 2):
                if beta == _P / 3:
                    t = DT.REGULAR_HYPERBOLIC
                else:
                    t = DT.STRICTLY_HYPERBOLIC if th == 0.0 else DT.SCREW_HYPERBOLIC
                out.append((t, Hy(2.0, beta, th)))
    else:
        out += [(DT.REGULAR_ELLIPTIC, E(_P / 2, _P / 3, -2 * _P / 3, "C")),
                (DT.SIMPLE_ELLIPTIC, E(_P / 3, _P / 3, _P / 3, "C")),
                (DT.COMPLEX_ELLIPTIC, E(_P / 4, 2 * _P / 3, 2 * _P / 3, "C")),
                (DT.COMPLEX_ELLIPTIC, E(_P / 3, _P / 3, -_P / 2, "C")),
                (DT.REGULAR_HYPERBOLIC, Hy(2.0, _P / 3, -_P / 2, "C"))]
    out += [(DT.VERTICAL_HEISENBERG, Pa(0.0, 0.0, 1j, 0.0, field)),
            (DT.NON_VERTICAL_HEISENBERG, Pa(0.0, 0.0, 0.5 + 1j, 1.0, field))]
    et_angles = (_P, _P / 2) if field == "H" else (_P / 2,)
    for th in et_angles:
        out.append((DT.ELLIPTO_TRANSLATION, Pa(th, th, _cis(th) * 1j, 0.0, field)))
    for th in (_P, _P / 2):
        out.append((DT.ELLIPTO_PARABOLIC, Pa(th, th, _cis(th) * (0.5 + 1j), 1.0, field)))
    screws = ((0.0, _P), (0.0, _P / 2), (_P / 2, 0.0), (_P / 3, 2 * _P / 3)) if field == "H" \
        else ((_P / 2, -_P / 3),)
    for th, ph in screws:
        out.append((DT.SCREW_PARABOLIC, Pa(th, ph, _cis(th) * 1j, 0.0, field)))
    return out


def enumerate_zclasses(field: str = "H") -> list:
    """All z-class labels over ``field``, each with a realizing normal form."""
    from .classifier import classify
    field = field.upper()
    entries = []
    for base, nf in _representatives(field):
        c = classify(nf.matrix, nf.model, field)
        if c.base_type is not base:
            raise ZClassError(f"representative {nf.params} classified as {c.base_type.value}")
        entries.append(ZClassEntry(zclass_label(c, field), base, nf))
    return entries
