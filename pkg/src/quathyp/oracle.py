"""Reference classifier built directly on eigenvalues.

The six eigenvalues of ``A_C`` are folded into similarity classes, Jordan
structure is read from ranks of ``(A_C - lam I)^k`` and the type follows from
the definitions: an eigenvalue off the unit circle means hyperbolic, a
diagonalizable element with unit eigenvalues is elliptic, anything else is
parabolic. None of the G/H/Delta machinery is used, so agreement with
:func:`quathyp.classifier.classify` is a genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmatrix as qm
from .classifier import DT, DynamicalType, collapse, normalize_field
from .model import check_member, get_model
from .quaternion import SimilarityClass

CLUSTER_TOL = 1e-3
RANK_TOL = 1e-8
UNIT_TOL = 1e-6


@dataclass(frozen=True)
class EigenReport:
    """Eigenvalue classes of a member.

    ``classes`` holds ``(SimilarityClass, multiplicity, largest_block)``;
    multiplicities count quaternionic eigenvalues and sum to 3.
    """

    classes: tuple
    off_circle: int
    jordan_defect: bool
    eigenvalues: tuple

    def to_json(self) -> dict:
        return {"classes": [{"modulus": c.modulus, "angle": c.angle, "multiplicity": m, "block": k}
                            for c, m, k in self.classes],
                "off_circle": self.off_circle, "jordan_defect": self.jordan_defect}


def _cluster(values: np.ndarray, tol: float) -> list:
    """Single-linkage clusters of complex numbers (lists of indices)."""
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for k in range(i):
            if abs(values[i] - values[k]) <= tol * max(1.0, abs(values[i])):
                parent[find(i)] = find(k)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _nullity(M: np.ndarray, scale: float) -> int:
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s <= RANK_TOL * scale))


def eigen_report(A, tol: float = CLUSTER_TOL) -> EigenReport:
    """Fold the spectrum of ``A_C`` into classes with Jordan data."""
    A = qm.exact_to_float(A) if qm.is_exact_matrix(A) else qm.qarray(A)
    M = qm.complexify(A)
    ev = np.linalg.eigvals(M)
    folded = np.where(ev.imag < 0, ev.conj(), ev)
    scale = max(1.0, float(np.linalg.norm(M, 2)))
    I6 = np.eye(6)
    classes = []
    defect = False
    for idx in _cluster(folded, tol):
        lam = complex(np.mean(folded[idx]))
        if abs(abs(lam) - 1.0) <= UNIT_TOL:
            lam /= abs(lam)
        if abs(lam.imag) <= tol:
            lam = complex(lam.real, 0.0)
        alg = len(idx)
        # alg counts lam and conj(lam) together; the C^6 multiplicity of lam
        # itself is alg for real lam and alg / 2 otherwise
        target = alg if lam.imag == 0 else alg // 2
        X = M - lam * I6
        P = I6.astype(complex)
        block = 0
        for k in range(1, 4):
            P = P @ X
            if _nullity(P, scale ** k) >= target:
                block = k
                break
        else:
            block = 3
        if block > 1:
            defect = True
        cls = SimilarityClass(abs(lam), abs(math.atan2(lam.imag, lam.real)))
        classes.append((cls, alg // 2, block))
    classes.sort(key=lambda t: (-t[0].modulus, t[0].angle))
    off = sum(abs(c.modulus - 1.0) > UNIT_TOL for c, _, _ in classes)
    return EigenReport(tuple(classes), off, defect, tuple(complex(x) for x in ev))


def eigen_classify(A, m="ball", field: str = "H", tol: float = CLUSTER_TOL,
                   check: bool = True) -> DynamicalType:
    """Type of a member from its eigenvalues and Jordan blocks."""
    field = normalize_field(field)
    if check:
        check_member(A, get_model(m))
    rep = eigen_report(A, tol)
    return collapse(_type_from_report(rep, A, m), field)


def _is_real(cls: SimilarityClass) -> bool:
    return abs(math.sin(cls.angle)) <= 1e-7


def _type_from_report(rep: EigenReport, A, m) -> DynamicalType:
    classes = rep.classes
    if rep.off_circle:
        off = [c for c, _, _ in classes if abs(c.modulus - 1.0) > UNIT_TOL]
        unit = [c for c, _, _ in classes if abs(c.modulus - 1.0) <= UNIT_TOL]
        if not all(_is_real(c) for c in off):
            return DT.REGULAR_HYPERBOLIC
        return DT.STRICTLY_HYPERBOLIC if all(_is_real(c) for c in unit) else DT.SCREW_HYPERBOLIC
    if not rep.jordan_defect:
        return {3: DT.REGULAR_ELLIPTIC, 2: DT.COMPLEX_ELLIPTIC}.get(len(classes), DT.SIMPLE_ELLIPTIC)
    if len(classes) > 1:
        return DT.SCREW_PARABOLIC
    cls, _, block = classes[0]
    unipotent = _is_real(cls) and math.cos(cls.angle) > 0
    if block == 2:
        return DT.VERTICAL_HEISENBERG if unipotent else DT.ELLIPTO_TRANSLATION
    return DT.NON_VERTICAL_HEISENBERG if unipotent else DT.ELLIPTO_PARABOLIC
