"""Hermitian models of the hyperbolic plane over C or H.

Two forms of signature (2, 1) are supported. The ball form is
``J1 = diag(-1, 1, 1)``; the Siegel form is

    <z, w> = -(conj(z0) w1 + conj(z1) w0) + conj(z2) w2

and the two are exchanged by the orthogonal Cayley matrix ``C`` with
``J_S = C J1 C^T``. In the Siegel model ``o = [e0]`` and ``infinity = [e1]``
are boundary points, the images of ``(1, -1, 0)`` and ``(1, 1, 0)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import qmatrix as qm
from .exact import SQRT2_HALF, QSqrt2
from .quaternion import Quaternion

MEMBER_TOL = 1e-8


class MembershipError(ValueError):
    """Matrix does not preserve the Hermitian form."""

    def __init__(self, residual: float, tol: float, model: str):
        super().__init__(f"not a member of the {model} isometry group: residual {residual:.3e} > tol {tol:.1e}")
        self.residual = residual


class ModelKind(enum.Enum):
    BALL = "ball"
    SIEGEL = "siegel"


@dataclass(frozen=True)
class HermitianModel:
    kind: ModelKind

    @property
    def form_matrix(self) -> np.ndarray:
        return _J_BALL if self.kind is ModelKind.BALL else _J_SIEGEL

    @property
    def exact_form(self):
        return _JX_BALL if self.kind is ModelKind.BALL else _JX_SIEGEL

    @property
    def name(self) -> str:
        return self.kind.value


_J_BALL = np.diag([-1.0, 1.0, 1.0])
_J_SIEGEL = np.array([[0.0, -1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
_F = Fraction
_JX_BALL = ((_F(-1), _F(0), _F(0)), (_F(0), _F(1), _F(0)), (_F(0), _F(0), _F(1)))
_JX_SIEGEL = ((_F(0), _F(-1), _F(0)), (_F(-1), _F(0), _F(0)), (_F(0), _F(0), _F(1)))

BALL = HermitianModel(ModelKind.BALL)
SIEGEL = HermitianModel(ModelKind.SIEGEL)

_S = math.sqrt(0.5)
CAYLEY = np.array([[_S, -_S, 0.0], [_S, _S, 0.0], [0.0, 0.0, 1.0]])
CAYLEY_EXACT = ((SQRT2_HALF, -SQRT2_HALF, _F(0)), (SQRT2_HALF, SQRT2_HALF, _F(0)), (_F(0), _F(0), _F(1)))


def get_model(m) -> HermitianModel:
    if isinstance(m, HermitianModel):
        return m
    if isinstance(m, ModelKind):
        return HermitianModel(m)
    key = str(m).strip().lower()
    if key == "ball":
        return BALL
    if key == "siegel":
        return SIEGEL
    raise ValueError(f"unknown model {m!r}; expected 'ball' or 'siegel'")


class Location(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


class StabilizerShape(enum.Enum):
    G_INFINITY = "G_infinity"
    G_ZERO = "G_zero"
    G_ZERO_INFINITY = "G_zero_infinity"


@dataclass(frozen=True)
class ProjectivePoint:
    representative: object  # float (3, 4) array or tuple of exact quaternions
    location: Location

    def to_json(self) -> dict:
        rep = self.representative
        if isinstance(rep, np.ndarray):
            rep = [[float(c) for c in row] for row in rep]
        else:
            rep = [q.to_json() for q in rep]
        return {"representative": rep, "location": self.location.value}


# -------------------------------------------------------------- operations

def _qvector(z):
    if isinstance(z, np.ndarray) and z.ndim == 2 and z.shape[1] == 4:
        return z.astype(float)
    if isinstance(z, tuple) and z and isinstance(z[0], Quaternion) and all(q.is_exact() for q in z):
        return z
    return qm.qarray([list(z)])[0]


def inner(z, w, m) -> Quaternion:
    """``z* J w`` for the form of model ``m``."""
    m = get_model(m)
    z = _qvector(z)
    w = _qvector(w)
    if isinstance(z, tuple) or isinstance(w, tuple):
        z = qm.exact_matrix([list(z)])[0] if not isinstance(z, tuple) else z
        w = qm.exact_matrix([list(w)])[0] if not isinstance(w, tuple) else w
        J = m.exact_form
        acc = Quaternion(_F(0), _F(0), _F(0), _F(0))
        for i in range(3):
            for k in range(3):
                if J[i][k] != 0:
                    acc = acc + z[i].conjugate() * w[k] * J[i][k]
        return acc
    return Quaternion(*[float(c) for c in qm.form_inner(z, w, m.form_matrix)])


def _exact_residual(A, m):
    J = qm.exact_real_matrix(m.exact_form)
    P = qm.exact_qmatmul(qm.exact_adjoint(A), qm.exact_qmatmul(J, A))
    worst = _F(0)
    for i in range(3):
        for k in range(3):
            D = P[i][k] - J[i][k]
            for c in D.components():
                c = abs(c)
                if c > worst:
                    worst = c
    return worst


def membership_residual(A, m):
    """Max-entry deviation of ``A* J A`` from ``J``.

    Float input gives a float; exact input gives an exact value, so that an
    exact member has residual exactly zero.
    """
    m = get_model(m)
    if qm.is_exact_matrix(A):
        return _exact_residual(A, m)
    A = qm.qarray(A)
    J = m.form_matrix
    P = qm.qmatmul(qm.qadjoint(A), qm.real_left(J, A))
    P[..., 0] -= J
    return qm.qmaxabs(P)


def check_member(A, m, tol: float = MEMBER_TOL):
    m = get_model(m)
    res = membership_residual(A, m)
    if qm.is_exact_matrix(A):
        if tol == 0 and res != 0:
            raise MembershipError(float(res), tol, m.name)
        if float(res) > tol:
            raise MembershipError(float(res), tol, m.name)
        return res
    scale = max(1.0, qm.qmaxabs(A)) ** 2
    if not np.isfinite(res) or res > tol * scale:
        raise MembershipError(res, tol * scale, m.name)
    return res


def inverse_closed_form(A, m, tol: float = MEMBER_TOL):
    """Inverse of a member read off from the form, entry by entry.

    With entries ``[[a, b, c], [d, e, f], [g, h, l]]`` the ball inverse is
    ``[[a~, -d~, -g~], [-b~, e~, h~], [-c~, f~, l~]]`` and the Siegel inverse is
    ``[[e~, b~, -h~], [d~, a~, -g~], [-f~, -c~, l~]]`` (``~`` = conjugate).
    """
    m = get_model(m)
    check_member(A, m, tol)
    exact = qm.is_exact_matrix(A)
    if exact:
        E = [[q.conjugate() for q in row] for row in A]
    else:
        E = qm.qconj(qm.qarray(A))
    (a, b, c), (d, e, f), (g, h, l) = [[E[i][k] for k in range(3)] for i in range(3)]
    if m.kind is ModelKind.BALL:
        rows = [[a, -d, -g], [-b, e, h], [-c, f, l]]
    else:
        rows = [[e, b, -h], [d, a, -g], [-f, -c, l]]
    if exact:
        return tuple(tuple(r) for r in rows)
    return np.array(rows)


def cayley_conjugate(A, direction: str = "ball_to_siegel"):
    """``C A C^-1`` (ball to Siegel) or ``C^-1 A C`` (Siegel to ball).

    Exact input is conjugated with the exact ``sqrt(2)/2`` entries of ``C``.
    """
    d = direction.lower().replace("-", "_")
    if d in ("ball_to_siegel", "balltosiegel", "to_siegel"):
        left, right = True, False
    elif d in ("siegel_to_ball", "siegeltoball", "to_ball"):
        left, right = False, True
    else:
        raise ValueError(f"unknown direction {direction!r}")
    if qm.is_exact_matrix(A):
        C = qm.exact_real_matrix(CAYLEY_EXACT)
        Ct = qm.exact_real_matrix(tuple(zip(*CAYLEY_EXACT)))
        L, R = (C, Ct) if left else (Ct, C)
        return _simplify_exact(qm.exact_qmatmul(L, qm.exact_qmatmul(A, R)))
    A = qm.qarray(A)
    L, R = (CAYLEY, CAYLEY.T) if left else (CAYLEY.T, CAYLEY)
    return qm.real_right(qm.real_left(L, A), R)


def _simplify_exact(A):
    def s(c):
        return c.simplify() if isinstance(c, QSqrt2) else c
    return tuple(tuple(Quaternion(*[s(c) for c in q.components()]) for q in row) for row in A)


def to_model(A, source, target):
    """Express a member of ``source`` in the ``target`` model."""
    source, target = get_model(source), get_model(target)
    if source == target:
        return A
    return cayley_conjugate(A, "ball_to_siegel" if target is SIEGEL else "siegel_to_ball")


def stabilizer_shape(A, tol: float = 1e-9):
    """Which Siegel stabilizer pattern ``A`` has, or ``None``.

    ``G_infinity`` fixes ``[e1]`` (zeros at (0,1), (0,2), (2,1)), ``G_zero``
    fixes ``[e0]`` (zeros at (1,0), (1,2), (2,0)); their intersection is the
    diagonal group. Side conditions ``|l| = 1`` and ``conj(a) e = 1`` are
    checked together with ``Re(conj(a) d) = |g|^2/2`` and ``f = e conj(g) l``
    (resp. the mirrored pair for ``G_zero``).
    """
    A = qm.exact_to_float(A) if qm.is_exact_matrix(A) else qm.qarray(A)
    scale = max(1.0, qm.qmaxabs(A))
    small = tol * scale

    def zero(*idx):
        return all(np.max(np.abs(A[i, k])) <= small for i, k in idx)

    def close(p, q):
        return float(np.max(np.abs(p - q))) <= small * scale

    a, b, c = A[0]
    d, e, f = A[1]
    g, h, l = A[2]
    one = np.array([1.0, 0.0, 0.0, 0.0])
    base = abs(float(np.linalg.norm(l)) - 1.0) <= small and close(qm.hmul(qm.hconj(a), e), one)
    if not base:
        return None
    inf_zero = zero((0, 1), (0, 2), (2, 1))
    zero_zero = zero((1, 0), (1, 2), (2, 0))
    if inf_zero and zero_zero:
        return StabilizerShape.G_ZERO_INFINITY
    if inf_zero:
        ok = (abs(qm.hmul(qm.hconj(a), d)[0] - 0.5 * float(g @ g)) <= small * scale
              and close(f, qm.hmul(qm.hmul(e, qm.hconj(g)), l)))
        return StabilizerShape.G_INFINITY if ok else None
    if zero_zero:
        ok = (abs(qm.hmul(qm.hconj(e), b)[0] - 0.5 * float(h @ h)) <= small * scale
              and close(c, qm.hmul(qm.hmul(a, qm.hconj(h)), l)))
        return StabilizerShape.G_ZERO if ok else None
    return None


def locate(z, m, tol: float = 1e-9) -> ProjectivePoint:
    """Interior, boundary or exterior by the sign of ``<z, z>``.

    The boundary band is ``|<z, z>| <= tol * |z|^2``.
    """
    m = get_model(m)
    zq = _qvector(z)
    if isinstance(zq, tuple):
        n2 = sum((q.norm2() for q in zq), _F(0))
        if n2 == 0:
            raise ValueError("zero vector is not a projective point")
        val = inner(zq, zq, m).w
        if tol == 0:
            loc = Location.BOUNDARY if val == 0 else (Location.INTERIOR if val < 0 else Location.EXTERIOR)
            return ProjectivePoint(zq, loc)
        val, n2 = float(val), float(n2)
    else:
        n2 = float(np.sum(zq * zq))
        if n2 == 0.0:
            raise ValueError("zero vector is not a projective point")
        val = float(qm.form_inner(zq, zq, m.form_matrix)[0])
    if abs(val) <= tol * n2:
        loc = Location.BOUNDARY
    elif val < 0:
        loc = Location.INTERIOR
    else:
        loc = Location.EXTERIOR
    return ProjectivePoint(zq, loc)


ORIGIN_SIEGEL = np.array([[1.0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
INFINITY_SIEGEL = np.array([[0.0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]])
