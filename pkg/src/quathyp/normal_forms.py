"""Normal forms, samplers, fixed points and reduction to normal form.

Representatives live in the Siegel model (hyperbolic, parabolic) or the ball
model (elliptic)::

    hyperbolic  diag(r e^{i beta}, r^-1 e^{i beta}, e^{i theta})
    elliptic    diag(e^{i theta}, e^{i phi}, e^{i psi})
    parabolic   [[e^{i theta}, 0, 0], [d, e^{i theta}, f], [g, 0, e^{i phi}]]
                with f = e^{i(theta+phi)} conj(g), Re(e^{-i theta} d) = |g|^2 / 2

For ``theta != phi`` the parabolic form can be reduced further to
``f = g = 0``, which is what :func:`normalize` returns in that case.

Over H angles are folded to ``[0, pi]``; over C they keep their sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import invariants as inv
from . import qmatrix as qm
from .classifier import (DT, ELLIPTIC_TYPES, HYPERBOLIC_TYPES, Classification, DynamicalType,
                         classify, collapse, eigenspace, normalize_field)
from .model import (BALL, CAYLEY, SIEGEL, Location, ProjectivePoint, StabilizerShape,
                    get_model, inverse_closed_form, stabilizer_shape, to_model)
from .quaternion import Quaternion, similarity_conjugator

RESIDUAL_TOL = 1e-8


class ParameterError(ValueError):
    """Normal-form parameters outside their admissible range."""


class NotParabolicError(ParameterError):
    """Parabolic-shaped parameters that describe an elliptic element."""


class NormalizationError(RuntimeError):
    """The reduction finished with a residual above tolerance."""

    def __init__(self, residual: float, tol: float, detail: str = ""):
        msg = f"normalization residual {residual:.3e} exceeds {tol:.1e}"
        super().__init__(msg + (f" ({detail})" if detail else ""))
        self.residual = residual


@dataclass(frozen=True)
class NormalForm:
    """A normal-form representative.

    ``kind`` is ``"hyperbolic"``, ``"elliptic"`` or ``"parabolic"``;
    ``params`` holds ``r, beta, theta`` / ``theta, phi, psi`` /
    ``theta, phi, d, f, g`` respectively (``d, f, g`` complex).
    """

    kind: str
    params: dict
    matrix: np.ndarray
    model: str
    field: str = "H"
    warnings: tuple = ()

    def to_json(self) -> dict:
        return {"kind": self.kind,
                "params": {k: _json_param(v) for k, v in self.params.items()},
                "matrix": qm.to_json(self.matrix), "model": self.model,
                "field": self.field, "warnings": list(self.warnings)}


def _json_param(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    if isinstance(v, (bool, str)):
        return v
    return float(v)


# ------------------------------------------------------------ constructors

def _cis(x: float) -> complex:
    """``e^{ix}`` with exact values at ``0`` and ``+-pi``."""
    if x == 0.0:
        return 1.0 + 0.0j
    if abs(x) == math.pi:
        return -1.0 + 0.0j
    return complex(math.cos(x), math.sin(x))


def _check_angle(name: str, x, field: str) -> float:
    x = float(x)
    lo = 0.0 if field == "H" else -math.pi
    if not (lo - 1e-12 <= x <= math.pi + 1e-12):
        rng = "[0, pi]" if field == "H" else "[-pi, pi]"
        raise ParameterError(f"{name} = {x!r} outside {rng}")
    return min(max(x, lo), math.pi)


def make_hyperbolic(r, beta, theta, field: str = "H") -> NormalForm:
    """Siegel representative ``diag(r e^{i beta}, r^-1 e^{i beta}, e^{i theta})``."""
    field = normalize_field(field)
    r = float(r)
    if not r > 0 or r == 1.0 or not math.isfinite(r):
        raise ParameterError(f"r must be positive and different from 1, got {r!r}")
    beta = _check_angle("beta", beta, field)
    theta = _check_angle("theta", theta, field)
    eb = _cis(beta)
    M = qm.qdiag([r * eb, eb / r, _cis(theta)])
    return NormalForm("hyperbolic", {"r": r, "beta": beta, "theta": theta}, M, "siegel", field)


def make_elliptic(theta, phi, psi, field: str = "H") -> NormalForm:
    """Ball representative ``diag(e^{i theta}, e^{i phi}, e^{i psi})``.

    The first slot is the timelike direction.
    """
    field = normalize_field(field)
    angs = [_check_angle(n, v, field) for n, v in (("theta", theta), ("phi", phi), ("psi", psi))]
    M = qm.qdiag([_cis(a) for a in angs])
    return NormalForm("elliptic", dict(zip(("theta", "phi", "psi"), angs)), M, "ball", field)


def make_parabolic(theta, phi, d, g=0.0, field: str = "H", tol: float = 1e-10,
                   project_tol: float = 1e-6) -> NormalForm:
    """Siegel parabolic representative with ``f = e^{i(theta+phi)} conj(g)``.

    A constraint gap ``Re(e^{-i theta} d) - |g|^2/2`` below ``project_tol``
    (relative) is removed by moving ``d`` along ``e^{i theta}`` and recorded in
    ``warnings``; larger gaps raise :class:`ParameterError`. Parameters with an
    affine fixed point raise :class:`NotParabolicError`.
    """
    field = normalize_field(field)
    theta = _check_angle("theta", theta, field)
    phi = _check_angle("phi", phi, field)
    d, g = complex(d), complex(g)
    if d == 0:
        raise ParameterError("d must be nonzero")
    et, ep = _cis(theta), _cis(phi)
    target = 0.5 * abs(g) ** 2
    gap = (et.conjugate() * d).real - target
    scale = max(1.0, abs(d), target)
    warnings = []
    if abs(gap) > tol * scale:
        if abs(gap) > project_tol * scale:
            raise ParameterError(f"Re(e^(-i theta) d) - |g|^2/2 = {gap:.3e}; must vanish")
        d = d - et * gap
        warnings.append(f"d projected onto Re(e^(-i theta) d) = |g|^2/2 (gap {gap:.3e})")
    f = et * ep * g.conjugate()
    if has_affine_fixed_point(f, d, ep - et, g):
        raise NotParabolicError("parameters fix a finite point: the element is elliptic")
    M = np.zeros((3, 3, 4))
    for (i, k), v in {(0, 0): et, (1, 0): d, (1, 1): et, (1, 2): f, (2, 0): g, (2, 2): ep}.items():
        M[i, k, :2] = v.real, v.imag
    params = {"theta": theta, "phi": phi, "d": d, "f": f, "g": g}
    return NormalForm("parabolic", params, M, "siegel", field, tuple(warnings))


def has_affine_fixed_point(f, d, delta, g, tol: float = 1e-8) -> bool:
    """Rank test for ``[[f, d], [delta, g]]`` against its first column.

    Equal ranks mean the affine system has a solution, i.e. a fixed point
    off ``infinity``. Entries may be complex numbers or quaternion 4-vectors.
    """
    full = np.array([[qm._qvec4(f), qm._qvec4(d)], [qm._qvec4(delta), qm._qvec4(g)]])
    return qm.qrank(full, tol) == qm.qrank(full[:, :1], tol)


# ---------------------------------------------------------------- sampling

def random_isometry(field: str = "H", model="ball", rng=None, rho_max: float = 0.9) -> np.ndarray:
    """Random member by indefinite Gram-Schmidt.

    The timelike column starts as ``(1, y)`` with ``|y| < rho_max`` so the
    result stays well conditioned; the two spacelike columns start Gaussian.
    Draws with an intermediate form norm within ``1e-6`` of zero are retried.
    """
    field = normalize_field(field)
    model = get_model(model)
    rng = np.random.default_rng(rng)
    J = BALL.form_matrix
    width = 4 if field == "H" else 2
    while True:
        y = np.zeros((2, 4))
        y[:, :width] = rng.normal(size=(2, width))
        y *= rng.uniform(0.0, rho_max) / max(np.linalg.norm(y), 1e-300)
        starts = [np.vstack([[1.0, 0.0, 0.0, 0.0], y])]
        for _ in range(2):
            x = np.zeros((3, 4))
            x[:, :width] = rng.normal(size=(3, width))
            starts.append(x)
        cols, signs = [], []
        for x in starts:
            v = x.copy()
            for vj, sj in zip(cols, signs):
                v = v - qm.vec_right(vj, qm.form_inner(vj, x, J)) * sj
            n = float(qm.form_inner(v, v, J)[0])
            if abs(n) < 1e-6:
                break
            cols.append(v / math.sqrt(abs(n)))
            signs.append(1.0 if n > 0 else -1.0)
        if signs == [-1.0, 1.0, 1.0]:
            S = np.stack(cols, axis=1)
            return to_model(S, BALL, SIEGEL) if model is SIEGEL else S


@dataclass(frozen=True)
class Sample:
    """A sampled member with its ground truth.

    ``matrix = conjugator @ normal_form.matrix @ conjugator^-1`` (expressed
    in ``model``); ``dtype`` is the label over ``field`` and ``base_type``
    the quaternionic label before collapsing.
    """

    matrix: np.ndarray
    dtype: DynamicalType
    base_type: DynamicalType
    field: str
    model: str
    normal_form: NormalForm
    conjugator: np.ndarray = dc_field(repr=False)


_LOXODROMIC_BASES = (DT.REGULAR_HYPERBOLIC, DT.STRICTLY_HYPERBOLIC, DT.SCREW_HYPERBOLIC)
_C_PARENTS = {DT.LOXODROMIC: _LOXODROMIC_BASES,
              DT.VERTICAL_HEISENBERG: (DT.VERTICAL_HEISENBERG, DT.ELLIPTO_TRANSLATION),
              DT.NON_VERTICAL_HEISENBERG: (DT.NON_VERTICAL_HEISENBERG, DT.ELLIPTO_PARABOLIC)}


def _open_angle(rng) -> float:
    return float(rng.uniform(0.3, math.pi - 0.3))


def _real_angle(rng) -> float:
    return float(rng.choice([0.0, math.pi]))


def _signed(x: float, field: str, rng) -> float:
    if field == "C" and 0.0 < x < math.pi and rng.random() < 0.5:
        return -x
    return x


def _separated(angles, sep: float = 0.5) -> bool:
    ts = [2 * math.cos(a) for a in angles]
    return all(abs(ts[i] - ts[k]) >= sep for i in range(len(ts)) for k in range(i))


def _elliptic_angles(base: DynamicalType, rng) -> list:
    if base is DT.SIMPLE_ELLIPTIC:
        a = _real_angle(rng) if rng.random() < 0.3 else _open_angle(rng)
        return [a, a, a]
    n_distinct = 3 if base is DT.REGULAR_ELLIPTIC else 2
    while True:
        n_real = int(rng.integers(0, 3))
        reals = list(rng.permutation([0.0, math.pi]))[:min(n_real, n_distinct)]
        angs = [float(a) for a in reals] + [_open_angle(rng) for _ in range(n_distinct - len(reals))]
        if _separated(angs):
            break
    if n_distinct == 2:
        angs = [angs[0], angs[0], angs[1]]
    return [float(a) for a in rng.permutation(angs)]


def sample_normal_form(base: DynamicalType, field: str = "H", rng=None) -> NormalForm:
    """Random normal form of the quaternionic type ``base``.

    Parameters keep a margin from every type boundary: resolvent roots are
    at least 0.5 apart, non-real angles lie in ``[0.3, pi - 0.3]`` and real
    ones are exactly ``0`` or ``pi``. Over C non-real angles get a random sign.
    """
    field = normalize_field(field)
    rng = np.random.default_rng(rng)
    if base in ELLIPTIC_TYPES:
        angs = [_signed(a, field, rng) for a in _elliptic_angles(base, rng)]
        return make_elliptic(*angs, field=field)
    if base in HYPERBOLIC_TYPES:
        r = float(rng.uniform(1.5, 3.0))
        if base is DT.REGULAR_HYPERBOLIC:
            beta = _open_angle(rng)
            theta = _real_angle(rng) if rng.random() < 0.3 else float(rng.uniform(0.0, math.pi))
        elif base is DT.STRICTLY_HYPERBOLIC:
            beta, theta = _real_angle(rng), _real_angle(rng)
        else:
            beta, theta = _real_angle(rng), _open_angle(rng)
        return make_hyperbolic(r, _signed(beta, field, rng), _signed(theta, field, rng), field)
    s = float(rng.uniform(0.5, 2.0)) * float(rng.choice([-1.0, 1.0]))
    g = complex(*rng.normal(size=2))
    g *= rng.uniform(0.5, 1.5) / abs(g)
    if base is DT.VERTICAL_HEISENBERG:
        return make_parabolic(0.0, 0.0, 1j * s, 0.0, field)
    if base is DT.NON_VERTICAL_HEISENBERG:
        return make_parabolic(0.0, 0.0, 0.5 * abs(g) ** 2 + 1j * s, g, field)
    if base in (DT.ELLIPTO_TRANSLATION, DT.ELLIPTO_PARABOLIC):
        theta = _signed(math.pi if rng.random() < 0.3 else _open_angle(rng), field, rng)
        if base is DT.ELLIPTO_TRANSLATION:
            return make_parabolic(theta, theta, _cis(theta) * 1j * s, 0.0, field)
        return make_parabolic(theta, theta, _cis(theta) * (0.5 * abs(g) ** 2 + 1j * s), g, field)
    if base is DT.SCREW_PARABOLIC:
        while True:
            theta = _real_angle(rng) if rng.random() < 0.3 else _open_angle(rng)
            phi = _real_angle(rng) if rng.random() < 0.3 else _open_angle(rng)
            if not _separated([theta, phi]):
                continue
            theta, phi = _signed(theta, field, rng), _signed(phi, field, rng)
            gg = g if rng.random() < 0.5 else 0.0
            et, ep = _cis(theta), _cis(phi)
            d = et * (0.5 * abs(gg) ** 2 + 1j * s)
            f = et * ep * complex(gg).conjugate()
            if abs(f * gg - (ep - et) * d) >= 0.3:
                return make_parabolic(theta, phi, d, gg, field)
    raise ValueError(f"no sampler for {base!r}")


def sample(dtype, field: str = "H", rng=None, model=None) -> Sample:
    """Random member of the requested type, conjugated by :func:`random_isometry`.

    Over C a collapsed label (e.g. loxodromic) draws one of its quaternionic
    parents uniformly. ``model`` defaults to the normal form's own model.
    """
    field = normalize_field(field)
    rng = np.random.default_rng(rng)
    dtype = DynamicalType.parse(dtype) if isinstance(dtype, str) else dtype
    if dtype is DT.LOXODROMIC and field == "H":
        raise ValueError("loxodromic is a label over C; pick a hyperbolic subtype over H")
    if field == "C" and dtype in _C_PARENTS:
        base = _C_PARENTS[dtype][int(rng.integers(len(_C_PARENTS[dtype])))]
    else:
        base = dtype
    nf = sample_normal_form(base, field, rng)
    S0 = random_isometry(field, nf.model, rng)
    A = qm.qchain(S0, nf.matrix, inverse_closed_form(S0, nf.model))
    target = get_model(model) if model is not None else get_model(nf.model)
    if target.name != nf.model:
        A = to_model(A, nf.model, target)
        S0 = to_model(S0, nf.model, target)
    return Sample(A, collapse(base, field), base, field, target.name, nf, S0)


# ------------------------------------------------------------ fixed points

@dataclass(frozen=True)
class FixedPointReport:
    """Fixed points found from eigenvectors.

    ``kind`` is ``"elliptic"`` (some interior point), ``"hyperbolic"`` (two
    boundary points) or ``"parabolic"`` (one boundary point). ``rank_test``
    is the affine-fixed-point verdict for G_infinity-shaped Siegel matrices
    (``True`` = a finite fixed point exists) and ``None`` otherwise.
    """

    kind: str
    points: tuple
    rank_test: bool | None = None
    notes: tuple = ()

    @property
    def n_interior(self) -> int:
        return sum(p.location is Location.INTERIOR for p in self.points)

    @property
    def n_boundary(self) -> int:
        return sum(p.location is Location.BOUNDARY for p in self.points)

    def to_json(self) -> dict:
        return {"kind": self.kind, "points": [p.to_json() for p in self.points],
                "rank_test": self.rank_test, "notes": list(self.notes)}


def _gram(W: np.ndarray, J: np.ndarray) -> np.ndarray:
    n = W.shape[1]
    G = np.zeros((n, n, 4))
    for i in range(n):
        for k in range(n):
            G[i, k] = qm.form_inner(W[:, i], W[:, k], J)
    return G


def _combine(W: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """``sum_j W[:, j] c_j`` with quaternion coefficients ``(n, 4)``."""
    return sum(qm.vec_right(W[:, j], coeffs[j]) for j in range(W.shape[1]))


def form_diagonal(W: np.ndarray, J: np.ndarray, complex_coeffs: bool) -> list:
    """Form-orthogonal basis of the span of ``W`` as ``[(v, <v, v>), ...]``.

    With ``complex_coeffs`` only complex recombinations are used, which keeps
    an eigenvector relation ``A v = v lam`` with non-real ``lam`` intact.
    Vectors are unit length in the coefficient space, ascending in ``<v, v>``.
    """
    G = _gram(W, J)
    n = W.shape[1]
    out = []
    if complex_coeffs:
        Gc = qm.complex_part(G)
        mu, U = np.linalg.eigh(0.5 * (Gc + Gc.conj().T))
        for k in range(n):
            c = np.zeros((n, 4))
            c[:, 0], c[:, 1] = U[:, k].real, U[:, k].imag
            out.append((_combine(W, c), float(mu[k])))
        return out
    Gq = qm.complexify(G)
    mu, U = np.linalg.eigh(0.5 * (Gq + Gq.conj().T))
    chosen = []
    for k in range(2 * n):
        w = qm.cvec_to_qvec(U[:, k])
        for b in chosen:
            w = w - qm.vec_right(b, np.sum(qm.hmul(qm.hconj(b), w), axis=0))
        nrm = float(np.sqrt(np.sum(w * w)))
        if nrm > 0.5:
            chosen.append(w / nrm)
            out.append((_combine(W, chosen[-1]), float(mu[k])))
        if len(chosen) == n:
            break
    return out


def _geometric_dim(A: np.ndarray, lam: complex, real_lam: bool, field: str) -> int:
    if field == "C":
        Z = qm.complex_part(A)
        s = np.linalg.svd(Z - lam * np.eye(3), compute_uv=False)
        return int(np.sum(s <= 1e-6 * max(1.0, s[0])))
    s = np.linalg.svd(qm.complexify(A) - lam * np.eye(6), compute_uv=False)
    null = int(np.sum(s <= 1e-6 * max(1.0, s[0])))
    return max(1, null // 2 if real_lam else null)


def fixed_point_analysis(A, m="ball", tol: inv.Tolerances = inv.DEFAULT_TOL,
                         classification: Classification | None = None) -> FixedPointReport:
    """Fixed points in the closure of the hyperbolic plane from eigenvectors.

    Each eigenvalue class contributes a form-diagonal basis of its
    eigenspace; negative vectors are interior fixed points and null ones
    boundary fixed points. Positive-definite directions are dropped.
    """
    model = get_model(m)
    A = qm.exact_to_float(A) if qm.is_exact_matrix(A) else qm.qarray(A)
    c = classification or classify(A, model, "H", tol)
    J = model.form_matrix
    points, notes = [], []
    for ec in c.eigen_classes:
        real_lam = ec.cls.is_real(tol.angle)
        lam = _class_value(ec.cls, real_lam)
        dim = min(_geometric_dim(A, lam, real_lam, "H"), ec.multiplicity)
        W = eigenspace(A, lam, dim, "H")
        basis = form_diagonal(W, J, complex_coeffs=not real_lam)
        scale = max(1.0, max(abs(mu) for _, mu in basis))
        for v, mu in basis:
            if abs(mu) <= 1e-7 * scale:
                points.append(ProjectivePoint(v, Location.BOUNDARY))
            elif mu < 0:
                points.append(ProjectivePoint(v / math.sqrt(-mu), Location.INTERIOR))
    n_int = sum(p.location is Location.INTERIOR for p in points)
    n_bdy = len(points) - n_int
    kind = "elliptic" if n_int else ("hyperbolic" if n_bdy >= 2 else "parabolic")
    rank_test = _rank_test(A, model)
    if rank_test is not None and rank_test != (kind == "elliptic"):
        notes.append(f"rank test says {'elliptic' if rank_test else 'not elliptic'}, "
                     f"eigenvectors say {kind}")
    return FixedPointReport(kind, tuple(points), rank_test, tuple(notes))


def _rank_test(A: np.ndarray, model) -> bool | None:
    """Affine fixed-point test for Siegel matrices of parabolic shape.

    Applies when ``A`` fixes ``infinity`` with ``A[0,0] = A[1,1]`` complex
    and ``A[2,2]`` complex; returns ``None`` otherwise.
    """
    if model is not SIEGEL or stabilizer_shape(A) not in (StabilizerShape.G_INFINITY,
                                                          StabilizerShape.G_ZERO_INFINITY):
        return None
    a, e, l = A[0, 0], A[1, 1], A[2, 2]
    if np.max(np.abs(np.concatenate([a[2:], e[2:], l[2:]]))) > 1e-9 or np.max(np.abs(a - e)) > 1e-9:
        return None
    return has_affine_fixed_point(A[1, 2], A[1, 0], l - a, A[2, 0])


# ---------------------------------------------------------------- normalize

def _class_value(cls, real_lam: bool) -> complex:
    if real_lam:
        return complex(math.copysign(cls.modulus, math.cos(cls.angle)), 0.0)
    return cls.representative()


def _fold(z: complex, field: str, tol: float) -> float:
    """Angle of ``z``: folded into ``[0, pi]`` over H, signed over C."""
    ang = math.atan2(z.imag, z.real)
    if abs(z.imag) <= tol * abs(z):
        return 0.0 if z.real > 0 else math.pi
    return abs(ang) if field == "H" else ang


def _unit(v: np.ndarray, J: np.ndarray) -> np.ndarray:
    return v / math.sqrt(float(qm.form_inner(v, v, J)[0]))


def _signed_value(A: np.ndarray, cls, real_lam: bool) -> complex:
    """``e^{+-i angle}`` whichever is an eigenvalue of the complex matrix ``A``."""
    lam = _class_value(cls, real_lam)
    if real_lam:
        return lam
    Z = qm.complex_part(A)
    cands = (lam, lam.conjugate())
    smin = [np.linalg.svd(Z - x * np.eye(3), compute_uv=False)[-1] for x in cands]
    return cands[int(np.argmin(smin))]


def _entry(B: np.ndarray, i: int, k: int) -> complex:
    return complex(B[i, k, 0], B[i, k, 1])


def normalize(A, m="ball", field: str = "H", tol: inv.Tolerances = inv.DEFAULT_TOL,
              residual_tol: float = RESIDUAL_TOL):
    """Reduce a member to normal form.

    Returns ``(N, S)`` with ``S A S^-1 = N.matrix``. ``S`` maps the form of
    ``m`` to the form of ``N.model``, so it is a member whenever the two
    models agree. Raises :class:`NormalizationError` if the achieved
    residual exceeds ``residual_tol``.
    """
    field = normalize_field(field)
    model = get_model(m)
    A = qm.exact_to_float(A) if qm.is_exact_matrix(A) else qm.qarray(A)
    c = classify(A, model, field, tol)
    base = c.base_type
    target = BALL if base in ELLIPTIC_TYPES else SIEGEL
    K = _cayley_between(model, target)
    At = qm.qchain(K, A, qm.qadjoint(K)) if K is not None else A
    if base in ELLIPTIC_TYPES:
        N, S = _normalize_elliptic(At, c, field, tol)
    elif base in HYPERBOLIC_TYPES:
        N, S = _normalize_hyperbolic(At, c, field, tol)
    else:
        N, S = _normalize_parabolic(At, c, field, tol)
    if K is not None:
        S = qm.qmatmul(S, K)
    S_inv = qm.qinv(S)
    residual = qm.qmaxabs(qm.qchain(S, A, S_inv) - N.matrix)
    if residual > residual_tol:
        raise NormalizationError(residual, residual_tol, base.value)
    return N, S


def _cayley_between(source, target):
    """Real quaternionic matrix ``K`` with ``K A K^T`` in ``target``, or ``None``."""
    if source is target:
        return None
    C = CAYLEY if target is SIEGEL else CAYLEY.T
    return qm.qarray(C.astype(complex))


def _frame_inverse(V: np.ndarray, model) -> np.ndarray:
    return inverse_closed_form(V, model, tol=1e-6)


def _normalize_elliptic(A, c, field, tol):
    J = BALL.form_matrix
    entries = []
    if field == "C":
        for sc in c.signed_classes:
            lam = _cis(sc.angle)
            W = eigenspace(A, lam, sc.multiplicity, "C")
            entries += [(v, mu, sc.angle) for v, mu in form_diagonal(W, J, True)]
    else:
        for ec in c.eigen_classes:
            real_lam = ec.cls.is_real(tol.angle)
            lam = _class_value(ec.cls, real_lam)
            W = eigenspace(A, lam, ec.multiplicity, "H")
            ang = 0.0 if real_lam and lam.real > 0 else (math.pi if real_lam else ec.cls.angle)
            entries += [(v, mu, ang) for v, mu in form_diagonal(W, J, not real_lam)]
    entries.sort(key=lambda e: e[1] >= 0)
    V = np.stack([v / math.sqrt(abs(mu)) for v, mu, _ in entries], axis=1)
    S = _frame_inverse(V, BALL)
    B = qm.qchain(S, A, V)
    angs = [_fold(_entry(B, i, i), field, tol.angle) for i in range(3)]
    return make_elliptic(*angs, field=field), S


def _normalize_hyperbolic(A, c, field, tol):
    J = SIEGEL.form_matrix
    if field == "C":
        Z = qm.complex_part(A)
        lams, vecs = np.linalg.eig(Z)
        order = np.argsort(-np.abs(lams))
        cols = []
        for idx in order:
            v = np.zeros((3, 4))
            v[:, 0], v[:, 1] = vecs[:, idx].real, vecs[:, idx].imag
            cols.append(v)
        v0, v2, v1 = cols  # |lam|: r > 1 > 1/r
    else:
        classes = sorted(c.eigen_classes, key=lambda e: -e.cls.modulus)
        vs = []
        for ec in classes:
            real_lam = ec.cls.is_real(tol.angle)
            vs.append(eigenspace(A, _class_value(ec.cls, real_lam), 1, "H")[:, 0])
        v0, v2, v1 = vs
    p = qm.form_inner(v0, v1, J)
    v1 = qm.vec_right(v1, -qm.hinv(p))
    v2 = _unit(v2, J)
    V = np.stack([v0, v1, v2], axis=1)
    S = _frame_inverse(V, SIEGEL)
    B = qm.qchain(S, A, V)
    x0 = _entry(B, 0, 0)
    N = make_hyperbolic(abs(x0), _fold(x0, field, tol.angle), _fold(_entry(B, 2, 2), field, tol.angle),
                        field)
    return N, S


def _conj_step(B, S, K):
    """Replace ``B`` by ``K B K^-1`` and ``S`` by ``K S``."""
    Kinv = inverse_closed_form(K, SIEGEL, tol=1e-6)
    return qm.qchain(K, B, Kinv), qm.qmatmul(K, S)


def _j_times(w: complex) -> np.ndarray:
    """Quaternion ``j w`` for complex ``w``."""
    return np.array([0.0, 0.0, w.real, -w.imag])


def _jpart(q: np.ndarray) -> complex:
    """``z2`` in ``q = z1 + j z2``."""
    return complex(q[2], -q[3])


def _normalize_parabolic(A, c, field, tol):
    J = SIEGEL.form_matrix
    base = c.base_type
    classes = sorted(c.eigen_classes, key=lambda e: -e.block_size)
    alpha_cls = classes[0]
    real_a = alpha_cls.cls.is_real(tol.angle)
    two_dim = base in (DT.VERTICAL_HEISENBERG, DT.ELLIPTO_TRANSLATION)
    cplx = field == "C"
    alpha = _signed_value(A, alpha_cls.cls, real_a) if cplx else _class_value(alpha_cls.cls, real_a)
    W = eigenspace(A, alpha, 2 if two_dim else 1, field)
    basis = form_diagonal(W, J, cplx or not real_a)
    basis.sort(key=lambda e: abs(e[1]))
    p = basis[0][0]
    v2 = None
    if two_dim:
        v2 = _unit(basis[1][0], J)
    elif base is DT.SCREW_PARABOLIC:
        other = classes[1]
        real_b = other.cls.is_real(tol.angle)
        beta = _signed_value(A, other.cls, real_b) if cplx else _class_value(other.cls, real_b)
        v2 = _unit(eigenspace(A, beta, 1, field)[:, 0], J)
    # null partner v0 with <v0, p> = -1, orthogonal to v2 when v2 is fixed
    best = None
    for k in range(3):
        x = np.zeros((3, 4))
        x[k, 0] = 1.0
        if v2 is not None:
            x = x - qm.vec_right(v2, qm.form_inner(v2, x, J))
        ip = qm.form_inner(p, x, J)
        if best is None or np.linalg.norm(ip) > np.linalg.norm(best[1]):
            best = (x, ip)
    x, ip = best
    v0 = qm.vec_right(x, -qm.hinv(ip))
    v0 = v0 + p * (0.5 * float(qm.form_inner(v0, v0, J)[0]))
    if v2 is None:
        best = None
        for k in range(3):
            y = np.zeros((3, 4))
            y[k, 0] = 1.0
            w = y + qm.vec_right(v0, qm.form_inner(p, y, J)) + qm.vec_right(p, qm.form_inner(v0, y, J))
            n = float(qm.form_inner(w, w, J)[0])
            if best is None or n > best[1]:
                best = (w, n)
        v2 = best[0] / math.sqrt(best[1])
    V = np.stack([v0, p, v2], axis=1)
    S = _frame_inverse(V, SIEGEL)
    B = qm.qchain(S, A, V)
    if not cplx:
        B, S = _complexify_parabolic(B, S, alpha, real_a, v2_is_eigen=two_dim or base is DT.SCREW_PARABOLIC)
    theta = _fold(_entry(B, 1, 1), field, tol.angle)
    phi = _fold(_entry(B, 2, 2), field, tol.angle) if base is DT.SCREW_PARABOLIC else theta
    if base is DT.SCREW_PARABOLIC or two_dim:
        N = make_parabolic(theta, phi, _entry(B, 1, 0), 0.0, field)
    else:
        N = make_parabolic(theta, phi, _entry(B, 1, 0), _entry(B, 2, 0), field)
    return N, S


def _complexify_parabolic(B, S, alpha, real_a, v2_is_eigen):
    """Conjugate within the stabilizer of infinity until ``d``, ``g`` are complex."""
    one = np.array([1.0, 0.0, 0.0, 0.0])
    if not v2_is_eigen and not real_a:
        l = B[2, 2]
        v = _qarr(similarity_conjugator(Quaternion(*l)))
        B, S = _conj_step(B, S, qm.qdiag([one, one, v]))
        w = -_jpart(B[2, 0]) / (alpha - alpha.conjugate())
        cq = _j_times(w)
        T = qm.qeye()
        T[1, 0, 0] = 0.5 * float(cq @ cq)
        T[1, 2] = qm.hconj(cq)
        T[2, 0] = cq
        B, S = _conj_step(B, S, T)
    if not real_a:
        w = -_jpart(B[1, 0]) / (alpha - alpha.conjugate())
        T = qm.qeye()
        T[1, 0] = _j_times(w)
        B, S = _conj_step(B, S, T)
        return B, S
    u = _qarr(similarity_conjugator(Quaternion(*B[1, 0])))
    if v2_is_eigen:
        return _conj_step(B, S, qm.qdiag([u, u, one]))
    g = B[2, 0]
    v = qm.hmul(u, qm.hinv(g)) * float(np.linalg.norm(g))
    return _conj_step(B, S, qm.qdiag([u, u, v]))


def _qarr(q: Quaternion) -> np.ndarray:
    return np.array([float(x) for x in q.components()])
