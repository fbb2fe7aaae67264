"""Small quaternionic matrices in two representations.

Float matrices are ``(n, m, 4)`` numpy arrays holding ``(w, x, y, z)`` per
entry. Exact matrices are tuples of tuples of :class:`Quaternion` whose
components are ``Fraction`` or ``QSqrt2``.

Most float linear algebra goes through the complex embedding: a quaternion
vector ``v = v1 + j v2`` corresponds to the complex vector ``(v1; v2)`` and
``A v = v lam`` becomes ``A_C (v1; v2) = lam (v1; v2)`` for complex ``lam``.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import kernels
from .exact import ExactComplex, QSqrt2, to_exact
from .quaternion import Quaternion, q_mul, quaternion_from_json

_EXACT_SCALARS = (int, Fraction, QSqrt2)


class MatrixFormatError(ValueError):
    """Input could not be read as a quaternionic matrix."""


# ---------------------------------------------------------------- coercion

def is_exact_matrix(A) -> bool:
    return isinstance(A, tuple) and len(A) > 0 and isinstance(A[0], tuple)


def qarray(A) -> np.ndarray:
    """Coerce ``A`` to a float ``(n, m, 4)`` array.

    Accepts such arrays, complex ``(n, m)`` arrays, and nested lists of
    quaternion-like values (``Quaternion``, numbers, strings, ``[w,x,y,z]``).
    """
    if isinstance(A, np.ndarray):
        if A.ndim == 3 and A.shape[-1] == 4 and not np.iscomplexobj(A):
            return np.asarray(A, dtype=float)
        if A.ndim == 2:
            A = np.asarray(A, dtype=complex)
            out = np.zeros(A.shape + (4,))
            out[..., 0] = A.real
            out[..., 1] = A.imag
            return out
        raise MatrixFormatError(f"unsupported array shape {A.shape}")
    rows = list(A)
    out = np.zeros((len(rows), len(rows[0]), 4))
    for i, row in enumerate(rows):
        if len(row) != out.shape[1]:
            raise MatrixFormatError("ragged matrix")
        for k, v in enumerate(row):
            out[i, k] = [float(c) for c in _as_quaternion(v).components()]
    return out


def _as_quaternion(v, exact=False) -> Quaternion:
    if isinstance(v, Quaternion):
        if exact:
            return Quaternion(*[to_exact(c) for c in v.components()])
        return v
    if isinstance(v, complex):
        v = [v.real, v.imag, 0.0, 0.0]
    try:
        return quaternion_from_json(v, exact=exact)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(str(exc)) from exc


def exact_matrix(A):
    """Coerce ``A`` to an exact tuple-of-tuples of quaternions.

    Float components are read through their shortest decimal repr, so
    ``0.5`` becomes ``1/2``.
    """
    if is_exact_matrix(A):
        return tuple(tuple(_as_quaternion(v, exact=True) for v in row) for row in A)
    if isinstance(A, np.ndarray):
        Af = qarray(A)
        return tuple(tuple(Quaternion(*[to_exact(float(c)) for c in Af[i, k]])
                           for k in range(Af.shape[1])) for i in range(Af.shape[0]))
    return tuple(tuple(_as_quaternion(v, exact=True) for v in row) for row in A)


def exact_to_float(A) -> np.ndarray:
    return np.array([[[float(c) for c in q.components()] for q in row] for row in A])


def to_json(A) -> list:
    if is_exact_matrix(A):
        return [[q.to_json() for q in row] for row in A]
    A = qarray(A)
    return [[[float(c) for c in A[i, k]] for k in range(A.shape[1])] for i in range(A.shape[0])]


# ------------------------------------------------------------ float helpers

def qconj(A: np.ndarray) -> np.ndarray:
    out = np.array(A, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def qadjoint(A: np.ndarray) -> np.ndarray:
    """Quaternionic conjugate transpose."""
    return qconj(np.swapaxes(A, 0, 1))


def qmatmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return kernels.qmatmul(np.ascontiguousarray(A, dtype=float), np.ascontiguousarray(B, dtype=float))


def qchain(*mats) -> np.ndarray:
    out = mats[0]
    for M in mats[1:]:
        out = qmatmul(out, M)
    return out


def real_left(R: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Product of a real matrix ``R`` with a quaternionic matrix ``A``."""
    return np.einsum("ij,jkc->ikc", R, A)


def real_right(A: np.ndarray, R: np.ndarray) -> np.ndarray:
    return np.einsum("ijc,jk->ikc", A, R)


def qeye(n: int = 3) -> np.ndarray:
    out = np.zeros((n, n, 4))
    out[np.arange(n), np.arange(n), 0] = 1.0
    return out


def qdiag(entries) -> np.ndarray:
    """Diagonal matrix from numbers, quaternion strings or length-4 arrays."""
    n = len(entries)
    out = np.zeros((n, n, 4))
    for i, e in enumerate(entries):
        out[i, i] = _qvec4(e)
    return out


def _qvec4(e) -> np.ndarray:
    if isinstance(e, Quaternion):
        return np.array([float(c) for c in e.components()])
    if isinstance(e, np.ndarray) and e.shape == (4,):
        return e.astype(float)
    if isinstance(e, str):
        return np.array([float(c) for c in _as_quaternion(e).components()])
    c = complex(e)
    return np.array([c.real, c.imag, 0.0, 0.0])


def complexify(A: np.ndarray) -> np.ndarray:
    return kernels.complexify_arr(np.ascontiguousarray(A, dtype=float))


def decomplexify(M: np.ndarray) -> np.ndarray:
    """Inverse of :func:`complexify` (reads the left block column)."""
    n = M.shape[0] // 2
    m = M.shape[1] // 2
    A1 = M[:n, :m]
    A2 = M[n:, :m]
    out = np.empty((n, m, 4))
    out[..., 0] = A1.real
    out[..., 1] = A1.imag
    out[..., 2] = A2.real
    out[..., 3] = -A2.imag
    return out


def qinv(A: np.ndarray) -> np.ndarray:
    return decomplexify(np.linalg.inv(complexify(A)))


def qmaxabs(A: np.ndarray) -> float:
    return float(np.max(np.abs(A))) if A.size else 0.0


def complex_part(A: np.ndarray) -> np.ndarray:
    return A[..., 0] + 1j * A[..., 1]


def is_complex_matrix(A: np.ndarray, tol: float = 0.0) -> bool:
    return bool(np.max(np.abs(A[..., 2:]), initial=0.0) <= tol)


# quaternion vectors <-> C^{2n}

def cvec_to_qvec(v: np.ndarray) -> np.ndarray:
    """``(v1; v2)`` in C^{2n} to the quaternion vector ``v1 + j v2``."""
    n = v.shape[0] // 2
    out = np.empty((n, 4))
    out[:, 0] = v[:n].real
    out[:, 1] = v[:n].imag
    out[:, 2] = v[n:].real
    out[:, 3] = -v[n:].imag
    return out


def qvec_to_cvec(v: np.ndarray) -> np.ndarray:
    return np.concatenate([v[:, 0] + 1j * v[:, 1], v[:, 2] - 1j * v[:, 3]])


def hmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product of float 4-vectors (broadcasting)."""
    return kernels.hamilton_np(p, q)


def hconj(p: np.ndarray) -> np.ndarray:
    return p * np.array([1.0, -1.0, -1.0, -1.0])


def hinv(p: np.ndarray) -> np.ndarray:
    return hconj(p) / float(np.dot(p, p))


def vec_right(v: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Right scalar multiplication ``v q`` of a quaternion vector."""
    return hmul(v, np.broadcast_to(q, v.shape))


def form_inner(z: np.ndarray, w: np.ndarray, J: np.ndarray) -> np.ndarray:
    """``z* J w`` for quaternion vectors and a real form matrix."""
    Jw = J @ w
    return np.sum(hmul(hconj(z), Jw), axis=0)


def qrank(rows: np.ndarray, tol: float = 1e-8) -> int:
    """Rank of a quaternionic matrix by elimination.

    Pivots are chosen by largest modulus and eliminated by left division;
    an entry counts as zero below ``tol`` times the largest input modulus.
    """
    M = np.array(rows, dtype=float, copy=True)
    nr, nc = M.shape[:2]
    scale = max(float(np.max(np.linalg.norm(M, axis=-1), initial=0.0)), 1e-300)
    rank = 0
    for col in range(nc):
        if rank == nr:
            break
        mods = np.linalg.norm(M[rank:, col], axis=-1)
        piv = rank + int(np.argmax(mods))
        if mods[piv - rank] <= tol * scale:
            continue
        M[[rank, piv]] = M[[piv, rank]]
        pinv = hinv(M[rank, col])
        for r in range(nr):
            if r != rank:
                factor = hmul(M[r, col], pinv)
                M[r] -= hmul(np.broadcast_to(factor, M[rank].shape), M[rank])
        rank += 1
    return rank


# ------------------------------------------------------------ exact helpers

def exact_qmatmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    zero = Quaternion(Fraction(0), Fraction(0), Fraction(0), Fraction(0))
    out = []
    for i in range(n):
        row = []
        for k in range(p):
            acc = zero
            for j in range(m):
                if not (A[i][j].is_zero() or B[j][k].is_zero()):
                    acc = acc + q_mul(A[i][j], B[j][k])
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def exact_adjoint(A):
    n, m = len(A), len(A[0])
    return tuple(tuple(A[i][k].conjugate() for i in range(n)) for k in range(m))


def exact_real_matrix(R):
    """Lift a real matrix with exact entries to an exact quaternionic matrix."""
    z = Fraction(0)
    return tuple(tuple(Quaternion(to_exact(v) if not isinstance(v, QSqrt2) else v, z, z, z)
                       for v in row) for row in R)


def exact_complexify(A):
    """Complex embedding with ``ExactComplex`` entries."""
    n, m = len(A), len(A[0])
    M = [[None] * (2 * m) for _ in range(2 * n)]
    for i in range(n):
        for k in range(m):
            q = A[i][k]
            z1 = ExactComplex(q.w, q.x)
            z2 = ExactComplex(q.y, -q.z)
            M[i][k] = z1
            M[i][m + k] = -z2.conjugate()
            M[n + i][k] = z2
            M[n + i][m + k] = z1.conjugate()
    return M


def exact_is_complex(A) -> bool:
    return all(q.y == 0 and q.z == 0 for row in A for q in row)
