"""Hot numeric kernels on float quaternion arrays.

Quaternion arrays carry the four real components ``(w, x, y, z)`` on the last
axis, so a 3x3 quaternionic matrix is a ``(3, 3, 4)`` float array and a batch
of them is ``(N, 3, 3, 4)``.

Every kernel exists twice: a numba ``@njit`` loop version (suffix ``_nb``)
and a vectorised numpy version (suffix ``_np``). The unsuffixed public names
point at the numba versions unless ``QUATHYP_DISABLE_NUMBA`` is set.
"""

import numpy as np

from ._accel import HAVE_NUMBA, njit

# (p q)_c = sum_ab HAMILTON[a, b, c] p_a q_b
HAMILTON = np.zeros((4, 4, 4))
for _a, _b, _c, _s in [
    (0, 0, 0, 1), (1, 1, 0, -1), (2, 2, 0, -1), (3, 3, 0, -1),
    (0, 1, 1, 1), (1, 0, 1, 1), (2, 3, 1, 1), (3, 2, 1, -1),
    (0, 2, 2, 1), (1, 3, 2, -1), (2, 0, 2, 1), (3, 1, 2, 1),
    (0, 3, 3, 1), (1, 2, 3, 1), (2, 1, 3, -1), (3, 0, 3, 1),
]:
    HAMILTON[_a, _b, _c] = _s
del _a, _b, _c, _s


# ----------------------------------------------------------------- numpy path

def hamilton_np(p, q):
    """Elementwise Hamilton product with broadcasting over leading axes."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return np.einsum("...a,...b,abc->...c", p, q, HAMILTON)


def qmatmul_np(A, B):
    """Quaternionic matrix product ``(..., n, m, 4) x (..., m, p, 4)``."""
    return np.einsum("...ija,...jkb,abc->...ikc", A, B, HAMILTON)


def complexify_np(A):
    """Complex embedding ``[[A1, -conj(A2)], [A2, conj(A1)]]`` of ``A = A1 + j A2``."""
    A = np.asarray(A, dtype=float)
    z1 = A[..., 0] + 1j * A[..., 1]
    z2 = A[..., 2] - 1j * A[..., 3]
    top = np.concatenate([z1, -np.conj(z2)], axis=-1)
    bot = np.concatenate([z2, np.conj(z1)], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def charpoly_np(M):
    """Faddeev-LeVerrier characteristic polynomial, batched over leading axes.

    Returns coefficients of ``det(xI - M)`` from ``x^n`` down to ``x^0``.
    """
    M = np.asarray(M)
    n = M.shape[-1]
    dtype = np.result_type(M.dtype, np.complex128)
    eye = np.eye(n, dtype=dtype)
    coeffs = np.zeros(M.shape[:-2] + (n + 1,), dtype=dtype)
    coeffs[..., 0] = 1.0
    Mk = np.zeros(M.shape, dtype=dtype)
    for k in range(1, n + 1):
        Mk = M @ Mk + coeffs[..., k - 1, None, None] * eye
        AM = M @ Mk
        coeffs[..., k] = -np.trace(AM, axis1=-2, axis2=-1) / k
    return coeffs


def sextic_batch_np(As):
    """Characteristic sextics of ``complexify(A)`` for a ``(N, 3, 3, 4)`` batch."""
    return charpoly_np(complexify_np(As))


# ----------------------------------------------------------------- numba path

@njit
def _ham(p0, p1, p2, p3, q0, q1, q2, q3):
    return (
        p0 * q0 - p1 * q1 - p2 * q2 - p3 * q3,
        p0 * q1 + p1 * q0 + p2 * q3 - p3 * q2,
        p0 * q2 - p1 * q3 + p2 * q0 + p3 * q1,
        p0 * q3 + p1 * q2 - p2 * q1 + p3 * q0,
    )


@njit
def qmatmul_nb(A, B):
    n, m = A.shape[0], A.shape[1]
    p = B.shape[1]
    out = np.zeros((n, p, 4))
    for i in range(n):
        for k in range(p):
            s0 = 0.0
            s1 = 0.0
            s2 = 0.0
            s3 = 0.0
            for j in range(m):
                r0, r1, r2, r3 = _ham(A[i, j, 0], A[i, j, 1], A[i, j, 2], A[i, j, 3],
                                      B[j, k, 0], B[j, k, 1], B[j, k, 2], B[j, k, 3])
                s0 += r0
                s1 += r1
                s2 += r2
                s3 += r3
            out[i, k, 0] = s0
            out[i, k, 1] = s1
            out[i, k, 2] = s2
            out[i, k, 3] = s3
    return out


@njit
def complexify_nb(A):
    n, m = A.shape[0], A.shape[1]
    out = np.zeros((2 * n, 2 * m), dtype=np.complex128)
    for i in range(n):
        for k in range(m):
            z1 = complex(A[i, k, 0], A[i, k, 1])
            z2 = complex(A[i, k, 2], -A[i, k, 3])
            out[i, k] = z1
            out[i, m + k] = -z2.conjugate()
            out[n + i, k] = z2
            out[n + i, m + k] = z1.conjugate()
    return out


@njit
def _charpoly_one(M, coeffs):
    n = M.shape[0]
    Mk = np.zeros((n, n), dtype=np.complex128)
    tmp = np.zeros((n, n), dtype=np.complex128)
    coeffs[0] = 1.0
    for k in range(1, n + 1):
        # Mk <- M @ Mk + c_{k-1} I
        for i in range(n):
            for j in range(n):
                s = 0j
                for l in range(n):
                    s += M[i, l] * Mk[l, j]
                tmp[i, j] = s
        for i in range(n):
            for j in range(n):
                Mk[i, j] = tmp[i, j]
            Mk[i, i] += coeffs[k - 1]
        tr = 0j
        for i in range(n):
            for l in range(n):
                tr += M[i, l] * Mk[l, i]
        coeffs[k] = -tr / k


@njit
def charpoly_nb(M):
    n = M.shape[0]
    coeffs = np.zeros(n + 1, dtype=np.complex128)
    _charpoly_one(M.astype(np.complex128), coeffs)
    return coeffs


@njit
def sextic_batch_nb(As):
    N = As.shape[0]
    out = np.zeros((N, 7), dtype=np.complex128)
    row = np.zeros(7, dtype=np.complex128)
    for b in range(N):
        M = complexify_nb(As[b])
        _charpoly_one(M, row)
        for k in range(7):
            out[b, k] = row[k]
    return out


# ------------------------------------------------------------ public binding

if HAVE_NUMBA:
    qmatmul = qmatmul_nb
    complexify_arr = complexify_nb
    charpoly = charpoly_nb
    sextic_batch = sextic_batch_nb
else:  # pragma: no cover - exercised with QUATHYP_DISABLE_NUMBA=1
    qmatmul = qmatmul_np
    complexify_arr = complexify_np
    charpoly = charpoly_np
    sextic_batch = sextic_batch_np

BACKEND = "numba" if HAVE_NUMBA else "numpy"
