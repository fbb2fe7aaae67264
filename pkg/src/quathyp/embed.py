"""Complex and real 6x6 embeddings.

``complexify`` writes a quaternionic ``A = A1 + j A2`` (``A1``, ``A2`` complex)
as ``[[A1, -conj(A2)], [A2, conj(A1)]]``. The split of a single quaternion is
``z1 = w + xi`` and ``z2 = y - zi`` so that ``q = z1 + j z2`` under
``j z = conj(z) j``.

``realify`` writes a complex ``A = A1 + A2 i`` (``A1``, ``A2`` real) as
``[[A1, -A2], [A2, A1]]``.
"""

from __future__ import annotations

import numpy as np

from . import qmatrix as qm


class EmbeddingDomainError(ValueError):
    """Quaternionic input where a complex matrix was required."""


def complexify(A):
    """6x6 complex embedding; exact input gives a list of ``ExactComplex`` rows."""
    if qm.is_exact_matrix(A):
        return qm.exact_complexify(A)
    return qm.complexify(qm.qarray(A))


def realify(A, tol: float = 0.0):
    """6x6 real embedding of a complex 3x3 matrix.

    Accepts complex numpy arrays or quaternionic input whose ``j``/``k``
    parts vanish (within ``tol``).
    """
    if qm.is_exact_matrix(A):
        if not qm.exact_is_complex(A):
            raise EmbeddingDomainError("realify needs complex entries; found j/k parts")
        n = len(A)
        rows = [[None] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            for k in range(n):
                q = A[i][k]
                rows[i][k] = q.w
                rows[i][n + k] = -q.x
                rows[n + i][k] = q.x
                rows[n + i][n + k] = q.w
        return rows
    if isinstance(A, np.ndarray) and A.ndim == 2:
        Z = np.asarray(A, dtype=complex)
    else:
        Aq = qm.qarray(A)
        if not qm.is_complex_matrix(Aq, tol):
            raise EmbeddingDomainError("realify needs complex entries; found j/k parts")
        Z = qm.complex_part(Aq)
    A1, A2 = Z.real, Z.imag
    return np.block([[A1, -A2], [A2, A1]])
