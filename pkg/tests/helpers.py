"""Shared comparison helpers for the test suite."""

import numpy as np

from quathyp import qmatrix as qm


def param_error(sampled, recovered) -> float:
    """Largest parameter discrepancy between two normal forms of one kind.

    Elliptic angles compare the timelike slot directly and the two spacelike
    slots as a multiset; hyperbolic forms compare ``r, beta, theta``;
    parabolic forms compare the two rotation angles.
    """
    P, Q = sampled.params, recovered.params
    if sampled.kind != recovered.kind:
        return float("inf")
    if sampled.kind == "elliptic":
        return max(abs(P["theta"] - Q["theta"]),
                   float(np.max(np.abs(np.sort([P["phi"], P["psi"]]) - np.sort([Q["phi"], Q["psi"]])))))
    if sampled.kind == "hyperbolic":
        return max(abs(P["r"] - Q["r"]), abs(P["beta"] - Q["beta"]), abs(P["theta"] - Q["theta"]))
    return max(abs(P["theta"] - Q["theta"]), abs(P["phi"] - Q["phi"]))


def conj_residual(S, A, N) -> float:
    return qm.qmaxabs(qm.qchain(S, A, qm.qinv(S)) - N)
