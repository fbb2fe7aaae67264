"""Classification of isometries of the quaternionic hyperbolic plane.

The main entry points are :func:`classify` (dynamical type from
characteristic-polynomial invariants), :func:`eigen_classify` (an
independent eigenvalue-based reference), :func:`normalize` (reduction to a
normal form with an explicit conjugator) and :func:`zclass_label`.
"""

__version__ = "0.1.0"

from .classifier import (Classification, DynamicalType, classify, classify_literal_theorem,
                         compute_invariants)
from .invariants import DEFAULT_TOL, InvariantRecord, Tolerances
from .model import (BALL, SIEGEL, MembershipError, cayley_conjugate, check_member,
                    inverse_closed_form, membership_residual)
from .normal_forms import (NormalForm, fixed_point_analysis, make_elliptic, make_hyperbolic,
                           make_parabolic, normalize, random_isometry, sample)
from .oracle import eigen_classify
from .quaternion import Quaternion, parse_quaternion
from .zclass import ZClassLabel, enumerate_zclasses, zclass_label

__all__ = [
    "BALL", "SIEGEL", "DEFAULT_TOL", "Classification", "DynamicalType", "InvariantRecord",
    "MembershipError", "NormalForm", "Quaternion", "Tolerances", "ZClassLabel",
    "cayley_conjugate", "check_member", "classify", "classify_literal_theorem",
    "compute_invariants", "eigen_classify", "enumerate_zclasses", "fixed_point_analysis",
    "inverse_closed_form", "make_elliptic", "make_hyperbolic", "make_parabolic",
    "membership_residual", "normalize", "parse_quaternion", "random_isometry", "sample",
    "zclass_label",
]
