import math
from fractions import Fraction

import numpy as np
import pytest

from quathyp import qmatrix as qm
from quathyp.exact import QSqrt2
from quathyp.model import (BALL, CAYLEY, INFINITY_SIEGEL, ORIGIN_SIEGEL, SIEGEL, Location,
                           MembershipError, StabilizerShape, cayley_conjugate, check_member,
                           get_model, inner, inverse_closed_form, locate, membership_residual,
                           stabilizer_shape, to_model)
from quathyp.normal_forms import make_hyperbolic, make_parabolic, random_isometry


def test_cayley_intertwines_forms():
    Jb, Js = BALL.form_matrix, SIEGEL.form_matrix
    assert np.allclose(CAYLEY @ Jb @ CAYLEY.T, Js, atol=1e-15)
    assert np.allclose(CAYLEY @ CAYLEY.T, np.eye(3), atol=1e-15)


def test_siegel_special_points_are_null():
    assert locate(ORIGIN_SIEGEL, SIEGEL).location is Location.BOUNDARY
    assert locate(INFINITY_SIEGEL, SIEGEL).location is Location.BOUNDARY
    assert inner(ORIGIN_SIEGEL, INFINITY_SIEGEL, SIEGEL).w == -1.0


@pytest.mark.parametrize("vec, loc", [
    ([1, 0, 0], Location.INTERIOR),
    ([1, 1, 0], Location.BOUNDARY),
    ([0, 1, 0], Location.EXTERIOR),
    ([1, "0.5j", "0.5k"], Location.INTERIOR),
])
def test_locate_ball(vec, loc):
    assert locate(vec, BALL).location is loc


def test_locate_exact_boundary():
    z = (qm.exact_matrix([[1, 1, 0]]))[0]
    assert locate(z, BALL, tol=0).location is Location.BOUNDARY


@pytest.mark.parametrize("field", ["H", "C"])
@pytest.mark.parametrize("model", ["ball", "siegel"])
def test_random_isometry_is_member(rng, field, model):
    for _ in range(20):
        A = random_isometry(field, model, rng)
        assert membership_residual(A, model) <= 1e-12
        if field == "C":
            assert qm.is_complex_matrix(A)


def test_check_member_rejects():
    A = qm.qdiag([2.0, 1.0, 1.0])
    with pytest.raises(MembershipError):
        check_member(A, "ball")


def test_exact_membership_is_zero():
    A = qm.exact_matrix([[2, 0, 0], [0, "1/2", 0], [0, 0, -1]])
    assert membership_residual(A, SIEGEL) == 0
    assert membership_residual(A, BALL) != 0


def test_inverse_closed_form(rng):
    for model in ("ball", "siegel"):
        for _ in range(20):
            A = random_isometry("H", model, rng)
            B = inverse_closed_form(A, model)
            assert qm.qmaxabs(qm.qmatmul(A, B) - qm.qeye()) <= 1e-10
            assert qm.qmaxabs(B - qm.qinv(A)) <= 1e-10


def test_inverse_closed_form_exact():
    A = qm.exact_matrix([[2, 0, 0], [0, "1/2", 0], [0, 0, "j"]])
    B = inverse_closed_form(A, SIEGEL)
    assert qm.exact_qmatmul(A, B) == qm.exact_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_cayley_roundtrip(rng):
    A = random_isometry("H", "ball", rng)
    S = cayley_conjugate(A)
    assert membership_residual(S, SIEGEL) <= 1e-12
    assert qm.qmaxabs(cayley_conjugate(S, "siegel_to_ball") - A) <= 1e-13
    assert to_model(A, "ball", "ball") is A


def test_cayley_exact_keeps_membership():
    A = qm.exact_matrix([[1, 0, 0], [0, "i", 0], [0, 0, "-1"]])
    S = cayley_conjugate(A)
    assert membership_residual(S, SIEGEL) == 0
    assert any(isinstance(c, QSqrt2) or isinstance(c, Fraction) for q in S[0] for c in q.components())


def test_cayley_direction_validation():
    with pytest.raises(ValueError):
        cayley_conjugate(qm.qeye(), "sideways")


def test_get_model():
    assert get_model("Siegel") is SIEGEL and get_model(BALL) is BALL
    with pytest.raises(ValueError):
        get_model("klein")


def test_stabilizer_shapes():
    assert stabilizer_shape(make_hyperbolic(2.0, 0.3, 1.0).matrix) is StabilizerShape.G_ZERO_INFINITY
    P = make_parabolic(0.0, 0.0, 0.5 + 1j, 1.0).matrix
    assert stabilizer_shape(P) is StabilizerShape.G_INFINITY
    swap = qm.qarray(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex))
    assert membership_residual(swap, SIEGEL) == 0
    assert stabilizer_shape(qm.qchain(swap, P, swap)) is StabilizerShape.G_ZERO
    assert stabilizer_shape(qm.qdiag([1.0, 1.0, 2.0])) is None
