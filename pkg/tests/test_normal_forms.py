import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import conj_residual, param_error
from quathyp import qmatrix as qm
from quathyp.classifier import DT, QUATERNIONIC_TYPES, classify
from quathyp.model import SIEGEL, Location, membership_residual
from quathyp.normal_forms import (NormalizationError, NotParabolicError, ParameterError,
                                  fixed_point_analysis, has_affine_fixed_point, make_elliptic,
                                  make_hyperbolic, make_parabolic, normalize, random_isometry,
                                  sample, sample_normal_form)

angle = st.floats(0.0, math.pi)


def test_make_hyperbolic_examples():
    assert np.array_equal(make_hyperbolic(2, 0, 0).matrix, qm.qdiag([2.0, 0.5, 1.0]))
    M = make_hyperbolic(2, math.pi / 2, 0).matrix
    assert np.allclose(M, qm.qdiag([2j, 0.5j, 1.0]), atol=1e-15)
    assert make_hyperbolic(2, 0, 0).model == "siegel"


@given(st.floats(0.1, 10).filter(lambda r: abs(r - 1) > 1e-3), angle, angle)
def test_make_hyperbolic_member(r, beta, theta):
    assert membership_residual(make_hyperbolic(r, beta, theta).matrix, SIEGEL) <= 1e-13 * max(r, 1 / r) ** 2


@pytest.mark.parametrize("r", [1.0, 0.0, -2.0, float("inf")])
def test_make_hyperbolic_rejects(r):
    with pytest.raises(ParameterError):
        make_hyperbolic(r, 0.0, 0.0)


def test_angle_ranges():
    with pytest.raises(ParameterError):
        make_elliptic(-0.5, 0.0, 0.0)
    with pytest.raises(ParameterError):
        make_hyperbolic(2.0, 4.0, 0.0)
    make_elliptic(-0.5, 0.0, 0.0, "C")
    with pytest.raises(ParameterError):
        make_elliptic(4.0, 0.0, 0.0, "C")


def test_make_elliptic_examples():
    assert np.array_equal(make_elliptic(0, 0, 0).matrix, qm.qeye())
    M = make_elliptic(math.pi / 2, math.pi / 3, 2 * math.pi / 3).matrix
    expected = qm.qdiag([1j, np.exp(1j * math.pi / 3), np.exp(2j * math.pi / 3)])
    assert np.allclose(M, expected, atol=1e-15)


@given(angle, angle, angle)
def test_elliptic_delta_nonpositive(t, p, q):
    rec = classify(make_elliptic(t, p, q).matrix).invariants
    assert rec.delta_sign <= 0


def test_make_parabolic_examples():
    vh = make_parabolic(0.0, 0.0, 1j)
    assert classify(vh.matrix, "siegel").dtype is DT.VERTICAL_HEISENBERG
    nv = make_parabolic(0.0, 0.0, 0.5 + 1j, 1.0)
    assert nv.params["f"] == 1.0
    assert classify(nv.matrix, "siegel").dtype is DT.NON_VERTICAL_HEISENBERG
    sp = make_parabolic(math.pi / 2, 0.0, 1j * 1j)
    c = classify(sp.matrix, "siegel")
    assert c.dtype is DT.SCREW_PARABOLIC
    assert c.invariants.min_degree == 3


def test_make_parabolic_constraint():
    with pytest.raises(ParameterError):
        make_parabolic(0.0, 0.0, 1.0 + 1j)  # Re(d) must vanish when g = 0
    nf = make_parabolic(0.0, 0.0, 1e-9 + 1j)
    assert nf.warnings and nf.params["d"].real == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ParameterError):
        make_parabolic(0.0, 0.0, 0.0)


def test_make_parabolic_rejects_elliptic_in_disguise():
    # d = f g / (e^{i phi} - e^{i theta}) makes the 2x2 system singular and
    # automatically satisfies the constraint on Re(e^{-i theta} d)
    t, p, g = 0.5, 1.5, 1.0
    d = np.exp(1j * (t + p)) * g * g / (np.exp(1j * p) - np.exp(1j * t))
    with pytest.raises(NotParabolicError):
        make_parabolic(t, p, d, g)
    assert make_parabolic(t, p, np.exp(1j * t) * (0.5 + 3j), g).kind == "parabolic"


def test_affine_rank_test():
    # rank [[f, d], [delta, g]] equal to rank of its first column
    assert has_affine_fixed_point(1.0, 1.0, 1.0, 1.0)
    assert not has_affine_fixed_point(0.0, 1.0, 0.0, 0.0)
    assert not has_affine_fixed_point(0.0, 1.0, 1.0, 0.0)


@pytest.mark.parametrize("field", ["H", "C"])
def test_parabolic_members(field):
    for th in (0.0, 0.7, math.pi):
        et = complex(math.cos(th), math.sin(th))
        nf = make_parabolic(th, th, et * (0.5 + 1j), 1.0, field)
        assert membership_residual(nf.matrix, SIEGEL) <= 1e-15


def test_fixed_points_hyperbolic():
    rep = fixed_point_analysis(make_hyperbolic(2, 0, 0).matrix, "siegel")
    assert rep.kind == "hyperbolic" and rep.n_boundary == 2 and rep.n_interior == 0
    dirs = sorted(int(np.argmax(np.linalg.norm(p.representative, axis=1))) for p in rep.points)
    assert dirs == [0, 1]


def test_fixed_points_elliptic_origin():
    rep = fixed_point_analysis(make_elliptic(math.pi / 2, math.pi / 3, 2 * math.pi / 3).matrix, "ball")
    assert rep.kind == "elliptic" and rep.n_interior == 1
    p = rep.points[0].representative
    assert np.allclose(np.abs(p[0]).sum() / np.abs(p).sum(), 1.0)


def test_fixed_points_parabolic_normal_forms():
    for nf in (make_parabolic(0.0, 0.0, 1j), make_parabolic(0.0, 0.0, 0.5 + 1j, 1.0),
               make_parabolic(math.pi / 2, 0.0, -1.0)):
        rep = fixed_point_analysis(nf.matrix, "siegel")
        assert rep.kind == "parabolic" and rep.n_boundary == 1 and rep.n_interior == 0
        assert rep.rank_test is False


@pytest.mark.parametrize("dtype", QUATERNIONIC_TYPES)
def test_fixed_point_counts(rng, dtype):
    for _ in range(5):
        s = sample(dtype, "H", rng)
        rep = fixed_point_analysis(s.matrix, s.model)
        assert rep.kind == dtype.family
        if dtype.family == "hyperbolic":
            assert (rep.n_interior, rep.n_boundary) == (0, 2)
        elif dtype.family == "parabolic":
            assert (rep.n_interior, rep.n_boundary) == (0, 1)
        for p in rep.points:
            assert p.location in (Location.INTERIOR, Location.BOUNDARY)


@pytest.mark.parametrize("field", ["H", "C"])
@pytest.mark.parametrize("dtype", QUATERNIONIC_TYPES)
def test_normalize_roundtrip(rng, field, dtype):
    for _ in range(4):
        s = sample(dtype, field, rng)
        N, S = normalize(s.matrix, s.model, field)
        assert conj_residual(S, s.matrix, N.matrix) <= 1e-8
        assert param_error(s.normal_form, N) <= 1e-6
        assert membership_residual(S, N.model) <= 1e-8
        assert classify(N.matrix, N.model, field).base_type is s.base_type


def test_normalize_normal_form_is_fixed():
    A = make_hyperbolic(2, 0, 0).matrix
    N, S = normalize(A, "siegel")
    assert np.allclose(N.matrix, A, atol=1e-12)
    assert conj_residual(S, A, N.matrix) <= 1e-12


def test_normalize_elliptic_angle_multiset(rng):
    nf = make_elliptic(math.pi / 2, math.pi / 3, 2 * math.pi / 3)
    S0 = random_isometry("H", "ball", rng)
    A = qm.qchain(S0, nf.matrix, qm.qinv(S0))
    N, _ = normalize(A, "ball")
    assert sorted(N.params.values()) == pytest.approx(sorted(nf.params.values()), abs=1e-9)


def test_normalize_across_models(rng):
    s = sample(DT.REGULAR_ELLIPTIC, "H", rng, model="siegel")
    N, S = normalize(s.matrix, "siegel")
    assert N.model == "ball"
    assert conj_residual(S, s.matrix, N.matrix) <= 1e-8


def test_normalization_error_reports_residual():
    err = NormalizationError(1e-3, 1e-8, "x")
    assert err.residual == 1e-3 and "1.000e-03" in str(err)


def test_random_isometry_reproducible():
    A = random_isometry("H", "ball", np.random.default_rng(5))
    B = random_isometry("H", "ball", np.random.default_rng(5))
    assert np.array_equal(A, B)


@pytest.mark.parametrize("dtype", QUATERNIONIC_TYPES)
def test_sample_normal_form_labels(rng, dtype):
    nf = sample_normal_form(dtype, "H", rng)
    assert classify(nf.matrix, nf.model).dtype is dtype


def test_sample_loxodromic_needs_c():
    with pytest.raises(ValueError):
        sample(DT.LOXODROMIC, "H")
    s = sample(DT.LOXODROMIC, "C", np.random.default_rng(0))
    assert s.dtype is DT.LOXODROMIC and s.base_type.family == "hyperbolic"


def test_normal_form_json():
    d = make_parabolic(0.0, 0.0, 0.5 + 1j, 1.0).to_json()
    assert d["params"]["d"] == [0.5, 1.0]
    assert d["kind"] == "parabolic" and d["model"] == "siegel"
