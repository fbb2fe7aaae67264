import math
from fractions import Fraction

import numpy as np
import pytest

from quathyp import qmatrix as qm
from quathyp.classifier import (DT, QUATERNIONIC_TYPES, DynamicalType, classify,
                                classify_literal_theorem, collapse, compute_invariants)
from quathyp.invariants import Tolerances
from quathyp.model import MembershipError
from quathyp.normal_forms import make_elliptic, make_hyperbolic, make_parabolic, random_isometry, sample


def test_identity():
    c = classify(qm.qeye())
    assert c.dtype is DT.SIMPLE_ELLIPTIC and c.is_identity
    assert c.invariants.floats()[:3] == (6.0, 15.0, 20.0)
    assert c.invariants.min_degree == 1
    assert c.display_name == "simple elliptic (identity)"


def test_siegel_diag_strictly_hyperbolic():
    c = classify(qm.qdiag([2.0, 0.5, 1.0]), "siegel", exact=True)
    rec = c.invariants
    assert c.dtype is DT.STRICTLY_HYPERBOLIC
    assert (rec.a, rec.b, rec.c) == (7, Fraction(77, 4), Fraction(53, 2))
    assert rec.Delta == 0 and rec.G == Fraction(1, 4)
    assert 16 * (rec.a + rec.c) ** 2 == 17956 == (rec.a ** 2 + 4 * rec.b + 8) ** 2


def test_regular_elliptic_example():
    c = classify(make_elliptic(math.pi / 2, math.pi / 3, 2 * math.pi / 3).matrix)
    a, b, cc, G, H, D = c.invariants.floats()
    assert c.dtype is DT.REGULAR_ELLIPTIC
    assert (a, b, cc) == pytest.approx((0, 2, 0), abs=1e-12)
    assert D == pytest.approx(-108, abs=1e-9)


def test_negative_unit_eigenvalue_is_strictly_hyperbolic():
    A = qm.exact_matrix([[2, 0, 0], [0, "1/2", 0], [0, 0, -1]])
    c = classify(A, "siegel", exact=True)
    rec = c.invariants
    assert c.dtype is DT.STRICTLY_HYPERBOLIC
    assert (rec.a, rec.b, rec.c) == (3, Fraction(-3, 4), Fraction(-13, 2))
    assert rec.Delta == 0 and rec.G == Fraction(729, 4)


@pytest.mark.parametrize("make, expected", [
    (lambda: make_hyperbolic(2.0, 1.0, 0.5).matrix, DT.REGULAR_HYPERBOLIC),
    (lambda: make_hyperbolic(2.0, math.pi, 0.0).matrix, DT.STRICTLY_HYPERBOLIC),
    (lambda: make_hyperbolic(3.0, 0.0, 1.0).matrix, DT.SCREW_HYPERBOLIC),
    (lambda: make_elliptic(0.3, 0.3, 1.0).matrix, DT.COMPLEX_ELLIPTIC),
    (lambda: make_elliptic(0.7, 0.7, 0.7).matrix, DT.SIMPLE_ELLIPTIC),
    (lambda: make_parabolic(0.0, 0.0, 1j).matrix, DT.VERTICAL_HEISENBERG),
    (lambda: make_parabolic(0.0, 0.0, 0.5 + 1j, 1.0).matrix, DT.NON_VERTICAL_HEISENBERG),
    (lambda: make_parabolic(1.0, 1.0, complex(math.cos(1), math.sin(1)) * 1j).matrix, DT.ELLIPTO_TRANSLATION),
    (lambda: make_parabolic(1.0, 1.0, complex(math.cos(1), math.sin(1)) * (0.5 + 1j), 1.0).matrix,
     DT.ELLIPTO_PARABOLIC),
    (lambda: make_parabolic(math.pi / 2, 0.0, -1.0).matrix, DT.SCREW_PARABOLIC),
])
def test_normal_form_types(make, expected):
    A = make()
    model = "ball" if expected.family == "elliptic" else "siegel"
    assert classify(A, model).dtype is expected


def test_jjj_simple_elliptic():
    A = qm.qdiag(["j", "j", "j"])
    c = classify(A)
    assert c.dtype is DT.SIMPLE_ELLIPTIC and not c.is_identity
    assert c.invariants.floats()[:3] == pytest.approx((0, 3, 0))
    assert c.invariants.min_degree == 1


@pytest.mark.parametrize("dtype", QUATERNIONIC_TYPES)
def test_conjugation_invariance(rng, dtype):
    s = sample(dtype, "H", rng)
    c0 = classify(s.matrix, s.model)
    S = random_isometry("H", s.model, rng)
    c1 = classify(qm.qchain(S, s.matrix, qm.qinv(S)), s.model)
    assert c0.dtype is c1.dtype is dtype
    assert c0.invariants.min_degree == c1.invariants.min_degree
    assert np.allclose(c0.invariants.floats()[:3], c1.invariants.floats()[:3], atol=1e-8)


def test_eigen_class_multiplicities_sum_to_three(rng):
    for dtype in QUATERNIONIC_TYPES:
        s = sample(dtype, "H", rng)
        c = classify(s.matrix, s.model)
        assert sum(e.multiplicity for e in c.eigen_classes) == 3


def test_delta_sign_rule(rng):
    for dtype in QUATERNIONIC_TYPES:
        s = sample(dtype, "H", rng)
        rec = classify(s.matrix, s.model).invariants
        assert (rec.delta_sign > 0) == (dtype is DT.REGULAR_HYPERBOLIC)


def test_field_c_realify_matches_complexify(rng):
    for dtype in (DT.REGULAR_HYPERBOLIC, DT.REGULAR_ELLIPTIC, DT.SCREW_PARABOLIC, DT.VERTICAL_HEISENBERG):
        s = sample(dtype, "C", rng)
        rc = classify(s.matrix, s.model, "C")
        rh = classify(s.matrix, s.model, "H")
        assert np.allclose(rc.invariants.floats()[:3], rh.invariants.floats()[:3], atol=1e-8)
        assert collapse(rh.dtype, "C") is rc.dtype


def test_field_c_collapse():
    assert collapse(DT.SCREW_HYPERBOLIC, "C") is DT.LOXODROMIC
    assert collapse(DT.ELLIPTO_TRANSLATION, "C") is DT.VERTICAL_HEISENBERG
    assert collapse(DT.ELLIPTO_PARABOLIC, "C") is DT.NON_VERTICAL_HEISENBERG
    assert collapse(DT.REGULAR_ELLIPTIC, "C") is DT.REGULAR_ELLIPTIC
    c = classify(make_hyperbolic(2.0, 0.0, 0.0, "C").matrix, "siegel", "C")
    assert c.dtype is DT.LOXODROMIC and c.base_type is DT.STRICTLY_HYPERBOLIC


def test_field_c_rejects_quaternionic():
    with pytest.raises(ValueError):
        classify(qm.qdiag(["j", "j", "j"]), field="C")


def test_non_member_rejected():
    with pytest.raises(MembershipError):
        classify(qm.qdiag([2.0, 1.0, 1.0]))
    with pytest.raises(MembershipError):
        classify(qm.exact_matrix([[2, 0, 0], [0, "1/2", 0], [0, 0, -1]]), "ball", exact=True)


def test_borderline_reports_alternatives():
    # two elliptic angles 1e-4 apart sit inside the default Delta sign band
    A = make_elliptic(0.3, 1.0, 1.0 + 1e-4).matrix
    c = classify(A)
    assert c.borderline
    assert DT.REGULAR_ELLIPTIC in (c.dtype,) + c.alternatives
    assert any("candidate types" in d for d in c.diagnostics)


def test_tighter_sign_tolerance_resolves_near_coincidence():
    A = make_elliptic(0.3, 1.0, 1.0 + 1e-4).matrix
    c = classify(A, tol=Tolerances(sign=1e-14))
    assert c.dtype is DT.REGULAR_ELLIPTIC and not c.borderline


def test_literal_theorem_items():
    rec = classify(qm.qdiag([2.0, 0.5, 1.0]), "siegel").invariants
    v = classify_literal_theorem(rec)
    assert v.item == "2" and v.dtype is DT.STRICTLY_HYPERBOLIC
    v = classify_literal_theorem(classify(qm.qeye()).invariants)
    assert v.item == "3(iv)"
    rec = classify(qm.qdiag([2.0, 0.5, -1.0]), "siegel").invariants
    v = classify_literal_theorem(rec)
    assert not v.conditions["a>6,b>15,c>20"]
    assert v.dtype is not DT.STRICTLY_HYPERBOLIC


def test_dynamical_type_parse():
    assert DynamicalType.parse("screw-parabolic") is DT.SCREW_PARABOLIC
    assert DynamicalType.parse(DT.REGULAR_ELLIPTIC.value) is DT.REGULAR_ELLIPTIC
    with pytest.raises(ValueError):
        DynamicalType.parse("wobbly")


def test_classification_json():
    d = classify(qm.qeye()).to_json()
    assert d["type"] == "simple elliptic (identity)"
    assert d["invariants"]["a"] == 6.0


def test_exact_mode_requires_exact_membership():
    A = make_elliptic(math.pi / 3, 0.0, 0.0).matrix  # irrational entries
    with pytest.raises(MembershipError):
        classify(A, exact=True)


def test_elliptic_signatures():
    c = classify(make_elliptic(0.3, 1.0, 1.0).matrix)
    pair = next(e for e in c.eigen_classes if e.multiplicity == 2)
    assert pair.signature == (0, 2)
    c = classify(make_elliptic(1.0, 1.0, 0.3).matrix)
    pair = next(e for e in c.eigen_classes if e.multiplicity == 2)
    assert pair.signature == (1, 1)
