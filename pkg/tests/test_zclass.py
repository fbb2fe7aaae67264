import math
from collections import Counter

import numpy as np
import pytest

from quathyp import qmatrix as qm
from quathyp.classifier import DT, classify
from quathyp.normal_forms import make_elliptic, make_hyperbolic, random_isometry
from quathyp.zclass import ZClassError, ZClassLabel, enumerate_zclasses, zclass_label


@pytest.mark.parametrize("field, total, per_family", [
    ("H", 27, {"elliptic": 11, "hyperbolic": 6, "unipotent": 2, "parabolic-non-unipotent": 8}),
    ("C", 11, {"elliptic": 4, "hyperbolic": 1, "unipotent": 2, "parabolic-non-unipotent": 4}),
])
def test_counts(field, total, per_family):
    entries = enumerate_zclasses(field)
    labels = {e.label for e in entries}
    assert len(entries) == len(labels) == total
    assert Counter(lab.family for lab in labels) == per_family


@pytest.mark.parametrize("field", ["H", "C"])
def test_labels_stable_under_conjugation(rng, field):
    for e in enumerate_zclasses(field):
        nf = e.normal_form
        S = random_isometry(field, nf.model, rng)
        A = qm.qchain(S, nf.matrix, qm.qinv(S))
        assert zclass_label(classify(A, nf.model, field)) == e.label


def test_label_equality_ignores_centralizer():
    assert ZClassLabel("elliptic", "scalar/real", "a") == ZClassLabel("elliptic", "scalar/real", "b")


def test_identity_label():
    lab = zclass_label(classify(qm.qeye()))
    assert lab == ZClassLabel("elliptic", "scalar/real")
    assert lab.centralizer == "Sp(2,1)"


def test_regular_elliptic_centralizers():
    lab = zclass_label(classify(make_elliptic(math.pi / 2, math.pi / 3, 2 * math.pi / 3).matrix))
    assert lab.case_id == "distinct/0-real" and lab.centralizer == "S¹ × S¹ × S¹"
    lab = zclass_label(classify(make_elliptic(math.pi / 2, math.pi / 3, 2 * math.pi / 3, "C").matrix, field="C"))
    assert lab.case_id == "distinct"


def test_hyperbolic_cases():
    lab = zclass_label(classify(make_hyperbolic(2.0, 0.0, 0.0).matrix, "siegel"))
    assert lab.case_id == "beta-positive/theta-real"
    lab = zclass_label(classify(make_hyperbolic(2.0, math.pi, 1.0).matrix, "siegel"))
    assert lab.case_id == "beta-negative/theta-nonreal"
    lab = zclass_label(classify(make_hyperbolic(2.0, 1.0, 1.0, "C").matrix, "siegel", "C"))
    assert lab.case_id == "loxodromic"


def test_c_label_needs_c_classification():
    with pytest.raises(ZClassError):
        zclass_label(classify(qm.qeye()), "C")


def test_entry_json():
    d = enumerate_zclasses("C")[0].to_json()
    assert {"family", "case_id", "centralizer", "type", "normal_form"} <= set(d)
