import pytest

from qutrit_witness.classification import (
    DECOMPOSABLE,
    ND_CERTIFIED,
    POSITIVE,
    UNDETERMINED,
    classify,
    tangent_shift,
)
from qutrit_witness.exceptions import NotAWitnessError
from qutrit_witness.feasible import classify_diag_facets
from qutrit_witness.optimize import OptimizerConfig
from qutrit_witness.presets import identity_witness, load_preset

CFG = OptimizerConfig(restarts=32)


def test_positive_operator():
    assert classify(identity_witness(), CFG).verdict == POSITIVE


@pytest.mark.parametrize("name", ["eq11", "eq14"])
def test_decomposable_with_certificate(name):
    r = classify(load_preset(name), CFG)
    assert r.verdict == DECOMPOSABLE
    assert r.certificate.residual <= 1e-10


@pytest.mark.parametrize("name", ["eq20", "eq26", "eq27"])
def test_reference_offsets_are_not_witnesses(name):
    with pytest.raises(NotAWitnessError) as exc:
        classify(load_preset(name), CFG)
    assert exc.value.extremum.value < -1e-3


def test_tangent_eq26_detects_horodecki():
    w, res = tangent_shift(load_preset("eq26"), CFG)
    assert w.a0 == pytest.approx(1.0367249176, abs=1e-9)
    r = classify(w, CFG)
    assert r.verdict == ND_CERTIFIED
    assert r.detecting_state == "horodecki" and r.detecting_expectation < 0


def test_undetermined_without_probes():
    w, _ = tangent_shift(load_preset("eq20"), CFG)
    assert classify(w, CFG, probes=False).verdict == UNDETERMINED


def test_report_dict():
    d = classify(load_preset("eq14"), CFG).to_dict()
    assert d["verdict"] == DECOMPOSABLE and "certificate" in d


@pytest.mark.slow
def test_diag_census_matches_case_tags():
    out = classify_diag_facets(OptimizerConfig(restarts=16))
    verdicts = {}
    for _, case, report in out:
        verdicts.setdefault(case, set()).add(report.verdict)
    assert verdicts == {"a": {POSITIVE}, "b": {DECOMPOSABLE}, "c": {DECOMPOSABLE}, "d": {DECOMPOSABLE}}
