import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from qutrit_witness.estimators import EntanglementWitness, FacetRefiner, ProductStateMinimizer
from qutrit_witness.feasible import DIAG
from qutrit_witness.presets import load_preset
from qutrit_witness.states import horodecki, maximally_mixed


def test_minimizer_fit():
    est = ProductStateMinimizer(restarts=16).fit(load_preset("eq26"))
    assert est.value_ == pytest.approx(-0.0126742847, abs=1e-9)
    assert est.transform([est.state_])[0] == pytest.approx(est.value_)
    assert clone(est).get_params()["restarts"] == 16


def test_minimizer_maximize():
    w = load_preset("eq14")
    lo = ProductStateMinimizer(restarts=16).fit(w).value_
    hi = ProductStateMinimizer(restarts=16, maximize=True).fit(w).value_
    assert hi > lo


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ProductStateMinimizer().transform([])
    with pytest.raises(NotFittedError):
        EntanglementWitness().decision_function([maximally_mixed().matrix])


def test_entanglement_witness():
    from qutrit_witness.classification import tangent_shift

    w, _ = tangent_shift(load_preset("eq26"))
    est = EntanglementWitness(witness=w, restarts=16).fit()
    X = np.array([horodecki(b).matrix for b in (2.5, 4.0)])
    assert list(est.predict(X)) == [0, 1]
    assert est.report_.verdict == "nd-certified"


def test_facet_refiner_tangent_seed():
    from qutrit_witness.cli import tangent_test_seed

    est = FacetRefiner(family="diag", restarts=16).fit(tangent_test_seed())
    assert est.n_iter_ == 0 and est.family_ is DIAG
    assert list(est.predict([np.zeros(8), 10 * np.ones(8)])) == [1, -1]
