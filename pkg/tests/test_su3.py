import numpy as np
import pytest

from qutrit_witness.exceptions import InvalidStateError
from qutrit_witness.su3 import (
    GELLMANN,
    SQRT3,
    bloch,
    bloch_matrix,
    eigenstate,
    eigenvalues,
    gellmann,
    orthogonality_table,
    random_unit_vector,
)


def test_basis_properties():
    assert np.allclose(GELLMANN[0], np.eye(3))
    for k in range(1, 9):
        g = gellmann(k)
        assert np.allclose(g, g.conj().T)
        assert abs(np.trace(g)) < 1e-15
    assert np.allclose(orthogonality_table(), 2 * np.eye(8), atol=1e-15)


def test_bad_index():
    with pytest.raises(ValueError):
        gellmann(9)


def test_bloch_closed_form_matches_traces():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a = random_unit_vector(rng)
        assert np.allclose(bloch(a), bloch_matrix(a), atol=1e-14)


@pytest.mark.parametrize("k", range(1, 9))
def test_eigenstates(k):
    for m in eigenvalues(k):
        v = eigenstate(k, m)
        assert np.allclose(GELLMANN[k] @ v, m * v, atol=1e-14)
        assert abs(np.linalg.norm(v) - 1) < 1e-15


def test_lambda8_degenerate_representative():
    v = eigenstate(8, 1 / SQRT3)
    assert np.allclose(v, [1, 0, 0])


def test_not_an_eigenvalue():
    with pytest.raises(InvalidStateError):
        eigenstate(3, 0.5)
