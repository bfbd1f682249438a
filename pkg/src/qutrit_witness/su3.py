"""Gell-Mann basis of su(3), Bloch vectors and a fixed eigenvector catalog."""

import numpy as np

from ._validation import check_unit_vector
from .exceptions import InvalidStateError

SQRT3 = np.sqrt(3.0)
SQRT2 = np.sqrt(2.0)


def _build():
    lam = np.zeros((9, 3, 3), dtype=complex)
    lam[0] = np.eye(3)
    lam[1][0, 1] = lam[1][1, 0] = 1
    lam[2][0, 1], lam[2][1, 0] = -1j, 1j
    lam[3] = np.diag([1, -1, 0])
    lam[4][0, 2] = lam[4][2, 0] = 1
    lam[5][0, 2], lam[5][2, 0] = -1j, 1j
    lam[6][1, 2] = lam[6][2, 1] = 1
    lam[7][1, 2], lam[7][2, 1] = -1j, 1j
    lam[8] = np.diag([1, 1, -2]) / SQRT3
    lam.setflags(write=False)
    return lam


#: ``GELLMANN[0]`` is the 3x3 identity, ``GELLMANN[k]`` is lambda_k for k = 1..8.
GELLMANN = _build()


def _check_index(k):
    if isinstance(k, bool) or int(k) != k or not 1 <= int(k) <= 8:
        raise ValueError(f"Gell-Mann index must be an integer in 1..8, got {k!r}")
    return int(k)


def gellmann(k):
    """Return a copy of the Gell-Mann matrix ``lambda_k`` (k in 1..8)."""
    return GELLMANN[_check_index(k)].copy()


def basis_matrix(k):
    """Like :func:`gellmann` but ``k = 0`` gives the identity."""
    if k == 0:
        return GELLMANN[0].copy()
    return gellmann(k)


def bloch(alpha):
    """Expectations ``<alpha|lambda_k|alpha>`` for k = 1..8 from closed forms.

    >>> np.round(bloch([0, 0, 1]), 6)
    array([ 0.      ,  0.      ,  0.      ,  0.      ,  0.      ,  0.      ,
            0.      , -1.154701])
    """
    a = check_unit_vector(alpha, 3, name="alpha")
    z01 = a[0].conjugate() * a[1]
    z02 = a[0].conjugate() * a[2]
    z12 = a[1].conjugate() * a[2]
    p = np.abs(a) ** 2
    return np.array([
        2 * z01.real,
        2 * z01.imag,
        p[0] - p[1],
        2 * z02.real,
        2 * z02.imag,
        2 * z12.real,
        2 * z12.imag,
        1 / SQRT3 - 3 / SQRT3 * p[2],
    ])


def bloch_matrix(alpha):
    """Same quantity as :func:`bloch`, computed from the matrices."""
    a = check_unit_vector(alpha, 3, name="alpha")
    return np.array([np.vdot(a, GELLMANN[k] @ a).real for k in range(1, 9)])


# Eigenvalue spectra and representative eigenvectors. The degenerate
# lambda_8 eigenvalue 1/sqrt(3) is represented by |0>.
_EIGEN = {
    1: {1.0: (1, 1, 0), -1.0: (1, -1, 0), 0.0: (0, 0, 1)},
    2: {1.0: (1, 1j, 0), -1.0: (1, -1j, 0), 0.0: (0, 0, 1)},
    3: {1.0: (1, 0, 0), -1.0: (0, 1, 0), 0.0: (0, 0, 1)},
    4: {1.0: (1, 0, 1), -1.0: (1, 0, -1), 0.0: (0, 1, 0)},
    5: {1.0: (1, 0, 1j), -1.0: (1, 0, -1j), 0.0: (0, 1, 0)},
    6: {1.0: (0, 1, 1), -1.0: (0, 1, -1), 0.0: (1, 0, 0)},
    7: {1.0: (0, 1, 1j), -1.0: (0, 1, -1j), 0.0: (1, 0, 0)},
    8: {1 / SQRT3: (1, 0, 0), -2 / SQRT3: (0, 0, 1)},
}


def eigenvalues(k):
    """Distinct eigenvalues of ``lambda_k`` in ascending order."""
    return sorted(_EIGEN[_check_index(k)])


def eigenstate(k, m):
    """Unit eigenvector ``|lambda_k; m>`` under a fixed convention.

    The first non-zero component is real and positive; for the doubly
    degenerate ``m = 1/sqrt(3)`` of ``lambda_8`` the vector ``|0>`` is returned.

    Raises
    ------
    InvalidStateError
        If ``m`` is not an eigenvalue of ``lambda_k``.
    """
    k = _check_index(k)
    for value, vec in _EIGEN[k].items():
        if abs(value - m) < 1e-9:
            v = np.array(vec, dtype=complex)
            return v / np.linalg.norm(v)
    raise InvalidStateError(f"{m!r} is not an eigenvalue of lambda_{k}; spectrum {eigenvalues(k)}")


def random_unit_vector(rng, dim=3):
    """Haar-random unit vector from a complex Gaussian draw."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def orthogonality_table():
    """``Tr(lambda_i lambda_j)`` for i, j in 1..8 as an 8x8 real array."""
    lam = GELLMANN[1:]
    return np.einsum("iab,jba->ij", lam, lam).real
