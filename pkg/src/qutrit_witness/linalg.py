"""Dense complex matrix helpers for 3x3 and 9x9 operators.

Matrices are plain ``numpy`` complex arrays. Two-qutrit operators use the
composite index ``3*i + k`` for the basis state ``|i>|k>``.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_hermitian, check_matrix
from .exceptions import ConvergenceError, DimensionError

JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
DEGENERACY_GAP = 1e-8


def kron(a, b):
    """Kronecker product of two 3x3 matrices.

    >>> kron(np.eye(3), np.eye(3)).shape
    (9, 9)
    """
    a = check_matrix(a, 3, "A")
    b = check_matrix(b, 3, "B")
    return np.kron(a, b)


def partial_transpose_first(m):
    """Transpose the first tensor factor: ``out[(i,k),(j,l)] = m[(j,k),(i,l)]``."""
    m = check_matrix(m, 9, "M")
    return m.reshape(3, 3, 3, 3).transpose(2, 1, 0, 3).reshape(9, 9)


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def min(self):
        return float(self.eigenvalues[0])

    @property
    def max(self):
        return float(self.eigenvalues[-1])

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _off_norm(a):
    # direct sum over off-diagonal entries; subtracting the diagonal norm cancels badly
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _fix_phase(v, tol=1e-12):
    # first component with modulus above tol becomes real positive
    for x in v:
        if abs(x) > tol:
            return v * (abs(x) / x)
    return v


def hermitian_eigen(m, tol=1e-10):
    """Eigen-decompose a Hermitian matrix with cyclic complex Jacobi rotations.

    Sweeps visit the pairs ``(p, q)``, ``p < q``, in row-major order, so the
    output is deterministic for a given input. Each eigenvector is rephased so
    its first non-negligible component is real and positive.

    Parameters
    ----------
    m : array_like
        Square Hermitian matrix.
    tol : float
        Allowed deviation from Hermiticity.

    Raises
    ------
    NotHermitianError
        If ``max |m - m^dagger| > tol``.
    ConvergenceError
        If the off-diagonal norm is still above ``1e-13`` after 100 sweeps.
    """
    a = check_hermitian(m, tol=tol).copy()
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) < JACOBI_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                diff = a[q, q].real - a[p, p].real
                if mag < 1e-300 or mag < 1e-18 * abs(diff):
                    a[p, q] = a[q, p] = 0.0
                    continue
                phase = apq / mag
                tau = diff / (2.0 * mag)
                t = 1.0 / (abs(tau) + np.sqrt(1.0 + tau * tau))
                if tau < 0:
                    t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] acting on columns p, q
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = a[:, [p, q]] @ g
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = g.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vc = v[:, [p, q]] @ g
                v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
    else:
        if _off_norm(a) >= JACOBI_TOL:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps "
                f"(off-diagonal norm {_off_norm(a):.3e})"
            )
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = v[:, order]
    v = np.column_stack([_fix_phase(v[:, k]) for k in range(n)])
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def min_eigenvalue(m, tol=1e-10):
    return hermitian_eigen(m, tol=tol).min


def is_psd(m, threshold=-1e-10):
    """True when the smallest eigenvalue is at least ``threshold``."""
    return min_eigenvalue(m) >= threshold


def frobenius(m):
    return float(np.linalg.norm(np.asarray(m), "fro"))


def projector(v):
    """Rank-one projector ``|v><v|``."""
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.ndim != 1:
        raise DimensionError("projector needs a vector")
    return np.outer(v, v.conj())
