"""Input validation helpers used at public entry points."""

import numpy as np

from .exceptions import DimensionError, InvalidStateError, NotHermitianError

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12


def check_matrix(m, dim=None, name="matrix"):
    """Return ``m`` as a complex ndarray, checking it is square of size ``dim``."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"{name} must be {dim}x{dim}, got {arr.shape[0]}x{arr.shape[1]}")
    return arr


def check_hermitian(m, dim=None, tol=HERMITIAN_TOL, name="matrix"):
    arr = check_matrix(m, dim, name)
    dev = np.max(np.abs(arr - arr.conj().T)) if arr.size else 0.0
    if dev > tol:
        raise NotHermitianError(f"{name} is not Hermitian (max |M - M^dagger| = {dev:.3e})")
    return arr


def check_unit_vector(v, dim=3, tol=NORM_TOL, name="vector"):
    arr = np.asarray(v, dtype=complex).reshape(-1)
    if arr.shape[0] != dim:
        raise DimensionError(f"{name} must have length {dim}, got {arr.shape[0]}")
    norm = np.linalg.norm(arr)
    if abs(norm - 1.0) > tol:
        raise InvalidStateError(f"{name} is not normalized (norm = {norm!r})")
    return arr


def check_operator(w):
    """Accept a 9x9 Hermitian array or anything with an ``assemble`` route.

    ``WitnessCoeffs`` instances are assembled; bare arrays are validated.
    """
    from .operators import WitnessCoeffs, assemble

    if isinstance(w, WitnessCoeffs):
        return assemble(w)
    return check_hermitian(w, 9, tol=1e-10, name="operator")


def check_density_batch(X):
    """Coerce a density operator, or a sequence of them, into an (n, 9, 9) array."""
    from .states import DensityOp

    if isinstance(X, DensityOp):
        X = [X]
    if isinstance(X, np.ndarray) and X.ndim == 2:
        X = [X]
    mats = [x.matrix if isinstance(x, DensityOp) else check_hermitian(x, 9, tol=1e-10, name="state")
            for x in X]
    if not mats:
        raise DimensionError("empty state batch")
    return np.stack(mats)
