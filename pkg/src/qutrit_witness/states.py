"""Product states, density operators and the two PPT families."""

from dataclasses import dataclass, field

import numpy as np

from ._validation import check_hermitian, check_unit_vector
from .exceptions import InvalidStateError
from .linalg import hermitian_eigen, partial_transpose_first, projector
from .operators import KRON_BASIS, coefficients_of
from .su3 import SQRT3

PSD_THRESHOLD = -1e-10


@dataclass(frozen=True, eq=False)
class ProductState:
    """Pure product state ``|alpha> x |beta>`` of two qutrits."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_unit_vector(self.alpha, 3, name="alpha"))
        object.__setattr__(self, "beta", check_unit_vector(self.beta, 3, name="beta"))

    @classmethod
    def normalized(cls, alpha, beta):
        a = np.asarray(alpha, dtype=complex)
        b = np.asarray(beta, dtype=complex)
        return cls(a / np.linalg.norm(a), b / np.linalg.norm(b))

    @property
    def vector(self):
        return np.kron(self.alpha, self.beta)

    def expectation(self, m):
        v = self.vector
        return float(np.vdot(v, np.asarray(m) @ v).real)

    def swapped(self):
        return ProductState(self.beta, self.alpha)

    def __repr__(self):
        fmt = lambda v: "(" + ", ".join(f"{x:.4g}" for x in v) + ")"
        return f"ProductState({fmt(self.alpha)} x {fmt(self.beta)})"


@dataclass(frozen=True, eq=False)
class DensityOp:
    """Validated two-qutrit density operator.

    Construction checks Hermiticity, unit trace (1e-12) and positivity
    (smallest eigenvalue >= -1e-10); violations raise ``InvalidStateError``.
    """

    matrix: np.ndarray
    origin: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        m = check_hermitian(self.matrix, 9, tol=1e-12, name="density operator")
        tr = np.trace(m).real
        if abs(tr - 1.0) > 1e-12:
            raise InvalidStateError(f"density operator trace is {tr!r}, expected 1")
        lo = hermitian_eigen(m).min
        if lo < PSD_THRESHOLD:
            raise InvalidStateError(
                f"density operator ({self.origin}) is not positive: min eigenvalue {lo:.3e}", eigenvalue=lo
            )
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def partial_transpose(self):
        return partial_transpose_first(self.matrix)

    def gellmann_coefficients(self):
        """``r[i, j]`` with ``rho = sum r[i, j] lambda_i x lambda_j`` (r[0, 0] = 1/9)."""
        return coefficients_of(self.matrix)


def from_gellmann_coefficients(r, origin="custom", params=None):
    m = np.einsum("ij,ijab->ab", np.asarray(r, dtype=float), KRON_BASIS)
    return DensityOp(m, origin=origin, params=params or {})


def product_density(gamma):
    """Rank-one projector onto ``alpha x beta``."""
    return DensityOp(projector(gamma.vector), origin="product")


def pure_product_family(phi, delta1=0.0, delta2=0.0):
    """Zero-expectation family of the approximated diagonal facet.

    Both parties carry ``(sqrt3/2)(cos phi, e^{i d1} sin phi, e^{i d2}/sqrt3)``.
    """
    v = (SQRT3 / 2) * np.array([
        np.cos(phi),
        np.exp(1j * delta1) * np.sin(phi),
        np.exp(1j * delta2) / SQRT3,
    ])
    return ProductState(v, v.copy())


def horodecki_coefficients(b):
    r = np.zeros((9, 9))
    r[0, 0] = 1 / 9
    for k, s in ((1, 1), (2, -1), (4, 1), (5, -1), (6, 1), (7, -1)):
        r[k, k] = s / 21
    r[3, 3] = r[8, 8] = -1 / 84
    r[3, 8] = -SQRT3 / 84 * (5 - 2 * b)
    r[8, 3] = SQRT3 / 84 * (5 - 2 * b)
    return r


def horodecki(b):
    """Horodecki bound-entangled family rho_b for 0 <= b <= 5."""
    if not 0.0 <= b <= 5.0:
        raise ValueError(f"Horodecki parameter must lie in [0, 5], got {b}")
    return from_gellmann_coefficients(horodecki_coefficients(b), origin="horodecki", params={"b": float(b)})


def ppt_family_coefficients(a, c):
    r = np.zeros((9, 9))
    r[0, 0] = 1 / 9
    w = c / (6 * (a + 2 * c))
    for i, j in ((1, 1), (2, 2), (1, 2), (2, 1), (4, 4), (5, 5), (4, 5), (5, 4),
                 (6, 6), (7, 7), (6, 7), (7, 6)):
        r[i, j] = w
    r[3, 3] = r[8, 8] = (a - c) / (6 * (a + 2 * c))
    return r


def ppt_family(a, c):
    """Two-parameter PPT family, valid for ``a > 0`` and ``0 <= c <= a/sqrt(3)``.

    Positivity and PPT are checked numerically as well; outside the domain
    ``InvalidStateError`` carries the violating eigenvalue.
    """
    if not a > 0 or c < 0:
        raise InvalidStateError(f"ppt_family needs a > 0 and c >= 0, got a={a}, c={c}")
    m = np.einsum("ij,ijab->ab", ppt_family_coefficients(a, c), KRON_BASIS)
    lo = hermitian_eigen(m).min
    lo_pt = hermitian_eigen(partial_transpose_first(m)).min
    if c > a / SQRT3 + 1e-12 or lo < PSD_THRESHOLD or lo_pt < PSD_THRESHOLD:
        worst = min(lo, lo_pt)
        raise InvalidStateError(
            f"ppt_family(a={a}, c={c}) outside 0 <= c <= a/sqrt3: min eigenvalue {lo:.3e}, "
            f"min partial-transpose eigenvalue {lo_pt:.3e}",
            eigenvalue=worst,
        )
    return DensityOp(m, origin="ppt-family", params={"a": float(a), "c": float(c)})


def is_ppt(rho, threshold=PSD_THRESHOLD):
    """``(flag, min eigenvalue of rho^{T1})``."""
    m = rho.matrix if isinstance(rho, DensityOp) else np.asarray(rho, dtype=complex)
    lo = hermitian_eigen(partial_transpose_first(m)).min
    return lo >= threshold, lo


def maximally_mixed():
    return DensityOp(np.eye(9, dtype=complex) / 9, origin="maximally-mixed")
