"""Witness operators as real coefficient vectors over ``{I x I, lambda_i x lambda_j}``.

A :class:`WitnessCoeffs` stores ``a0`` and a map from :class:`OperatorLabel` to a
real coefficient. Internally most algebra goes through the 9x9 *coefficient
matrix* ``C`` with ``C[i, j]`` the effective weight of ``lambda_i x lambda_j``
(index 0 is the identity), so that

    W = sum_ij C[i, j] * kron(lambda_i, lambda_j).
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, NamedTuple, Optional

import numpy as np

from ._validation import check_hermitian
from .exceptions import DimensionError, NotExpressibleError
from .linalg import frobenius, hermitian_eigen, partial_transpose_first, projector
from .su3 import GELLMANN, SQRT3

#: ``KRON_BASIS[i, j] = kron(lambda_i, lambda_j)`` with lambda_0 = I.
KRON_BASIS = np.einsum("iab,jcd->ijacbd", GELLMANN, GELLMANN).reshape(9, 9, 9, 9)
KRON_BASIS.setflags(write=False)
_NORMS = np.array([3.0] + [2.0] * 8)

PSD_THRESHOLD = -1e-10
RESIDUAL_TOL = 1e-10

#: Gell-Mann indices whose matrices are imaginary; transposition flips their sign.
IMAGINARY_INDICES = (2, 5, 7)


@dataclass(frozen=True, order=True)
class OperatorLabel:
    """Basis operator ``scale * lambda_i x lambda_j``; ``(0, 0)`` is the identity."""

    i: int
    j: int
    scale: float = 1.0

    def __post_init__(self):
        for idx in (self.i, self.j):
            if isinstance(idx, bool) or int(idx) != idx or not 0 <= idx <= 8:
                raise ValueError(f"label indices must be in 0..8, got ({self.i}, {self.j})")
        if not self.scale > 0:
            raise ValueError(f"label scale must be positive, got {self.scale}")
        object.__setattr__(self, "i", int(self.i))
        object.__setattr__(self, "j", int(self.j))
        object.__setattr__(self, "scale", float(self.scale))

    @property
    def matrix(self):
        return self.scale * KRON_BASIS[self.i, self.j]

    @property
    def is_sqrt3(self):
        return abs(self.scale - SQRT3) < 1e-15

    def __str__(self):
        if self.scale == 1.0:
            return f"({self.i},{self.j})"
        s = "sqrt3" if self.is_sqrt3 else repr(self.scale)
        return f"({self.i},{self.j})*{s}"


def label(i, j, scale=1.0):
    return OperatorLabel(i, j, scale)


@dataclass(frozen=True, eq=False)
class WitnessCoeffs:
    """``W = a0 * I x I + sum_l terms[l] * l.scale * lambda_i x lambda_j``."""

    a0: float
    terms: Mapping[OperatorLabel, float] = field(default_factory=dict)
    name: Optional[str] = None

    def __post_init__(self):
        clean = {}
        for lab, coef in dict(self.terms).items():
            if not isinstance(lab, OperatorLabel):
                lab = OperatorLabel(*lab)
            if (lab.i, lab.j) == (0, 0):
                raise ValueError("the identity term goes in a0, not in terms")
            if any((lab.i, lab.j) == (o.i, o.j) for o in clean):
                raise ValueError(f"duplicate label {lab}")
            clean[lab] = float(coef)
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "terms", MappingProxyType(clean))

    @property
    def labels(self):
        return tuple(sorted(self.terms))

    def coefficient_matrix(self):
        c = np.zeros((9, 9))
        c[0, 0] = self.a0
        for lab, coef in self.terms.items():
            c[lab.i, lab.j] = coef * lab.scale
        return c

    @classmethod
    def from_matrix(cls, c, labels=None, name=None, strict=False, atol=1e-13):
        """Build from a coefficient matrix.

        ``labels`` supplies preferred scales for index pairs; entries whose
        pair is not covered get scale 1, or raise when ``strict`` is set.
        """
        c = np.asarray(c, dtype=float)
        if c.shape != (9, 9):
            raise DimensionError(f"coefficient matrix must be 9x9, got {c.shape}")
        by_pair = {(lab.i, lab.j): lab for lab in (labels or ())}
        terms = {}
        for i in range(9):
            for j in range(9):
                if (i, j) == (0, 0):
                    continue
                lab = by_pair.get((i, j))
                if abs(c[i, j]) <= atol:
                    if lab is not None:
                        terms[lab] = 0.0
                    continue
                if lab is None:
                    if strict:
                        raise NotExpressibleError(
                            f"term lambda_{i} x lambda_{j} ({c[i, j]:.3e}) outside the coefficient family"
                        )
                    lab = OperatorLabel(i, j)
                terms[lab] = c[i, j] / lab.scale
        return cls(a0=c[0, 0], terms=terms, name=name)

    def with_offset(self, a0, name=None):
        return WitnessCoeffs(a0, self.terms, name=name or self.name)

    def renamed(self, name):
        return WitnessCoeffs(self.a0, self.terms, name=name)

    def allclose(self, other, atol=1e-12):
        return np.allclose(self.coefficient_matrix(), other.coefficient_matrix(), rtol=0, atol=atol)

    def canonical_key(self, decimals=12):
        c = np.round(self.coefficient_matrix(), decimals) + 0.0
        return tuple(c.ravel())

    def __eq__(self, other):
        if not isinstance(other, WitnessCoeffs):
            return NotImplemented
        return np.array_equal(self.coefficient_matrix(), other.coefficient_matrix())

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        parts = ", ".join(f"{lab}: {v:.6g}" for lab, v in sorted(self.terms.items()) if v)
        tag = f"{self.name}: " if self.name else ""
        return f"WitnessCoeffs({tag}a0={self.a0:.6g}, {{{parts}}})"


def assemble(w):
    """9x9 matrix of a witness candidate."""
    return np.einsum("ij,ijab->ab", w.coefficient_matrix(), KRON_BASIS)


def coefficients_of(m):
    """Coefficient matrix ``C`` of a 9x9 operator; imaginary parts must vanish."""
    m = check_hermitian(m, 9, tol=1e-10, name="operator")
    raw = np.einsum("ab,ijba->ij", m, KRON_BASIS) / np.outer(_NORMS, _NORMS)
    if np.max(np.abs(raw.imag)) > 1e-10:
        raise NotExpressibleError("operator has non-real Gell-Mann coefficients")
    return raw.real


def expectation(w, rho):
    """``Tr(W rho)`` for a witness (or 9x9 matrix) and a density operator."""
    from .states import DensityOp

    wm = assemble(w) if isinstance(w, WitnessCoeffs) else check_hermitian(w, 9, tol=1e-10)
    rm = rho.matrix if isinstance(rho, DensityOp) else np.asarray(rho, dtype=complex)
    val = np.trace(wm @ rm)
    if abs(val.imag) > 1e-10:
        raise NotExpressibleError(f"expectation has imaginary part {val.imag:.3e}; inputs not Hermitian")
    return float(val.real)


def partial_transpose_coeffs(w):
    """Partial transpose on the first factor at coefficient level.

    Transposition maps lambda_k to -lambda_k for the imaginary generators
    (2, 5, 7) and leaves the others fixed.
    """
    flips = {k: -1.0 for k in IMAGINARY_INDICES}
    terms = {lab: coef * flips.get(lab.i, 1.0) for lab, coef in w.terms.items()}
    return WitnessCoeffs(w.a0, terms, name=w.name and f"{w.name}^T1")


@dataclass(frozen=True)
class DecompositionCertificate:
    """Evidence that ``W = P + Q^{T1}`` with ``P, Q >= 0``."""

    P: np.ndarray
    Q: np.ndarray
    residual: float
    min_eig_P: float
    min_eig_Q: float

    @property
    def valid(self):
        return (self.residual <= RESIDUAL_TOL
                and self.min_eig_P >= PSD_THRESHOLD
                and self.min_eig_Q >= PSD_THRESHOLD)


def verify_decomposition(w, P, Q):
    """Check a decomposability certificate and measure its residual.

    Raises ``NotHermitianError`` if ``P`` or ``Q`` is not Hermitian.
    """
    wm = assemble(w) if isinstance(w, WitnessCoeffs) else check_hermitian(w, 9, tol=1e-10)
    P = check_hermitian(P, 9, tol=1e-10, name="P")
    Q = check_hermitian(Q, 9, tol=1e-10, name="Q")
    residual = frobenius(wm - P - partial_transpose_first(Q))
    return DecompositionCertificate(
        P=P, Q=Q, residual=residual,
        min_eig_P=hermitian_eigen(P).min,
        min_eig_Q=hermitian_eigen(Q).min,
    )


class CertificateStates(NamedTuple):
    psi1: np.ndarray
    psi2: np.ndarray
    psi3: np.ndarray
    phi: np.ndarray


def _ket(pairs):
    v = np.zeros(9, dtype=complex)
    for (i, j), amp in pairs.items():
        v[3 * i + j] = amp
    return v / np.linalg.norm(v)


def certificate_states():
    """Antisymmetric states psi_1..psi_3 and ``phi = (|00> + |11> - 3|22>)/sqrt(11)``."""
    return CertificateStates(
        psi1=_ket({(0, 1): 1, (1, 0): -1}),
        psi2=_ket({(0, 2): 1, (2, 0): -1}),
        psi3=_ket({(1, 2): 1, (2, 1): -1}),
        phi=_ket({(0, 0): 1, (1, 1): 1, (2, 2): -3}),
    )


def antisymmetric_certificate():
    """``(P, Q)`` for the sign pattern with i5 = i7 = 1 among the exact diagonal facets."""
    s = certificate_states()
    P = 3 * projector(s.psi1)
    Q = 3 * (projector(s.psi2) + projector(s.psi3))
    return P, Q


def approximate_facet_certificate():
    """``(P, Q)`` for the all-plus approximated diagonal facet witness (a0 = 11/8)."""
    s = certificate_states()
    P = 27 / 4 * projector(s.psi1) + 3 / 4 * (projector(s.psi2) + projector(s.psi3))
    Q = 33 / 8 * projector(s.phi)
    return P, Q
