"""Symmetries acting on witnesses: party exchange, partial transpose, local phases.

Every generator maps product states to product states, so it maps witnesses
to witnesses. Each one has a coefficient-level shortcut (used for orbits)
and a matrix-level realization (used to cross-check the shortcut).
"""

from collections import deque
from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Tuple

import numpy as np

from .exceptions import OrbitCapError
from .linalg import partial_transpose_first
from .operators import KRON_BASIS, OperatorLabel, WitnessCoeffs, assemble, coefficients_of
from .su3 import GELLMANN

DEFAULT_ORBIT_CAP = 100_000

M_MATRICES = {
    1: np.diag([1j, 1, -1]),
    2: np.diag([1, 1j, -1]),
    3: np.diag([1, -1, 1j]),
}

# lambda_k -> sign * lambda_target under M_i lambda_k M_i^dagger; lambda_3, lambda_8 fixed
_M_TABLE = {
    1: {1: (2, -1), 2: (1, 1), 4: (5, 1), 5: (4, -1), 6: (6, -1), 7: (7, -1)},
    2: {1: (2, 1), 2: (1, -1), 4: (4, -1), 5: (5, -1), 6: (7, 1), 7: (6, -1)},
    3: {1: (1, -1), 2: (2, -1), 4: (5, 1), 5: (4, -1), 6: (7, -1), 7: (6, 1)},
}


def m_matrix(i):
    if i not in M_MATRICES:
        raise ValueError(f"M index must be 1, 2 or 3, got {i!r}")
    return M_MATRICES[i].copy()


def m_action(i, k):
    """``(target, sign)`` with ``M_i lambda_k M_i^dagger = sign * lambda_target``."""
    if i not in _M_TABLE:
        raise ValueError(f"M index must be 1, 2 or 3, got {i!r}")
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= 8:
        raise ValueError(f"Gell-Mann index must be in 1..8, got {k!r}")
    return _M_TABLE[i].get(int(k), (int(k), 1))


def m_action_matrix(i, k):
    """Same as :func:`m_action` but read off ``M_i lambda_k M_i^dagger`` numerically."""
    m = M_MATRICES[i]
    img = m @ GELLMANN[k] @ m.conj().T
    coef = np.einsum("ab,jba->j", img, GELLMANN[1:]).real / 2
    t = int(np.argmax(np.abs(coef)))
    return t + 1, int(np.sign(coef[t]))


def exchange_op():
    """Swap operator built from ``I/3 + (1/2) sum_k lambda_k x lambda_k``."""
    return KRON_BASIS[0, 0] / 3 + 0.5 * sum(KRON_BASIS[k, k] for k in range(1, 9))


def swap_permutation():
    """Permutation matrix with ``((i,k),(k,i)) = 1``."""
    p = np.zeros((9, 9), dtype=complex)
    for i in range(3):
        for k in range(3):
            p[3 * i + k, 3 * k + i] = 1
    return p


def _signed_row_map(table):
    out = {k: (k, 1) for k in range(9)}
    out.update(table)
    return out


def _compose(t1, t2):
    # apply t1 then t2
    out = {}
    for k, (a, s) in t1.items():
        b, r = t2[a]
        out[k] = (b, s * r)
    return out


@dataclass(frozen=True, eq=False)
class SymmetryGenerator:
    """A named witness symmetry.

    ``kind`` is one of ``exchange``, ``transpose-first``, ``M1``, ``M2``,
    ``M3``, ``M1^2``, ``M2^2`` or ``permute``; the last takes a 3x3
    permutation ``local`` applied to both parties.
    """

    kind: str
    local: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "permute":
            s = np.asarray(self.local, dtype=float)
            if s.shape != (3, 3) or not np.array_equal(s @ s.T, np.eye(3)) or set(s.ravel()) - {0.0, 1.0}:
                raise ValueError("permute needs a 3x3 permutation matrix")
            object.__setattr__(self, "local", s)

    @property
    def name(self):
        if self.kind == "permute":
            return "permute" + "".join(str(int(np.argmax(c))) for c in self.local.T)
        return self.kind

    @property
    def matrix(self):
        """9x9 conjugating matrix, or ``None`` for the partial transpose."""
        if self.kind == "exchange":
            return swap_permutation()
        if self.kind == "transpose-first":
            return None
        if self.kind == "permute":
            return np.kron(self.local, self.local).astype(complex)
        return np.kron(self.local_m, np.eye(3))

    @property
    def local_m(self):
        base, _, power = self.kind.partition("^")
        return np.linalg.matrix_power(M_MATRICES[int(base[1])], int(power or 1))

    def row_map(self):
        """Signed row permutation of the coefficient matrix, for M-type generators."""
        base, _, power = self.kind.partition("^")
        t = _signed_row_map(_M_TABLE[int(base[1])])
        return _compose(t, t) if power == "2" else t

    def __repr__(self):
        return f"SymmetryGenerator({self.name})"


_KINDS = ("exchange", "transpose-first", "M1", "M2", "M3", "M1^2", "M2^2", "permute")


def generator(kind, local=None):
    return SymmetryGenerator(kind, local)


FIRST_CATEGORY = tuple(generator(k) for k in ("exchange", "transpose-first", "M1", "M2", "M3"))
SECOND_CATEGORY = tuple(generator(k) for k in ("exchange", "transpose-first", "M1^2", "M2^2"))


def _perm_matrix(p):
    s = np.zeros((3, 3))
    s[list(p), range(3)] = 1
    return s


#: Simultaneous relabelling of the basis on both parties (an extension of the listed generators).
LOCAL_PERMUTATIONS = tuple(generator("permute", _perm_matrix(p))
                           for p in permutations(range(3)) if p != (0, 1, 2))
EXTENDED_DIAGONAL = FIRST_CATEGORY + LOCAL_PERMUTATIONS

GENERATOR_PRESETS = {
    "first": FIRST_CATEGORY,
    "second": SECOND_CATEGORY,
    "extended": EXTENDED_DIAGONAL,
}


def act_matrix(g, m):
    """Matrix-level action on a 9x9 operator."""
    m = np.asarray(m, dtype=complex)
    if g.kind == "transpose-first":
        return partial_transpose_first(m)
    u = g.matrix
    return u @ m @ u.conj().T


def _label_for(labels, i, j):
    for lab in labels:
        if (lab.i, lab.j) == (i, j):
            return lab
    return OperatorLabel(i, j)


def act(g, w):
    """Image of a witness under ``g``, computed on coefficients.

    Labels keep their scale when they move; the name is dropped.
    """
    c = w.coefficient_matrix()
    labels = list(w.terms)
    if g.kind == "exchange":
        out = c.T.copy()
        new_labels = [OperatorLabel(l.j, l.i, l.scale) for l in labels]
    elif g.kind == "transpose-first":
        out = c.copy()
        out[[2, 5, 7], :] *= -1
        new_labels = labels
    elif g.kind == "permute":
        out = coefficients_of(act_matrix(g, assemble(w)))
        new_labels = labels
    else:
        rows = g.row_map()
        out = np.zeros_like(c)
        for k, (t, s) in rows.items():
            out[t, :] = s * c[k, :]
        new_labels = [OperatorLabel(rows[l.i][0], l.j, l.scale) for l in labels]
    # keep only labels whose pair is used once (scale carried over)
    by_pair = {}
    for lab in new_labels:
        by_pair.setdefault((lab.i, lab.j), lab)
    return WitnessCoeffs.from_matrix(out, labels=by_pair.values())


def act_certificate(g, P, Q):
    """Transport ``W = P + Q^{T1}`` to ``g(W) = P' + Q'^{T1}``."""
    P = np.asarray(P, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    if g.kind == "transpose-first":
        return Q.copy(), P.copy()
    if g.kind == "exchange":
        s = swap_permutation()
        return s @ P @ s, (s @ Q @ s).T.copy()
    if g.kind == "permute":
        u = g.matrix
        return u @ P @ u.T, u @ Q @ u.T
    m = g.local_m
    u = np.kron(m, np.eye(3))
    v = np.kron(m.conj(), np.eye(3))
    return u @ P @ u.conj().T, v @ Q @ v.conj().T


@dataclass(frozen=True, eq=False)
class Orbit:
    representative: WitnessCoeffs
    members: Tuple[WitnessCoeffs, ...]
    generators: Tuple[SymmetryGenerator, ...]

    @property
    def size(self):
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, w):
        key = w.canonical_key()
        return any(m.canonical_key() == key for m in self.members)

    def index(self, w):
        key = w.canonical_key()
        for k, m in enumerate(self.members):
            if m.canonical_key() == key:
                return k
        raise ValueError("witness not in orbit")


def orbit(w, gens, cap=DEFAULT_ORBIT_CAP):
    """Breadth-first closure of ``w`` under ``gens``, members in discovery order."""
    gens = tuple(gens)
    seen = {w.canonical_key(): w}
    order = [w]
    queue = deque([w])
    while queue:
        cur = queue.popleft()
        for g in gens:
            img = act(g, cur)
            key = img.canonical_key()
            if key not in seen:
                if len(seen) >= cap:
                    raise OrbitCapError(f"orbit exceeds the cap of {cap} members")
                seen[key] = img
                order.append(img)
                queue.append(img)
    return Orbit(w, tuple(order), gens)


def orbit_with_certificates(w, P, Q, gens, cap=DEFAULT_ORBIT_CAP):
    """Orbit of ``w`` where each member carries a transported ``(P, Q)``."""
    gens = tuple(gens)
    seen = {w.canonical_key(): (w, P, Q)}
    queue = deque([w.canonical_key()])
    while queue:
        cur, p, q = seen[queue.popleft()]
        for g in gens:
            img = act(g, cur)
            key = img.canonical_key()
            if key not in seen:
                if len(seen) >= cap:
                    raise OrbitCapError(f"orbit exceeds the cap of {cap} members")
                p2, q2 = act_certificate(g, p, q)
                seen[key] = (img, p2, q2)
                queue.append(key)
    return seen
