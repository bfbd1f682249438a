"""Feasible-region geometry: expectation maps, vertex catalogs, hyperplanes.

A product state ``gamma = alpha x beta`` maps to the point ``P`` with
``P_l = <gamma| scale_l lambda_i x lambda_j |gamma>`` for each label ``l`` of a
coordinate family. A witness ``d I - sum_l n_l Q_l`` is non-negative on
product states exactly when the plane ``n . P = d`` leaves every feasible
point on its ``n . P <= d`` side.
"""

from dataclasses import dataclass, field
from fractions import Fraction as F
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .exceptions import AffineDependenceError, FamilyMismatchError, RefinementError
from .operators import OperatorLabel, WitnessCoeffs
from .optimize import OptimizerConfig, max_product_expectation
from .states import ProductState
from .su3 import SQRT3, bloch, eigenstate

EXACT_TOL = 1e-12
PLANE_TOL = 1e-10


@dataclass(frozen=True)
class CoordinateFamily:
    """Ordered list of operator labels spanning a coordinate system."""

    name: str
    labels: Tuple[OperatorLabel, ...]

    def __post_init__(self):
        pairs = [(l.i, l.j) for l in self.labels]
        if len(set(pairs)) != len(pairs):
            raise ValueError(f"family {self.name} has repeated labels")
        if any(0 in p for p in pairs):
            raise ValueError("family labels must not involve the identity")

    @property
    def dim(self):
        return len(self.labels)

    def index(self, i, j):
        for k, l in enumerate(self.labels):
            if (l.i, l.j) == (i, j):
                return k
        raise KeyError((i, j))

    def operators(self):
        return np.array([l.matrix for l in self.labels])

    def __str__(self):
        return self.name


def _family(name, pairs, scaled=()):
    return CoordinateFamily(name, tuple(
        OperatorLabel(i, j, SQRT3 if (i, j) in scaled else 1.0) for i, j in pairs))


DIAG = _family("diag", [(k, k) for k in range(1, 9)])
OFFDIAG_A = _family("offdiag-a", [(k, k) for k in range(1, 9)]
                    + [(1, 2), (2, 1), (4, 5), (5, 4), (6, 7), (7, 6)])
OFFDIAG_B = _family("offdiag-b", [(k, k) for k in range(1, 9)] + [(3, 8), (8, 3)],
                    scaled={(3, 8), (8, 3)})
FAMILIES = {f.name: f for f in (DIAG, OFFDIAG_A, OFFDIAG_B)}


def get_family(name):
    try:
        return FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}") from None


@dataclass(frozen=True, eq=False)
class FeasiblePoint:
    """A point of the feasible region, optionally with its generating state and exact value."""

    coords: np.ndarray
    family: CoordinateFamily
    state: Optional[ProductState] = None
    exact: Optional[Tuple[F, ...]] = None
    note: str = ""

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float).reshape(-1)
        if c.shape[0] != self.family.dim:
            raise ValueError(f"{self.family.name} points have {self.family.dim} coordinates, got {c.shape[0]}")
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        if self.state is not None:
            dev = np.max(np.abs(_coords(self.state, self.family) - c))
            if dev > EXACT_TOL:
                raise ValueError(f"coordinates disagree with generating state by {dev:.3e}")

    def __repr__(self):
        vals = self.exact if self.exact is not None else self.coords
        return f"FeasiblePoint({self.family.name}: ({', '.join(str(v) for v in vals)}))"


def _coords(gamma, fam):
    ba = np.concatenate([[1.0], bloch(gamma.alpha)])
    bb = np.concatenate([[1.0], bloch(gamma.beta)])
    return np.array([l.scale * ba[l.i] * bb[l.j] for l in fam.labels])


def expectation_map(gamma, fam):
    """Feasible point of a product state.

    Uses ``<alpha x beta| A x B |alpha x beta> = <A>_alpha <B>_beta``.
    """
    return FeasiblePoint(_coords(gamma, fam), fam, state=gamma)


# ---------------------------------------------------------------- catalogs

def _e(k, m):
    return eigenstate(k, m)


_TOP = np.array([0, 0, 1], dtype=complex)     # |lambda_8; -2/sqrt3>
_R0 = np.array([1, 0, 0], dtype=complex)      # |lambda_3; +1>, also |lambda_8; 1/sqrt3>
_R1 = np.array([0, 1, 0], dtype=complex)      # |lambda_3; -1>


def _row(fam, values, alpha, beta, note=""):
    exact = [F(0)] * fam.dim
    for (i, j), v in values.items():
        exact[fam.index(i, j)] = F(v)
    gamma = ProductState(alpha, beta)
    pt = FeasiblePoint(np.array([float(x) for x in exact]), fam, state=gamma,
                       exact=tuple(exact), note=note)
    return pt


def _diagonal_rows(fam):
    rows = []
    for k in (1, 2, 3):
        for s in (1, -1):
            rows.append(_row(fam, {(k, k): s, (8, 8): F(1, 3)}, _e(k, 1), _e(k, s),
                             f"|l{k};+1>|l{k};{s:+d}>"))
    for k in (4, 5, 6, 7):
        for s in (1, -1):
            rows.append(_row(fam, {(3, 3): F(1, 4), (k, k): s, (8, 8): F(1, 12)}, _e(k, 1), _e(k, s),
                             f"|l{k};+1>|l{k};{s:+d}>"))
    return rows


@lru_cache(maxsize=None)
def vertex_catalog(fam):
    """Vertices listed for a built-in family, each re-derived from its product state.

    The tables print ``+-`` rows; both signs are expanded. Coordinates are
    stored exactly (``Fraction``) and checked against the expectation map.
    """
    fam = fam if isinstance(fam, CoordinateFamily) else get_family(fam)
    rows = []
    if fam is DIAG:
        rows += _diagonal_rows(fam)
    elif fam is OFFDIAG_A:
        for k in (1, 2, 3):
            for s in (1, -1):
                rows.append(_row(fam, {(k, k): s, (8, 8): F(1, 3)}, _e(k, 1), _e(k, s),
                                 f"|l{k};+1>|l{k};{s:+d}>"))
        for i, j in ((1, 2), (2, 1)):
            for s in (1, -1):
                rows.append(_row(fam, {(8, 8): F(1, 3), (i, j): s}, _e(i, 1), _e(j, s),
                                 f"|l{i};+1>|l{j};{s:+d}>"))
        for k in (4, 5, 6, 7):
            for s in (1, -1):
                rows.append(_row(fam, {(3, 3): F(1, 4), (k, k): s, (8, 8): F(1, 12)}, _e(k, 1), _e(k, s),
                                 f"|l{k};+1>|l{k};{s:+d}>"))
        for i, j in ((4, 5), (5, 4), (6, 7), (7, 6)):
            for s in (1, -1):
                rows.append(_row(fam, {(3, 3): F(1, 4), (8, 8): F(1, 12), (i, j): s}, _e(i, 1), _e(j, s),
                                 f"|l{i};+1>|l{j};{s:+d}>"))
    elif fam is OFFDIAG_B:
        for k in (1, 2):
            for s in (1, -1):
                rows.append(_row(fam, {(k, k): s, (8, 8): F(1, 3)}, _e(k, 1), _e(k, s),
                                 f"|l{k};+1>|l{k};{s:+d}>"))
        for s in (1, -1):
            rows.append(_row(fam, {(3, 3): 1, (8, 8): F(1, 3), (3, 8): s, (8, 3): s},
                             _e(3, s), _e(3, s), f"|l3;{s:+d}>|l3;{s:+d}>"))
        for s in (1, -1):
            rows.append(_row(fam, {(3, 3): -1, (8, 8): F(1, 3), (3, 8): s, (8, 3): -s},
                             _e(3, s), _e(3, -s), f"|l3;{s:+d}>|l3;{-s:+d}>"))
        for k, c in ((4, F(-1, 4)), (5, F(-1, 4)), (6, F(1, 4)), (7, F(1, 4))):
            for s in (1, -1):
                rows.append(_row(fam, {(3, 3): F(1, 4), (k, k): s, (8, 8): F(1, 12), (3, 8): c, (8, 3): c},
                                 _e(k, 1), _e(k, s), f"|l{k};+1>|l{k};{s:+d}>"))
    else:
        raise FamilyMismatchError(f"no catalog for custom family {fam.name}")

    rows.append(_row(fam, {(8, 8): F(4, 3)}, _TOP, _TOP, "|l8;-2/sqrt3>|l8;-2/sqrt3>"))
    if fam is OFFDIAG_B:
        # the lambda_8 eigenvalue 1/sqrt3 is degenerate; the +-2 entries fix the representative
        for s, rep in ((2, _R1), (-2, _R0)):
            rows.append(_row(fam, {(8, 8): F(-2, 3), (3, 8): s}, rep, _TOP,
                             f"|l8;1/sqrt3>|l8;-2/sqrt3> with first factor {rep.real.astype(int)}"))
        for s, rep in ((2, _R1), (-2, _R0)):
            rows.append(_row(fam, {(8, 8): F(-2, 3), (8, 3): s}, _TOP, rep,
                             f"|l8;-2/sqrt3>|l8;1/sqrt3> with second factor {rep.real.astype(int)}"))
    else:
        rows.append(_row(fam, {(8, 8): F(-2, 3)}, _R0, _TOP, "|l8;1/sqrt3>|l8;-2/sqrt3>"))
    return tuple(rows)


_OMEGA = np.exp(2j * np.pi / 3)


def _b(values, alpha, beta, note=""):
    a = np.asarray(alpha, dtype=complex)
    b = np.asarray(beta, dtype=complex)
    return _row(OFFDIAG_B, values, a / np.linalg.norm(a), b / np.linalg.norm(b), note)


@lru_cache(maxsize=None)
def tangent_vertices():
    """The ten points through which the reference second-category plane passes."""
    s3, s7 = np.sqrt(3.0), np.sqrt(7.0)
    u = [np.sqrt(32.0), np.sqrt(77.0), 9.0]
    return (
        _b({(3, 3): -1, (8, 8): F(1, 3), (3, 8): 1, (8, 3): -1}, [1, 0, 0], [0, 1, 0]),
        _b({(8, 8): F(-2, 3), (3, 8): 2}, [0, 1, 0], [0, 0, 1]),
        _b({(8, 8): F(-2, 3), (8, 3): -2}, [0, 0, 1], [1, 0, 0]),
        _b({(1, 1): F(4, 9), (4, 4): F(4, 9), (6, 6): F(4, 9)}, [1, 1, 1], [1, 1, 1]),
        _b({(1, 1): F(4, 9), (4, 4): F(1, 9), (5, 5): F(-1, 3), (6, 6): F(1, 9), (7, 7): F(-1, 3)},
           [1, 1, _OMEGA], [1, 1, np.conj(_OMEGA)]),
        _b({(2, 2): F(-4, 9), (5, 5): F(-4, 9), (6, 6): F(4, 9)}, [1j, 1, 1], [-1j, 1, 1]),
        _b({(2, 2): F(-4, 9), (4, 4): F(4, 9), (7, 7): F(-4, 9)}, [1, 1j, 1], [1, -1j, 1]),
        _b({(3, 3): F(3, 16), (6, 6): F(3, 4), (8, 8): F(-5, 48), (3, 8): F(15, 16), (8, 3): F(-1, 16)},
           [0, s3, 1], [0, 1, s3]),
        _b({(1, 1): F(64, 225), (4, 4): F(112, 225), (6, 6): F(112, 225), (8, 8): F(4, 75)},
           [2, 2, s7], [2, 2, s7]),
        _b({(1, 1): F(2464, 9025), (3, 3): F(81, 1444), (4, 4): F(2592, 9025), (6, 6): F(6237, 9025),
            (8, 8): F(2809, 108300), (3, 8): F(477, 7220), (8, 3): F(477, 7220)}, u, u),
    )


@lru_cache(maxsize=None)
def seed_upper():
    """Ten starting vertices for the plane aimed at ``3 < b <= 4``."""
    return (
        _b({(1, 1): 1, (8, 8): F(1, 3)}, _e(1, 1), _e(1, 1)),
        _b({(2, 2): -1, (8, 8): F(1, 3)}, _e(2, 1), _e(2, -1)),
        _b({(3, 3): -1, (8, 8): F(1, 3), (3, 8): 1, (8, 3): -1}, _e(3, 1), _e(3, -1)),
        _b({(3, 3): F(1, 4), (4, 4): 1, (8, 8): F(1, 12), (3, 8): F(-1, 4), (8, 3): F(-1, 4)}, _e(4, 1), _e(4, 1)),
        _b({(3, 3): F(1, 4), (5, 5): -1, (8, 8): F(1, 12), (3, 8): F(-1, 4), (8, 3): F(-1, 4)}, _e(5, 1), _e(5, -1)),
        _b({(3, 3): F(1, 4), (6, 6): 1, (8, 8): F(1, 12), (3, 8): F(1, 4), (8, 3): F(1, 4)}, _e(6, 1), _e(6, 1)),
        _b({(3, 3): F(1, 4), (7, 7): -1, (8, 8): F(1, 12), (3, 8): F(1, 4), (8, 3): F(1, 4)}, _e(7, 1), _e(7, -1)),
        _b({(8, 8): F(-2, 3), (3, 8): 2}, _R1, _TOP),
        _b({(8, 8): F(-2, 3), (8, 3): -2}, _TOP, _R0),
        _b({(8, 8): F(4, 3)}, _TOP, _TOP),
    )


@lru_cache(maxsize=None)
def seed_lower():
    """Tangent vertices with points 1-3 and 8 replaced; aimed at ``1 <= b < 2``."""
    pts = list(tangent_vertices())
    pts[0] = _b({(3, 3): -1, (8, 8): F(1, 3), (3, 8): -1, (8, 3): 1}, _R1, _R0)
    pts[1] = _b({(8, 8): F(-2, 3), (3, 8): -2}, _R0, _TOP)
    pts[2] = _b({(8, 8): F(-2, 3), (8, 3): 2}, _TOP, _R1)
    eighth = tangent_vertices()[7].state
    pts[7] = _b({(3, 3): F(3, 16), (6, 6): F(3, 4), (8, 8): F(-5, 48), (3, 8): F(-1, 16), (8, 3): F(15, 16)},
                eighth.beta, eighth.alpha)
    return tuple(pts)


# ---------------------------------------------------------------- hyperplanes

@dataclass(frozen=True, eq=False)
class Hyperplane:
    """The plane ``normal . P = offset`` with feasible side ``normal . P <= offset``.

    Gauge: ``offset = 1`` whenever the plane misses the origin, otherwise
    ``offset = 0`` and ``|normal| = 1``.
    """

    normal: np.ndarray
    offset: float
    family: CoordinateFamily

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float).reshape(-1)
        if n.shape[0] != self.family.dim:
            raise ValueError("normal length does not match the family")
        if not np.linalg.norm(n) > 0:
            raise ValueError("hyperplane normal must be nonzero")
        n = n.copy()
        n.setflags(write=False)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def normalized(cls, normal, offset, family, interior=None):
        n = np.asarray(normal, dtype=float)
        d = float(offset)
        scale = max(np.linalg.norm(n), abs(d))
        if abs(d) > 1e-12 * scale:
            return cls(n / d, 1.0, family)
        n = n / np.linalg.norm(n)
        if interior is not None and n @ np.asarray(interior, dtype=float) > 0:
            n = -n
        return cls(n, 0.0, family)

    def level(self, points):
        """``normal . P`` for a point, a FeasiblePoint or a stack of coordinates."""
        return np.asarray(_coords_of(points)) @ self.normal

    def margin(self, points):
        """``offset - normal . P``; non-negative on the feasible side."""
        return self.offset - self.level(points)

    def functional(self):
        """9x9 operator ``sum_l n_l Q_l`` whose product-state maximum locates the boundary."""
        return np.einsum("l,lab->ab", self.normal, self.family.operators())

    def same_plane(self, other, tol=1e-10):
        return (self.family == other.family and abs(self.offset - other.offset) <= tol
                and np.allclose(self.normal, other.normal, rtol=0, atol=tol))


def _coords_of(points):
    if isinstance(points, FeasiblePoint):
        return points.coords
    if isinstance(points, (list, tuple)) and points and isinstance(points[0], FeasiblePoint):
        return np.array([p.coords for p in points])
    return np.asarray(points, dtype=float)


def _check_family(points):
    fams = {p.family for p in points}
    if len(fams) != 1:
        raise FamilyMismatchError(f"points come from several families: {sorted(f.name for f in fams)}")
    return fams.pop()


def hyperplane_through(points):
    """Unique hyperplane through ``dim`` affinely independent feasible points."""
    points = list(points)
    if not points:
        raise AffineDependenceError("no points given")
    fam = _check_family(points)
    if len(points) != fam.dim:
        raise AffineDependenceError(
            f"{fam.name} needs exactly {fam.dim} points to fix a hyperplane, got {len(points)}")
    X = np.array([p.coords for p in points])
    for a in range(len(X)):
        for b in range(a + 1, len(X)):
            if np.allclose(X[a], X[b], rtol=0, atol=1e-12):
                raise AffineDependenceError(f"points {a} and {b} coincide", dependency=(a, b))
    A = np.hstack([X, -np.ones((len(X), 1))])
    _, s, vt = np.linalg.svd(A)
    # A has dim rows and dim+1 columns: one null direction is guaranteed
    if s[-1] < 1e-10 * max(s[0], 1.0):
        # affine dependency sum c_k x_k = 0, sum c_k = 0 in the left null space
        B = np.vstack([X.T, np.ones(len(X))])
        _, sb, vbt = np.linalg.svd(B)
        c = vbt[-1]
        c = c / np.max(np.abs(c))
        involved = [k for k in range(len(c)) if abs(c[k]) > 1e-9]
        raise AffineDependenceError(
            f"points {involved} are affinely dependent (coefficients "
            f"{', '.join(f'{c[k]:+.4g}' for k in involved)})", dependency=tuple(c))
    v = vt[-1]
    h = Hyperplane.normalized(v[:-1], v[-1], fam, interior=np.zeros(fam.dim))
    worst = np.max(np.abs(h.margin(X)))
    if worst > PLANE_TOL:
        raise AffineDependenceError(f"ill-conditioned point set: fit residual {worst:.3e}")
    return h


def facet_to_witness(h, offset_override=None, name=None):
    """``W = d I - sum_l n_l Q_l``; ``d`` defaults to the plane offset."""
    d = h.offset if offset_override is None else float(offset_override)
    terms = {lab: -float(c) for lab, c in zip(h.family.labels, h.normal)}
    return WitnessCoeffs(d, terms, name=name)


def witness_functional(w, fam):
    """``(a0, a)`` with ``Tr(W gamma) = a0 + a . P(gamma)`` over the family.

    Raises ``FamilyMismatchError`` if ``w`` has a term outside the family.
    """
    a = np.zeros(fam.dim)
    for lab, coef in w.terms.items():
        if coef == 0:
            continue
        try:
            k = fam.index(lab.i, lab.j)
        except KeyError:
            raise FamilyMismatchError(f"term {lab} is not a coordinate of family {fam.name}") from None
        a[k] = coef * lab.scale / fam.labels[k].scale
    return w.a0, a


def min_over_vertices(w, catalog):
    """Minimum of ``a0 + a . P`` over a catalog; returns ``(value, vertex)``."""
    catalog = list(catalog)
    if not catalog:
        raise ValueError("empty catalog")
    fam = _check_family(catalog)
    a0, a = witness_functional(w, fam)
    vals = a0 + np.array([p.coords for p in catalog]) @ a
    k = int(np.argmin(vals))
    return float(vals[k]), catalog[k]


# ---------------------------------------------------------------- diagonal census

def diag_case(bits):
    """Case tag of a sign pattern ``(i1..i8)`` with ``i3 = i8 = 0``.

    ``a``: all three pairs (1,2), (4,5), (6,7) equal; ``b``: none equal;
    ``c``: exactly one equal; ``d``: exactly two equal.
    """
    i1, i2, i3, i4, i5, i6, i7, i8 = bits
    if i3 or i8:
        raise ValueError("diagonal facets need i3 = i8 = 0")
    equal = (i1 == i2) + (i4 == i5) + (i6 == i7)
    return "bcda"[equal]


def diag_patterns():
    """All 64 sign patterns with ``i3 = i8 = 0`` in lexicographic order."""
    out = []
    for n in range(64):
        b = [(n >> (5 - k)) & 1 for k in range(6)]
        out.append((b[0], b[1], 0, b[2], b[3], b[4], b[5], 0))
    return out


def classify_diag_facets(cfg=None):
    """Classify every exact diagonal facet; returns ``[(bits, case, report), ...]``.

    Raises ``QutritWitnessError`` when a verdict contradicts the case tag.
    """
    from .classification import classify_diag_facet

    return [classify_diag_facet(bits, cfg) for bits in diag_patterns()]


# ---------------------------------------------------------------- refinement

@dataclass(frozen=True, eq=False)
class RefinementStep:
    iteration: int
    points: Tuple[Tuple[float, ...], ...]
    normal: np.ndarray
    offset: float
    maximum: float
    maximizer: Tuple[float, ...]
    swapped: Optional[int] = None
    lookahead: Tuple[Tuple[int, float], ...] = ()

    @property
    def excess(self):
        return self.maximum - self.offset


@dataclass(frozen=True, eq=False)
class RefinementResult:
    hyperplane: Hyperplane
    witness: WitnessCoeffs
    trace: Tuple[RefinementStep, ...]
    points: Tuple[FeasiblePoint, ...] = field(default=())

    @property
    def n_iter(self):
        return len(self.trace) - 1


def _point_key(points):
    return tuple(sorted(tuple(np.round(p.coords, 9)) for p in points))


def refine_facet(seed, fam=None, cfg=None, max_iters=200, tol=1e-9, lookahead_restarts=16):
    """Push a plane through ``seed`` outwards until it touches the feasible region.

    Each iteration fits the plane through the current points and maximizes
    its functional over product states. If the maximum exceeds the plane
    level by more than ``tol``, the maximizer's point replaces one current
    point. Only swaps whose removed point stays on the feasible side of the new
    plane are admissible; among them the one whose next plane has the
    smallest product-state maximum wins (ties: lowest index).

    Returns a :class:`RefinementResult` whose witness has offset equal to the
    certified maximum. Raises ``RefinementError`` (carrying the trace and the
    tangent witness of the best plane seen) after ``max_iters`` iterations or
    when a point set repeats.
    """
    pts = list(seed)
    fam = fam or _check_family(pts)
    if _check_family(pts) != fam:
        raise FamilyMismatchError("seed points do not belong to the requested family")
    cfg = cfg or OptimizerConfig()
    look_cfg = OptimizerConfig(restarts=lookahead_restarts, seed=cfg.seed + 1,
                               seesaw_tol=cfg.seesaw_tol, max_alternations=cfg.max_alternations)
    trace = []
    seen = {_point_key(pts)}
    best = None
    for it in range(max_iters + 1):
        h = hyperplane_through(pts)
        res = max_product_expectation(h.functional(), cfg)
        top = expectation_map(res.state, fam)
        tangent = facet_to_witness(h, offset_override=res.value)
        if best is None or res.value - h.offset < best[0]:
            best = (res.value - h.offset, tangent)
        step = dict(iteration=it, points=tuple(tuple(p.coords) for p in pts), normal=h.normal,
                    offset=h.offset, maximum=res.value, maximizer=tuple(top.coords))
        if res.value - h.offset <= tol:
            trace.append(RefinementStep(**step))
            return RefinementResult(h, tangent, tuple(trace), tuple(pts))
        if it == max_iters:
            trace.append(RefinementStep(**step))
            break
        scores = []
        for k in range(len(pts)):
            trial = pts[:k] + [top] + pts[k + 1:]
            try:
                h2 = hyperplane_through(trial)
            except AffineDependenceError:
                continue
            if h2.margin(pts[k]) < -tol:
                continue
            v2 = max_product_expectation(h2.functional(), look_cfg).value
            scores.append((v2 - h2.offset, k))
        if not scores:
            trace.append(RefinementStep(**step))
            raise RefinementError(f"iteration {it}: no admissible swap for the maximizer",
                                  trace=trace, best=best[1])
        _, k = min(scores)
        trace.append(RefinementStep(**step, swapped=k, lookahead=tuple((j, s) for s, j in scores)))
        pts[k] = top
        key = _point_key(pts)
        if key in seen:
            raise RefinementError(f"iteration {it}: point set repeated (cycle)", trace=trace, best=best[1])
        seen.add(key)
    raise RefinementError(
        f"no tangent plane after {max_iters} iterations (last excess {trace[-1].excess:.3e})",
        trace=trace, best=best[1])


def tangent_witness(points, cfg=None, name=None):
    """Witness of the plane parallel to the one through ``points`` and tangent to the region."""
    h = hyperplane_through(points)
    res = max_product_expectation(h.functional(), cfg)
    return facet_to_witness(h, offset_override=res.value, name=name), res
