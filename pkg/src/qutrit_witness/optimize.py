"""Extremization of ``<alpha x beta| W |alpha x beta>`` over pure product states.

The main routine is a multi-start seesaw: with ``alpha`` fixed the objective
is a 3x3 Hermitian form in ``beta`` (and vice versa), so each half-step is an
exact eigenvalue problem. Restarts are batched so that all of them advance
together through ``numpy.linalg.eigh``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.optimize import minimize

from ._validation import check_operator, check_unit_vector
from .exceptions import ConvergenceError
from .states import ProductState


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    seesaw_tol: float = 1e-12
    max_alternations: int = 500
    seed: int = 0
    cluster_tol: float = 1e-8
    threads: int = 1
    polish: bool = True

    def __post_init__(self):
        for name in ("restarts", "max_alternations", "threads"):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        for name in ("seesaw_tol", "cluster_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass(frozen=True)
class RestartEndpoint:
    index: int
    value: float
    alternations: int
    converged: bool


@dataclass(frozen=True, eq=False)
class ExtremumResult:
    """Best clustered extremum; ``restarts_agreeing`` counts restarts within ``cluster_tol``."""

    value: float
    state: ProductState
    restarts_agreeing: int
    trace: List[RestartEndpoint] = field(default_factory=list)


class _Contractor:
    """Partial contractions of a 9x9 operator with one party's projector.

    ``first(alpha)[n] = sum_ij conj(a_ni) a_nj W[(i,k),(j,l)]`` and
    ``second(beta)`` likewise over the second index pair; both are single
    matrix products against a reshaped copy of ``W``.
    """

    def __init__(self, wm):
        w4 = np.asarray(wm, dtype=complex).reshape(3, 3, 3, 3)
        self.w4 = w4
        self._first = w4.transpose(0, 2, 1, 3).reshape(9, 9)   # (i j),(k l)
        self._second = w4.transpose(1, 3, 0, 2).reshape(9, 9)  # (k l),(i j)

    @staticmethod
    def _outer(v):
        return (v.conj()[:, :, None] * v[:, None, :]).reshape(len(v), 9)

    def first(self, alpha):
        return (self._outer(alpha) @ self._first).reshape(-1, 3, 3)

    def second(self, beta):
        return (self._outer(beta) @ self._second).reshape(-1, 3, 3)


def _phase_fix(vecs):
    # first component with modulus > 1e-12 made real positive, per column set
    out = vecs.copy()
    mags = np.abs(out)
    idx = np.argmax(mags > 1e-12, axis=-1)
    lead = np.take_along_axis(out, idx[..., None], axis=-1)
    return out * (np.abs(lead) / lead)


def _min_eig(forms, fix=False):
    vals, vecs = np.linalg.eigh(forms)
    v = vecs[..., :, 0]
    return vals[..., 0], _phase_fix(v) if fix else v


def seesaw_step(w, alpha):
    """Optimal ``beta`` for fixed ``alpha`` and the attained value."""
    wm = check_operator(w)
    a = check_unit_vector(alpha, 3, name="alpha")
    vals, vecs = _min_eig(_Contractor(wm).first(a[None, :]), fix=True)
    return vecs[0], float(vals[0])


def _product_value(wm, alpha, beta):
    v = np.kron(alpha, beta)
    return float(np.vdot(v, wm @ v).real)


def _initial_pairs(cfg, indices):
    alphas, betas = [], []
    for idx in indices:
        rng = np.random.default_rng([cfg.seed, idx])
        z = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        alphas.append(z[0])
        betas.append(z[1])
    return np.array(alphas), np.array(betas)


def _run_batch(con, cfg, indices, start=None, max_alternations=None):
    alpha, beta = start if start is not None else _initial_pairs(cfg, indices)
    alpha, beta = alpha.copy(), beta.copy()
    n = len(alpha)
    prev = np.full(n, np.inf)
    quiet = np.zeros(n, dtype=int)
    done = np.zeros(n, dtype=bool)
    steps = np.zeros(n, dtype=int)
    for _ in range(max_alternations or cfg.max_alternations):
        active = ~done
        if not active.any():
            break
        a = alpha[active]
        _, b = _min_eig(con.first(a))
        vals, a = _min_eig(con.second(b))
        alpha[active], beta[active] = a, b
        improvement = prev[active] - vals
        q = np.where(improvement < cfg.seesaw_tol, quiet[active] + 1, 0)
        quiet[active] = q
        prev[active] = vals
        steps[active] += 1
        done[active] = q >= 3
    return _phase_fix(alpha), _phase_fix(beta), prev, steps, done


def _value_and_grad(con, x):
    # objective on unnormalized (alpha, beta) packed as real/imag parts
    a = x[0:3] + 1j * x[3:6]
    b = x[6:9] + 1j * x[9:12]
    na, nb = np.vdot(a, a).real, np.vdot(b, b).real
    ma = con.first(a[None, :])[0] / na
    f = np.vdot(b, ma @ b).real / nb
    mb = con.second(b[None, :])[0] / nb
    ga = 2 * (mb @ a - f * a) / na
    gb = 2 * (ma @ b - f * b) / nb
    return f, np.concatenate([ga.real, ga.imag, gb.real, gb.imag])


def _polish(con, cfg, alpha, beta):
    """BFGS from a seesaw endpoint, confirmed by a short seesaw run.

    Seesaw converges only linearly near flat extrema; the gradient polish
    removes that tail. Returns ``(alpha, beta, value, converged)``.
    """
    x0 = np.concatenate([alpha.real, alpha.imag, beta.real, beta.imag])
    res = minimize(lambda x: _value_and_grad(con, x), x0, jac=True, method="BFGS",
                   options={"gtol": 1e-12, "maxiter": 1000})
    a = res.x[0:3] + 1j * res.x[3:6]
    b = res.x[6:9] + 1j * res.x[9:12]
    a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
    out = _run_batch(con, cfg, None, start=(a[None, :], b[None, :]),
                     max_alternations=min(cfg.max_alternations, 50))
    return out[0][0], out[1][0], float(out[2][0]), bool(out[4][0])


def seesaw_history(w, alpha0, beta0, alternations=50):
    """Objective after every half-step of a single seesaw run (for monotonicity checks)."""
    wm = check_operator(w)
    con = _Contractor(wm)
    a = check_unit_vector(alpha0, 3, name="alpha0")[None, :]
    b = check_unit_vector(beta0, 3, name="beta0")[None, :]
    hist = [_product_value(wm, a[0], b[0])]
    for _ in range(alternations):
        v, b = _min_eig(con.first(a))
        hist.append(float(v[0]))
        v, a = _min_eig(con.second(b))
        hist.append(float(v[0]))
    return np.array(hist)


def min_product_expectation(w, cfg=None):
    """Multi-start seesaw minimum of ``<gamma|W|gamma>`` over product states.

    Global optimality is only claimed as the best of ``cfg.restarts`` runs;
    ``restarts_agreeing`` reports how many landed within ``cfg.cluster_tol``.
    """
    cfg = cfg or OptimizerConfig()
    wm = check_operator(w)
    con = _Contractor(wm)
    idx = np.arange(cfg.restarts)
    chunks = np.array_split(idx, min(cfg.threads, cfg.restarts))
    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            parts = list(pool.map(lambda c: _run_batch(con, cfg, c), chunks))
    else:
        parts = [_run_batch(con, cfg, c) for c in chunks]
    alpha = np.concatenate([p[0] for p in parts])
    beta = np.concatenate([p[1] for p in parts])
    vals = np.concatenate([p[2] for p in parts])
    steps = np.concatenate([p[3] for p in parts])
    conv = np.concatenate([p[4] for p in parts])
    first = min(range(len(vals)), key=lambda i: (vals[i], i))
    if cfg.polish:
        a, b, v, ok = _polish(con, cfg, alpha[first], beta[first])
        if v <= vals[first] + cfg.cluster_tol and (ok or not conv[first]):
            alpha[first], beta[first], vals[first] = a, b, v
            conv[first] = conv[first] or ok
    if not conv.any():
        raise ConvergenceError(
            f"no seesaw restart converged within {cfg.max_alternations} alternations "
            f"(best value {vals.min():.6g})"
        )
    trace = [RestartEndpoint(int(i), float(v), int(s), bool(c))
             for i, v, s, c in zip(idx, vals, steps, conv)]
    # deterministic merge by (value, restart index) over converged restarts
    order = sorted(np.flatnonzero(conv), key=lambda i: (vals[i], i))
    best = order[0]
    state = ProductState.normalized(alpha[best], beta[best])
    value = _product_value(wm, state.alpha, state.beta)
    agreeing = int(np.sum(conv & (np.abs(vals - vals[best]) <= cfg.cluster_tol)))
    return ExtremumResult(value=value, state=state, restarts_agreeing=max(agreeing, 1), trace=trace)


def max_product_expectation(w, cfg=None):
    """Maximum over product states, computed as ``-min(-W)``."""
    wm = check_operator(w)
    res = min_product_expectation(-wm, cfg)
    return ExtremumResult(-res.value, res.state, res.restarts_agreeing, res.trace)


def parametrized_vector(theta, phi, delta1, delta2):
    """``(cos t, e^{i d1} sin t cos p, e^{i d2} sin t sin p)`` on the unit sphere."""
    st = np.sin(theta)
    return np.stack([
        np.cos(theta) + 0j,
        np.exp(1j * delta1) * st * np.cos(phi),
        np.exp(1j * delta2) * st * np.sin(phi),
    ], axis=-1)


@dataclass(frozen=True, eq=False)
class ScanResult:
    value: float
    state: ProductState
    grid_value: float
    resolution: int
    maximize: bool


def parametrized_scan(w, resolution=64, phase_resolution=None, polish=True, maximize=False):
    """Coarse grid oracle for the product-state extremum.

    ``alpha`` runs over a grid in two angles and two relative phases; for each
    grid point the ``beta`` side is solved exactly as a 3x3 eigenproblem. The
    best grid point is then polished with Nelder-Mead over both vectors.
    """
    if int(resolution) != resolution or resolution < 8:
        raise ValueError("resolution must be an integer >= 8")
    wm = check_operator(w)
    sign = -1.0 if maximize else 1.0
    wm_s = sign * wm
    con = _Contractor(wm_s)
    pres = phase_resolution or max(8, resolution // 4)
    t = np.linspace(0, np.pi / 2, resolution)
    ph = np.linspace(0, 2 * np.pi, pres, endpoint=False)
    T, P, D1, D2 = np.meshgrid(t, t, ph, ph, indexing="ij")
    alphas = parametrized_vector(T.ravel(), P.ravel(), D1.ravel(), D2.ravel())
    best_v, best_i = np.inf, 0
    for start in range(0, len(alphas), 200_000):
        chunk = alphas[start:start + 200_000]
        forms = con.first(chunk)
        vals = np.linalg.eigvalsh(forms)[:, 0]
        i = int(np.argmin(vals))
        if vals[i] < best_v:
            best_v, best_i = float(vals[i]), start + i
    alpha = alphas[best_i]
    beta, _ = seesaw_step(wm_s, alpha)
    grid_value = best_v
    if polish:
        def f(x):
            a = x[0:3] + 1j * x[3:6]
            b = x[6:9] + 1j * x[9:12]
            na, nb = np.linalg.norm(a), np.linalg.norm(b)
            if na < 1e-9 or nb < 1e-9:
                return np.inf
            return _product_value(wm_s, a / na, b / nb)

        x0 = np.concatenate([alpha.real, alpha.imag, beta.real, beta.imag])
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 20000})
        if res.fun < grid_value:
            a = res.x[0:3] + 1j * res.x[3:6]
            b = res.x[6:9] + 1j * res.x[9:12]
            alpha, beta = a / np.linalg.norm(a), b / np.linalg.norm(b)
    state = ProductState.normalized(alpha, beta)
    value = _product_value(wm, state.alpha, state.beta)
    return ScanResult(value=value, state=state, grid_value=sign * grid_value,
                      resolution=int(resolution), maximize=maximize)
