"""scikit-learn style front ends for the optimizer, the refinement loop and classification."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_density_batch, check_operator
from .classification import classify
from .feasible import FeasiblePoint, get_family, refine_facet
from .operators import WitnessCoeffs, assemble
from .optimize import OptimizerConfig, max_product_expectation, min_product_expectation
from .presets import load_preset


def _config(est):
    return OptimizerConfig(
        restarts=est.restarts,
        seesaw_tol=est.seesaw_tol,
        max_alternations=est.max_alternations,
        seed=est.random_state,
        cluster_tol=est.cluster_tol,
        threads=est.n_jobs,
    )


class ProductStateMinimizer(BaseEstimator):
    """Minimize (or maximize) ``<alpha x beta|W|alpha x beta>``.

    ``fit(W)`` accepts a 9x9 Hermitian array or a ``WitnessCoeffs`` and sets
    ``value_``, ``state_``, ``restarts_agreeing_`` and ``trace_``.
    """

    def __init__(self, restarts=64, seesaw_tol=1e-12, max_alternations=500,
                 random_state=0, cluster_tol=1e-8, n_jobs=1, maximize=False):
        self.restarts = restarts
        self.seesaw_tol = seesaw_tol
        self.max_alternations = max_alternations
        self.random_state = random_state
        self.cluster_tol = cluster_tol
        self.n_jobs = n_jobs
        self.maximize = maximize

    def fit(self, W, y=None):
        wm = check_operator(W)
        run = max_product_expectation if self.maximize else min_product_expectation
        res = run(wm, _config(self))
        self.operator_ = wm
        self.value_ = res.value
        self.state_ = res.state
        self.restarts_agreeing_ = res.restarts_agreeing
        self.trace_ = res.trace
        return self

    def transform(self, states):
        """Expectation of the fitted operator on a batch of product states."""
        check_is_fitted(self, "value_")
        vecs = np.array([s.vector for s in states])
        return np.einsum("ni,ij,nj->n", vecs.conj(), self.operator_, vecs).real


def _as_points(X, family):
    pts = []
    for x in X:
        if isinstance(x, FeasiblePoint):
            pts.append(x)
        else:
            pts.append(FeasiblePoint(np.asarray(x, dtype=float), family))
    return pts


class FacetRefiner(BaseEstimator):
    """Refine a seed hyperplane until it is tangent to the feasible region.

    ``fit(X)`` takes ``dim`` seed points (``FeasiblePoint`` objects or raw
    coordinate rows). On success it sets ``hyperplane_``, ``witness_``,
    ``trace_``, ``points_`` and ``n_iter_``; failures raise
    ``RefinementError`` with the partial trace attached.
    """

    def __init__(self, family="offdiag-b", max_iter=200, tol=1e-9, restarts=64,
                 seesaw_tol=1e-12, max_alternations=500, random_state=0,
                 cluster_tol=1e-8, n_jobs=1, lookahead_restarts=16):
        self.family = family
        self.max_iter = max_iter
        self.tol = tol
        self.restarts = restarts
        self.seesaw_tol = seesaw_tol
        self.max_alternations = max_alternations
        self.random_state = random_state
        self.cluster_tol = cluster_tol
        self.n_jobs = n_jobs
        self.lookahead_restarts = lookahead_restarts

    def fit(self, X, y=None):
        fam = get_family(self.family) if isinstance(self.family, str) else self.family
        pts = _as_points(X, fam)
        res = refine_facet(pts, fam, _config(self), max_iters=self.max_iter, tol=self.tol,
                           lookahead_restarts=self.lookahead_restarts)
        self.family_ = fam
        self.hyperplane_ = res.hyperplane
        self.witness_ = res.witness
        self.trace_ = res.trace
        self.points_ = res.points
        self.n_iter_ = res.n_iter
        return self

    def decision_function(self, X):
        """Signed distance ``a0 - n . P`` to the tangent plane; negative means outside."""
        check_is_fitted(self, "witness_")
        P = np.array([p.coords if isinstance(p, FeasiblePoint) else p for p in X], dtype=float)
        return self.witness_.a0 - P @ self.hyperplane_.normal

    def predict(self, X):
        """1 for points on the feasible side of the tangent plane, -1 otherwise."""
        return np.where(self.decision_function(X) >= -self.tol, 1, -1)


class EntanglementWitness(BaseEstimator):
    """A witness operator used as a detector of entangled states.

    ``witness`` is a ``WitnessCoeffs`` or a preset name. ``fit()`` classifies
    it (setting ``report_``); ``decision_function`` returns ``Tr(W rho)``
    and ``predict`` flags states with expectation below ``-tol``.
    """

    def __init__(self, witness="eq14", tol=1e-10, restarts=64, seesaw_tol=1e-12,
                 max_alternations=500, random_state=0, cluster_tol=1e-8, n_jobs=1,
                 probes=True):
        self.witness = witness
        self.tol = tol
        self.restarts = restarts
        self.seesaw_tol = seesaw_tol
        self.max_alternations = max_alternations
        self.random_state = random_state
        self.cluster_tol = cluster_tol
        self.n_jobs = n_jobs
        self.probes = probes

    def _resolve(self):
        w = self.witness
        if isinstance(w, str):
            return load_preset(w)
        if not isinstance(w, WitnessCoeffs):
            raise TypeError("witness must be a WitnessCoeffs or a preset name")
        return w

    def fit(self, X=None, y=None):
        w = self._resolve()
        self.witness_ = w
        self.matrix_ = assemble(w)
        self.report_ = classify(w, _config(self), probes=self.probes)
        return self

    def decision_function(self, X):
        check_is_fitted(self, "matrix_")
        rhos = check_density_batch(X)
        return np.einsum("ab,nba->n", self.matrix_, rhos).real

    def predict(self, X):
        return (self.decision_function(X) < -self.tol).astype(int)
