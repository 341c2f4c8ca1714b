"""scikit-learn style wrappers around the cut solvers.

The solvers are transductive in the manner of spectral clustering: ``fit``
takes the graph (a :class:`Graph` or a dense affinity matrix) and exposes
``labels_`` per vertex.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cuts import KIND_NAMES, CutProblem, pair_ratio_problem
from .kcut import kcut_discrete
from .relax import threshold_round
from .setpair import indicator
from .validation import check_graph, check_positive_int, check_vectors


def _labels(witness, n):
    labels = np.full(n, 2, dtype=int)
    labels[list(witness.a)] = 0
    labels[list(witness.b)] = 1
    return labels


class SetPairCutSolver(ClusterMixin, BaseEstimator):
    """Solve one of the seven cut problems on a graph.

    Parameters
    ----------
    kind : str
        Problem name, e.g. ``"maxcut"`` or ``"dual-cheeger"``.
    method : {"oracle", "relax"}
        Exhaustive enumeration or multi-start continuous relaxation.
    restarts, seed, max_iters, tol :
        Relaxation settings (ignored by the oracle).
    n_jobs : int or None
        Worker threads; ``None`` reads ``SETPAIR_THREADS``.

    Attributes
    ----------
    value_ : float
    witness_ : SetPair
    labels_ : ndarray of shape (n,)
        0 for vertices in ``A``, 1 for ``B``, 2 for the remaining block.
    """

    def __init__(self, kind="maxcut", method="oracle", restarts=50, seed=7,
                 max_iters=200, tol=1e-10, n_jobs=None):
        self.kind = kind
        self.method = method
        self.restarts = restarts
        self.seed = seed
        self.max_iters = max_iters
        self.tol = tol
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        if self.kind not in KIND_NAMES:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KIND_NAMES}")
        check_positive_int(self.restarts, "restarts")
        g = check_graph(X)
        res = CutProblem(self.kind, g).solve(self.method, self.restarts, self.seed,
                                             self.max_iters, self.tol, self.n_jobs)
        self.graph_ = g
        self.value_ = res.value
        self.witness_ = res.witness
        self.n_evaluations_ = res.evaluations
        self.labels_ = _labels(res.witness, g.n)
        return self


class KCutSolver(ClusterMixin, BaseEstimator):
    """Exhaustive ratio k-cut ``sum |dA_i| / sum vol(A_i)`` in the given sense."""

    def __init__(self, k=2, sense="min", nonempty=False, n_jobs=None):
        self.k = k
        self.sense = sense
        self.nonempty = nonempty
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        check_positive_int(self.k, "k", minimum=2)
        g = check_graph(X)
        value, parts, count = kcut_discrete(g, self.k, self.sense, self.nonempty, self.n_jobs)
        labels = np.empty(g.n, dtype=int)
        for i, p in enumerate(parts):
            labels[list(p)] = i
        self.graph_ = g
        self.value_ = value
        self.parts_ = parts
        self.n_evaluations_ = count
        self.labels_ = labels
        return self


class ThresholdRounder(TransformerMixin, BaseEstimator):
    """Map vertex-valued vectors to the signed indicator of their best threshold pair.

    After ``fit(graph)``, ``transform(X)`` rounds every row of ``X``,
    ``score_samples(X)`` gives the continuous objective and ``predict(X)`` the
    discrete ratio of the rounded pair.
    """

    def __init__(self, kind="maxcut"):
        self.kind = kind

    def fit(self, X, y=None):
        if self.kind not in KIND_NAMES:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {KIND_NAMES}")
        g = check_graph(X)
        self.graph_ = g
        self.problem_ = CutProblem(self.kind, g)
        self.ratio_problem_ = pair_ratio_problem(self.problem_)
        self.n_features_in_ = g.n
        return self

    def _round(self, X):
        check_is_fitted(self, "problem_")
        X = check_vectors(X, self.graph_.n)
        return X, [threshold_round(self.ratio_problem_, x) for x in X]

    def transform(self, X):
        _, pairs = self._round(X)
        return np.array([indicator(p, self.graph_.n) for p in pairs])

    def predict(self, X):
        _, pairs = self._round(X)
        return np.array([self.ratio_problem_.pair_ratio(p) for p in pairs])

    def score_samples(self, X):
        check_is_fitted(self, "problem_")
        X = check_vectors(X, self.graph_.n)
        return self.problem_.continuous_rows(X)
