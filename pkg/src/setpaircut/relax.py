"""Continuous optimisation of extension ratios and threshold rounding.

The ratio ``num^L(x) / den^L(x)`` is positively one-homogeneous and piecewise
linear-fractional along each coordinate line, with kinks only where
``|x_i| = |x_j|`` or ``x_i = 0``.  On each piece a linear-fractional function
is monotone, so an exact coordinate line search only has to look at those
breakpoints and at the two limits ``t -> +-inf`` (the directions ``+-e_i``).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .lovasz import SetPairFunction
from .setpair import SetPair, label_key, threshold_masks

TIE_TOL = 1e-12


class InfeasibleVectorError(ValueError):
    """The vector lies outside the feasible set of the ratio problem."""


class ZeroDenominatorError(ArithmeticError):
    pass


def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("SETPAIR_THREADS")
    return max(1, int(env)) if env else 1


@dataclass
class RatioProblem:
    """``num/den`` over set-pairs and the matching ratio of extensions.

    ``feasible`` is ``"nonzero"`` (any x != 0) or ``"nonconstant"``; in the
    latter case the pairs ``(0,0), (V,0), (0,V)`` are excluded on the discrete
    side.  ``center_weights`` are used to project random starts to mean zero.
    """

    numerator: SetPairFunction
    denominator: SetPairFunction
    sense: str = "max"
    feasible: str = "nonzero"
    center_weights: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        if self.feasible not in ("nonzero", "nonconstant"):
            raise ValueError("feasible must be 'nonzero' or 'nonconstant'")
        if self.numerator.n != self.denominator.n:
            raise ValueError("numerator and denominator sizes differ")

    @property
    def n(self) -> int:
        return self.numerator.n

    @property
    def sign(self) -> float:
        return 1.0 if self.sense == "max" else -1.0

    def ratio_rows(self, X) -> np.ndarray:
        """Continuous ratio per row; NaN where the row is infeasible."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        num = self.numerator.extension(X)
        den = self.denominator.extension(X)
        scale = np.max(np.abs(X), axis=1)
        ok = scale > 0
        if self.feasible == "nonconstant":
            ok &= np.ptp(X, axis=1) > 1e-12 * np.maximum(scale, 1.0)
        ok &= den > 1e-12 * np.maximum(np.abs(num), 1.0) * np.maximum(scale, 1e-300)
        out = np.full(X.shape[0], np.nan)
        out[ok] = num[ok] / den[ok]
        return out

    def ratio(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if not np.any(x):
            raise InfeasibleVectorError("the zero vector is excluded")
        if self.feasible == "nonconstant" and np.ptp(x) == 0:
            raise InfeasibleVectorError("constant vectors are excluded (nonconstant feasibility)")
        den = float(self.denominator.extension(x[None, :])[0])
        if den <= 0:
            raise ZeroDenominatorError("denominator extension vanishes at x")
        return float(self.numerator.extension(x[None, :])[0]) / den

    def pair_ratio_rows(self, A, B) -> np.ndarray:
        A, B = np.asarray(A, bool), np.asarray(B, bool)
        num = self.numerator.values(A, B)
        den = self.denominator.values(A, B)
        ok = (A.any(axis=-1) | B.any(axis=-1)) & (den > 0)
        if self.feasible == "nonconstant":
            ok &= ~(A.all(axis=-1) | B.all(axis=-1))
        out = np.full(A.shape[:-1], np.nan)
        out[ok] = num[ok] / den[ok]
        return out

    def pair_ratio(self, p: SetPair) -> float:
        a, b = p.masks(self.n)
        r = float(self.pair_ratio_rows(a[None], b[None])[0])
        if np.isnan(r):
            raise InfeasibleVectorError(f"set-pair {p} is infeasible")
        return r


def _pick(values: np.ndarray, sign: float, keys: np.ndarray | None = None) -> int:
    """Index of the best finite value; near-ties go to the smallest key."""
    s = np.where(np.isnan(values), -np.inf, sign * values)
    best = s.max()
    if not np.isfinite(best):
        return -1
    near = np.flatnonzero(s >= best - TIE_TOL * max(1.0, abs(best)))
    if keys is None or near.size == 1:
        return int(near[0])
    return int(near[np.argmin(keys[near])])


def threshold_round(p: RatioProblem, x) -> SetPair:
    """Best threshold pair (positive gap) of ``x`` under the discrete ratio."""
    x = np.asarray(x, dtype=float)
    A, B, gaps = threshold_masks(x[None, :])
    keep = gaps[0] > 0
    A, B = A[0][keep], B[0][keep]
    vals = p.pair_ratio_rows(A, B)
    i = _pick(vals, p.sign, label_key(A, B))
    if i < 0:
        raise InfeasibleVectorError("no feasible threshold pair for this vector")
    return SetPair.from_masks(A[i], B[i])


def _candidates(x: np.ndarray) -> np.ndarray:
    n = x.size
    mags = np.abs(x)
    rows = []
    for i in range(n):
        vals = np.unique(np.concatenate(([0.0], mags[np.arange(n) != i], -mags[np.arange(n) != i])))
        vals = vals[vals != x[i]]
        Y = np.repeat(x[None, :], vals.size, axis=0)
        Y[:, i] = vals
        rows.append(Y)
    rows.append(np.eye(n))
    rows.append(-np.eye(n))
    return np.concatenate(rows, axis=0)


def local_descent(p: RatioProblem, x0, max_iters: int = 200, tol: float = 1e-10,
                  trace: list | None = None) -> np.ndarray:
    """Greedy exact coordinate search on the ratio.

    Each iteration fixes ``lam = ratio(x)`` and looks for the single-coordinate
    breakpoint move with the best normalised parametric gap
    ``(num(y) - lam * den(y)) / den(y)`` in the problem's sense; the move is
    taken only if it improves the ratio by more than ``tol``.
    """
    x = np.asarray(x0, dtype=float).copy()
    if not np.all(np.isfinite(x)):
        raise ValueError("starting vector has non-finite entries")
    lam = p.ratio(x)
    x /= np.max(np.abs(x))
    if trace is not None:
        trace.append(lam)
    for _ in range(max_iters):
        Y = _candidates(x)
        r = p.ratio_rows(Y)
        gap = p.sign * (r - lam)
        i = _pick(gap, 1.0)
        if i < 0 or gap[i] <= tol:
            break
        x = Y[i] / np.max(np.abs(Y[i]))
        lam = float(r[i])
        if not np.isfinite(lam):
            raise FloatingPointError("non-finite ratio during descent")
        if trace is not None:
            trace.append(lam)
    return x


def _relabelings(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Vertex index pairs and label offsets for all one- and two-vertex moves."""
    idx, off = [], []
    for i in range(n):
        for a in (1, 2):
            idx.append((i, i))
            off.append((a, 0))
    for i in range(n):
        for j in range(i + 1, n):
            for a in (1, 2):
                for b in (1, 2):
                    idx.append((i, j))
                    off.append((a, b))
    return np.array(idx, dtype=int).reshape(-1, 2), np.array(off, dtype=int).reshape(-1, 2)


def discrete_polish(p: RatioProblem, pair: SetPair, max_iters: int = 200,
                    tol: float = 1e-10) -> SetPair:
    """Improve a set-pair by moving one or two vertices between A, B and the rest.

    Each vertex carries a label 0 (rest), 1 (A) or 2 (B); a move adds 1 or 2
    modulo 3 to the labels of one or two vertices.  The best move is taken
    while it improves the discrete ratio by more than ``tol``.
    """
    n = p.n
    a, b = pair.masks(n)
    labels = a.astype(int) + 2 * b.astype(int)
    cur = p.pair_ratio(pair)
    idx, off = _relabelings(n)
    rows = np.arange(idx.shape[0])
    for _ in range(max_iters):
        L = np.repeat(labels[None, :], idx.shape[0], axis=0)
        L[rows, idx[:, 0]] = (L[rows, idx[:, 0]] + off[:, 0]) % 3
        L[rows, idx[:, 1]] = (L[rows, idx[:, 1]] + off[:, 1]) % 3
        A, B = L == 1, L == 2
        vals = p.pair_ratio_rows(A, B)
        i = _pick(p.sign * (vals - cur), 1.0, label_key(A, B))
        if i < 0 or p.sign * (vals[i] - cur) <= tol:
            break
        labels, cur = L[i], float(vals[i])
    return SetPair.from_masks(labels == 1, labels == 2)


@dataclass
class SolveReport:
    best_value: float
    best_vector: np.ndarray
    rounded: SetPair
    iterations: int
    restarts: int
    trace: list = field(default_factory=list)


def _starts(p: RatioProblem, restarts: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    n = p.n
    G = rng.normal(size=(restarts, n))
    if p.feasible == "nonconstant" and p.center_weights is not None:
        w = np.asarray(p.center_weights, dtype=float)
        if w.sum() > 0:
            G -= (G @ w / w.sum())[:, None]
    starts = [g / np.linalg.norm(g) for g in G if np.linalg.norm(g) > 0]
    starts += list(np.eye(n)) + list(-np.eye(n))
    return starts


def _run(p: RatioProblem, x0, max_iters, tol):
    trace: list = []
    try:
        x = local_descent(p, x0, max_iters, tol, trace)
        pair = threshold_round(p, x)
        a, b = pair.masks(p.n)
        y = local_descent(p, a.astype(float) - b.astype(float), max_iters, tol, trace)
        pair2 = threshold_round(p, y)
    except (InfeasibleVectorError, ZeroDenominatorError):
        return None
    v1, v2 = p.pair_ratio(pair), p.pair_ratio(pair2)
    if p.sign * v2 > p.sign * v1:
        pair, v1, x = pair2, v2, y
    pair = discrete_polish(p, pair, max_iters, tol)
    return p.pair_ratio(pair), pair, x, trace


def multi_start_solve(p: RatioProblem, restarts: int = 50, seed: int = 0,
                      max_iters: int = 200, tol: float = 1e-10,
                      workers: int | None = None) -> SolveReport:
    """Descent from seeded random starts and all signed unit vectors; every
    terminal vector is threshold-rounded, polished by one- and two-vertex
    moves, and the best discrete ratio kept.
    The result does not depend on the number of worker threads."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    starts = _starts(p, restarts, seed)
    nw = worker_count(workers)
    if nw == 1:
        runs = [_run(p, s, max_iters, tol) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=nw) as ex:
            runs = list(ex.map(lambda s: _run(p, s, max_iters, tol), starts))
    runs = [r for r in runs if r is not None]
    if not runs:
        raise InfeasibleVectorError("no feasible start")
    vals = np.array([r[0] for r in runs])
    masks = [r[1].masks(p.n) for r in runs]
    keys = label_key(np.array([m[0] for m in masks]), np.array([m[1] for m in masks]))
    i = _pick(vals, p.sign, keys)
    best = runs[i]
    return SolveReport(best_value=float(best[0]), best_vector=best[2], rounded=best[1],
                       iterations=sum(len(r[3]) for r in runs), restarts=len(starts),
                       trace=best[3])
