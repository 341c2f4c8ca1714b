"""The seven named cut problems.

Each kind has an exact discrete definition with an exhaustive oracle, an
equivalent continuous objective in terms of the closed-form functionals, and
a numerator/denominator pair of set-pair functions (:func:`pair_ratio_problem`).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .functionals import (
    TableFunction,
    UnionMinVolume,
    dnorm1,
    ihat,
    iplus,
    median_dev_value,
    sup_norm,
    tv,
)
from .graph import Graph, boundary_weight, cross_weight, volume
from .lovasz import LinearCombination
from .relax import (
    TIE_TOL,
    InfeasibleVectorError,
    RatioProblem,
    ZeroDenominatorError,
    multi_start_solve,
    threshold_round,
    worker_count,
)
from .setpair import GuardError, SetPair, code_chunks, label_key, pair_masks


class CutKind(str, Enum):
    DUAL_CHEEGER = "dual-cheeger"
    MAX3CUT = "max3cut"
    RATIO_MAX3CUT_1 = "ratio-max3cut-1"
    RATIO_MAX3CUT_2 = "ratio-max3cut-2"
    MAXCUT = "maxcut"
    CHEEGER = "cheeger"
    ANTI_CHEEGER = "anti-cheeger"

    @property
    def sense(self) -> str:
        return "min" if self is CutKind.CHEEGER else "max"

    @property
    def two_cut(self) -> bool:
        return self in (CutKind.MAXCUT, CutKind.CHEEGER, CutKind.ANTI_CHEEGER)

    @property
    def guard(self) -> int:
        return 24 if self.two_cut else 16


KIND_NAMES = tuple(k.value for k in CutKind)


class DegenerateGraphError(ValueError):
    """Graph with vol(V) = 0: every ratio is undefined."""


@dataclass
class CutResult:
    value: float
    witness: SetPair
    evaluations: int
    kind: str = ""
    method: str = "oracle"

    @property
    def partition(self) -> tuple[frozenset, frozenset]:
        return self.witness.a, self.witness.b


@dataclass(frozen=True)
class CutProblem:
    kind: CutKind
    graph: Graph

    def __post_init__(self):
        object.__setattr__(self, "kind", CutKind(self.kind))

    @property
    def sense(self) -> str:
        return self.kind.sense

    @property
    def sign(self) -> float:
        return 1.0 if self.sense == "max" else -1.0

    # ---- discrete side

    def discrete_value(self, witness: SetPair) -> float:
        """Defining formula at ``witness``; for 2-cut kinds only ``witness.a`` is used."""
        g, k = self.graph, self.kind
        n = g.n
        A, B = witness.masks(n)
        if max(witness.a | witness.b, default=-1) >= n:
            raise ValueError("witness vertex outside the graph")
        vol = g.total_volume
        if k.two_cut:
            cut = boundary_weight(g, A)
            va, vc = volume(g, A), vol - volume(g, A)
            if k is CutKind.MAXCUT:
                return 2 * cut / vol
            if k is CutKind.CHEEGER:
                if not A.any() or A.all():
                    raise InfeasibleVectorError("Cheeger excludes S = {} and S = V")
                den = min(va, vc)
            else:
                den = max(va, vc)
            if den <= 0:
                raise ZeroDenominatorError("zero volume denominator")
            return cut / den
        C = ~(A | B)
        if k is CutKind.DUAL_CHEEGER:
            den = volume(g, A | B)
            if not (A | B).any() or den <= 0:
                raise InfeasibleVectorError("dual Cheeger needs vol(S1 u S2) > 0")
            return 2 * cross_weight(g, A, B) / den
        num = 2 * (cross_weight(g, A, B) + cross_weight(g, B, C) + cross_weight(g, C, A))
        if k is CutKind.MAX3CUT:
            return num / vol
        if k is CutKind.RATIO_MAX3CUT_1:
            den = volume(g, A) + volume(g, B)
            if not (A | B).any() or den <= 0:
                raise InfeasibleVectorError("ratio 3-cut I excludes A u B = {}")
            return num / den
        den = max(volume(g, A | B), volume(g, C))
        if den <= 0:
            raise ZeroDenominatorError("zero volume denominator")
        return num / den

    def _rows(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """Batched discrete values; NaN where the pair is infeasible."""
        g, k = self.graph, self.kind
        vol = g.total_volume
        va = A @ g.degree
        if k.two_cut:
            cut = (A[:, g.u] != A[:, g.v]) @ g.w
            if k is CutKind.MAXCUT:
                return 2 * cut / vol
            if k is CutKind.CHEEGER:
                den = np.minimum(va, vol - va)
                den[~A.any(axis=1) | A.all(axis=1)] = 0
            else:
                den = np.maximum(va, vol - va)
            return _safe_div(cut, den)
        vb = B @ g.degree
        U = A | B
        if k is CutKind.DUAL_CHEEGER:
            hit = (A[:, g.u] & B[:, g.v]) | (B[:, g.u] & A[:, g.v])
            return _safe_div(2 * (hit @ g.w), va + vb)
        lab = A.astype(np.int8) + 2 * B.astype(np.int8)
        num = 2 * ((lab[:, g.u] != lab[:, g.v]) @ g.w)
        if k is CutKind.MAX3CUT:
            return num / vol
        if k is CutKind.RATIO_MAX3CUT_1:
            den = va + vb
            den[~U.any(axis=1)] = 0
            return _safe_div(num, den)
        return _safe_div(num, np.maximum(va + vb, vol - va - vb))

    # ---- continuous side

    def continuous_rows(self, X) -> np.ndarray:
        """Continuous objective per row; NaN where excluded or the denominator vanishes."""
        g, k = self.graph, self.kind
        X = np.atleast_2d(np.asarray(X, dtype=float))
        vol = g.total_volume
        sup = sup_norm(X)
        if k is CutKind.DUAL_CHEEGER:
            nrm = dnorm1(g, X)
            out = 1 - _safe_div(iplus(g, X), nrm)
            out[~(nrm > 0)] = np.nan
        elif k is CutKind.MAX3CUT:
            out = _safe_div(tv(g, X) + ihat(g, X), vol * sup)
        elif k is CutKind.RATIO_MAX3CUT_1:
            nrm = dnorm1(g, X)
            out = _safe_div(nrm - iplus(g, X) + 2 * ihat(g, X), nrm)
        elif k is CutKind.RATIO_MAX3CUT_2:
            out = _safe_div(2 * tv(g, X) - dnorm1(g, X) + iplus(g, X),
                            vol * sup - median_dev_value(g, np.abs(X)))
        elif k is CutKind.MAXCUT:
            out = _safe_div(tv(g, X), vol * sup)
        elif k is CutKind.CHEEGER:
            out = _safe_div(tv(g, X), median_dev_value(g, X))
            out[np.ptp(X, axis=1) == 0] = np.nan
        else:
            out = _safe_div(tv(g, X), 2 * vol * sup - median_dev_value(g, X))
        out[sup == 0] = np.nan
        return out

    def continuous_objective(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.graph.n,):
            raise ValueError(f"vector dimension {x.size} does not match graph size {self.graph.n}")
        if not np.all(np.isfinite(x)):
            raise ValueError("vector has non-finite entries")
        if not np.any(x):
            raise InfeasibleVectorError(f"{self.kind.value}: the zero vector is excluded")
        if self.kind is CutKind.CHEEGER and np.ptp(x) == 0:
            raise InfeasibleVectorError("cheeger: constant vectors are excluded (x must be nonconstant)")
        v = float(self.continuous_rows(x[None, :])[0])
        if np.isnan(v):
            raise ZeroDenominatorError(f"{self.kind.value}: denominator vanishes at x")
        return v

    # ---- set-pair formulation

    def pair_ratio_problem(self) -> RatioProblem:
        return pair_ratio_problem(self)

    def solve(self, method: str = "oracle", restarts: int = 50, seed: int = 7,
              max_iters: int = 200, tol: float = 1e-10, workers: int | None = None,
              nonempty: bool = False) -> CutResult:
        if method == "oracle":
            return discrete_optimum(self, workers=workers, nonempty=nonempty)
        if method == "relax":
            return relaxed_optimum(self, restarts, seed, max_iters, tol, workers)
        raise ValueError(f"unknown method {method!r}; expected 'oracle' or 'relax'")


def _safe_div(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    out = np.full(np.broadcast(num, den).shape, np.nan)
    ok = den > 0
    np.divide(num, den, out=out, where=ok)
    return out


def _check_graph(g: Graph):
    if g.total_volume <= 0:
        raise DegenerateGraphError("graph has vol(V) = 0; every cut ratio is undefined")


def _chunk_best(p: CutProblem, codes: np.ndarray, nonempty: bool):
    n = p.graph.n
    if p.kind.two_cut:
        A = (codes[:, None] >> np.arange(n)) & 1 == 1
        B = ~A
    else:
        A, B = pair_masks(codes, n)
    vals = p._rows(A, B)
    if nonempty and not p.kind.two_cut:
        C = ~(A | B)
        vals[~(A.any(axis=1) & B.any(axis=1) & C.any(axis=1))] = np.nan
    ok = ~np.isnan(vals)
    count = int(ok.sum())
    if not count:
        return count, []
    s = p.sign * vals
    best = np.nanmax(s)
    near = np.flatnonzero(ok & (s >= best - TIE_TOL * max(1.0, abs(best))))
    return count, [(float(s[i]), int(label_key(A[i], B[i])), A[i], B[i]) for i in near]


def discrete_optimum(p: CutProblem, workers: int | None = None, chunk: int = 1 << 15,
                     nonempty: bool = False) -> CutResult:
    """Exhaustive optimum over the kind's feasible family.

    2-cut kinds enumerate the ``2**n`` subsets ``S`` (witness ``(S, V \\ S)``);
    the others enumerate all ``3**n`` set-pairs, the third block being the rest.
    ``nonempty`` restricts 3-cut kinds to partitions with three nonempty blocks.
    Among near-ties the smallest label key wins, so the result is independent
    of chunking and of the number of threads.
    """
    g = p.graph
    _check_graph(g)
    if g.n > p.kind.guard:
        raise GuardError(f"{p.kind.value}: exhaustive search limited to n <= {p.kind.guard}, got n = {g.n}")
    total = 2**g.n if p.kind.two_cut else 3**g.n
    chunks = list(code_chunks(total, chunk))
    nw = worker_count(workers)
    if nw == 1 or len(chunks) == 1:
        parts = [_chunk_best(p, c, nonempty) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=nw) as ex:
            parts = list(ex.map(lambda c: _chunk_best(p, c, nonempty), chunks))
    count = sum(c for c, _ in parts)
    cands = [x for _, lst in parts for x in lst]
    if not cands:
        raise InfeasibleVectorError(f"{p.kind.value}: no feasible set-pair")
    best = max(c[0] for c in cands)
    near = [c for c in cands if c[0] >= best - TIE_TOL * max(1.0, abs(best))]
    _, _, A, B = min(near, key=lambda c: c[1])
    witness = SetPair.from_masks(A, B)
    return CutResult(p.discrete_value(witness), witness, count, p.kind.value, "oracle")


def relaxed_optimum(p: CutProblem, restarts: int = 50, seed: int = 7, max_iters: int = 200,
                    tol: float = 1e-10, workers: int | None = None) -> CutResult:
    """Multi-start continuous optimisation followed by threshold rounding.

    For 2-cut kinds the rounded pair ``(A, B)`` is mapped to the better of
    ``S = A`` and ``S = B``: the pair ratio is a mediant of the two set ratios.
    """
    _check_graph(p.graph)
    rp = pair_ratio_problem(p)
    rep = multi_start_solve(rp, restarts, seed, max_iters, tol, workers)
    pair = rep.rounded
    if p.kind.two_cut:
        n = p.graph.n
        cands = [SetPair(s, set(range(n)) - s) for s in (pair.a, pair.b)]
        vals = []
        for c in cands:
            try:
                vals.append(p.discrete_value(c))
            except (InfeasibleVectorError, ZeroDenominatorError):
                vals.append(np.nan)
        masks = [c.masks(n) for c in cands]
        keys = label_key(np.array([m[0] for m in masks]), np.array([m[1] for m in masks]))
        s = np.where(np.isnan(vals), -np.inf, p.sign * np.array(vals))
        order = sorted(range(2), key=lambda i: (-s[i], keys[i]))
        pair = cands[order[0]]
    return CutResult(p.discrete_value(pair), pair, rep.iterations, p.kind.value, "relax")


def pair_ratio_problem(p: CutProblem) -> RatioProblem:
    """Numerator and denominator set-pair functions whose pair optimum is the cut value."""
    g, k = p.graph, p.kind
    F1, F2 = TableFunction(g, "F1"), TableFunction(g, "F2")
    G1, G2, G3 = TableFunction(g, "G1"), TableFunction(g, "G2"), TableFunction(g, "G3")
    three = LinearCombination([(2.0, F1), (-2.0, F2)], name="2(F1-F2)")
    table = {
        CutKind.MAXCUT: (F1, G1),
        CutKind.DUAL_CHEEGER: (LinearCombination([(2.0, F2)], name="2F2"), G2),
        CutKind.MAX3CUT: (three, G1),
        CutKind.RATIO_MAX3CUT_1: (three, G2),
        CutKind.RATIO_MAX3CUT_2: (three, LinearCombination([(1.0, G1), (-1.0, UnionMinVolume(g))],
                                                           name="G1-Gunion")),
        CutKind.CHEEGER: (F1, G3),
        CutKind.ANTI_CHEEGER: (F1, LinearCombination([(2.0, G1), (-1.0, G3)], name="2G1-G3")),
    }
    num, den = table[k]
    feasible = "nonconstant" if k is CutKind.CHEEGER else "nonzero"
    return RatioProblem(num, den, k.sense, feasible, center_weights=g.degree, name=k.value)


def split_ratio_check(p: CutProblem) -> tuple[float, float]:
    """Optimum over subsets of ``f/g`` and over set-pairs of
    ``(f(A)+f(B))/(g(A)+g(B))`` for a 2-cut kind, both by enumeration.

    Here ``f = |dS|`` and ``g`` is the kind's denominator written as a set
    function (``vol(V)/2`` for maxcut, ``min``/``max`` of the two volumes).
    """
    g, k = p.graph, p.kind
    if not k.two_cut:
        raise ValueError("split_ratio_check applies to maxcut, cheeger and anti-cheeger")
    _check_graph(g)
    n, vol = g.n, g.total_volume

    def fg(S):
        vs = S @ g.degree
        f = (S[:, g.u] != S[:, g.v]) @ g.w
        if k is CutKind.MAXCUT:
            den = np.full(S.shape[0], vol / 2)
        elif k is CutKind.CHEEGER:
            den = np.minimum(vs, vol - vs)
        else:
            den = np.maximum(vs, vol - vs)
        return f, den

    S = (np.arange(2**n)[:, None] >> np.arange(n)) & 1 == 1
    f, den = fg(S)
    set_best = p.sign * np.nanmax(p.sign * _safe_div(f, den))
    A, B = pair_masks(np.arange(3**n), n)
    fa, ga = fg(A)
    fb, gb = fg(B)
    pair_best = p.sign * np.nanmax(p.sign * _safe_div(fa + fb, ga + gb))
    return float(set_best), float(pair_best)


def threshold_round_cut(p: CutProblem, x) -> SetPair:
    """Threshold rounding of ``x`` under the kind's set-pair ratio."""
    return threshold_round(pair_ratio_problem(p), x)
