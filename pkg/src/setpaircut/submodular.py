"""Submodularity checks for set-pair and set functions, and convexity probes.

Every checker returns ``None`` when the condition holds and a certificate for
the first violation otherwise.  Exhaustive sweeps visit pairs in ascending
(code, code) order, so the reported violation is deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .graph import Graph, random_graph
from .lovasz import (
    LinearCombination,
    SetFunction,
    SetPairFunction,
    TabulatedSetPairFunction,
    original_extension_batch,
    setpair_extension_batch,
)
from .setpair import SetPair, all_pair_masks, code_digits, pair_masks

EQ_TOL = 1e-12
EXHAUSTIVE_LIMIT = 6


@dataclass
class ViolationCertificate:
    """``lhs`` is the side that should dominate; a violation has ``lhs < rhs - 1e-12``."""

    pairs: tuple
    lhs: float
    rhs: float
    kind: str

    def to_json(self) -> dict:
        def enc(p):
            if isinstance(p, SetPair):
                return p.to_json()
            if isinstance(p, np.ndarray):
                return [float(v) for v in p]
            return sorted(int(i) + 1 for i in p)
        return {"kind": self.kind, "pairs": [enc(p) for p in self.pairs],
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class ConvexityWitness:
    x: np.ndarray
    y: np.ndarray
    lhs: float  # (f^L(x) + f^L(y)) / 2
    rhs: float  # f^L((x + y) / 2)
    kind: str = "midpoint"

    def to_json(self) -> dict:
        return {"kind": self.kind, "x": self.x.tolist(), "y": self.y.tolist(),
                "lhs": self.lhs, "rhs": self.rhs}


def _violated(lhs, rhs):
    return lhs < rhs - EQ_TOL * np.maximum(1.0, np.abs(rhs))


def join_meet(A, B, C, D):
    """``((A u C) \\ (B u D), (B u D) \\ (A u C))`` and ``(A n C, B n D)``."""
    P, Q = A | C, B | D
    return (P & ~Q, Q & ~P), (A & C, B & D)


def _pair_products(n: int, rng=None, samples: int = 0):
    """Outer/inner code blocks covering all 9**n pairs of pairs, or samples."""
    if rng is None:
        total = 3**n
        step = max(1, (1 << 18) // total)
        for start in range(0, total, step):
            outer = np.arange(start, min(total, start + step))
            yield np.repeat(outer, total), np.tile(np.arange(total), outer.size)
    else:
        left = samples
        while left > 0:
            m = min(left, 1 << 16)
            yield rng.integers(0, 3**n, m), rng.integers(0, 3**n, m)
            left -= m


def check_pair_submodular(f: SetPairFunction, n: int | None = None, strict: bool = False,
                          samples: int = 100_000, seed: int = 0,
                          exhaustive_limit: int = EXHAUSTIVE_LIMIT):
    """``f(A,B) + f(C,D) >= f(join) + f(meet)`` over pairs of set-pairs.

    Exhaustive over all ``9**n`` ordered pairs when ``n <= exhaustive_limit``,
    otherwise ``samples`` seeded random pairs.  With ``strict=True`` every
    equality case (within 1e-12) must also have comparable pairs.
    """
    n = f.n if n is None else n
    if n != f.n:
        raise ValueError("n does not match the function's ground set")
    rng = None if n <= exhaustive_limit else np.random.default_rng(seed)
    for c1, c2 in _pair_products(n, rng, samples):
        A, B = pair_masks(c1, n)
        C, D = pair_masks(c2, n)
        (J1, J2), (M1, M2) = join_meet(A, B, C, D)
        lhs = f.values(A, B) + f.values(C, D)
        rhs = f.values(J1, J2) + f.values(M1, M2)
        bad = _violated(lhs, rhs)
        kind = "pair-submodular"
        if strict:
            eq = np.abs(lhs - rhs) <= EQ_TOL * np.maximum(1.0, np.abs(rhs))
            sub = np.all(~A | C, axis=1) & np.all(~B | D, axis=1)
            sup = np.all(~C | A, axis=1) & np.all(~D | B, axis=1)
            strict_bad = eq & ~(sub | sup)
            if strict_bad.any() and (not bad.any() or np.argmax(strict_bad) < np.argmax(bad)):
                bad, kind = strict_bad, "strict-equality"
        if bad.any():
            i = int(np.argmax(bad))
            pairs = (SetPair.from_masks(A[i], B[i]), SetPair.from_masks(C[i], D[i]),
                     SetPair.from_masks(J1[i], J2[i]), SetPair.from_masks(M1[i], M2[i]))
            return ViolationCertificate(pairs, float(lhs[i]), float(rhs[i]), kind)
    return None


def nested_function(p, n: int) -> TabulatedSetPairFunction:
    """Tabulate ``f(A,B) = p(A, A u B)`` from a callable on (inner, outer) masks."""
    A, B = all_pair_masks(n)
    vals = [float(p(a, a | b)) for a, b in zip(A, B)]
    return TabulatedSetPairFunction(np.array(vals), name="p")


def check_nested_submodular(p, n: int | None = None, condition: str = "plain",
                            samples: int = 100_000, seed: int = 0,
                            exhaustive_limit: int = EXHAUSTIVE_LIMIT):
    """Submodularity of a function on nested pairs ``X_I <= X_O``.

    ``p`` is either a callable ``p(inner_mask, outer_mask)`` (needs ``n``) or a
    set-pair function ``f``, read as ``p(X_I, X_O) = f(X_I, X_O \\ X_I)``.

    ``condition="plain"``: ``p(X) + p(Y) >= p(X_I n Y_I, X_O n Y_O) + p(X_I u Y_I, X_O u Y_O)``.
    ``condition="corrected"``: the right side is
    ``p(X_I n Y_I, (X_O n Y_O) \\ Z) + p((X_I u Y_I) \\ Z, (X_O u Y_O) \\ Z)`` with
    ``Z = (X_O n Y_I \\ X_I) u (Y_O n X_I \\ Y_I)``.
    """
    if condition not in ("plain", "corrected"):
        raise ValueError("condition must be 'plain' or 'corrected'")
    f = p if isinstance(p, SetPairFunction) else nested_function(p, n)
    n = f.n
    rng = None if n <= exhaustive_limit else np.random.default_rng(seed)

    def pv(inner, outer):
        return f.values(inner, outer & ~inner)

    for c1, c2 in _pair_products(n, rng, samples):
        A, B = pair_masks(c1, n)
        C, D = pair_masks(c2, n)
        XI, XO, YI, YO = A, A | B, C, C | D
        lhs = pv(XI, XO) + pv(YI, YO)
        if condition == "plain":
            rhs = pv(XI & YI, XO & YO) + pv(XI | YI, XO | YO)
        else:
            Z = (XO & YI & ~XI) | (YO & XI & ~YI)
            rhs = pv(XI & YI, XO & YO & ~Z) + pv((XI | YI) & ~Z, (XO | YO) & ~Z)
        bad = _violated(lhs, rhs)
        if bad.any():
            i = int(np.argmax(bad))
            pairs = (SetPair.from_masks(A[i], B[i]), SetPair.from_masks(C[i], D[i]))
            return ViolationCertificate(pairs, float(lhs[i]), float(rhs[i]), condition)
    return None


def check_partial_submodular(f: SetPairFunction, n: int | None = None):
    """Submodularity in each slot with the other fixed:

    ``f(A,B) + f(A,D) >= f(A, B u D) + f(A, B n D)`` and
    ``f(A,B) + f(C,B) >= f(A u C, B) + f(A n C, B)``,
    over ``A n B = A n D = C n B = {}``; exhaustive over ``5**n`` configurations.
    """
    n = f.n if n is None else n
    if n > 8:
        raise ValueError("partial submodularity check is exhaustive; n <= 8")
    codes = np.arange(5**n)
    digits = (codes[:, None] // (5 ** np.arange(n))) % 5
    fixed = digits == 4
    first = (digits == 1) | (digits == 3)
    second = (digits == 2) | (digits == 3)
    for slot in ("second", "first"):
        if slot == "second":
            lhs = f.values(fixed, first) + f.values(fixed, second)
            rhs = f.values(fixed, first | second) + f.values(fixed, first & second)
        else:
            lhs = f.values(first, fixed) + f.values(second, fixed)
            rhs = f.values(first | second, fixed) + f.values(first & second, fixed)
        bad = _violated(lhs, rhs)
        if bad.any():
            i = int(np.argmax(bad))
            fx = frozenset(np.flatnonzero(fixed[i]).tolist())
            s1 = frozenset(np.flatnonzero(first[i]).tolist())
            s2 = frozenset(np.flatnonzero(second[i]).tolist())
            if slot == "second":
                pairs = (SetPair(fx, s1), SetPair(fx, s2))
            else:
                pairs = (SetPair(s1, fx), SetPair(s2, fx))
            return ViolationCertificate(pairs, float(lhs[i]), float(rhs[i]), f"partial-{slot}-slot")
    return None


def indicator_identity_gap(n: int) -> float:
    """Max |1_{A,B} + 1_{C,D} - 1_join - 1_meet| over all pairs of pairs."""
    worst = 0.0
    for c1, c2 in _pair_products(n):
        A, B = pair_masks(c1, n)
        C, D = pair_masks(c2, n)
        (J1, J2), (M1, M2) = join_meet(A, B, C, D)
        ind = lambda a, b: a.astype(int) - b.astype(int)
        gap = ind(A, B) + ind(C, D) - ind(J1, J2) - ind(M1, M2)
        worst = max(worst, float(np.abs(gap).max()))
    return worst


def convexity_probe(f: SetPairFunction, n: int | None = None, trials: int = 10_000,
                    seed: int = 0, indicator_limit: int = EXHAUSTIVE_LIMIT):
    """Midpoint convexity of ``f^L``.

    All indicator midpoints ``(1_{A,B}, 1_{C,D})`` are tested when
    ``n <= indicator_limit``; ``trials`` further random vector pairs follow.
    Returns ``None`` or the first violating pair.
    """
    n = f.n if n is None else n
    if abs(f(np.zeros(n, bool), np.zeros(n, bool))) > 0:
        raise ValueError("convexity probe needs f(empty, empty) = 0")
    if n <= indicator_limit:
        for c1, c2 in _pair_products(n):
            d1, d2 = code_digits(c1, n), code_digits(c2, n)
            X = np.where(d1 == 1, 1.0, np.where(d1 == 2, -1.0, 0.0))
            Y = np.where(d2 == 1, 1.0, np.where(d2 == 2, -1.0, 0.0))
            w = _midpoint_failure(f, X, Y, "indicator-midpoint")
            if w is not None:
                return w
    rng = np.random.default_rng(seed)
    left = trials
    while left > 0:
        m = min(left, 1 << 14)
        X, Y = rng.normal(size=(m, n)), rng.normal(size=(m, n))
        k = m // 3
        X[:k] = rng.integers(-2, 3, size=(k, n))
        Y[:k] = rng.integers(-2, 3, size=(k, n))
        w = _midpoint_failure(f, X, Y, "midpoint")
        if w is not None:
            return w
        left -= m
    return None


def _midpoint_failure(f, X, Y, kind):
    fx = setpair_extension_batch(f, X)
    fy = setpair_extension_batch(f, Y)
    fm = setpair_extension_batch(f, 0.5 * (X + Y))
    lhs, rhs = 0.5 * (fx + fy), fm
    bad = _violated(lhs, rhs)
    if bad.any():
        i = int(np.argmax(bad))
        return ConvexityWitness(X[i].copy(), Y[i].copy(), float(lhs[i]), float(rhs[i]), kind)
    return None


def original_submodular_check(f: SetFunction, n: int | None = None):
    """``f(S) + f(T) >= f(S u T) + f(S n T)`` over all ``4**n`` pairs (n <= 10)."""
    n = f.n if n is None else n
    if n > 10:
        raise ValueError("exhaustive set-function check limited to n <= 10")
    total = 2**n
    bits = np.arange(n)
    step = max(1, (1 << 18) // total)
    for start in range(0, total, step):
        s = np.repeat(np.arange(start, min(total, start + step)), total)
        t = np.tile(np.arange(total), s.size // total)
        S = (s[:, None] >> bits) & 1 == 1
        T = (t[:, None] >> bits) & 1 == 1
        lhs = f.values(S) + f.values(T)
        rhs = f.values(S | T) + f.values(S & T)
        bad = _violated(lhs, rhs)
        if bad.any():
            i = int(np.argmax(bad))
            pairs = tuple(frozenset(np.flatnonzero(M[i]).tolist()) for M in (S, T))
            return ViolationCertificate(pairs, float(lhs[i]), float(rhs[i]), "submodular")
    return None


def original_convexity_probe(f: SetFunction, n: int | None = None, trials: int = 10_000,
                             seed: int = 0):
    """Midpoint convexity of the classical extension (indicators, then random pairs)."""
    n = f.n if n is None else n
    rng = np.random.default_rng(seed)
    total = 2**n
    s = np.repeat(np.arange(total), total)
    t = np.tile(np.arange(total), total)
    blocks = [(((s[:, None] >> np.arange(n)) & 1).astype(float),
               ((t[:, None] >> np.arange(n)) & 1).astype(float))]
    blocks.append((rng.normal(size=(trials, n)), rng.normal(size=(trials, n))))
    for X, Y in blocks:
        lhs = 0.5 * (original_extension_batch(f, X) + original_extension_batch(f, Y))
        rhs = original_extension_batch(f, 0.5 * (X + Y))
        bad = _violated(lhs, rhs)
        if bad.any():
            i = int(np.argmax(bad))
            return ConvexityWitness(X[i], Y[i], float(lhs[i]), float(rhs[i]))
    return None


# ------------------------------------------------------------- f-hat oracle

def fhat(f: SetPairFunction, x, N: float) -> float:
    """``min sum lam_{A,B} f(A,B)`` s.t. ``sum lam 1_{A,B} = x``, ``sum lam <= N``, ``lam >= 0``."""
    x = np.asarray(x, dtype=float)
    n = f.n
    if n > 6:
        raise ValueError("fhat enumerates all 3^n set-pairs; n <= 6")
    A, B = all_pair_masks(n)
    M = (A.astype(float) - B.astype(float)).T  # n x 3^n
    c = f.values(A, B)
    res = linprog(c, A_ub=np.ones((1, c.size)), b_ub=[N], A_eq=M, b_eq=x,
                  bounds=(0, None), method="highs")
    if res.status != 0:
        raise ValueError(f"fhat linear program failed: {res.message}")
    return float(res.fun)


# ---------------------------------------------------------- builtin functions

def sqrt_card(n: int) -> SetPairFunction:
    """``g(A, B) = sqrt(|A| + |B|)``."""
    A, B = all_pair_masks(n)
    return TabulatedSetPairFunction(np.sqrt(A.sum(axis=1) + B.sum(axis=1)), name="sqrt-card")


def indicator_card(n: int, slot: str = "a", size: int = 1) -> SetPairFunction:
    """``1[|A| = size]`` (slot 'a') or ``1[|B| = size]`` (slot 'b')."""
    A, B = all_pair_masks(n)
    S = A if slot == "a" else B
    return TabulatedSetPairFunction((S.sum(axis=1) == size).astype(float),
                                    name=f"1[|{slot.upper()}|={size}]")


@dataclass
class CardinalitySetFunction(SetFunction):
    """``phi(|S|)`` for a table ``phi`` of length ``n + 1``."""

    phi: np.ndarray = field(default_factory=lambda: np.zeros(1))
    name: str = "phi(|S|)"

    def __post_init__(self):
        self.phi = np.asarray(self.phi, dtype=float)
        self.n = self.phi.size - 1

    def values(self, S):
        return self.phi[np.asarray(S, bool).sum(axis=-1)]


class CutSetFunction(SetFunction):
    """``|dS|`` of a graph."""

    def __init__(self, g: Graph):
        super().__init__(g.n)
        self.graph = g
        self.name = "cut"

    def values(self, S):
        S = np.asarray(S, bool)
        flat = S.reshape(-1, self.n)
        out = (flat[:, self.graph.u] != flat[:, self.graph.v]) @ self.graph.w
        return out.reshape(S.shape[:-1])


def random_pair_submodular(n: int, rng: np.random.Generator) -> TabulatedSetPairFunction:
    """Random nonnegative combination of pair-submodular building blocks.

    Blocks: cut and volume functionals of a random graph (extensions ``I``,
    ``||x||``, ``vol(V)||x||_inf``, median deviation), concave functions of
    ``|A u B|`` and modular terms with nonnegative weights; the empty pair
    maps to 0.
    """
    from .functionals import TableFunction

    g = random_graph(n, rng)
    terms = [(rng.random(), TableFunction(g, name)) for name in ("F1", "G1", "G2", "G3")]
    A, B = all_pair_masks(n)
    size = (A | B).sum(axis=1)
    phi = np.concatenate(([0.0], np.cumsum(np.sort(rng.random(n))[::-1])))
    terms.append((rng.random(), TabulatedSetPairFunction(phi[size], name="concave")))
    a, b = rng.random(n), rng.random(n)
    terms.append((rng.random(), TabulatedSetPairFunction(A @ a + B @ b, name="modular")))
    table = LinearCombination(terms).table()
    table[0] = 0.0
    return TabulatedSetPairFunction(np.maximum(table, 0.0), name="random-submodular")


def search_nested_counterexamples(n: int = 3, trials: int = 2000, seed: int = 0) -> dict:
    """Random search for functions separating the nested-pair definition from
    the pair condition, in both directions.

    Candidates cycle through generated pair-submodular functions, random
    functions of ``(|A|, |B|)``, uniform tables and union cuts ``|d(A u B)|``.
    Returns a dict with keys ``"nested_not_pair"`` (nested-submodular but the
    extension is not convex) and ``"pair_not_nested"`` (convex extension but
    the nested condition fails), each a tabulated function or ``None``.
    """
    rng = np.random.default_rng(seed)
    found = {"nested_not_pair": None, "pair_not_nested": None}
    A, B = all_pair_masks(n)
    na, nb = A.sum(axis=1), B.sum(axis=1)
    for t in range(trials):
        mode = t % 4
        if mode == 0:
            f = random_pair_submodular(n, rng)
        elif mode == 3:
            g = random_graph(n, rng)
            U = A | B
            f = TabulatedSetPairFunction((U[:, g.u] != U[:, g.v]) @ g.w, name="union-cut")
        elif mode == 1:
            phi = rng.random((n + 1, n + 1))
            phi[0, 0] = 0.0
            f = TabulatedSetPairFunction(phi[na, nb], name="card")
        else:
            tab = rng.random(3**n)
            tab[0] = 0.0
            f = TabulatedSetPairFunction(tab, name="uniform")
        d = check_nested_submodular(f, condition="plain") is None
        p = check_pair_submodular(f) is None
        if d and not p and found["nested_not_pair"] is None:
            found["nested_not_pair"] = f
        if p and not d and found["pair_not_nested"] is None:
            found["pair_not_nested"] = f
        if all(v is not None for v in found.values()):
            break
    return found


BUILTINS = ("sqrt-card", "F1", "F2", "G1", "G2", "G3")


def builtin_function(name: str, n: int | None = None, g: Graph | None = None) -> SetPairFunction:
    from .functionals import TableFunction

    if name == "sqrt-card":
        if n is None:
            raise ValueError("sqrt-card needs n")
        return sqrt_card(n)
    if name in ("F1", "F2", "G1", "G2", "G3"):
        if g is None:
            raise ValueError(f"builtin {name} needs a graph")
        return TableFunction(g, name)
    raise ValueError(f"unknown builtin {name!r}; expected one of {BUILTINS}")


__all__ = [
    "ViolationCertificate", "ConvexityWitness", "check_pair_submodular",
    "check_nested_submodular", "check_partial_submodular", "convexity_probe",
    "original_submodular_check", "original_convexity_probe", "fhat", "sqrt_card",
    "indicator_card", "random_pair_submodular", "search_nested_counterexamples",
    "CardinalitySetFunction", "CutSetFunction", "join_meet", "indicator_identity_gap",
    "nested_function", "builtin_function", "BUILTINS",
]
