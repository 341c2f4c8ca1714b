"""Set-pair and original Lovász extensions.

Three independent evaluation paths are provided for the set-pair extension:
the threshold sum (:func:`setpair_extension`), the piecewise-constant integral
over ``[0, ||x||_inf]`` (:func:`setpair_extension_integral`) and the chain form
(:func:`setpair_extension_chain`).
"""
from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from .setpair import (
    ChainDecomposition,
    all_pair_masks,
    masks_to_codes,
    threshold_masks,
)


class SetPairFunction:
    """Nonnegative function on disjoint set-pairs of ``n`` vertices.

    Subclasses implement :meth:`values` on batches of boolean masks.  A subclass
    may also provide :meth:`closed_extension` when its extension has a closed form.
    """

    name = "f"
    symmetric_hint: bool | None = None

    def __init__(self, n: int):
        self.n = int(n)

    def values(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, a, b=None) -> float:
        if b is None:
            a, b = a.masks(self.n)
        else:
            a, b = np.asarray(a, bool), np.asarray(b, bool)
        return float(self.values(a[None, :], b[None, :])[0])

    def closed_extension(self, X: np.ndarray):
        return None

    def extension(self, X) -> np.ndarray:
        """Batched extension, closed form when available."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        out = self.closed_extension(X)
        return setpair_extension_batch(self, X) if out is None else out

    def table(self) -> np.ndarray:
        """Dense tabulation over all ``3**n`` ternary codes."""
        return self.values(*all_pair_masks(self.n))

    def __add__(self, other):
        return LinearCombination([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return LinearCombination([(1.0, self), (-1.0, other)])

    def __rmul__(self, c):
        return LinearCombination([(float(c), self)])

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} n={self.n}>"


class TabulatedSetPairFunction(SetPairFunction):
    """Dense table indexed by ternary code (digit 0: absent, 1: in A, 2: in B)."""

    def __init__(self, table, name: str = "tabulated"):
        table = np.asarray(table, dtype=float)
        n = 0
        while 3**n < table.size:
            n += 1
        if 3**n != table.size:
            raise ValueError(f"table length {table.size} is not a power of 3")
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            raise ValueError("tabulated values must be finite and nonnegative")
        super().__init__(n)
        self._table = table.copy()
        self._table.setflags(write=False)
        self.name = name

    @property
    def empty_value(self) -> float:
        return float(self._table[0])

    def values(self, A, B):
        return self._table[masks_to_codes(A, B)]

    def table(self):
        return self._table.copy()

    @property
    def symmetric_hint(self):
        A, B = all_pair_masks(self.n)
        return bool(np.array_equal(self._table, self._table[masks_to_codes(B, A)]))


class CallableSetPairFunction(SetPairFunction):
    """Wraps ``fn(a_mask, b_mask) -> float``; evaluated row by row."""

    def __init__(self, fn, n: int, name: str = "f", symmetric_hint=None):
        super().__init__(n)
        self.fn = fn
        self.name = name
        self.symmetric_hint = symmetric_hint

    def values(self, A, B):
        A, B = np.asarray(A, bool), np.asarray(B, bool)
        flat_a = A.reshape(-1, self.n)
        flat_b = B.reshape(-1, self.n)
        out = np.array([float(self.fn(a, b)) for a, b in zip(flat_a, flat_b)])
        return out.reshape(A.shape[:-1])


class LinearCombination(SetPairFunction):
    """``sum(c_k * f_k)``; the extension is linear in the function, so closed
    forms combine term by term."""

    def __init__(self, terms, name: str | None = None):
        terms = [(float(c), f) for c, f in terms]
        ns = {f.n for _, f in terms}
        if len(ns) != 1:
            raise ValueError("terms live on different ground sets")
        super().__init__(ns.pop())
        flat = []
        for c, f in terms:
            if isinstance(f, LinearCombination):
                flat += [(c * c2, f2) for c2, f2 in f.terms]
            else:
                flat.append((c, f))
        self.terms = flat
        self.name = name or " + ".join(f"{c:g}*{f.name}" for c, f in flat)
        hints = [f.symmetric_hint for _, f in flat]
        self.symmetric_hint = all(hints) if all(h is not None for h in hints) else None

    def values(self, A, B):
        return sum(c * f.values(A, B) for c, f in self.terms)

    def closed_extension(self, X):
        parts = [f.closed_extension(X) for _, f in self.terms]
        if any(p is None for p in parts):
            return None
        return sum(c * p for (c, _), p in zip(self.terms, parts))


class SetFunction:
    """Nonnegative function on subsets of ``n`` vertices (batched on masks)."""

    name = "f"

    def __init__(self, n: int):
        self.n = int(n)

    def values(self, S: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, s) -> float:
        s = np.asarray(s, bool)
        return float(self.values(s[None, :])[0])


class CallableSetFunction(SetFunction):
    def __init__(self, fn, n: int, name: str = "f"):
        super().__init__(n)
        self.fn = fn
        self.name = name

    def values(self, S):
        S = np.asarray(S, bool)
        flat = S.reshape(-1, self.n)
        return np.array([float(self.fn(s)) for s in flat]).reshape(S.shape[:-1])


class TabulatedSetFunction(SetFunction):
    """Table indexed by the bitmask ``sum(2**i for i in S)``."""

    def __init__(self, table, name: str = "tabulated"):
        table = np.asarray(table, dtype=float)
        n = int(np.log2(table.size)) if table.size else -1
        if n < 0 or 2**n != table.size:
            raise ValueError("table length must be a power of 2")
        super().__init__(n)
        self._table = table.copy()
        self.name = name

    def values(self, S):
        S = np.asarray(S, bool)
        return self._table[S.astype(np.int64) @ (2 ** np.arange(self.n, dtype=np.int64))]


# ------------------------------------------------------------ set-pair forms

def setpair_extension_batch(f: SetPairFunction, X) -> np.ndarray:
    """Threshold-sum extension of every row of ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    m, n = X.shape
    if n != f.n:
        raise ValueError(f"vector dimension {n} does not match function size {f.n}")
    if not np.all(np.isfinite(X)):
        raise ValueError("vector has non-finite entries")
    A, B, gaps = threshold_masks(X)
    vals = f.values(A.reshape(m * n, n), B.reshape(m * n, n)).reshape(m, n)
    return np.sum(gaps * vals, axis=1)


def setpair_extension(f: SetPairFunction, x) -> float:
    return float(setpair_extension_batch(f, np.asarray(x, dtype=float)[None, :])[0])


def setpair_extension_integral(f: SetPairFunction, x, steps: int = 1) -> float:
    """Integral of ``f(V_t^+, V_t^-)`` over ``t in [0, ||x||_inf]``.

    The integrand is constant between consecutive distinct magnitudes, so one
    midpoint per piece is exact; ``steps > 1`` subdivides each piece anyway.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    brk = np.unique(np.concatenate(([0.0], np.abs(x))))
    lo, hi = brk[:-1], brk[1:]
    if lo.size == 0:
        return 0.0
    frac = (np.arange(steps) + 0.5) / steps
    t = (lo[:, None] + (hi - lo)[:, None] * frac[None, :]).ravel()
    width = np.repeat((hi - lo) / steps, steps)
    A = x[None, :] > t[:, None]
    B = -x[None, :] > t[:, None]
    return float(np.sum(width * f.values(A, B)))


def setpair_extension_chain(f: SetPairFunction, chain: ChainDecomposition, validate=True) -> float:
    if validate:
        chain.validate()
    return float(sum(lam * f(p) for lam, p in zip(chain.gaps, chain.pairs)))


# ------------------------------------------------------------ original form

def original_extension_batch(f: SetFunction, X) -> np.ndarray:
    """Classical Lovász extension of every row (ascending sort, sentinel
    x_0 = 0, V_0 = V)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    m, n = X.shape
    srt = np.sort(X, axis=1)
    S = np.ones((m, n, n), dtype=bool)
    S[:, 1:] = X[:, None, :] > srt[:, :-1, None]
    steps = np.diff(np.concatenate((np.zeros((m, 1)), srt), axis=1), axis=1)
    return np.sum(steps * f.values(S.reshape(m * n, n)).reshape(m, n), axis=1)


def original_extension(f: SetFunction, x) -> float:
    return float(original_extension_batch(f, np.asarray(x, dtype=float)[None, :])[0])


def original_extension_integral(f: SetFunction, x) -> float:
    """Integral of ``f(V_t)`` over ``[min x, max x]`` plus ``f(V) * min x``."""
    x = np.asarray(x, dtype=float)
    brk = np.unique(x)
    lo, hi = brk[:-1], brk[1:]
    total = f(np.ones(x.size, dtype=bool)) * float(x.min())
    if lo.size:
        t = 0.5 * (lo + hi)
        total += float(np.sum((hi - lo) * f.values(x[None, :] > t[:, None])))
    return float(total)


# -------------------------------------------------------------- properties

@dataclass
class PropertyReport:
    homogeneity: float
    sign_shift: float
    additivity: float
    scaling: float
    evenness: float
    symmetric: bool | None

    def as_dict(self):
        return asdict(self)


def _random_vectors(n, trials, rng):
    X = rng.normal(size=(trials, n))
    k = trials // 4
    X[:k] = rng.integers(-2, 3, size=(k, n))  # ties and zeros
    return X


def extension_properties_check(f: SetPairFunction, trials: int = 200, seed: int = 0,
                               partner: SetPairFunction | None = None) -> PropertyReport:
    """Maximum violation of each algebraic identity of the extension over random
    vectors, positive scalings and nonnegative sign shifts."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n = f.n
    X = _random_vectors(n, trials, rng)
    lam = rng.uniform(0.1, 5.0, size=trials)
    alpha = rng.uniform(0.0, 3.0, size=trials)
    if partner is None:
        partner = TabulatedSetPairFunction(rng.random(3**n), name="partner")
    c = 2.5

    fx = setpair_extension_batch(f, X)
    homog = np.abs(setpair_extension_batch(f, lam[:, None] * X) - lam * fx)

    shifted = X + alpha[:, None] * np.sign(X)
    base = f.values(X > 0, X < 0)
    shift = np.abs(setpair_extension_batch(f, shifted) - fx - alpha * base)

    fg = LinearCombination([(1.0, f), (1.0, partner)])
    add = np.abs(setpair_extension_batch(fg, X) - fx - setpair_extension_batch(partner, X))
    scal = np.abs(setpair_extension_batch(LinearCombination([(c, f)]), X) - c * fx)
    even = np.abs(setpair_extension_batch(f, -X) - fx)

    sym = None
    if n <= 8:
        A, B = all_pair_masks(n)
        sym = bool(np.allclose(f.values(A, B), f.values(B, A), rtol=0, atol=1e-12))
    return PropertyReport(float(homog.max()), float(shift.max()), float(add.max()),
                          float(scal.max()), float(even.max()), sym)


# ------------------------------------------------------- tabulated file I/O

def read_tabulated(text: str, name: str = "tabulated") -> TabulatedSetPairFunction:
    """Parse ``code value`` lines covering every code ``0..3**n - 1`` once."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 2:
            raise ValueError(f"line {lineno}: expected 'code value'")
        code, val = int(tok[0]), float(tok[1])
        if code in entries:
            raise ValueError(f"line {lineno}: code {code} repeated")
        entries[code] = val
    size = len(entries)
    if sorted(entries) != list(range(size)):
        raise ValueError("codes must cover 0..3^n-1 exactly")
    return TabulatedSetPairFunction([entries[c] for c in range(size)], name=name)


def write_tabulated(f: SetPairFunction) -> str:
    return "".join(f"{c} {float(v)!r}\n" for c, v in enumerate(f.table()))


def random_tabulated(n: int, rng: np.random.Generator, zero_empty: bool = True,
                     name: str = "random") -> TabulatedSetPairFunction:
    t = rng.random(3**n)
    if zero_empty:
        t[0] = 0.0
    return TabulatedSetPairFunction(t, name=name)

