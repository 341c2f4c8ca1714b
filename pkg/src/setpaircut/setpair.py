"""Disjoint set-pairs, their signed indicator vectors and threshold chains.

A set-pair ``(A, B)`` over ``n`` vertices is identified with a ternary code
``sum(d_i * 3**i)`` where digit ``d_i`` is 0 if vertex ``i`` is in neither
set, 1 if it is in ``A`` and 2 if it is in ``B``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

ENUMERATION_LIMIT = 16


class GuardError(ValueError):
    """An exhaustive routine was asked for a size beyond its guard."""


class ChainError(ValueError):
    pass


def _fs(s) -> frozenset:
    return frozenset(int(i) for i in s)


@dataclass(frozen=True)
class SetPair:
    """Ordered pair of disjoint 0-based vertex sets."""

    a: frozenset = frozenset()
    b: frozenset = frozenset()

    def __post_init__(self):
        a, b = _fs(self.a), _fs(self.b)
        if a & b:
            raise ValueError(f"set-pair parts overlap on {sorted(a & b)}")
        if any(i < 0 for i in a | b):
            raise ValueError("negative vertex index")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_masks(cls, a_mask, b_mask) -> "SetPair":
        return cls(np.flatnonzero(a_mask), np.flatnonzero(b_mask))

    def masks(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        a = np.zeros(n, dtype=bool)
        b = np.zeros(n, dtype=bool)
        a[list(self.a)] = True
        b[list(self.b)] = True
        return a, b

    def code(self) -> int:
        return sum(3**i for i in self.a) + sum(2 * 3**i for i in self.b)

    @classmethod
    def from_code(cls, code: int, n: int) -> "SetPair":
        a, b = [], []
        for i in range(n):
            code, d = divmod(code, 3)
            if d == 1:
                a.append(i)
            elif d == 2:
                b.append(i)
        return cls(a, b)

    def is_empty(self) -> bool:
        return not self.a and not self.b

    def __le__(self, other: "SetPair") -> bool:
        return self.a <= other.a and self.b <= other.b

    def __ge__(self, other: "SetPair") -> bool:
        return other <= self

    def to_json(self) -> dict:
        return {"a": sorted(i + 1 for i in self.a), "b": sorted(i + 1 for i in self.b)}

    def __str__(self):
        fmt = lambda s: "{" + ",".join(str(i + 1) for i in sorted(s)) + "}"
        return f"A={fmt(self.a)};B={fmt(self.b)}"


_TEXT_RE = re.compile(r"^\s*A=\{([\d,\s]*)\};\s*B=\{([\d,\s]*)\}\s*$")


def parse_setpair(text: str) -> SetPair:
    """Read either ``A={1,2};B={3}`` or ``{"a": [1, 2], "b": [3]}`` (1-based)."""
    m = _TEXT_RE.match(text)
    if m:
        parts = [[int(t) for t in g.replace(" ", "").split(",") if t] for g in m.groups()]
    else:
        obj = json.loads(text)
        parts = [obj.get("a", []), obj.get("b", [])]
    if any(i < 1 for p in parts for i in p):
        raise ValueError("set-pair labels are 1-based")
    return SetPair([i - 1 for i in parts[0]], [i - 1 for i in parts[1]])


@dataclass(frozen=True)
class NestedPair:
    """Pair ``inner <= outer`` of vertex sets."""

    inner: frozenset = frozenset()
    outer: frozenset = frozenset()

    def __post_init__(self):
        inner, outer = _fs(self.inner), _fs(self.outer)
        if not inner <= outer:
            raise ValueError("inner set must be contained in outer set")
        object.__setattr__(self, "inner", inner)
        object.__setattr__(self, "outer", outer)


def nested_from_setpair(p: SetPair) -> NestedPair:
    return NestedPair(p.a, p.a | p.b)


def setpair_from_nested(q: NestedPair) -> SetPair:
    return SetPair(q.inner, q.outer - q.inner)


def indicator(p: SetPair, n: int) -> np.ndarray:
    """Signed indicator: +1 on A, -1 on B, 0 elsewhere."""
    a, b = p.masks(n)
    return a.astype(float) - b.astype(float)


def decode_indicator(x) -> SetPair:
    x = np.asarray(x, dtype=float)
    if not np.all((x == 0) | (x == 1) | (x == -1)):
        raise ValueError("vector is not a signed indicator (entries must be -1, 0 or 1)")
    return SetPair(np.flatnonzero(x == 1), np.flatnonzero(x == -1))


def _guard(n: int, limit: int = ENUMERATION_LIMIT):
    if n > limit:
        raise GuardError(f"exhaustive enumeration over 3^{n} set-pairs exceeds guard n <= {limit}")


def enumerate_setpairs(n: int) -> Iterator[SetPair]:
    """All ``3**n`` set-pairs in ternary-counter order (vertex 0 least significant)."""
    _guard(n)
    for code in range(3**n):
        yield SetPair.from_code(code, n)


def code_digits(codes: np.ndarray, n: int) -> np.ndarray:
    """Ternary digits (len(codes) x n), vertex 0 least significant."""
    codes = np.asarray(codes, dtype=np.int64)
    return (codes[:, None] // (3 ** np.arange(n, dtype=np.int64))) % 3


def pair_masks(codes: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    d = code_digits(codes, n)
    return d == 1, d == 2


def masks_to_codes(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    p = 3 ** np.arange(A.shape[-1], dtype=np.int64)
    return A.astype(np.int64) @ p + 2 * (B.astype(np.int64) @ p)


def all_pair_masks(n: int, limit: int = ENUMERATION_LIMIT):
    _guard(n, limit)
    return pair_masks(np.arange(3**n), n)


def code_chunks(total: int, chunk: int = 1 << 16):
    for start in range(0, total, chunk):
        yield np.arange(start, min(total, start + chunk), dtype=np.int64)


def label_key(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Tie-breaking key: lexicographic order of per-vertex labels A < B < rest,
    vertex 0 most significant.  Smaller key wins among equal objective values."""
    n = A.shape[-1]
    rank = np.where(A, 0, np.where(B, 1, 2)).astype(np.int64)
    return rank @ (3 ** np.arange(n - 1, -1, -1, dtype=np.int64))


# -------------------------------------------------------------- thresholds

@dataclass(frozen=True)
class ChainDecomposition:
    """Nested set-pairs ``pairs[0] >= pairs[1] >= ...`` with gaps ``lam``.

    For a chain produced by :func:`threshold_pairs`, ``pairs[i]`` is the pair of
    vertices strictly above (resp. below minus) the ``i``-th smallest magnitude
    (with a leading sentinel magnitude 0) and ``sum(lam[i] * indicator(pairs[i]))``
    recovers the source vector.
    """

    n: int
    pairs: tuple
    gaps: np.ndarray
    sigma: tuple = ()

    def reconstruct(self) -> np.ndarray:
        x = np.zeros(self.n)
        for lam, p in zip(self.gaps, self.pairs):
            x += lam * indicator(p, self.n)
        return x

    def compressed(self) -> "ChainDecomposition":
        """Drop zero gaps and merge repeated pairs; unique for a given vector."""
        pairs, gaps = [], []
        for lam, p in zip(self.gaps, self.pairs):
            if lam <= 0:
                continue
            if pairs and pairs[-1] == p:
                gaps[-1] += lam
            else:
                pairs.append(p)
                gaps.append(float(lam))
        return ChainDecomposition(self.n, tuple(pairs), np.array(gaps), self.sigma)

    def validate(self, x=None, tol: float = 1e-12):
        if len(self.pairs) != len(self.gaps):
            raise ChainError("pairs and gaps differ in length")
        if np.any(np.asarray(self.gaps) < 0):
            raise ChainError("negative gap")
        for outer, inner in zip(self.pairs, self.pairs[1:]):
            if not inner <= outer:
                raise ChainError(f"chain not nested: {inner} is not inside {outer}")
        rec = self.reconstruct()
        total = float(np.sum(self.gaps))
        sup = float(np.max(np.abs(rec), initial=0.0))
        if abs(total - sup) > tol * max(1.0, sup):
            raise ChainError(f"gaps sum to {total}, reconstruction has sup-norm {sup}")
        if x is not None and np.max(np.abs(rec - np.asarray(x, float)), initial=0.0) > tol * max(1.0, sup):
            raise ChainError("chain does not reconstruct the vector")


def _check_order(mags: np.ndarray, order) -> np.ndarray:
    order = np.asarray(order, dtype=np.intp)
    if sorted(order.tolist()) != list(range(len(mags))):
        raise ValueError("order must be a permutation of the vertices")
    if np.any(np.diff(mags[order]) < 0):
        raise ValueError("order must sort the magnitudes ascending")
    return order


def threshold_pairs(x, order=None) -> ChainDecomposition:
    """Threshold chain of ``x``.

    ``order`` optionally overrides the default tie-breaking (stable sort of
    ``(|x_i|, i)``); it must still sort the magnitudes ascending.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    n = x.size
    mags = np.abs(x)
    order = np.argsort(mags, kind="stable") if order is None else _check_order(mags, order)
    srt = mags[order]
    thresh = np.concatenate(([0.0], srt[:-1]))
    gaps = srt - thresh
    pairs = tuple(SetPair(np.flatnonzero(x > t), np.flatnonzero(-x > t)) for t in thresh)
    sigma = (0,) + tuple(int(i) + 1 for i in order)
    return ChainDecomposition(n, pairs, gaps, sigma)


def threshold_masks(X: np.ndarray):
    """Batched threshold pairs of every row of ``X`` (m x n).

    Returns ``(A, B, gaps)`` with ``A, B`` boolean of shape (m, n, n) where
    ``A[r, i]`` is the positive part of the ``i``-th threshold pair of row ``r``.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    mags = np.abs(X)
    srt = np.sort(mags, axis=1, kind="stable")
    thresh = np.concatenate((np.zeros((X.shape[0], 1)), srt[:, :-1]), axis=1)
    gaps = srt - thresh
    A = X[:, None, :] > thresh[:, :, None]
    B = -X[:, None, :] > thresh[:, :, None]
    return A, B, gaps
