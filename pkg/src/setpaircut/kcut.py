"""Ternary encoding of k-cuts as set-pair problems on ``l * n`` coordinates.

A block vector ``x`` is an ``(l, n)`` array; block ``i`` (0-based) carries the
ternary digit of weight ``3**i``.  At threshold ``t`` vertex ``j`` gets digit 1
in block ``i`` when ``x[i, j] > t``, 2 when ``-x[i, j] > t`` and 0 otherwise.
The ``k`` top codes ``3**l - k .. 3**l - 1`` are the parts of the partition.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .graph import Graph
from .lovasz import SetPairFunction, setpair_extension_integral
from .relax import TIE_TOL, worker_count
from .setpair import GuardError

KCUT_GUARD = 10**7


class InExcludedSetError(ValueError):
    """The block vector lies in K (every z_j = 0), where the ratio is undefined."""


def default_levels(k: int) -> int:
    """Smallest ``l`` with ``3**l > k``."""
    if k < 2:
        raise ValueError("k must be >= 2")
    l = 1
    while 3**l <= k:
        l += 1
    return l


def _check(g: Graph, k: int, x) -> tuple[np.ndarray, int]:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if x.ndim != 2 or x.shape[1] != g.n:
        raise ValueError(f"block vector must have shape (l, {g.n}), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("block vector has non-finite entries")
    l = x.shape[0]
    if not 2 <= k < 3**l:
        raise ValueError(f"k = {k} outside 2 <= k < 3^l = {3**l}")
    return x, l


def vertex_codes(x, t: float) -> np.ndarray:
    """Ternary code of every vertex at threshold ``t``."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if t < 0:
        raise ValueError("threshold must be nonnegative")
    digits = (x > t).astype(np.int64) + 2 * (-x > t).astype(np.int64)
    return (3 ** np.arange(x.shape[0], dtype=np.int64)) @ digits


def parts_at_threshold(x, t: float) -> dict[int, frozenset]:
    """Nonempty code classes at threshold ``t`` (0-based vertices)."""
    codes = vertex_codes(x, t)
    return {int(c): frozenset(np.flatnonzero(codes == c).tolist()) for c in np.unique(codes)}


class KCutFunction(SetPairFunction):
    """``F(T1, T2) = sum |dA_c|`` or ``G = sum vol(A_c)`` over the top ``k`` codes,
    as a set-pair function on ``l * n`` coordinates (block-major)."""

    def __init__(self, g: Graph, k: int, l: int, which: str):
        if which not in ("F", "G"):
            raise ValueError("which must be 'F' or 'G'")
        if not 2 <= k < 3**l:
            raise ValueError(f"k = {k} outside 2 <= k < 3^l")
        super().__init__(g.n * l)
        self.graph, self.k, self.l, self.which = g, k, l, which
        self.name = f"{which}_k{k}"

    def values(self, A, B):
        g, l = self.graph, self.l
        A, B = np.asarray(A, bool), np.asarray(B, bool)
        shape = A.shape[:-1]
        A = A.reshape(-1, l, g.n)
        B = B.reshape(-1, l, g.n)
        digits = A.astype(np.int64) + 2 * B.astype(np.int64)
        codes = np.einsum("i,mij->mj", 3 ** np.arange(l, dtype=np.int64), digits)
        top = codes >= 3**l - self.k
        if self.which == "G":
            out = top @ g.degree
        else:
            differ = codes[:, g.u] != codes[:, g.v]
            out = ((top[:, g.u].astype(float) + top[:, g.v]) * differ) @ g.w
        return out.reshape(shape)


def kcut_FL_integral(g: Graph, k: int, x) -> float:
    x, l = _check(g, k, x)
    return setpair_extension_integral(KCutFunction(g, k, l, "F"), x.ravel())


def kcut_GL_integral(g: Graph, k: int, x) -> float:
    x, l = _check(g, k, x)
    return setpair_extension_integral(KCutFunction(g, k, l, "G"), x.ravel())


def _z(x: np.ndarray, k: int) -> np.ndarray:
    """First threshold at which each vertex's code drops below ``3**l - k``."""
    l, n = x.shape
    cand = np.unique(np.concatenate(([0.0], np.abs(x).ravel())))
    z = np.full(n, cand[-1])
    found = np.zeros(n, dtype=bool)
    for t in cand:
        low = (vertex_codes(x, t) < 3**l - k) & ~found
        z[low] = t
        found |= low
        if found.all():
            break
    return z


def _code_digits(c: int, l: int) -> np.ndarray:
    return np.array([(c // 3**i) % 3 for i in range(l)])


def _zpair(x: np.ndarray, k: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Length of ``{t : both endpoints carry code c}`` summed over top codes c."""
    l = x.shape[0]
    total = np.zeros(u.size)
    for c in range(3**l - k, 3**l):
        a = _code_digits(c, l)
        pos = a > 0
        s = np.where(a == 1, 1.0, -1.0)[pos]
        xs = x[pos] * s[:, None]
        upper = np.minimum(xs[:, u].min(axis=0), xs[:, v].min(axis=0))
        if (~pos).any():
            m = np.abs(x[~pos])
            lower = np.maximum(m[:, u].max(axis=0), m[:, v].max(axis=0))
        else:
            lower = np.zeros(u.size)
        total += np.maximum(upper - np.maximum(lower, 0.0), 0.0)
    return total


def kcut_FL_closed(g: Graph, k: int, x) -> float:
    """``sum d_j z_j - 2 sum w_ij sum_c z_ij^c``."""
    x, _ = _check(g, k, x)
    return float(g.degree @ _z(x, k) - 2 * g.w @ _zpair(x, k, g.u, g.v))


def kcut_GL_closed(g: Graph, k: int, x) -> float:
    x, _ = _check(g, k, x)
    return float(g.degree @ _z(x, k))


def kcut_FL(g: Graph, k: int, x, method: str = "closed") -> float:
    if method == "closed":
        return kcut_FL_closed(g, k, x)
    if method == "integral":
        return kcut_FL_integral(g, k, x)
    raise ValueError("method must be 'closed' or 'integral'")


def kcut_GL(g: Graph, k: int, x, method: str = "closed") -> float:
    if method == "closed":
        return kcut_GL_closed(g, k, x)
    if method == "integral":
        return kcut_GL_integral(g, k, x)
    raise ValueError("method must be 'closed' or 'integral'")


def in_excluded_set(x, k: int) -> bool:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    return not np.any(_z(x, k))


def kcut_ratio(g: Graph, k: int, x) -> float:
    x, _ = _check(g, k, x)
    if in_excluded_set(x, k):
        raise InExcludedSetError("x lies in K (all z_j = 0); the ratio is undefined")
    den = kcut_GL_closed(g, k, x)
    if den <= 0:
        raise ZeroDivisionError("G^L vanishes at x")
    return kcut_FL_closed(g, k, x) / den


def encode_partition(parts, k: int, n: int | None = None, l: int | None = None) -> np.ndarray:
    """Block vector whose top codes at any ``t in [0, 1)`` reproduce ``parts``.

    Part ``m`` (0-based) gets code ``3**l - k + m``; digit 1 maps to +1, 2 to -1.
    """
    parts = [frozenset(int(v) for v in p) for p in parts]
    if len(parts) > k:
        raise ValueError(f"{len(parts)} parts exceed k = {k}")
    seen = set()
    for p in parts:
        if p & seen:
            raise ValueError("parts overlap")
        seen |= p
    if n is None:
        n = max(seen) + 1 if seen else 0
    if seen != set(range(n)):
        raise ValueError("parts must cover every vertex")
    l = default_levels(k) if l is None else int(l)
    if not 2 <= k < 3**l:
        raise ValueError(f"k = {k} outside 2 <= k < 3^l")
    x = np.zeros((l, n))
    for m, p in enumerate(parts):
        d = _code_digits(3**l - k + m, l)
        col = np.where(d == 1, 1.0, np.where(d == 2, -1.0, 0.0))
        for j in p:
            x[:, j] = col
    return x


def kcut_discrete(g: Graph, k: int, sense: str = "min", nonempty: bool = False,
                  workers: int | None = None, chunk: int = 1 << 15):
    """Exhaustive optimum of ``sum |dA_i| / sum vol(A_i)`` over k-partitions.

    Labelings are enumerated in base ``k`` with vertex 0 most significant, so
    among near-ties the lexicographically smallest labeling wins.  Returns
    ``(value, parts, evaluations)``.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    if k < 2:
        raise ValueError("k must be >= 2")
    n = g.n
    total = k**n
    if total > KCUT_GUARD:
        raise GuardError(f"k^n = {k}^{n} exceeds the enumeration guard {KCUT_GUARD}")
    if g.total_volume <= 0:
        raise ValueError("graph has vol(V) = 0")
    sign = 1.0 if sense == "max" else -1.0
    powers = k ** np.arange(n - 1, -1, -1, dtype=np.int64)

    def run(start):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        L = (codes[:, None] // powers) % k
        cut = 2 * ((L[:, g.u] != L[:, g.v]) @ g.w)
        vol = np.stack([(L == i) @ g.degree for i in range(k)]).sum(axis=0)
        val = cut / vol
        if nonempty:
            full = np.all([(L == i).any(axis=1) for i in range(k)], axis=0)
            val[~full] = np.nan
        ok = ~np.isnan(val)
        if not ok.any():
            return 0, None
        s = np.where(ok, sign * val, -np.inf)
        i = int(np.argmax(s))
        return int(ok.sum()), (float(s[i]), int(codes[i]))

    starts = range(0, total, chunk)
    nw = worker_count(workers)
    if nw == 1:
        res = [run(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=nw) as ex:
            res = list(ex.map(run, starts))
    count = sum(r[0] for r in res)
    cands = [r[1] for r in res if r[1] is not None]
    if not cands:
        raise ValueError("no feasible k-partition")
    best = max(c[0] for c in cands)
    code = min(c[1] for c in cands if c[0] >= best - TIE_TOL * max(1.0, abs(best)))
    labels = (code // powers) % k
    parts = tuple(frozenset(np.flatnonzero(labels == i).tolist()) for i in range(k))
    value = sum(_boundary(g, p) for p in parts) / sum(g.degree[list(p)].sum() for p in parts)
    return float(value), parts, count


def _boundary(g: Graph, part) -> float:
    m = np.zeros(g.n, dtype=bool)
    m[list(part)] = True
    return float(g.w[m[g.u] != m[g.v]].sum())


def parse_block_vector(text: str, n: int | None = None) -> np.ndarray:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([float(t) for t in line.replace(",", " ").split()])
    if not rows or len({len(r) for r in rows}) != 1:
        raise ValueError("block vector needs l lines of equal length")
    x = np.array(rows)
    if n is not None and x.shape[1] != n:
        raise ValueError(f"block vector rows have {x.shape[1]} entries, expected {n}")
    if not np.all(np.isfinite(x)):
        raise ValueError("block vector has non-finite entries")
    return x


def format_block_vector(x) -> str:
    return "".join(" ".join(repr(float(v)) for v in row) + "\n" for row in np.atleast_2d(x))
