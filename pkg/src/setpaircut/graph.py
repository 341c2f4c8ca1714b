"""Weighted undirected graphs and the elementary cut quantities.

Vertices are 0-indexed everywhere in the Python API.  The edge-list text
format (and the CLI / JSON surfaces) use 1-indexed labels.

A *vertex set* argument may be given either as a boolean mask of length
``n`` or as an iterable of 0-based vertex indices.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class EdgeListError(ValueError):
    """Base class for edge-list parse errors; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedLineError(EdgeListError):
    pass


class DuplicateEdgeError(EdgeListError):
    pass


class SelfLoopError(EdgeListError):
    pass


class VertexRangeError(EdgeListError):
    pass


class WeightError(EdgeListError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable weighted undirected graph on vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : sequence of (u, v, w)
        0-based endpoints and a finite nonnegative weight.  Self-loops and
        repeated unordered pairs are rejected.
    """

    n: int
    edges: tuple = ()
    u: np.ndarray = field(init=False, repr=False)
    v: np.ndarray = field(init=False, repr=False)
    w: np.ndarray = field(init=False, repr=False)
    degree: np.ndarray = field(init=False, repr=False)
    total_volume: float = field(init=False)

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen = set()
        clean = []
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise VertexRangeError(f"edge ({u}, {v}) outside 0..{n - 1}")
            if not math.isfinite(w) or w < 0:
                raise WeightError(f"weight {w!r} must be finite and nonnegative")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdgeError(f"duplicate edge {key}")
            seen.add(key)
            clean.append((u, v, w))
        uu = np.array([e[0] for e in clean], dtype=np.intp)
        vv = np.array([e[1] for e in clean], dtype=np.intp)
        ww = np.array([e[2] for e in clean], dtype=float)
        degree = np.zeros(n)
        for a, b, c in clean:
            degree[a] += c
            degree[b] += c
        for arr in (uu, vv, ww, degree):
            arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(clean))
        object.__setattr__(self, "u", uu)
        object.__setattr__(self, "v", vv)
        object.__setattr__(self, "w", ww)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "total_volume", float(degree.sum()))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> np.ndarray:
        """Dense symmetric weight matrix (fresh copy)."""
        a = np.zeros((self.n, self.n))
        a[self.u, self.v] = self.w
        a[self.v, self.u] = self.w
        return a

    @classmethod
    def from_adjacency(cls, a) -> "Graph":
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency matrix must be square")
        if not np.allclose(a, a.T, rtol=0, atol=0):
            raise ValueError("adjacency matrix must be symmetric")
        if np.any(np.diag(a) != 0):
            raise SelfLoopError("adjacency matrix has a nonzero diagonal")
        iu, ju = np.nonzero(np.triu(a, 1))
        return cls(a.shape[0], [(i, j, a[i, j]) for i, j in zip(iu, ju)])

    def mask(self, s) -> np.ndarray:
        return as_mask(s, self.n)

    def digest(self) -> dict:
        text = write_edge_list(self)
        return {
            "n": self.n,
            "m": self.m,
            "weight_sum": float(self.w.sum()),
            "sha256": hashlib.sha256(text.encode()).hexdigest(),
        }

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m}, vol={self.total_volume:g})"


def as_mask(s, n: int) -> np.ndarray:
    """Boolean membership mask for a vertex set (mask or 0-based indices)."""
    arr = np.asarray(s)
    if arr.dtype == bool:
        if arr.shape != (n,):
            raise ValueError(f"mask has shape {arr.shape}, expected ({n},)")
        return arr
    idx = np.fromiter((int(i) for i in s), dtype=np.intp)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"vertex index outside 0..{n - 1}")
    out = np.zeros(n, dtype=bool)
    out[idx] = True
    return out


def boundary_weight(g: Graph, s) -> float:
    """|dS|: total weight of edges with exactly one endpoint in ``s``."""
    m = g.mask(s)
    return float(g.w[m[g.u] != m[g.v]].sum())


def cross_weight(g: Graph, a, b) -> float:
    """|E(A,B)| for disjoint ``a`` and ``b``."""
    ma, mb = g.mask(a), g.mask(b)
    if np.any(ma & mb):
        raise ValueError("cross_weight needs disjoint vertex sets")
    hit = (ma[g.u] & mb[g.v]) | (mb[g.u] & ma[g.v])
    return float(g.w[hit].sum())


def volume(g: Graph, s) -> float:
    return float(g.degree[g.mask(s)].sum())


def internal_weight(g: Graph, s) -> float:
    m = g.mask(s)
    return float(g.w[m[g.u] & m[g.v]].sum())


# Batched versions over k x n boolean matrices; used by the enumeration oracles.

def boundary_rows(g: Graph, A: np.ndarray) -> np.ndarray:
    return (A[:, g.u] != A[:, g.v]) @ g.w


def cross_rows(g: Graph, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    hit = (A[:, g.u] & B[:, g.v]) | (B[:, g.u] & A[:, g.v])
    return hit @ g.w


def volume_rows(g: Graph, A: np.ndarray) -> np.ndarray:
    return A @ g.degree


# ---------------------------------------------------------------- text format

def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_edge_list(text: str | Iterable[str]) -> Graph:
    """Parse the ``n m`` / ``u v w`` edge-list format (1-based vertices)."""
    lines = text.splitlines() if isinstance(text, str) else list(text)
    header = None
    edges = []
    seen = {}
    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line:
            continue
        tok = line.split()
        if header is None:
            if len(tok) != 2:
                raise MalformedLineError("header must be 'n m'", lineno)
            try:
                n, m = int(tok[0]), int(tok[1])
            except ValueError:
                raise MalformedLineError(f"bad header {line!r}", lineno) from None
            if n < 0 or m < 0:
                raise MalformedLineError("negative counts in header", lineno)
            header = (n, m)
            continue
        if len(tok) != 3:
            raise MalformedLineError(f"expected 'u v w', got {line!r}", lineno)
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise MalformedLineError(f"non-integer vertex in {line!r}", lineno) from None
        try:
            w = float(tok[2])
        except ValueError:
            raise MalformedLineError(f"non-numeric weight {tok[2]!r}", lineno) from None
        n = header[0]
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexRangeError(f"vertex out of range 1..{n} in {line!r}", lineno)
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}", lineno)
        if not math.isfinite(w) or w < 0:
            raise WeightError(f"weight {tok[2]!r} must be finite and nonnegative", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdgeError(
                f"duplicate edge {key[0]}-{key[1]} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append((u - 1, v - 1, w))
    if header is None:
        raise MalformedLineError("missing 'n m' header", None)
    if len(edges) != header[1]:
        raise MalformedLineError(
            f"header announces {header[1]} edges, found {len(edges)}", len(lines))
    return Graph(header[0], edges)


def write_edge_list(g: Graph) -> str:
    rows = sorted((min(u, v) + 1, max(u, v) + 1, w) for u, v, w in g.edges)
    out = [f"{g.n} {g.m}"]
    out += [f"{u} {v} {w!r}" for u, v, w in rows]
    return "\n".join(out) + "\n"


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


# ------------------------------------------------------------- small graphs

def complete_graph(n: int, weight: float = 1.0) -> Graph:
    return Graph(n, [(i, j, weight) for i in range(n) for j in range(i + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n, 1.0) for i in range(n)])


def random_graph(n: int, rng: np.random.Generator, p: float = 0.6) -> Graph:
    """Random graph with weights in (0, 1]; a random spanning path keeps every
    degree positive so ratio denominators never vanish."""
    order = rng.permutation(n)
    pairs = {tuple(sorted((int(order[i]), int(order[i + 1])))) for i in range(n - 1)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                pairs.add((i, j))
    pairs = sorted(pairs)
    weights = 1.0 - rng.random(len(pairs))  # (0, 1]
    return Graph(n, [(i, j, w) for (i, j), w in zip(pairs, weights)])


def disjoint_union(*graphs: Sequence[Graph]) -> Graph:
    edges, off = [], 0
    for g in graphs:
        edges += [(u + off, v + off, w) for u, v, w in g.edges]
        off += g.n
    return Graph(off, edges)
