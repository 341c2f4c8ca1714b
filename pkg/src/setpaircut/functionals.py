"""Closed-form graph functionals and the five tabulated set-pair objectives.

Every functional accepts a single vector (returns a float) or a 2-D array of
row vectors (returns an array).
"""
from __future__ import annotations

import re

import numpy as np

from .graph import Graph, boundary_rows, cross_rows, volume_rows
from .lovasz import SetPairFunction

TABLE_NAMES = ("F1", "F2", "G1", "G2", "G3")


def _rows(g: Graph, x):
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = np.atleast_2d(X)
    if X.shape[1] != g.n:
        raise ValueError(f"vector dimension {X.shape[1]} does not match graph size {g.n}")
    return X, single


def _out(v, single):
    return float(v[0]) if single else v


def tv(g: Graph, x):
    """I(x): sum of w_ij |x_i - x_j| over edges."""
    X, single = _rows(g, x)
    return _out(np.abs(X[:, g.u] - X[:, g.v]) @ g.w, single)


def iplus(g: Graph, x):
    """I+(x): sum of w_ij |x_i + x_j| over edges."""
    X, single = _rows(g, x)
    return _out(np.abs(X[:, g.u] + X[:, g.v]) @ g.w, single)


def ihat(g: Graph, x):
    """I^(x): sum of w_ij ||x_i| - |x_j|| over edges."""
    X, single = _rows(g, x)
    M = np.abs(X)
    return _out(np.abs(M[:, g.u] - M[:, g.v]) @ g.w, single)


def dnorm1(g: Graph, x):
    """Degree-weighted 1-norm ``sum d_i |x_i|``."""
    X, single = _rows(g, x)
    return _out(np.abs(X) @ g.degree, single)


def sup_norm(x):
    X = np.asarray(x, dtype=float)
    if X.ndim == 1:
        return float(np.max(np.abs(X), initial=0.0))
    return np.max(np.abs(X), axis=1, initial=0.0)


def median_dev_rows(g: Graph, V) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise ``min_alpha sum d_i |v_i - alpha|`` and its degree-weighted median.

    The minimiser is ``v_(k0)`` for the first sorted position ``k0`` at which the
    cumulative degree reaches half the total volume (ties by vertex index).
    """
    V, _ = _rows(g, V)
    m = V.shape[0]
    if g.total_volume == 0 or g.n == 0:
        return np.zeros(m), np.zeros(m)
    order = np.argsort(V, axis=1, kind="stable")
    cum = np.cumsum(g.degree[order], axis=1)
    k0 = np.argmax(cum >= 0.5 * g.total_volume, axis=1)
    alpha = np.take_along_axis(V, order, axis=1)[np.arange(m), k0]
    value = np.abs(V - alpha[:, None]) @ g.degree
    return value, alpha


def median_dev(g: Graph, v) -> tuple[float, float]:
    value, alpha = median_dev_rows(g, np.asarray(v, dtype=float)[None, :])
    return float(value[0]), float(alpha[0])


def median_dev_value(g: Graph, x):
    X, single = _rows(g, x)
    return _out(median_dev_rows(g, X)[0], single)


class TableFunction(SetPairFunction):
    """Discrete row of the table of graph objectives with its closed-form extension.

    ``F1 = |dA| + |dB|``, ``F2 = |E(A,B)|``, ``G1 = vol(V)``,
    ``G2 = vol(A) + vol(B)``, ``G3 = sum over X in {A, B} of min(vol X, vol X^c)``.
    """

    def __init__(self, g: Graph, name: str):
        if name not in TABLE_NAMES:
            raise ValueError(f"unknown table function {name!r}; expected one of {TABLE_NAMES}")
        super().__init__(g.n)
        self.graph = g
        self.name = name
        self.symmetric_hint = True

    def values(self, A, B):
        g = self.graph
        A, B = np.asarray(A, bool), np.asarray(B, bool)
        shape = A.shape[:-1]
        A, B = A.reshape(-1, g.n), B.reshape(-1, g.n)
        if self.name == "F1":
            out = boundary_rows(g, A) + boundary_rows(g, B)
        elif self.name == "F2":
            out = cross_rows(g, A, B)
        elif self.name == "G1":
            out = np.full(A.shape[0], g.total_volume)
        elif self.name == "G2":
            out = volume_rows(g, A) + volume_rows(g, B)
        else:
            va, vb = volume_rows(g, A), volume_rows(g, B)
            vol = g.total_volume
            out = np.minimum(va, vol - va) + np.minimum(vb, vol - vb)
        return out.reshape(shape)

    def closed_extension(self, X):
        return table_extension_closed(self.graph, self.name, X)


class UnionMinVolume(SetPairFunction):
    """``min(vol(A u B), vol(V \\ (A u B)))``; extension is the median deviation of |x|."""

    name = "Gunion"
    symmetric_hint = True

    def __init__(self, g: Graph):
        super().__init__(g.n)
        self.graph = g

    def values(self, A, B):
        U = np.asarray(A, bool) | np.asarray(B, bool)
        shape = U.shape[:-1]
        vu = volume_rows(self.graph, U.reshape(-1, self.graph.n))
        return np.minimum(vu, self.graph.total_volume - vu).reshape(shape)

    def closed_extension(self, X):
        return median_dev_value(self.graph, np.abs(np.atleast_2d(X)))


def table_function(g: Graph, name: str) -> TableFunction:
    return TableFunction(g, name)


def table_extension_closed(g: Graph, name: str, x):
    """Closed-form extension of a table row.

    ``G3`` uses the median deviation of the raw vector; see
    :func:`g3_magnitude_variant` for the magnitude-based alternative.
    """
    if name == "F1":
        return tv(g, x)
    if name == "F2":
        return 0.5 * dnorm1(g, x) - 0.5 * iplus(g, x)
    if name == "G1":
        return g.total_volume * sup_norm(x)
    if name == "G2":
        return dnorm1(g, x)
    if name == "G3":
        return median_dev_value(g, x)
    raise ValueError(f"unknown table function {name!r}; expected one of {TABLE_NAMES}")


def g3_magnitude_variant(g: Graph, x):
    """``min_alpha || |x| - alpha 1 ||``: the G3 formula applied to magnitudes."""
    return median_dev_value(g, np.abs(np.asarray(x, dtype=float)))


# ---------------------------------------------------------------- text I/O

def parse_vector(text: str) -> np.ndarray:
    """Whitespace- or comma-separated decimals, optionally wrapped in parentheses."""
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    body = body.strip().strip("()[]")
    tokens = [t for t in re.split(r"[\s,]+", body) if t]
    if not tokens:
        raise ValueError("empty vector")
    try:
        x = np.array([float(t) for t in tokens])
    except ValueError as exc:
        raise ValueError(f"bad vector entry: {exc}") from None
    if not np.all(np.isfinite(x)):
        raise ValueError("vector has non-finite entries")
    return x


def format_vector(x) -> str:
    return " ".join(repr(float(v)) for v in np.asarray(x, dtype=float)) + "\n"
