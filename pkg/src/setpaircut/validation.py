"""Input validation shared by the estimator wrappers."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .graph import Graph


def check_graph(G) -> Graph:
    """Accept a :class:`Graph` or a dense symmetric nonnegative weight matrix."""
    if isinstance(G, Graph):
        return G
    A = check_array(G, dtype=float, ensure_2d=True, ensure_min_samples=1)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"affinity matrix must be square, got shape {A.shape}")
    if np.any(A < 0):
        raise ValueError("affinity matrix has negative weights")
    return Graph.from_adjacency(A)


def check_vectors(X, n: int) -> np.ndarray:
    """2-D float array of row vectors of length ``n`` with finite entries."""
    X = check_array(X, dtype=float, ensure_2d=True)
    if X.shape[1] != n:
        raise ValueError(f"X has {X.shape[1]} columns, expected {n} (one per vertex)")
    return X


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
