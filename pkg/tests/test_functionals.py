import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from setpaircut.functionals import (
    TableFunction,
    UnionMinVolume,
    dnorm1,
    format_vector,
    g3_magnitude_variant,
    ihat,
    iplus,
    median_dev,
    parse_vector,
    sup_norm,
    table_extension_closed,
    table_function,
    tv,
)
from setpaircut.graph import Graph, random_graph
from setpaircut.lovasz import setpair_extension, setpair_extension_batch
from setpaircut.setpair import SetPair, all_pair_masks

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def test_k3_functional_examples(k3):
    x = [1, -1, 0]
    assert tv(k3, x) == 4
    assert iplus(k3, x) == 2
    assert iplus(k3, [1, 1, -1]) == 2
    assert ihat(k3, x) == 2
    assert dnorm1(k3, x) == 4
    assert sup_norm(x) == 1
    assert tv(k3, [3, 3, 3]) == 0
    assert iplus(k3, np.zeros(3)) == 0
    assert ihat(k3, [2, -2, 2]) == 0
    assert dnorm1(k3, np.zeros(3)) == 0 and sup_norm(np.zeros(3)) == 0


def test_dimension_mismatch(k3):
    with pytest.raises(ValueError):
        tv(k3, [1, 2])


def test_indicator_rows_match_table(k3):
    g = random_graph(6, np.random.default_rng(1))
    A, B = all_pair_masks(6)
    X = A.astype(float) - B.astype(float)
    assert np.allclose(tv(g, X), TableFunction(g, "F1").values(A, B), atol=1e-12)
    assert np.allclose(dnorm1(g, X), TableFunction(g, "G2").values(A, B), atol=1e-12)
    assert np.allclose(ihat(g, X[(A | B).all(axis=1)]), 0)


def test_median_dev_examples(p3):
    value, alpha = median_dev(p3, [0, 1, 2])
    assert value == 2 and alpha == 1
    value, alpha = median_dev(p3, [4, 4, 4])
    assert value == 0 and alpha == 4


def test_median_dev_zero_volume():
    assert median_dev(Graph(3), [1, 2, 3]) == (0.0, 0.0)


@given(st.integers(0, 10**6))
def test_median_dev_matches_grid(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(int(rng.integers(2, 9)), rng)
    v = rng.normal(size=g.n)
    value, alpha = median_dev(g, v)
    grid = min(np.abs(v - a) @ g.degree for a in v)
    assert value == pytest.approx(grid, rel=1e-12, abs=1e-12)
    assert np.abs(v - alpha) @ g.degree == pytest.approx(value, abs=1e-12)


@given(st.integers(0, 10**6), st.floats(-5, 5), st.floats(0.1, 5))
def test_median_dev_shift_and_scale(seed, c, lam):
    rng = np.random.default_rng(seed)
    g = random_graph(6, rng)
    v = rng.normal(size=6)
    value, alpha = median_dev(g, v)
    v2, a2 = median_dev(g, v + c)
    assert v2 == pytest.approx(value, abs=1e-9) and a2 == pytest.approx(alpha + c, abs=1e-12)
    assert median_dev(g, lam * v)[0] == pytest.approx(lam * value, rel=1e-12)


def test_table_function_examples(k3):
    p = SetPair({0}, {1})
    assert table_function(k3, "F2")(p) == 1
    assert table_function(k3, "G1")(p) == 6
    assert table_function(k3, "G3")(p) == 4
    with pytest.raises(ValueError):
        table_function(k3, "F9")


def test_f2_closed_example(k3):
    assert table_extension_closed(k3, "F2", [2, -1, 0]) == pytest.approx(1.0)


@pytest.mark.parametrize("name", ["F1", "F2", "G1", "G2", "G3"])
def test_closed_forms_match_generic(name):
    rng = np.random.default_rng(hash(name) % 1000)
    for _ in range(5):
        g = random_graph(int(rng.integers(2, 9)), rng)
        X = rng.normal(size=(200, g.n))
        generic = setpair_extension_batch(TableFunction(g, name), X)
        closed = table_extension_closed(g, name, X)
        assert np.allclose(closed, generic, rtol=1e-12, atol=1e-12)


def test_g3_resolution_raw_vector_wins():
    g = Graph(2, [(0, 1, 1.0)])
    x = np.array([1.0, -1.0])
    generic = setpair_extension(TableFunction(g, "G3"), x)
    assert generic == pytest.approx(table_extension_closed(g, "G3", x)) == pytest.approx(2.0)
    assert g3_magnitude_variant(g, x) == 0.0


def test_union_min_volume_closed_form():
    rng = np.random.default_rng(5)
    g = random_graph(7, rng)
    f = UnionMinVolume(g)
    X = rng.normal(size=(300, 7))
    assert np.allclose(f.extension(X), setpair_extension_batch(f, X), atol=1e-12)


@given(st.integers(0, 10**6))
def test_decomposition_identity(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(int(rng.integers(2, 10)), rng)
    x = rng.normal(size=g.n)
    assert tv(g, x) == pytest.approx(dnorm1(g, x) + ihat(g, x) - iplus(g, x), abs=1e-12)


@given(arrays(float, st.integers(1, 6), elements=finite))
def test_vector_text_round_trip(x):
    assert np.array_equal(parse_vector(format_vector(x)), x)


def test_parse_vector_forms():
    assert np.array_equal(parse_vector("(1,-1,0)"), [1, -1, 0])
    assert np.array_equal(parse_vector("1 2\n3 # note\n"), [1, 2, 3])
    with pytest.raises(ValueError):
        parse_vector("1 two")
    with pytest.raises(ValueError):
        parse_vector("()")
