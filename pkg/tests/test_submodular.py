import numpy as np
import pytest

from setpaircut.functionals import TableFunction
from setpaircut.graph import path_graph, random_graph
from setpaircut.lovasz import TabulatedSetPairFunction, random_tabulated, setpair_extension
from setpaircut.setpair import SetPair, all_pair_masks
from setpaircut.submodular import (
    BUILTINS,
    CardinalitySetFunction,
    CutSetFunction,
    builtin_function,
    check_nested_submodular,
    check_pair_submodular,
    check_partial_submodular,
    convexity_probe,
    fhat,
    indicator_card,
    indicator_identity_gap,
    join_meet,
    original_convexity_probe,
    original_submodular_check,
    random_pair_submodular,
    search_nested_counterexamples,
    sqrt_card,
)

from conftest import seeded_graphs


def uniform_table(n, rng):
    tab = rng.random(3**n)
    tab[0] = 0.0
    return TabulatedSetPairFunction(tab)


def test_constant_passes(k3):
    assert check_pair_submodular(TableFunction(k3, "G1")) is None


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_sqrt_card_strictly_submodular(n):
    assert check_pair_submodular(sqrt_card(n), strict=True) is None


def test_strict_flags_modular_function():
    # G2 is modular: equality everywhere, including incomparable pairs
    cert = check_pair_submodular(TableFunction(path_graph(2), "G2"), strict=True)
    assert cert is not None and cert.kind == "strict-equality"


def test_indicator_of_singleton_a_violates():
    f = indicator_card(2, "a", 1)
    cert = check_pair_submodular(f)
    assert cert is not None and cert.lhs < cert.rhs - 1e-12
    A, B, C, D = (p for pair in cert.pairs[:2] for p in pair.masks(2))
    lhs = f(A, B) + f(C, D)
    (J1, J2), (M1, M2) = join_meet(A, B, C, D)
    assert lhs == cert.lhs and f(J1, J2) + f(M1, M2) == cert.rhs


def test_supermodular_cardinality_violates():
    # phi = (0, 0, 1): f({1},{}) + f({2},{}) = 0 < f({1,2},{}) = 1
    A, B = all_pair_masks(2)
    f = TabulatedSetPairFunction(np.array([0.0, 0.0, 1.0])[(A | B).sum(axis=1)])
    cert = check_pair_submodular(f)
    assert cert is not None
    assert cert.to_json()["lhs"] < cert.to_json()["rhs"]


def test_certificate_is_first_violation():
    rng = np.random.default_rng(3)
    f = uniform_table(3, rng)
    a = check_pair_submodular(f)
    b = check_pair_submodular(f)
    assert a is not None and a.pairs == b.pairs


def test_sampled_mode_for_large_n():
    g = random_graph(8, np.random.default_rng(0))
    assert check_pair_submodular(TableFunction(g, "F1"), samples=20_000, seed=1) is None


@pytest.mark.parametrize("name", ["F1", "G2", "G3"])
def test_table_functions_pair_submodular(name):
    for g in seeded_graphs(3, (2, 5), seed=4):
        assert check_pair_submodular(TableFunction(g, name)) is None


def test_crossing_edges_not_pair_submodular():
    # |E(A,B)| extends to (||x|| - I+)/2, which is not convex
    f = TableFunction(path_graph(2), "F2")
    assert check_pair_submodular(f) is not None
    assert convexity_probe(f, trials=100) is not None


def test_identity_behind_probe():
    for n in range(1, 6):
        assert indicator_identity_gap(n) == 0.0


def test_probe_finds_violation_at_certificate_indicators():
    f = indicator_card(2, "a", 1)
    w = convexity_probe(f, trials=100)
    assert w is not None and w.kind == "indicator-midpoint"
    assert w.lhs < w.rhs


def test_probe_rejects_nonzero_empty_value(k3):
    with pytest.raises(ValueError):
        convexity_probe(TableFunction(k3, "G1"), trials=10)


def test_checker_agrees_with_probe():
    rng = np.random.default_rng(12)
    for _ in range(40):
        f = uniform_table(3, rng)
        assert (check_pair_submodular(f) is None) == (convexity_probe(f, trials=500) is None)
    for _ in range(10):
        f = random_pair_submodular(4, rng)
        assert check_pair_submodular(f) is None
        assert convexity_probe(f, trials=2000) is None


def test_partial_submodular_examples():
    g = random_graph(4, np.random.default_rng(1))
    assert check_partial_submodular(TableFunction(g, "G2")) is None
    # on two vertices 1[|B|=1] is the cut function of one edge in the B slot
    assert check_partial_submodular(indicator_card(2, "b", 1)) is None
    cert = check_partial_submodular(indicator_card(2, "b", 2))
    assert cert is not None and cert.kind == "partial-second-slot"
    assert set(cert.pairs) == {SetPair(set(), {0}), SetPair(set(), {1})}


def test_pair_submodular_implies_partial():
    rng = np.random.default_rng(2)
    for _ in range(20):
        f = random_pair_submodular(4, rng)
        assert check_pair_submodular(f) is None
        assert check_partial_submodular(f) is None


def test_nested_constant_passes():
    assert check_nested_submodular(lambda inner, outer: 1.0, n=3) is None
    assert check_nested_submodular(lambda inner, outer: 1.0, n=3, condition="corrected") is None


def test_corrected_nested_condition_matches_pair_condition():
    rng = np.random.default_rng(5)
    for i in range(20):
        f = uniform_table(3, rng) if i % 2 else random_pair_submodular(3, rng)
        nested = check_nested_submodular(f, condition="corrected") is None
        assert nested == (check_pair_submodular(f) is None)


def test_nested_condition_rejects_unknown():
    with pytest.raises(ValueError):
        check_nested_submodular(sqrt_card(2), condition="other")


def test_plain_nested_condition_neither_necessary_nor_sufficient():
    found = search_nested_counterexamples(n=3, trials=400, seed=0)
    f = found["nested_not_pair"]
    h = found["pair_not_nested"]
    assert f is not None and h is not None
    assert check_nested_submodular(f, condition="plain") is None
    assert check_pair_submodular(f) is not None
    assert check_pair_submodular(h) is None
    assert check_nested_submodular(h, condition="plain") is not None


def test_original_submodularity():
    for g in seeded_graphs(3, (3, 8), seed=6):
        f = CutSetFunction(g)
        assert original_submodular_check(f) is None
        assert original_convexity_probe(f, trials=500) is None
    # 1[|S|=1] on two vertices is the cut function of one edge
    assert original_submodular_check(CardinalitySetFunction(np.array([0.0, 1.0, 0.0]))) is None
    assert original_submodular_check(CardinalitySetFunction(np.array([0.0, 1.0, 0.0, 0.0]))) is not None
    cert = original_submodular_check(CardinalitySetFunction(np.array([0.0, 0.0, 1.0])))
    assert cert is not None
    assert {frozenset(p) for p in cert.pairs} == {frozenset({0}), frozenset({1})}
    assert original_submodular_check(CardinalitySetFunction(np.ones(4))) is None
    assert original_convexity_probe(CardinalitySetFunction(np.array([0.0, 0.0, 1.0])),
                                    trials=100) is not None


def test_fhat_equals_extension_for_strictly_submodular():
    f = sqrt_card(3)
    rng = np.random.default_rng(0)
    for _ in range(30):
        x = rng.normal(size=3)
        N = np.abs(x).max()
        assert fhat(f, x, N) == pytest.approx(setpair_extension(f, x), abs=1e-8)


def test_builtins(k3):
    for name in BUILTINS:
        f = builtin_function(name, 3, k3)
        assert f.n == 3
    with pytest.raises(ValueError):
        builtin_function("nope", 3, k3)
    with pytest.raises(ValueError):
        builtin_function("F1", 3)


def test_random_tabulated_mostly_not_submodular():
    rng = np.random.default_rng(9)
    verdicts = [check_pair_submodular(random_tabulated(3, rng)) is None for _ in range(20)]
    assert not all(verdicts)
