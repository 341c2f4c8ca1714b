import numpy as np
import pytest

from setpaircut.cuts import (
    KIND_NAMES,
    CutKind,
    CutProblem,
    DegenerateGraphError,
    discrete_optimum,
    pair_ratio_problem,
    split_ratio_check,
)
from setpaircut.functionals import dnorm1, ihat, iplus
from setpaircut.graph import Graph, complete_graph, disjoint_union, path_graph, random_graph
from setpaircut.relax import InfeasibleVectorError, ZeroDenominatorError
from setpaircut.setpair import GuardError, SetPair, all_pair_masks

from conftest import seeded_graphs


def best(values, sense):
    return np.nanmax(values) if sense == "max" else np.nanmin(values)


@pytest.mark.parametrize("kind, value", [
    ("maxcut", 2 / 3), ("dual-cheeger", 2 / 3), ("max3cut", 1.0),
    ("cheeger", 1.0), ("anti-cheeger", 0.5), ("ratio-max3cut-2", 1.5),
])
def test_k3_values(k3, kind, value):
    res = CutProblem(kind, k3).solve()
    assert res.value == pytest.approx(value, abs=1e-12)


def test_k3_witnesses(k3):
    assert CutProblem("maxcut", k3).solve().witness == SetPair({0, 1}, {2})
    assert CutProblem("dual-cheeger", k3).solve().witness == SetPair({0, 1}, {2})
    assert CutProblem("max3cut", k3).solve().witness == SetPair({0}, {1})


def test_ratio_3cut_one_allows_empty_block(k3):
    p = CutProblem("ratio-max3cut-1", k3)
    res = p.solve()
    # A = {1}, B = {} cuts both edges at 1: 2 * 2 / vol({1}) = 2
    assert res.value == pytest.approx(2.0)
    assert p.discrete_value(SetPair({0}, {1})) == pytest.approx(1.5)
    assert discrete_optimum(p, nonempty=True).value == pytest.approx(1.5)


def test_ratio_3cut_one_complement_form(k3):
    p = CutProblem("ratio-max3cut-1", k3)
    A, B = all_pair_masks(3)
    X = (A.astype(float) - B.astype(float))[1:]
    h = p.solve().value
    inner = (iplus(k3, X) - 2 * ihat(k3, X)) / dnorm1(k3, X)
    assert 1 - h == pytest.approx(inner.min(), abs=1e-12)


def test_continuous_examples(k3):
    assert CutProblem("dual-cheeger", k3).continuous_objective([1, 1, -1]) == pytest.approx(2 / 3)
    assert CutProblem("maxcut", k3).continuous_objective([1, 1, -1]) == pytest.approx(2 / 3)
    assert CutProblem("anti-cheeger", k3).continuous_objective([1, 1, -1]) == pytest.approx(0.5)
    assert CutProblem("cheeger", path_graph(2)).continuous_objective([1, -1]) == pytest.approx(1.0)


def test_sense_per_kind():
    assert [CutKind(k).sense for k in KIND_NAMES].count("min") == 1
    assert CutKind.CHEEGER.sense == "min"


@pytest.mark.parametrize("kind", KIND_NAMES)
def test_equivalence_on_indicators_and_random_vectors(kind):
    for g in seeded_graphs(4, (3, 6), seed=11):
        p = CutProblem(kind, g)
        opt = p.solve().value
        A, B = all_pair_masks(g.n)
        X = A.astype(float) - B.astype(float)
        assert best(p.continuous_rows(X), p.sense) == pytest.approx(opt, abs=1e-9)
        R = np.random.default_rng(1).normal(size=(2000, g.n))
        vals = p.continuous_rows(R)
        if p.sense == "max":
            assert np.nanmax(vals) <= opt + 1e-9
        else:
            assert np.nanmin(vals) >= opt - 1e-9


@pytest.mark.parametrize("kind", KIND_NAMES)
def test_pair_ratio_problem_optimum(kind):
    for g in seeded_graphs(3, (3, 6), seed=5):
        p = CutProblem(kind, g)
        rp = pair_ratio_problem(p)
        A, B = all_pair_masks(g.n)
        assert best(rp.pair_ratio_rows(A, B), rp.sense) == pytest.approx(p.solve().value, abs=1e-12)


def test_pair_ratio_problem_shapes(k3):
    rp = pair_ratio_problem(CutProblem("maxcut", k3))
    assert (rp.numerator.name, rp.denominator.name, rp.sense) == ("F1", "G1", "max")
    rp = pair_ratio_problem(CutProblem("cheeger", k3))
    assert rp.feasible == "nonconstant" and rp.sense == "min"


@pytest.mark.parametrize("kind", ["maxcut", "cheeger", "anti-cheeger"])
def test_set_vs_pair_ratio(kind):
    for g in seeded_graphs(4, (2, 8), seed=2):
        s, p = split_ratio_check(CutProblem(kind, g))
        assert s == pytest.approx(p, abs=1e-12)


@pytest.mark.parametrize("kind", KIND_NAMES)
def test_witness_reproduces_value(kind):
    g = random_graph(6, np.random.default_rng(8))
    p = CutProblem(kind, g)
    res = p.solve()
    assert p.discrete_value(res.witness) == res.value


@pytest.mark.parametrize("kind", KIND_NAMES)
def test_thread_count_does_not_change_result(kind):
    g = random_graph(7, np.random.default_rng(4))
    p = CutProblem(kind, g)
    a = discrete_optimum(p, workers=1, chunk=97)
    b = discrete_optimum(p, workers=8, chunk=97)
    c = discrete_optimum(p, workers=1)
    assert (a.value, a.witness, a.evaluations) == (b.value, b.witness, b.evaluations)
    assert (a.value, a.witness) == (c.value, c.witness)


def test_ties_resolve_to_smallest_label_key():
    # C4 maxcut: both bipartitions {1,3} and {2,4} cut everything
    g = Graph(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)])
    res = CutProblem("maxcut", g).solve()
    assert res.witness == SetPair({0, 2}, {1, 3})


def test_guards():
    big = path_graph(17)
    with pytest.raises(GuardError):
        CutProblem("max3cut", big).solve()
    with pytest.raises(GuardError):
        CutProblem("cheeger", path_graph(25)).solve()


def test_zero_volume_graph():
    with pytest.raises(DegenerateGraphError):
        CutProblem("maxcut", Graph(3)).solve()


def test_excluded_vectors(k3):
    with pytest.raises(InfeasibleVectorError):
        CutProblem("maxcut", k3).continuous_objective([0, 0, 0])
    with pytest.raises(InfeasibleVectorError, match="constant"):
        CutProblem("cheeger", k3).continuous_objective([2, 2, 2])


def test_zero_denominator_reported_distinctly():
    g = disjoint_union(complete_graph(3), Graph(1))
    with pytest.raises(ZeroDenominatorError):
        CutProblem("dual-cheeger", g).continuous_objective([0, 0, 0, 1])


def test_cheeger_excludes_trivial_sets(k3):
    p = CutProblem("cheeger", k3)
    with pytest.raises(InfeasibleVectorError):
        p.discrete_value(SetPair({0, 1, 2}, set()))


def test_bipartite_dual_cheeger_is_one(c4):
    assert CutProblem("dual-cheeger", c4).solve().value == pytest.approx(1.0)


def test_relax_method_matches_oracle(k3):
    for kind in KIND_NAMES:
        p = CutProblem(kind, k3)
        assert p.solve("relax", restarts=10, seed=1).value == pytest.approx(p.solve().value, abs=1e-9)
    with pytest.raises(ValueError):
        CutProblem("maxcut", k3).solve("annealing")
