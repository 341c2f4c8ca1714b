import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from setpaircut.setpair import (
    ChainDecomposition,
    ChainError,
    GuardError,
    NestedPair,
    SetPair,
    decode_indicator,
    enumerate_setpairs,
    indicator,
    nested_from_setpair,
    parse_setpair,
    setpair_from_nested,
    threshold_pairs,
)

finite = st.floats(-100, 100, allow_nan=False, allow_infinity=False)


def test_indicator_examples():
    assert np.array_equal(indicator(SetPair({0, 1}, {2}), 3), [1, 1, -1])
    assert np.array_equal(indicator(SetPair(), 2), [0, 0])
    assert np.array_equal(indicator(SetPair({1}, {0}), 3), [-1, 1, 0])


def test_decode_indicator_examples():
    assert decode_indicator([1, 1, -1]) == SetPair({0, 1}, {2})
    assert decode_indicator([0, 0]) == SetPair()
    with pytest.raises(ValueError):
        decode_indicator([0.5, 0, 0])


def test_overlapping_pair_rejected():
    with pytest.raises(ValueError):
        SetPair({0}, {0, 1})


def test_enumeration_counts():
    assert list(enumerate_setpairs(1)) == [SetPair(), SetPair({0}), SetPair(set(), {0})]
    assert len(list(enumerate_setpairs(2))) == 9
    pairs = list(enumerate_setpairs(8))
    assert len(pairs) == 6561 and len(set(pairs)) == 6561


def test_enumeration_guard():
    with pytest.raises(GuardError):
        next(enumerate_setpairs(17))


def test_codes_round_trip():
    for code, p in enumerate(enumerate_setpairs(4)):
        assert p.code() == code
        assert SetPair.from_code(code, 4) == p


def test_decode_after_indicator_is_identity():
    for p in enumerate_setpairs(5):
        assert decode_indicator(indicator(p, 5)) == p


def test_threshold_pairs_example():
    ch = threshold_pairs([2, -1, 0])
    assert np.array_equal(ch.gaps, [0, 1, 1])
    assert ch.pairs[1] == SetPair({0}, {1})
    assert ch.pairs[2] == SetPair({0}, set())
    assert np.array_equal(ch.reconstruct(), [2, -1, 0])
    assert ch.sigma[0] == 0
    ch.validate([2, -1, 0])


def test_threshold_pairs_zero_vector():
    assert np.all(threshold_pairs(np.zeros(4)).gaps == 0)


def test_threshold_pairs_indicator_has_single_gap():
    p = SetPair({0, 3}, {1})
    ch = threshold_pairs(indicator(p, 5)).compressed()
    assert ch.pairs == (p,) and np.array_equal(ch.gaps, [1.0])


def test_threshold_pairs_rejects_non_finite():
    with pytest.raises(ValueError):
        threshold_pairs([1, np.nan])


@given(arrays(float, st.integers(1, 12), elements=finite))
def test_reconstruction_and_gap_sum(x):
    ch = threshold_pairs(x)
    ch.validate(x, tol=1e-12)
    scale = max(1.0, np.abs(x).max())
    assert abs(ch.gaps.sum() - np.abs(x).max()) <= 1e-12 * scale
    for outer, inner in zip(ch.pairs, ch.pairs[1:]):
        assert inner <= outer


@given(arrays(float, st.integers(2, 8), elements=st.sampled_from([-2.0, -1.0, 0.0, 1.0, 2.0, 3.0])),
       st.randoms(use_true_random=False))
def test_compressed_chain_is_tie_independent(x, rnd):
    mags = np.abs(x)
    # a different order that still sorts magnitudes: shuffle within tie groups
    keys = [(m, rnd.random()) for m in mags]
    order = sorted(range(len(x)), key=lambda i: keys[i])
    a = threshold_pairs(x).compressed()
    b = threshold_pairs(x, order=order).compressed()
    assert a.pairs == b.pairs
    assert np.array_equal(a.gaps, b.gaps)


def test_invalid_chain_detected():
    bad = ChainDecomposition(2, (SetPair({0}), SetPair({1})), np.array([1.0, 1.0]))
    with pytest.raises(ChainError):
        bad.validate()
    neg = ChainDecomposition(1, (SetPair({0}),), np.array([-1.0]))
    with pytest.raises(ChainError):
        neg.validate()


def test_nested_bijection():
    q = nested_from_setpair(SetPair({0}, {1}))
    assert q == NestedPair({0}, {0, 1})
    assert nested_from_setpair(SetPair()) == NestedPair()
    for p in enumerate_setpairs(3):
        assert setpair_from_nested(nested_from_setpair(p)) == p
    with pytest.raises(ValueError):
        NestedPair({0, 1}, {0})


def test_text_and_json_forms():
    p = SetPair({0, 1}, {2})
    assert str(p) == "A={1,2};B={3}"
    assert p.to_json() == {"a": [1, 2], "b": [3]}
    assert parse_setpair(str(p)) == p
    assert parse_setpair('{"a": [1, 2], "b": [3]}') == p
    assert parse_setpair("A={};B={}") == SetPair()
