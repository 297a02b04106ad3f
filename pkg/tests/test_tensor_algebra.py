import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopsig import (
    DepthError,
    DomainError,
    ResourceCapError,
    ShapeError,
    TensorSeries,
    index_to_word,
    shuffle_words,
    ts_exp,
    ts_linear,
    ts_log,
    ts_pair,
    ts_product,
    ts_shuffle,
    word_index,
    xi_norm,
)
from loopsig.tensor_algebra import shuffle_pairing, words_of_length

from _helpers import as_dict, brute_product, random_series, recursive_shuffle

X = TensorSeries.from_words


def test_word_index_examples():
    assert word_index((), 2) == 0
    assert word_index("12", 2) == 1
    assert word_index("21", 2) == 2


def test_word_index_rejects_bad_letter():
    with pytest.raises(DomainError):
        word_index("13", 2)
    with pytest.raises(DomainError):
        word_index((0,), 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_word_index_round_trip_and_order(n):
    for p in range(6):
        words = list(words_of_length(p, n))
        assert [word_index(w, n) for w in words] == list(range(n**p))
        assert [index_to_word(i, p, n) for i in range(n**p)] == words


def test_layout_invariants():
    s = TensorSeries.zero(3, 4)
    assert s.levels[0].size == 1
    assert s.size == sum(3**p for p in range(5)) == s.flat().size


def test_levels_are_read_only():
    s = TensorSeries.one(2, 2)
    with pytest.raises(ValueError):
        s.levels[1][0] = 3.0


def test_linear_examples():
    one = TensorSeries.one(2, 2)
    assert ts_linear(one, one, 1, -1) == TensorSeries.zero(2, 2)
    x1, x2 = TensorSeries.letter(1, 2, 2), TensorSeries.letter(2, 2, 2)
    assert ts_linear(x1, x2, 1, 1) == X(2, 2, {"1": 1, "2": 1})
    assert ts_linear(x1, x1, 2, 3) == X(2, 2, {"1": 5})


def test_shape_mismatch():
    with pytest.raises(ShapeError):
        ts_linear(TensorSeries.one(2, 2), TensorSeries.one(2, 3), 1, 1)
    with pytest.raises(ShapeError):
        ts_product(TensorSeries.one(2, 2), TensorSeries.one(3, 2))
    with pytest.raises(ShapeError):
        ts_shuffle(TensorSeries.one(2, 2), TensorSeries.one(3, 2))


def test_product_examples():
    a = X(2, 2, {"": 1, "1": 1})
    b = X(2, 2, {"": 1, "2": 1})
    assert ts_product(a, b) == X(2, 2, {"": 1, "1": 1, "2": 1, "12": 1})
    x1, x2 = TensorSeries.letter(1, 2, 1), TensorSeries.letter(2, 2, 1)
    assert ts_product(x1, x2) == TensorSeries.zero(2, 1)


def test_exp_times_exp_neg_is_one():
    x1 = TensorSeries.letter(1, 2, 3)
    assert ts_product(ts_exp(x1), ts_exp(-x1)).allclose(TensorSeries.one(2, 3), atol=1e-15)
    # same product through the brute-force splitting oracle
    assert brute_product(ts_exp(x1), ts_exp(-x1)).allclose(TensorSeries.one(2, 3), atol=1e-15)


@pytest.mark.parametrize("n,m", [(1, 4), (2, 3), (3, 3), (2, 5)])
def test_product_matches_splitting_oracle(n, m):
    rng = np.random.default_rng(n * 10 + m)
    a, b = random_series(rng, n, m), random_series(rng, n, m)
    assert ts_product(a, b).allclose(brute_product(a, b), atol=1e-12)


def test_exp_examples():
    e = ts_exp(TensorSeries.letter(1, 1, 3))
    assert np.allclose(e.flat(), [1, 1, 0.5, 1 / 6])
    assert ts_exp(TensorSeries.zero(2, 3)) == TensorSeries.one(2, 3)
    e2 = ts_exp(X(2, 2, {"1": 1, "2": 1}))
    assert np.allclose(e2.levels[2], [0.5] * 4)
    assert np.allclose(e2.levels[1], [1, 1])


def test_exp_log_domain_errors():
    with pytest.raises(DomainError):
        ts_exp(TensorSeries.one(2, 2))
    with pytest.raises(DomainError):
        ts_log(TensorSeries.zero(2, 2))


def test_log_examples():
    assert ts_log(TensorSeries.one(3, 3)) == TensorSeries.zero(3, 3)
    x1 = TensorSeries.letter(1, 2, 3)
    assert ts_log(ts_exp(x1)).allclose(x1, atol=1e-15)


def test_shuffle_words_examples():
    assert dict(shuffle_words("1", "2")) == {(1, 2): 1, (2, 1): 1}
    assert dict(shuffle_words("12", "1")) == {(1, 1, 2): 2, (1, 2, 1): 1}
    assert dict(shuffle_words("", "12")) == {(1, 2): 1}


word_st = st.lists(st.integers(1, 3), max_size=4).map(tuple)


@given(word_st, word_st)
def test_shuffle_words_matches_recursive_definition(u, v):
    got = shuffle_words(u, v)
    assert dict(got) == recursive_shuffle(u, v)
    assert sum(got.values()) == math.comb(len(u) + len(v), len(u))


def test_ts_shuffle_examples():
    x1, x2 = TensorSeries.letter(1, 2, 2), TensorSeries.letter(2, 2, 2)
    assert ts_shuffle(x1, x2) == X(2, 2, {"12": 1, "21": 1})
    assert ts_shuffle(x1, x1) == X(2, 2, {"11": 2})
    rng = np.random.default_rng(1)
    a = random_series(rng, 2, 3)
    assert ts_shuffle(a, TensorSeries.one(2, 3)).allclose(a, atol=0)


@pytest.mark.parametrize("n,m", [(2, 3), (3, 4)])
def test_ts_shuffle_matches_word_shuffle(n, m):
    rng = np.random.default_rng(m)
    a, b = random_series(rng, n, m), random_series(rng, n, m)
    expected = {}
    for u, cu in as_dict(a).items():
        for v, cv in as_dict(b).items():
            if len(u) + len(v) <= m:
                for w, k in recursive_shuffle(u, v).items():
                    expected[w] = expected.get(w, 0.0) + k * cu * cv
    assert ts_shuffle(a, b).allclose(X(n, m, expected), atol=1e-11)


def test_shuffle_pairing_matches_words():
    rng = np.random.default_rng(5)
    s = random_series(rng, 2, 4)
    mat = shuffle_pairing(s, 1, 2)
    for i, u in enumerate(words_of_length(1, 2)):
        for j, v in enumerate(words_of_length(2, 2)):
            want = sum(k * ts_pair(s, w) for w, k in shuffle_words(u, v).items())
            assert mat[i, j] == pytest.approx(want, abs=1e-14)


def test_pair_examples():
    e = ts_exp(TensorSeries.letter(1, 2, 2))
    assert ts_pair(e, "11") == 0.5
    a = X(2, 1, {"": 7, "1": 1, "2": 2})
    assert ts_pair(a, "") == 7
    assert ts_pair(a, "2") == 2
    with pytest.raises(DepthError):
        ts_pair(a, "12")


def test_xi_norm_examples():
    assert xi_norm(X(2, 2, {"1": 1, "2": 1}), 3) == 6
    assert xi_norm(TensorSeries.one(2, 3), 0.37) == 1
    e = ts_exp(TensorSeries.letter(1, 1, 4))
    assert xi_norm(e, 1) == pytest.approx(65 / 24, abs=1e-15)
    with pytest.raises(DomainError):
        xi_norm(e, 0)


def test_xi_norm_monotone_in_depth():
    rng = np.random.default_rng(2)
    s = random_series(rng, 2, 5)
    norms = [xi_norm(s.truncate(m), 1.5) for m in range(6)]
    assert norms == sorted(norms)


def test_cap():
    with pytest.raises(ResourceCapError):
        TensorSeries.one(10, 9)
    with pytest.raises(ResourceCapError):
        TensorSeries.zero(2, 3, cap=10)
    TensorSeries.zero(2, 3, cap=15)


def test_json_round_trip_is_bit_exact():
    rng = np.random.default_rng(3)
    s = random_series(rng, 3, 3)
    back = TensorSeries.from_json(s.to_json())
    assert back == s
    doc = json.loads(s.to_json())
    assert set(doc) == {"n", "m", "levels"}
    assert len(doc["levels"][2]) == 9


def test_from_dict_validation():
    with pytest.raises(ShapeError):
        TensorSeries.from_dict({"n": 2, "m": 1, "levels": [[1.0], [1.0]]})
    with pytest.raises(ShapeError):
        TensorSeries.from_dict({"n": 2})


# properties

shape_st = st.tuples(st.integers(1, 3), st.integers(0, 5)).filter(lambda t: t[0] ** t[1] <= 243)


@settings(max_examples=40, deadline=None)
@given(shape_st, st.integers(0, 2**32 - 1))
def test_associativity(shape, seed):
    n, m = shape
    rng = np.random.default_rng(seed)
    a, b, c = (random_series(rng, n, m) for _ in range(3))
    lhs = ts_product(a, ts_product(b, c))
    rhs = ts_product(ts_product(a, b), c)
    assert lhs.allclose(rhs, atol=1e-12 * max(1.0, np.abs(lhs.flat()).max()))


@settings(max_examples=40, deadline=None)
@given(shape_st, st.integers(0, 2**32 - 1))
def test_exp_log_round_trip(shape, seed):
    n, m = shape
    rng = np.random.default_rng(seed)
    a = random_series(rng, n, m, constant=0.0, scale=0.5)
    assert ts_log(ts_exp(a)).allclose(a, atol=1e-12)
    b = random_series(rng, n, m, constant=1.0, scale=0.5)
    assert ts_exp(ts_log(b)).allclose(b, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(shape_st, st.integers(0, 2**32 - 1))
def test_shuffle_commutative_with_unit(shape, seed):
    n, m = shape
    rng = np.random.default_rng(seed)
    a, b = random_series(rng, n, m), random_series(rng, n, m)
    assert ts_shuffle(a, b).allclose(ts_shuffle(b, a), atol=1e-12)
    assert ts_shuffle(a, TensorSeries.one(n, m)) == a


@settings(max_examples=40, deadline=None)
@given(shape_st, st.integers(0, 2**32 - 1), st.floats(0.1, 3.0))
def test_xi_norm_submultiplicative(shape, seed, xi):
    n, m = shape
    rng = np.random.default_rng(seed)
    a, b = random_series(rng, n, m), random_series(rng, n, m)
    assert xi_norm(ts_product(a, b), xi) <= xi_norm(a, xi) * xi_norm(b, xi) * (1 + 1e-12)
