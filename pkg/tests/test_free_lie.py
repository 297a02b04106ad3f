import numpy as np
import pytest

from loopsig import (
    DomainError,
    LogSignature,
    LyndonBasis,
    PiecewiseLinearPath,
    TensorSeries,
    is_group_like,
    log_signature_coords,
    lyndon_bracket,
    lyndon_words,
    path_signature,
    ts_exp,
    ts_product,
)
from loopsig.tensor_algebra import word_index

from _helpers import brute_lyndon, random_path, witt

SQUARE = PiecewiseLinearPath([(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)])


def key(w):
    return (len(w), w)


def test_lyndon_examples():
    assert lyndon_words(2, 3) == [(1,), (2,), (1, 2), (1, 1, 2), (1, 2, 2)]
    assert lyndon_words(1, 3) == [(1,)]
    assert lyndon_words(2, 1) == [(1,), (2,)]


@pytest.mark.parametrize("n,m", [(1, 5), (2, 6), (3, 4), (4, 3)])
def test_lyndon_matches_enumeration(n, m):
    assert lyndon_words(n, m) == sorted(brute_lyndon(n, m), key=key)


@pytest.mark.parametrize("n", [2, 3])
def test_witt_counts(n):
    words = lyndon_words(n, 6)
    for p in range(1, 7):
        assert sum(len(w) == p for w in words) == witt(n, p)
    if n == 2:
        assert [sum(len(w) == p for w in words) for p in range(1, 6)] == [2, 1, 2, 3, 6]


def test_bracket_examples():
    assert lyndon_bracket("1") == TensorSeries.letter(1, 1, 1)
    assert lyndon_bracket("12") == TensorSeries.from_words(2, 2, {"12": 1, "21": -1})
    # [X1, [X1, X2]] expanded with the product
    x1, x2 = TensorSeries.letter(1, 2, 3), TensorSeries.letter(2, 2, 3)
    inner = ts_product(x1, x2) - ts_product(x2, x1)
    want = ts_product(x1, inner) - ts_product(inner, x1)
    assert lyndon_bracket("112") == want
    assert want == TensorSeries.from_words(2, 3, {"112": 1, "121": -2, "211": 1})


def test_bracket_rejects_non_lyndon():
    for w in ["21", "11", "", "1212"]:
        with pytest.raises(DomainError):
            lyndon_bracket(w, 2, 4)


@pytest.mark.parametrize("n,m", [(2, 5), (3, 4)])
def test_basis_structure(n, m):
    basis = LyndonBasis.build(n, m)
    for p in range(1, m + 1):
        level = basis.level(p)
        for w, e in level:
            nonzero = [q for q in range(m + 1) if np.any(e.levels[q])]
            assert nonzero == [p]
            # leading word is w itself, with coefficient 1
            first = next(iter(e.items()))
            assert first == (w, 1.0)
        mat = np.array([[e.levels[p][word_index(v, n)] for v, _ in level] for _, e in level])
        assert np.allclose(mat, np.triu(mat)) and np.allclose(np.diag(mat), 1)
        full = np.array([e.levels[p] for _, e in level])
        assert np.linalg.matrix_rank(full) == len(level)


def test_log_coords_examples():
    ls = log_signature_coords(ts_exp(TensorSeries.letter(1, 2, 3)))
    assert ls[(1,)] == pytest.approx(1)
    assert all(abs(v) < 1e-15 for w, v in ls.coords.items() if w != (1,))
    assert ls.residual < 1e-15

    sq = log_signature_coords(path_signature(SQUARE, 2))
    assert sq["12"] == pytest.approx(1, abs=1e-15)
    assert sq["1"] == sq["2"] == 0
    assert sq.residual < 1e-15

    not_lie = log_signature_coords(TensorSeries.from_words(2, 2, {"": 1, "12": 1}))
    assert not_lie.residual == pytest.approx(1)


def test_log_coords_domain_error():
    with pytest.raises(DomainError):
        log_signature_coords(TensorSeries.zero(2, 2))


def test_log_coords_json():
    ls = log_signature_coords(path_signature(SQUARE, 3))
    doc = ls.to_dict()
    assert set(doc) == {"n", "m", "coords", "residual"}
    assert doc["coords"][0] == {"word": "1", "value": 0.0}
    back = LogSignature.from_dict(doc)
    assert back.coords == ls.coords


@pytest.mark.parametrize("seed", range(10))
def test_lie_round_trip(seed):
    rng = np.random.default_rng(seed)
    n, m = [(2, 4), (3, 3), (2, 5)][seed % 3]
    basis = LyndonBasis.build(n, m)
    lam = {w: rng.normal() for w in basis.words}
    ls = log_signature_coords(ts_exp(basis.combine(lam)))
    assert max(abs(ls[w] - lam[w]) for w in lam) < 1e-10
    assert ls.residual < 1e-10


def test_group_like_examples():
    e = ts_exp(TensorSeries.from_words(2, 3, {"1": 1, "2": 1}))
    assert is_group_like(e, 1e-12)
    bad = is_group_like(TensorSeries.from_words(2, 2, {"": 1, "12": 1}), 1e-12)
    assert not bad
    assert bad.witness == ((1,), (2,))


@pytest.mark.parametrize("seed", range(5))
def test_signatures_are_group_like(seed):
    rng = np.random.default_rng(seed)
    path = random_path(rng, 2 + seed % 2, 5)
    assert is_group_like(path_signature(path, 4), 1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_exp_of_lie_is_group_like_symmetric_part_is_not(seed):
    rng = np.random.default_rng(100 + seed)
    basis = LyndonBasis.build(2, 4)
    lie = basis.combine({w: rng.normal() for w in basis.words})
    assert is_group_like(ts_exp(lie))
    sym = rng.normal(size=(2, 2))
    sym = sym + sym.T
    levels = [np.ones(1), np.zeros(2), sym.ravel(), np.zeros(8), np.zeros(16)]
    assert not is_group_like(TensorSeries(2, 4, levels))
