"""Truncated tensor algebra over the letters X_1..X_n.

A :class:`TensorSeries` stores one dense float64 array per level ``p = 0..m``.
Level ``p`` holds ``n**p`` coefficients, ordered lexicographically by word, so
the flat index of a word is its base-``n`` code with digits ``letter - 1``.
That is also the C-order index of the level reshaped to ``(n,) * p``, which the
shuffle routines rely on.

All products drop terms of degree above ``m``.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .exceptions import DepthError, DomainError, ResourceCapError, ShapeError

Word = tuple[int, ...]
WordLike = Union[Word, Sequence[int], str]

DEFAULT_CAP = 10**8

# constant terms are compared against 0 / 1 with this slack
_UNIT_TOL = 1e-12


def as_word(w: WordLike) -> Word:
    """Normalise a word given as a tuple, list or string.

    Strings are read digit by digit (``"112"``), or split on commas when the
    alphabet needs multi-digit letters (``"1,12,3"``).
    """
    if isinstance(w, str):
        s = w.strip()
        if not s:
            return ()
        if "," in s:
            return tuple(int(tok) for tok in s.split(","))
        return tuple(int(ch) for ch in s)
    return tuple(int(x) for x in w)


def word_str(w: Sequence[int]) -> str:
    """Inverse of :func:`as_word` for printing."""
    if any(x > 9 for x in w):
        return ",".join(str(x) for x in w)
    return "".join(str(x) for x in w)


def _check_letters(w: Word, n: int) -> None:
    for x in w:
        if not 1 <= x <= n:
            raise DomainError(f"letter {x} outside alphabet 1..{n}")


def word_index(w: WordLike, n: int) -> int:
    """Lexicographic index of ``w`` among the words of the same length."""
    w = as_word(w)
    _check_letters(w, n)
    idx = 0
    for x in w:
        idx = idx * n + (x - 1)
    return idx


def index_to_word(index: int, length: int, n: int) -> Word:
    if not 0 <= index < n**length:
        raise DomainError(f"index {index} out of range for words of length {length}")
    letters = []
    for _ in range(length):
        index, r = divmod(index, n)
        letters.append(r + 1)
    return tuple(reversed(letters))


def words_of_length(p: int, n: int) -> Iterable[Word]:
    """All words of length ``p`` in lexicographic order."""
    return itertools.product(range(1, n + 1), repeat=p)


def coefficient_count(n: int, m: int) -> int:
    return sum(n**p for p in range(m + 1))


def check_cap(n: int, m: int, cap: int | None = None) -> None:
    cap = DEFAULT_CAP if cap is None else cap
    total = coefficient_count(n, m)
    if total > cap:
        raise ResourceCapError(
            f"series with n={n}, m={m} needs {total} coefficients (cap {cap})"
        )


class TensorSeries:
    """Truncated element of the tensor algebra, one dense array per level.

    Instances are treated as immutable: level arrays are copied on
    construction and flagged read-only.
    """

    __slots__ = ("n", "m", "levels")

    def __init__(self, n: int, m: int, levels: Sequence[Sequence[float]] | None = None,
                 cap: int | None = None):
        if n < 1:
            raise DomainError("alphabet size must be >= 1")
        if m < 0:
            raise DomainError("truncation depth must be >= 0")
        check_cap(n, m, cap)
        if levels is None:
            arrays = [np.zeros(n**p) for p in range(m + 1)]
        else:
            if len(levels) != m + 1:
                raise ShapeError(f"expected {m + 1} levels, got {len(levels)}")
            arrays = []
            for p, lev in enumerate(levels):
                a = np.array(lev, dtype=np.float64).reshape(-1)
                if a.size != n**p:
                    raise ShapeError(f"level {p} has {a.size} entries, expected {n**p}")
                arrays.append(a)
        for a in arrays:
            a.setflags(write=False)
        self.n = n
        self.m = m
        self.levels = tuple(arrays)

    # constructors

    @classmethod
    def zero(cls, n: int, m: int, cap: int | None = None) -> "TensorSeries":
        return cls(n, m, cap=cap)

    @classmethod
    def one(cls, n: int, m: int, cap: int | None = None) -> "TensorSeries":
        check_cap(n, m, cap)
        levels = [np.zeros(n**p) for p in range(m + 1)]
        levels[0][0] = 1.0
        return cls(n, m, levels, cap=cap)

    @classmethod
    def letter(cls, i: int, n: int, m: int) -> "TensorSeries":
        """The generator ``X_i``."""
        return cls.from_words(n, m, {(i,): 1.0})

    @classmethod
    def from_words(cls, n: int, m: int, coeffs: Mapping[WordLike, float],
                   cap: int | None = None) -> "TensorSeries":
        check_cap(n, m, cap)
        levels = [np.zeros(n**p) for p in range(m + 1)]
        for w, c in coeffs.items():
            w = as_word(w)
            if len(w) > m:
                raise DepthError(f"word {word_str(w)} longer than depth {m}")
            levels[len(w)][word_index(w, n)] += c
        return cls(n, m, levels, cap=cap)

    @classmethod
    def from_flat(cls, n: int, m: int, flat: np.ndarray) -> "TensorSeries":
        offsets = np.cumsum([0] + [n**p for p in range(m + 1)])
        return cls(n, m, [flat[offsets[p]:offsets[p + 1]] for p in range(m + 1)])

    # access

    @property
    def constant(self) -> float:
        return float(self.levels[0][0])

    @property
    def size(self) -> int:
        return coefficient_count(self.n, self.m)

    def __getitem__(self, w: WordLike) -> float:
        return ts_pair(self, w)

    def flat(self) -> np.ndarray:
        return np.concatenate(self.levels)

    def level_tensor(self, p: int) -> np.ndarray:
        """Level ``p`` reshaped to ``(n,) * p``."""
        return self.levels[p].reshape((self.n,) * p)

    def items(self, tol: float = 0.0):
        """Yield ``(word, coefficient)`` for coefficients with ``|c| > tol``."""
        for p, lev in enumerate(self.levels):
            for idx in np.flatnonzero(np.abs(lev) > tol):
                yield index_to_word(int(idx), p, self.n), float(lev[idx])

    def truncate(self, m: int) -> "TensorSeries":
        if m > self.m:
            raise DepthError(f"cannot raise depth from {self.m} to {m}")
        return TensorSeries(self.n, m, self.levels[: m + 1])

    def allclose(self, other: "TensorSeries", atol: float = 1e-12) -> bool:
        _check_compatible(self, other)
        return all(np.allclose(a, b, rtol=0.0, atol=atol)
                   for a, b in zip(self.levels, other.levels))

    # arithmetic

    def __add__(self, other):
        if isinstance(other, TensorSeries):
            return ts_linear(self, other, 1.0, 1.0)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, TensorSeries):
            return ts_linear(self, other, 1.0, -1.0)
        return NotImplemented

    def __neg__(self):
        return TensorSeries(self.n, self.m, [-a for a in self.levels])

    def __mul__(self, other):
        if isinstance(other, TensorSeries):
            return ts_product(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return TensorSeries(self.n, self.m, [other * a for a in self.levels])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TensorSeries):
            return NotImplemented
        return (self.n, self.m) == (other.n, other.m) and all(
            np.array_equal(a, b) for a, b in zip(self.levels, other.levels))

    __hash__ = None

    def __repr__(self):
        terms = [f"{c:+.6g}*{word_str(w) or '1'}" for w, c in self.items()]
        body = " ".join(terms[:12]) + (" ..." if len(terms) > 12 else "")
        return f"TensorSeries(n={self.n}, m={self.m}: {body or '0'})"

    # serialisation

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "levels": [a.tolist() for a in self.levels]}

    @classmethod
    def from_dict(cls, data: Mapping, cap: int | None = None) -> "TensorSeries":
        try:
            n, m, levels = int(data["n"]), int(data["m"]), data["levels"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeError(f"malformed series document: {exc}") from exc
        return cls(n, m, levels, cap=cap)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str, cap: int | None = None) -> "TensorSeries":
        return cls.from_dict(json.loads(text), cap=cap)


def _check_compatible(a: TensorSeries, b: TensorSeries) -> None:
    if (a.n, a.m) != (b.n, b.m):
        raise ShapeError(f"series shapes differ: (n={a.n}, m={a.m}) vs (n={b.n}, m={b.m})")


def ts_linear(a: TensorSeries, b: TensorSeries, s: float, t: float) -> TensorSeries:
    """``s*a + t*b``."""
    _check_compatible(a, b)
    return TensorSeries(a.n, a.m, [s * x + t * y for x, y in zip(a.levels, b.levels)])


def ts_product(a: TensorSeries, b: TensorSeries) -> TensorSeries:
    """Concatenation product, truncated at depth ``m``."""
    _check_compatible(a, b)
    out = []
    for p in range(a.m + 1):
        acc = np.zeros(a.n**p)
        for k in range(p + 1):
            x, y = a.levels[k], b.levels[p - k]
            if x.any() and y.any():
                acc += np.outer(x, y).ravel()
        out.append(acc)
    return TensorSeries(a.n, a.m, out)


def _without_constant(a: TensorSeries) -> TensorSeries:
    levels = list(a.levels)
    levels[0] = np.zeros(1)
    return TensorSeries(a.n, a.m, levels)


def ts_exp(a: TensorSeries) -> TensorSeries:
    """``sum_k a**k / k!``; ``a`` must have zero constant term."""
    if abs(a.constant) > _UNIT_TOL:
        raise DomainError(f"exp needs a zero constant term, got {a.constant}")
    a = _without_constant(a)
    result = TensorSeries.one(a.n, a.m)
    term = result
    # a is nilpotent of order m+1 at truncation
    for k in range(1, a.m + 1):
        term = ts_product(term, a) * (1.0 / k)
        result = result + term
    return result


def ts_log(a: TensorSeries) -> TensorSeries:
    """``log(1 + y) = sum_k (-1)**(k+1) y**k / k``; ``a`` must have constant term 1."""
    if abs(a.constant - 1.0) > _UNIT_TOL:
        raise DomainError(f"log needs constant term 1, got {a.constant}")
    y = _without_constant(a)
    result = TensorSeries.zero(a.n, a.m)
    power = y
    for k in range(1, a.m + 1):
        sign = 1.0 if k % 2 else -1.0
        result = result + power * (sign / k)
        power = ts_product(power, y)
    return result


def interleavings(a: int, b: int) -> Iterable[tuple[int, ...]]:
    """Position sets taken by the first word in each ``(a, b)`` shuffle."""
    return itertools.combinations(range(a + b), a)


def shuffle_words(u: WordLike, v: WordLike) -> Counter:
    """Shuffle product of two words as a multiset of words.

    >>> sorted(shuffle_words("12", "1").items())
    [((1, 1, 2), 2), ((1, 2, 1), 1)]
    """
    u, v = as_word(u), as_word(v)
    out: Counter = Counter()
    total = len(u) + len(v)
    for pos in interleavings(len(u), len(v)):
        w = [0] * total
        it_u, it_v = iter(u), iter(v)
        chosen = set(pos)
        for i in range(total):
            w[i] = next(it_u) if i in chosen else next(it_v)
        out[tuple(w)] += 1
    return out


def _interleave_perm(pos: tuple[int, ...], a: int, b: int) -> list[int]:
    """Axis permutation taking a ``u``-then-``v`` tensor to the interleaved word order."""
    chosen = set(pos)
    rest = [i for i in range(a + b) if i not in chosen]
    perm = [0] * (a + b)
    for k, i in enumerate(pos):
        perm[i] = k
    for k, i in enumerate(rest):
        perm[i] = a + k
    return perm


def ts_shuffle(a: TensorSeries, b: TensorSeries) -> TensorSeries:
    """Bilinear extension of :func:`shuffle_words`, truncated at ``m``."""
    _check_compatible(a, b)
    n, m = a.n, a.m
    out = [np.zeros(n**p) for p in range(m + 1)]
    for p in range(m + 1):
        shape = (n,) * p
        acc = np.zeros(shape)
        for k in range(p + 1):
            x, y = a.levels[k], b.levels[p - k]
            if not (x.any() and y.any()):
                continue
            t = np.outer(x, y).reshape(shape)
            for pos in interleavings(k, p - k):
                acc += np.transpose(t, _interleave_perm(pos, k, p - k))
        out[p] = acc.reshape(-1)
    return TensorSeries(n, m, out)


def shuffle_pairing(s: TensorSeries, a: int, b: int) -> np.ndarray:
    """Matrix of ``<s, u sh v>`` over all ``|u| = a``, ``|v| = b``.

    Rows index ``u`` and columns index ``v`` lexicographically.
    """
    p = a + b
    if p > s.m:
        raise DepthError(f"a + b = {p} exceeds depth {s.m}")
    n = s.n
    t = s.level_tensor(p)
    acc = np.zeros((n,) * p)
    for pos in interleavings(a, b):
        rest = [i for i in range(p) if i not in set(pos)]
        acc += np.transpose(t, list(pos) + rest)
    return acc.reshape(n**a, n**b)


def ts_pair(a: TensorSeries, w: WordLike) -> float:
    """Coefficient of the word ``w`` in ``a``."""
    w = as_word(w)
    if len(w) > a.m:
        raise DepthError(f"word {word_str(w)} longer than depth {a.m}")
    return float(a.levels[len(w)][word_index(w, a.n)])


def level_masses(a: TensorSeries) -> np.ndarray:
    """Absolute coefficient mass ``sum_{|w|=p} |c_w|`` for each level ``p``."""
    return np.array([np.abs(lev).sum() for lev in a.levels])


def xi_norm(a: TensorSeries, xi: float) -> float:
    """Truncated xi-norm ``sum_p xi**p * sum_{|w|=p} |c_w|``."""
    if not xi > 0:
        raise DomainError(f"xi must be positive, got {xi}")
    masses = level_masses(a)
    return float(sum(xi**p * masses[p] for p in range(a.m + 1)))

