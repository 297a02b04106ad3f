"""Lyndon words, their bracket expansions, and log-signature coordinates."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exceptions import DomainError
from .tensor_algebra import (
    TensorSeries,
    Word,
    WordLike,
    as_word,
    index_to_word,
    shuffle_pairing,
    ts_log,
    ts_product,
    word_index,
    word_str,
)

DEFAULT_TOL = 1e-9


def is_lyndon(w: WordLike) -> bool:
    """True if ``w`` is non-empty and strictly smaller than each proper rotation."""
    w = as_word(w)
    return len(w) > 0 and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def lyndon_words(n: int, m: int) -> list[Word]:
    """Lyndon words of length 1..m over ``{1..n}``, shortest first, then lexicographic.

    Generated by Duval's algorithm (which yields plain lexicographic order) and re-sorted.
    """
    if n < 1 or m < 1:
        raise DomainError("need n >= 1 and m >= 1")
    out = []
    w = [1]
    while w:
        out.append(tuple(w))
        # repeat periodically up to length m, then strip trailing maximal letters
        k = len(w)
        while len(w) < m:
            w.append(w[len(w) - k])
        while w and w[-1] == n:
            w.pop()
        if w:
            w[-1] += 1
    return sorted(out, key=lambda x: (len(x), x))


def standard_factorization(w: WordLike) -> tuple[Word, Word]:
    """Split a Lyndon word of length >= 2 as ``u v`` with ``v`` its longest proper Lyndon suffix."""
    w = as_word(w)
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise DomainError(f"{word_str(w)} has no standard factorization")


def lyndon_bracket(w: WordLike, n: int | None = None, m: int | None = None) -> TensorSeries:
    """Expand the standard bracketing of a Lyndon word in the tensor algebra.

    The result lives at level ``len(w)``; ``n`` defaults to the largest letter
    and ``m`` to ``len(w)``.
    """
    w = as_word(w)
    if not is_lyndon(w):
        raise DomainError(f"{word_str(w)} is not a Lyndon word")
    n = max(w) if n is None else n
    m = len(w) if m is None else m
    if max(w) > n:
        raise DomainError(f"letter {max(w)} outside alphabet 1..{n}")
    if len(w) > m:
        raise DomainError(f"Lyndon word of length {len(w)} exceeds depth {m}")
    return _bracket(w, n, m)


@lru_cache(maxsize=None)
def _bracket(w: Word, n: int, m: int) -> TensorSeries:
    if len(w) == 1:
        return TensorSeries.letter(w[0], n, m)
    u, v = standard_factorization(w)
    p, q = _bracket(u, n, m), _bracket(v, n, m)
    return ts_product(p, q) - ts_product(q, p)


@dataclass(frozen=True)
class LyndonBasis:
    """Lyndon words up to length ``m`` with their bracket expansions."""

    n: int
    m: int
    entries: tuple[tuple[Word, TensorSeries], ...] = field(repr=False)

    @classmethod
    def build(cls, n: int, m: int) -> "LyndonBasis":
        return _basis(n, m)

    @property
    def words(self) -> list[Word]:
        return [w for w, _ in self.entries]

    def level(self, p: int) -> list[tuple[Word, TensorSeries]]:
        return [(w, e) for w, e in self.entries if len(w) == p]

    def combine(self, coords: dict) -> TensorSeries:
        """Lie element ``sum_w coords[w] * bracket(w)``."""
        out = TensorSeries.zero(self.n, self.m)
        lookup = dict(self.entries)
        for w, c in coords.items():
            out = out + lookup[as_word(w)] * c
        return out


@lru_cache(maxsize=None)
def _basis(n: int, m: int) -> LyndonBasis:
    words = lyndon_words(n, m) if m >= 1 else []
    return LyndonBasis(n, m, tuple((w, _bracket(w, n, m)) for w in words))


@dataclass
class LogSignature:
    n: int
    m: int
    coords: dict[Word, float]
    residual: float

    def __getitem__(self, w: WordLike) -> float:
        return self.coords[as_word(w)]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "coords": [{"word": word_str(w), "value": v} for w, v in self.coords.items()],
            "residual": self.residual,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "LogSignature":
        coords = {as_word(c["word"]): float(c["value"]) for c in data["coords"]}
        return cls(int(data["n"]), int(data["m"]), coords, float(data["residual"]))


def log_signature_coords(s: TensorSeries) -> LogSignature:
    """Coordinates of ``log s`` in the Lyndon bracket basis.

    Each bracket expansion has its own Lyndon word as smallest word, with
    coefficient 1, so walking the words of a level in increasing order and
    peeling off one bracket at a time is back-substitution on a unitriangular
    system. Whatever remains is the residual: zero (up to rounding) exactly
    when ``log s`` is a Lie element.
    """
    log_s = ts_log(s)
    basis = LyndonBasis.build(s.n, s.m)
    coords: dict[Word, float] = {}
    leftover = 0.0
    for p in range(1, s.m + 1):
        r = np.array(log_s.levels[p])
        for w, e in basis.level(p):
            lam = r[word_index(w, s.n)]
            coords[w] = float(lam)
            if lam:
                r -= lam * e.levels[p]
        leftover += float(np.abs(r).sum())
    return LogSignature(s.n, s.m, coords, leftover)


@dataclass
class GroupLikeCheck:
    """Outcome of :func:`is_group_like`; truthy when the shuffle identity holds."""

    ok: bool
    witness: tuple[Word, Word] | None
    max_violation: float

    def __bool__(self) -> bool:
        return self.ok


def is_group_like(s: TensorSeries, tol: float = DEFAULT_TOL) -> GroupLikeCheck:
    """Test ``<s,u><s,v> = <s, u sh v>`` for all non-empty ``u, v`` with ``|u|+|v| <= m``.

    The comparison is absolute. On failure the witness is the first pair, in
    (length, lexicographic) order, whose violation exceeds ``tol``.
    """
    if abs(s.constant - 1.0) > tol:
        return GroupLikeCheck(False, ((), ()), abs(s.constant - 1.0))
    worst = 0.0
    witness = None
    for a in range(1, s.m):
        for b in range(1, s.m - a + 1):
            lhs = np.outer(s.levels[a], s.levels[b])
            diff = np.abs(lhs - shuffle_pairing(s, a, b))
            worst = max(worst, float(diff.max()))
            if witness is None:
                bad = np.argwhere(diff > tol)
                if len(bad):
                    i, j = bad[0]
                    witness = (index_to_word(int(i), a, s.n), index_to_word(int(j), b, s.n))
    return GroupLikeCheck(witness is None, witness, worst)
