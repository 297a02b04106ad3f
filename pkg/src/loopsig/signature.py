"""Signatures of piecewise-linear paths and iterated integrals of polynomial one-forms.

The signature of a path is computed from exact segment exponentials. The
iterated integral of arbitrary polynomial one-forms is computed independently
by Gauss-Legendre collocation, which is exact for the polynomial integrands
that arise along straight segments. :func:`reduce_polynomial_integral` turns
such an integral into a combination of signature coefficients.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
from numpy.polynomial import legendre

from .exceptions import DomainError, ShapeError
from .paths import PiecewiseLinearPath
from .tensor_algebra import (
    TensorSeries,
    Word,
    WordLike,
    as_word,
    check_cap,
    shuffle_words,
    ts_pair,
    ts_product,
    word_str,
    xi_norm,
)

DEFAULT_DEPTH = 4


def segment_signature(delta, m: int, cap: int | None = None) -> TensorSeries:
    """``exp(sum_i delta_i X_i)``: level ``p`` is ``delta^{(x)p} / p!``."""
    delta = np.asarray(delta, dtype=np.float64).reshape(-1)
    n = delta.size
    if m < 0:
        raise DomainError("depth must be >= 0")
    check_cap(n, m, cap)
    levels = [np.ones(1)]
    for p in range(1, m + 1):
        levels.append(np.kron(levels[-1], delta) / p)
    return TensorSeries(n, m, levels, cap=cap)


def path_signature(path: PiecewiseLinearPath, m: int = DEFAULT_DEPTH, n: int | None = None,
                   cap: int | None = None) -> TensorSeries:
    """Truncated signature, the ordered product of the segment exponentials."""
    if n is not None and n != path.dimension:
        raise ShapeError(f"path has dimension {path.dimension}, alphabet has {n} letters")
    sig = TensorSeries.one(path.dimension, m, cap=cap)
    for delta in path.increments:
        if delta.any():
            sig = ts_product(sig, segment_signature(delta, m, cap=cap))
    return sig


def signature_distance(a: TensorSeries, b: TensorSeries, xi: float = 1.0) -> float:
    return xi_norm(a - b, xi)


def first_difference(a: TensorSeries, b: TensorSeries, tol: float = 0.0) -> Word | None:
    """First word (by length, then lexicographically) whose coefficients differ by more than ``tol``."""
    for w, _ in (a - b).items(tol):
        return w
    return None


# one-forms with monomial coefficients


@dataclass(frozen=True)
class MonomialOneForm:
    """``factor * x_1**e_1 ... x_n**e_n dx_direction`` (``direction`` is 1-based)."""

    exponents: tuple[int, ...]
    factor: float = 1
    direction: int = 1

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if any(e < 0 for e in self.exponents):
            raise DomainError(f"negative exponent in {self.exponents}")
        if not 1 <= self.direction <= len(self.exponents):
            raise DomainError(
                f"direction {self.direction} outside 1..{len(self.exponents)}")

    @classmethod
    def dx(cls, j: int, n: int, factor: float = 1) -> "MonomialOneForm":
        return cls((0,) * n, factor, j)

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def evaluate(self, points: np.ndarray, velocity: np.ndarray) -> np.ndarray:
        """Values on tangent vectors ``velocity`` based at each row of ``points``."""
        coeff = self.factor * np.prod(np.power(points, self.exponents), axis=-1)
        return coeff * velocity[..., self.direction - 1]

    def to_dict(self) -> dict:
        return {"exponents": list(self.exponents), "factor": self.factor,
                "direction": self.direction}

    @classmethod
    def from_dict(cls, data: Mapping) -> "MonomialOneForm":
        return cls(tuple(data["exponents"]), data.get("factor", 1), int(data["direction"]))


OneFormLike = Union[MonomialOneForm, Sequence[MonomialOneForm]]


def _as_sum(form: OneFormLike) -> tuple[MonomialOneForm, ...]:
    if isinstance(form, MonomialOneForm):
        return (form,)
    return tuple(form)


@lru_cache(maxsize=64)
def _collocation(k: int):
    """Gauss-Legendre nodes on [0, 1], weights, and the matrix taking nodal
    values of a degree < k polynomial to its integrals from 0 to each node."""
    x, w = legendre.leggauss(k)
    vander = legendre.legvander(x, k - 1)
    partial = np.empty((k, k))
    for i in range(k):
        c = np.zeros(k)
        c[i] = 1.0
        partial[:, i] = legendre.legval(x, legendre.legint(c, lbnd=-1))
    integ = 0.5 * partial @ np.linalg.inv(vander)
    return (x + 1) / 2, w / 2, integ


def iterated_integral(path: PiecewiseLinearPath, forms: Sequence[OneFormLike]) -> float:
    """Time-ordered integral of ``forms[0] ... forms[-1]`` along ``path``.

    Each entry of ``forms`` is one :class:`MonomialOneForm` or a sequence of
    them read as their sum. The nested integrals are carried segment by
    segment as nodal values on a Gauss-Legendre grid whose size is picked from
    the total polynomial degree, so the result is exact up to rounding.
    """
    sums = [_as_sum(f) for f in forms]
    n = path.dimension
    for f in sums:
        for mono in f:
            if mono.dimension != n:
                raise ShapeError(f"one-form on R^{mono.dimension} used on a path in R^{n}")
    q = len(sums)
    if q == 0:
        return 1.0
    degree = sum(max((mono.degree for mono in f), default=0) for f in sums)
    t, w, integ = _collocation(degree + q)
    carried = np.zeros(q + 1)
    carried[0] = 1.0
    for start, delta in zip(path.points[:-1], path.increments):
        x = start + t[:, None] * delta
        values = [sum((mono.evaluate(x, delta) for mono in f), np.zeros(len(t))) for f in sums]
        inner = np.ones(len(t))
        nxt = carried.copy()
        for r in range(1, q + 1):
            g = inner * values[r - 1]
            nxt[r] = carried[r] + w @ g
            inner = carried[r] + integ @ g
        carried = nxt
    return float(carried[q])


def product_expand(p: int, i: int) -> Counter:
    """Index sequences expressing a product of two iterated scalar integrals.

    The product of ``int f_1 ... f_i`` and ``int f_{i+1} ... f_p`` over the same
    interval is the sum of ``int f_{s_1} ... f_{s_p}`` over the returned
    sequences ``s``, counted with multiplicity: the ``(i, p - i)`` shuffles.
    """
    if not 0 <= i <= p:
        raise DomainError(f"split position {i} outside 0..{p}")
    return shuffle_words(tuple(range(1, i + 1)), tuple(range(i + 1, p + 1)))


@dataclass
class ElementaryCombination:
    """Finite linear combination of elementary integrals ``int dx_{w_1} ... dx_{w_k}``."""

    terms: dict[Word, float] = field(default_factory=dict)

    def __post_init__(self):
        merged: dict[Word, float] = {}
        for w, c in self.terms.items():
            w = as_word(w)
            merged[w] = merged.get(w, 0) + c
        self.terms = {w: c for w, c in merged.items() if c != 0}

    def __getitem__(self, w: WordLike):
        return self.terms.get(as_word(w), 0)

    @property
    def depth(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    @property
    def alphabet(self) -> int:
        return max((max(w) for w in self.terms if w), default=1)

    def evaluate(self, signature: TensorSeries) -> float:
        """``sum_w c_w <signature, w>``; the signature must reach :attr:`depth`."""
        return float(sum(c * ts_pair(signature, w) for w, c in self.terms.items()))

    def evaluate_on(self, path: PiecewiseLinearPath) -> float:
        return self.evaluate(path_signature(path, self.depth))

    def to_dict(self) -> dict:
        return {"terms": [{"word": word_str(w), "coefficient": float(c)}
                          for w, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _shuffle_combos(a: Mapping[Word, float], b: Mapping[Word, float]) -> dict[Word, float]:
    out: dict[Word, float] = {}
    for u, cu in a.items():
        for v, cv in b.items():
            for w, mult in shuffle_words(u, v).items():
                out[w] = out.get(w, 0) + cu * cv * mult
    return out


def _coordinate_power(exponents: Iterable[int], basepoint: Sequence[float]) -> dict[Word, float]:
    """``prod_i (x_i(gamma_t))**e_i`` with ``x_i(gamma_t) = <S(gamma_t), i> + x_i(start)``."""
    acc: dict[Word, float] = {(): 1}
    for i, e in enumerate(exponents, start=1):
        coord = {(i,): 1}
        if basepoint[i - 1] != 0:
            coord[()] = basepoint[i - 1]
        for _ in range(e):
            acc = _shuffle_combos(acc, coord)
    return acc


def reduce_polynomial_integral(forms: Sequence[OneFormLike],
                               basepoint: Sequence[float]) -> ElementaryCombination:
    """Rewrite ``int_gamma g_1 dx_{j_1} ... g_q dx_{j_q}`` in elementary integrals.

    The returned combination is valid for every path starting at
    ``basepoint``. Working left to right, the running integral up to time t is
    a combination of signature coefficients of ``gamma_t``; multiplying by the
    next monomial coefficient is a shuffle product and integrating against
    ``dx_j`` appends the letter ``j``. Integer inputs give integer coefficients.
    """
    basepoint = tuple(basepoint)
    running: dict[Word, float] = {(): 1}
    for form in forms:
        nxt: dict[Word, float] = {}
        for mono in _as_sum(form):
            if mono.dimension != len(basepoint):
                raise ShapeError(
                    f"one-form on R^{mono.dimension} with basepoint in R^{len(basepoint)}")
            coeff = _coordinate_power(mono.exponents, basepoint)
            for w, c in _shuffle_combos(running, coeff).items():
                key = w + (mono.direction,)
                nxt[key] = nxt.get(key, 0) + mono.factor * c
        running = {w: c for w, c in nxt.items() if c != 0}
    return ElementaryCombination(running)
