"""Piecewise-linear paths and retrace reduction.

A :class:`PiecewiseLinearPath` is a list of vertices; its parametrization is
irrelevant to everything computed here. :class:`EdgePath` is a word in
oriented edge labels and their formal inverses, the combinatorial model used
for tree-like loops.
"""
from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .exceptions import CompositionError, DomainError, ShapeError


class PiecewiseLinearPath:
    """Ordered vertices in R^n joined by straight segments."""

    __slots__ = ("points",)

    def __init__(self, points):
        pts = np.array(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ShapeError(f"points must be a non-empty (k, n) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("points must be finite")
        pts.setflags(write=False)
        self.points = pts

    @classmethod
    def constant(cls, point) -> "PiecewiseLinearPath":
        return cls([point])

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.points, axis=0)

    def __len__(self):
        return self.points.shape[0] - 1

    def is_constant(self) -> bool:
        return not np.any(self.increments)

    def is_closed(self) -> bool:
        return bool(np.array_equal(self.start, self.end))

    def length(self, ord: float = 1) -> float:
        """Sum of segment lengths in the given vector norm (l1 by default)."""
        if len(self) == 0:
            return 0.0
        return float(np.linalg.norm(self.increments, ord=ord, axis=1).sum())

    def subdivide(self, segment: int, fraction: float) -> "PiecewiseLinearPath":
        """Insert a vertex at ``fraction`` of the way along one segment."""
        p, q = self.points[segment], self.points[segment + 1]
        mid = p + fraction * (q - p)
        return PiecewiseLinearPath(np.insert(self.points, segment + 1, mid, axis=0))

    def translate(self, offset) -> "PiecewiseLinearPath":
        return PiecewiseLinearPath(self.points + np.asarray(offset, dtype=np.float64))

    def __mul__(self, other: "PiecewiseLinearPath") -> "PiecewiseLinearPath":
        return path_concat(self, other)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseLinearPath):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(
            np.array_equal(self.points, other.points))

    __hash__ = None

    def __repr__(self):
        return f"PiecewiseLinearPath({self.points.tolist()})"

    def to_dict(self) -> dict:
        return {"dimension": self.dimension, "points": self.points.tolist()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "PiecewiseLinearPath":
        try:
            points = data["points"]
        except (KeyError, TypeError) as exc:
            raise ShapeError("path document needs a 'points' list") from exc
        if not isinstance(points, list) or not points:
            raise ShapeError("path document has no points")
        widths = {len(p) if isinstance(p, list) else -1 for p in points}
        if len(widths) != 1 or -1 in widths:
            raise ShapeError(f"points have inconsistent widths {sorted(widths)}")
        path = cls(points)
        if "dimension" in data and int(data["dimension"]) != path.dimension:
            raise ShapeError(
                f"declared dimension {data['dimension']} but points have {path.dimension}")
        return path

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseLinearPath":
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_csv(cls, text: str) -> "PiecewiseLinearPath":
        """One point per row; a non-numeric first row is taken as a header."""
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if rows:
            try:
                [float(c) for c in rows[0]]
            except ValueError:
                rows = rows[1:]
        if not rows:
            raise ShapeError("CSV path has no points")
        if len({len(r) for r in rows}) != 1:
            raise ShapeError("CSV rows have inconsistent widths")
        try:
            return cls([[float(c) for c in r] for r in rows])
        except ValueError as exc:
            raise ShapeError(f"non-numeric CSV entry: {exc}") from exc


def minimal_form(a: PiecewiseLinearPath) -> PiecewiseLinearPath:
    """Drop zero-length segments; a constant path collapses to one point."""
    pts = a.points
    keep = np.ones(len(pts), dtype=bool)
    keep[1:] = np.any(pts[1:] != pts[:-1], axis=1)
    return PiecewiseLinearPath(pts[keep])


def path_concat(a: PiecewiseLinearPath, b: PiecewiseLinearPath) -> PiecewiseLinearPath:
    if a.dimension != b.dimension:
        raise ShapeError(f"dimensions differ: {a.dimension} vs {b.dimension}")
    if not np.array_equal(a.end, b.start):
        raise CompositionError(f"path ends at {a.end.tolist()} but next starts at {b.start.tolist()}")
    return minimal_form(PiecewiseLinearPath(np.vstack([a.points, b.points[1:]])))


def path_inverse(a: PiecewiseLinearPath) -> PiecewiseLinearPath:
    return PiecewiseLinearPath(a.points[::-1])


def geometric_retrace_reduce(a: PiecewiseLinearPath, tol: float = 0.0) -> PiecewiseLinearPath:
    """Cancel adjacent segment pairs ``p -> q -> p`` until none remain.

    With ``tol = 0`` vertices must match exactly, which keeps the reduction
    confluent. A positive ``tol`` compares vertices in the max norm and is
    best effort only. Backtracks that end part way along a segment are not
    detected.
    """
    stack: list[np.ndarray] = []
    for p in minimal_form(a).points:
        if stack and _same(stack[-1], p, tol):
            continue
        if len(stack) >= 2 and _same(stack[-2], p, tol):
            stack.pop()
            continue
        stack.append(p)
    return PiecewiseLinearPath(stack)


def _same(p: np.ndarray, q: np.ndarray, tol: float) -> bool:
    if tol == 0:
        return bool(np.array_equal(p, q))
    return float(np.max(np.abs(p - q))) <= tol


# edge paths

Letter = tuple[str, int]

_TOKEN = re.compile(r"^([A-Za-z0-9_]+)('?)$")


@dataclass(frozen=True)
class EdgePath:
    """Word in oriented edge labels; ``(label, -1)`` is the reverse of ``(label, 1)``.

    ``edges`` optionally maps each label to its ``(tail, head)`` vertices. Without
    it every label is read as a loop at a single vertex, so every word is closed.
    """

    word: tuple[Letter, ...]
    edges: Mapping[str, tuple[str, str]] | None = field(default=None, compare=False)

    def __post_init__(self):
        for label, sign in self.word:
            if sign not in (1, -1):
                raise DomainError(f"exponent of {label} must be +1 or -1")
            if self.edges is not None and label not in self.edges:
                raise DomainError(f"unknown edge {label}")
        if self.edges is not None:
            for (l1, s1), (l2, s2) in zip(self.word, self.word[1:]):
                if self._head(l1, s1) != self._tail(l2, s2):
                    raise DomainError(f"{_fmt((l1, s1))} does not end where {_fmt((l2, s2))} starts")

    def _tail(self, label, sign):
        t, h = self.edges[label]
        return t if sign == 1 else h

    def _head(self, label, sign):
        t, h = self.edges[label]
        return h if sign == 1 else t

    @classmethod
    def parse(cls, text: str, edges=None) -> "EdgePath":
        """Read whitespace-separated tokens; a trailing apostrophe marks an inverse."""
        word = []
        for tok in text.split():
            mt = _TOKEN.match(tok)
            if not mt:
                raise DomainError(f"malformed edge token {tok!r}")
            word.append((mt.group(1), -1 if mt.group(2) else 1))
        return cls(tuple(word), edges)

    def is_closed(self) -> bool:
        if self.edges is None or not self.word:
            return True
        return self._tail(*self.word[0]) == self._head(*self.word[-1])

    def inverse(self) -> "EdgePath":
        return EdgePath(tuple((l, -s) for l, s in reversed(self.word)), self.edges)

    def __mul__(self, other: "EdgePath") -> "EdgePath":
        return EdgePath(self.word + other.word, self.edges if self.edges is not None else other.edges)

    def __len__(self):
        return len(self.word)

    def __str__(self):
        return " ".join(_fmt(x) for x in self.word)


def _fmt(letter: Letter) -> str:
    label, sign = letter
    return label if sign == 1 else label + "'"


def retrace_reduce(w: EdgePath) -> EdgePath:
    """Free reduction: delete adjacent ``x x'`` pairs until none are left."""
    stack: list[Letter] = []
    for label, sign in w.word:
        if stack and stack[-1] == (label, -sign):
            stack.pop()
        else:
            stack.append((label, sign))
    return EdgePath(tuple(stack), w.edges)


def is_tree_like_edge_path(w: EdgePath) -> bool:
    """A closed edge path is tree-like iff it reduces to the empty word."""
    if not w.is_closed():
        raise DomainError("edge path is not closed")
    return len(retrace_reduce(w)) == 0

