"""Holonomy along piecewise-linear paths.

Both solvers integrate the horizontal-lift equation ``u' = -u * omega(gamma')``
with ``u(0) = 1`` by classical fourth-order Runge-Kutta, a fixed number of
steps per segment:

* :func:`holonomy_truncated` uses ``omega = -sum_i X_i dx^i`` in the
  truncated tensor algebra, so ``u(1)`` is the signature of the path;
* :func:`holonomy_matrix` uses a ``d x d`` matrix of polynomial one-forms.

The connection acts on the right. With that ordering the time-ordered Picard
series is ``I + sum_q (-1)^q int_{t_1 < ... < t_q} A(t_1) ... A(t_q)``, earlier
times on the left, which :func:`picard_terms` evaluates entry by entry.

Each segment is traversed on ``[0, 1]`` with a time profile. ``"linear"`` is
constant speed; ``"smooth"`` is ``(1 - cos(pi t)) / 2``, which stops at every
vertex. Along a straight segment at constant speed the truncated right-hand
side is nilpotent of order ``m + 1`` and RK4 reproduces the exponential
exactly for ``m <= 4``; the smooth profile is what makes the fourth-order
convergence visible there.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .exceptions import DomainError, ShapeError
from .paths import PiecewiseLinearPath
from .signature import MonomialOneForm, _as_sum, iterated_integral
from .tensor_algebra import TensorSeries, check_cap, level_masses

PROFILES = ("linear", "smooth")


def _profile(name: str) -> tuple[Callable[[float], float], Callable[[float], float]]:
    if name == "linear":
        return (lambda t: t), (lambda t: 1.0)
    if name == "smooth":
        return (lambda t: 0.5 * (1.0 - math.cos(math.pi * t))), (
            lambda t: 0.5 * math.pi * math.sin(math.pi * t))
    raise DomainError(f"unknown time profile {name!r}; expected one of {PROFILES}")


def _rk4(rhs, y, steps: int):
    h = 1.0 / steps
    for k in range(steps):
        t = k * h
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + (h / 2) * k1)
        k3 = rhs(t + h / 2, y + (h / 2) * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    return y


@dataclass
class HolonomyResult:
    """Solution at ``steps`` steps per segment, with a step-doubling error estimate.

    ``error`` is the distance to the solution at ``2 * steps``; ``order`` is
    ``log2`` of the ratio of successive differences at ``steps``, ``2 * steps``
    and ``4 * steps``, or ``None`` when those differences sit at rounding level.
    """

    value: TensorSeries | np.ndarray
    steps: int
    order: float | None = None
    error: float | None = None
    profile: str = "linear"

    def to_dict(self) -> dict:
        value = self.value.to_dict() if isinstance(self.value, TensorSeries) else self.value.tolist()
        return {"value": value, "steps": self.steps, "order": self.order,
                "error": self.error, "profile": self.profile}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _with_estimate(solve, distance, steps: int, estimate: bool, profile: str) -> HolonomyResult:
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    u1 = solve(steps)
    if not estimate:
        return HolonomyResult(u1, steps, profile=profile)
    u2, u4 = solve(2 * steps), solve(4 * steps)
    e1, e2 = distance(u1, u2), distance(u2, u4)
    floor = 1e-13 * max(1.0, distance(u1, 0 * u1))
    order = math.log2(e1 / e2) if e2 > floor and e1 > floor else None
    return HolonomyResult(u1, steps, order, e1, profile)


# truncated tensor algebra


def _right_letter_product(offsets: np.ndarray, m: int):
    def mul(y: np.ndarray, z: np.ndarray) -> np.ndarray:
        out = np.zeros_like(y)
        for p in range(1, m + 1):
            out[offsets[p]:offsets[p + 1]] = np.outer(y[offsets[p - 1]:offsets[p]], z).ravel()
        return out
    return mul


def lift_truncated(path: PiecewiseLinearPath, m: int, steps: int,
                   profile: str = "linear", cap: int | None = None) -> TensorSeries:
    """Endpoint of the horizontal lift, with no error estimate."""
    n = path.dimension
    check_cap(n, m, cap)
    phi, dphi = _profile(profile)
    offsets = np.cumsum([0] + [n**p for p in range(m + 1)])
    mul = _right_letter_product(offsets, m)
    y = np.zeros(offsets[-1])
    y[0] = 1.0
    for delta in path.increments:
        if not delta.any():
            continue
        # -omega(gamma'(t)) = dphi(t) * sum_i delta_i X_i, acting on the right
        y = _rk4(lambda t, u, d=delta: dphi(t) * mul(u, d), y, steps)
    return TensorSeries.from_flat(n, m, y)


def holonomy_truncated(path: PiecewiseLinearPath, m: int, steps: int,
                       profile: str = "linear", estimate: bool = True,
                       cap: int | None = None) -> HolonomyResult:
    """Holonomy of ``-sum_i X_i dx^i`` along ``path`` in the depth-``m`` algebra."""
    _profile(profile)

    def distance(a, b):
        return float(level_masses(a - b).sum())

    return _with_estimate(lambda s: lift_truncated(path, m, s, profile, cap),
                          distance, steps, estimate, profile)


# matrix connections


@dataclass(frozen=True)
class MatrixConnection:
    """``d x d`` matrix ``A = (a_ij)`` of one-forms on R^n with monomial coefficients.

    Each entry is a tuple of :class:`MonomialOneForm` read as their sum; an
    empty tuple is the zero form.
    """

    d: int
    dimension: int
    entries: tuple[tuple[tuple[MonomialOneForm, ...], ...], ...] = field(repr=False)

    def __post_init__(self):
        if self.d < 1:
            raise DomainError("matrix size must be >= 1")
        rows = tuple(tuple(_as_sum(e) for e in row) for row in self.entries)
        if len(rows) != self.d or any(len(r) != self.d for r in rows):
            raise ShapeError(f"entries must form a {self.d}x{self.d} array")
        for row in rows:
            for entry in row:
                for mono in entry:
                    if mono.dimension != self.dimension:
                        raise ShapeError(
                            f"one-form on R^{mono.dimension} in a connection on R^{self.dimension}")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def constant(cls, matrices: Sequence[np.ndarray]) -> "MatrixConnection":
        """``A = sum_k matrices[k] dx_{k+1}`` with constant coefficients."""
        mats = [np.asarray(mk, dtype=np.float64) for mk in matrices]
        n, d = len(mats), mats[0].shape[0]
        entries = tuple(
            tuple(tuple(MonomialOneForm.dx(k + 1, n, float(mk[i, j]))
                        for k, mk in enumerate(mats) if mk[i, j] != 0)
                  for j in range(d))
            for i in range(d))
        return cls(d, n, entries)

    @classmethod
    def zero(cls, d: int, dimension: int) -> "MatrixConnection":
        return cls(d, dimension, tuple(tuple(() for _ in range(d)) for _ in range(d)))

    def evaluate(self, point: np.ndarray, vector: np.ndarray) -> np.ndarray:
        """The matrix ``A_point(vector)``."""
        out = np.zeros((self.d, self.d))
        x = np.asarray(point, dtype=np.float64)
        v = np.asarray(vector, dtype=np.float64)
        for i, row in enumerate(self.entries):
            for j, entry in enumerate(row):
                for mono in entry:
                    out[i, j] += mono.evaluate(x, v)
        return out

    def is_constant(self) -> bool:
        return all(mono.degree == 0 for row in self.entries for e in row for mono in e)

    def sup_norm(self) -> float:
        """Bound on the spectral norm of ``A(v)`` per unit l1 length of ``v`` (constant forms only)."""
        if not self.is_constant():
            raise DomainError("sup_norm is only defined for constant connections")
        mats = np.zeros((self.dimension, self.d, self.d))
        for i, row in enumerate(self.entries):
            for j, entry in enumerate(row):
                for mono in entry:
                    mats[mono.direction - 1, i, j] += mono.factor
        return float(max(np.linalg.norm(mk, 2) for mk in mats))

    def to_dict(self) -> dict:
        return {"d": self.d, "dimension": self.dimension,
                "entries": [[[mono.to_dict() for mono in e] for e in row] for row in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "MatrixConnection":
        try:
            entries = tuple(tuple(tuple(MonomialOneForm.from_dict(f) for f in e) for e in row)
                            for row in data["entries"])
            return cls(int(data["d"]), int(data["dimension"]), entries)
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"malformed connection document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "MatrixConnection":
        return cls.from_dict(json.loads(text))


def lift_matrix(A: MatrixConnection, path: PiecewiseLinearPath, steps: int,
                profile: str = "linear") -> np.ndarray:
    if A.dimension != path.dimension:
        raise ShapeError(f"connection on R^{A.dimension}, path in R^{path.dimension}")
    phi, dphi = _profile(profile)
    u = np.eye(A.d)
    for start, delta in zip(path.points[:-1], path.increments):
        if not delta.any():
            continue

        def rhs(t, y, start=start, delta=delta):
            return -y @ A.evaluate(start + phi(t) * delta, dphi(t) * delta)

        u = _rk4(rhs, u, steps)
    return u


def holonomy_matrix(A: MatrixConnection, path: PiecewiseLinearPath, steps: int,
                    profile: str = "linear", estimate: bool = True) -> HolonomyResult:
    """Solve ``u' = -u A(gamma'(t))``, ``u(0) = I`` along ``path``."""
    if A.dimension != path.dimension:
        raise ShapeError(f"connection on R^{A.dimension}, path in R^{path.dimension}")

    def distance(a, b):
        return float(np.abs(a - b).max())

    return _with_estimate(lambda s: lift_matrix(A, path, s, profile),
                          distance, steps, estimate, profile)


def picard_terms(A: MatrixConnection, path: PiecewiseLinearPath, order: int) -> list[np.ndarray]:
    """Terms ``1..order`` of the Picard series of the holonomy.

    Entry ``(i, j)`` of term ``q`` is ``(-1)^q`` times the sum over internal
    indices ``k_1..k_{q-1}`` of the iterated integral of
    ``a_{i k_1} a_{k_1 k_2} ... a_{k_{q-1} j}``.
    """
    if order < 1:
        raise DomainError(f"order must be >= 1, got {order}")
    if A.dimension != path.dimension:
        raise ShapeError(f"connection on R^{A.dimension}, path in R^{path.dimension}")
    d = A.d
    terms = []
    for q in range(1, order + 1):
        term = np.zeros((d, d))
        for i in range(d):
            for j in range(d):
                total = 0.0
                for inner in itertools.product(range(d), repeat=q - 1):
                    chain = (i,) + inner + (j,)
                    forms = [A.entries[a][b] for a, b in zip(chain, chain[1:])]
                    if all(forms):
                        total += iterated_integral(path, forms)
                term[i, j] = (-1) ** q * total
        terms.append(term)
    return terms


def picard_partial_sum(A: MatrixConnection, path: PiecewiseLinearPath, order: int) -> np.ndarray:
    return np.eye(A.d) + sum(picard_terms(A, path, order))


# xi-norm diagnostics


@dataclass
class FrXiReport:
    """Truncated xi-norms of a series, per xi, with per-level contributions.

    When the l1 path length is given, each level is also compared with the
    factorial bound ``(xi * L)**p / p!`` satisfied by every signature.
    """

    m: int
    rows: list[dict]
    length: float | None = None

    @property
    def certified(self) -> bool | None:
        if self.length is None:
            return None
        return all(row["certified"] for row in self.rows)

    def to_dict(self) -> dict:
        return {"m": self.m, "length": self.length, "rows": self.rows,
                "certified": self.certified}

    def to_csv(self) -> str:
        lines = ["xi,level,weighted_mass,bound"]
        for row in self.rows:
            bounds = row.get("bound", [None] * len(row["levels"]))
            for p, (mass, b) in enumerate(zip(row["levels"], bounds)):
                lines.append(f"{row['xi']!r},{p},{mass!r},{'' if b is None else repr(b)}")
        return "\n".join(lines) + "\n"


def fr_xi_report(s: TensorSeries, xis: Sequence[float], length: float | None = None,
                 rtol: float = 1e-12) -> FrXiReport:
    """Per-xi norm table for ``s``; ``length`` enables the factorial-decay certificate."""
    masses = level_masses(s)
    rows = []
    for xi in xis:
        if not xi > 0:
            raise DomainError(f"xi must be positive, got {xi}")
        weighted = [float(xi**p * masses[p]) for p in range(s.m + 1)]
        row = {"xi": float(xi), "norm": float(sum(weighted)), "levels": weighted}
        if length is not None:
            bound = [float((xi * length) ** p / math.factorial(p)) for p in range(s.m + 1)]
            row["bound"] = bound
            row["certified"] = all(w <= b * (1 + rtol) for w, b in zip(weighted, bound))
        rows.append(row)
    return FrXiReport(s.m, rows, length)
