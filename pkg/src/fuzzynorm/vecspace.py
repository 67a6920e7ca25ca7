"""Finite-dimensional real vectors and the classical norms used to induce fuzzy norms.

Vectors are plain 1-D ``numpy`` float arrays.  :func:`as_vector` is the single
entry point that validates them; everything else assumes validated input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, StructuralError

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "CrispNormKind",
    "as_vector",
    "as_points",
    "crisp_norm",
    "crisp_norms",
    "add",
    "subtract",
    "scale",
    "midpoint",
]


@dataclass(frozen=True)
class Tolerance:
    """Absolute plus relative tolerance used for float comparisons.

    ``close(x, y)`` is ``|x - y| <= atol + rtol * max(|x|, |y|)``.
    """

    atol: float = 1e-9
    rtol: float = 1e-9

    def __post_init__(self):
        if not (self.atol >= 0 and self.rtol >= 0):
            raise DomainError(f"tolerances must be non-negative, got {self}")

    def bound(self, scale: float = 0.0) -> float:
        return self.atol + self.rtol * abs(scale)

    def close(self, x: float, y: float) -> bool:
        return abs(x - y) <= self.bound(max(abs(x), abs(y)))


DEFAULT_TOL = Tolerance()


def as_vector(v, dim: int | None = None) -> np.ndarray:
    """Return ``v`` as a finite 1-D float array, checking its dimension."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1 or arr.size == 0:
        raise StructuralError(f"expected a non-empty 1-D vector, got shape {arr.shape}")
    if dim is not None and arr.size != dim:
        raise StructuralError(f"expected dimension {dim}, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"vector has non-finite components: {arr.tolist()}")
    return arr


def as_points(points, dim: int | None = None) -> np.ndarray:
    """Batch version of :func:`as_vector`: an ``(n, dim)`` array."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim == 1 else arr.reshape(1, -1)
    if arr.ndim != 2:
        raise StructuralError(f"expected an (n, dim) array, got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise StructuralError(f"expected dimension {dim}, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("point array has non-finite components")
    return arr


@dataclass(frozen=True)
class CrispNormKind:
    """Selector for a classical norm on R^n.

    Use the constructors rather than the raw fields::

        CrispNormKind.euclidean()
        CrispNormKind.p_norm(3)
        CrispNormKind.max_norm()
        CrispNormKind.weighted_euclidean([1.0, 4.0])
    """

    kind: str
    p: float | None = None
    weights: tuple[float, ...] | None = field(default=None)

    _KINDS = ("euclidean", "p_norm", "max_norm", "weighted_euclidean")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise DomainError(f"unknown norm kind {self.kind!r}; expected one of {self._KINDS}")
        if self.kind == "p_norm":
            if self.p is None or not np.isfinite(self.p) or self.p < 1:
                raise DomainError(f"p-norm needs finite p >= 1, got {self.p}")
        if self.kind == "weighted_euclidean":
            if not self.weights:
                raise DomainError("weighted_euclidean needs a non-empty weight list")
            w = np.asarray(self.weights, dtype=float)
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise DomainError(f"weights must be finite and strictly positive, got {self.weights}")

    @classmethod
    def euclidean(cls) -> "CrispNormKind":
        return cls("euclidean")

    @classmethod
    def p_norm(cls, p: float) -> "CrispNormKind":
        return cls("p_norm", p=float(p))

    @classmethod
    def max_norm(cls) -> "CrispNormKind":
        return cls("max_norm")

    @classmethod
    def weighted_euclidean(cls, weights: Sequence[float]) -> "CrispNormKind":
        return cls("weighted_euclidean", weights=tuple(float(w) for w in weights))

    def check_dimension(self, dim: int) -> None:
        if self.kind == "weighted_euclidean" and len(self.weights) != dim:
            raise StructuralError(
                f"weighted_euclidean has {len(self.weights)} weights but the space has dimension {dim}"
            )

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.p is not None:
            out["p"] = self.p
        if self.weights is not None:
            out["weights"] = list(self.weights)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "CrispNormKind":
        kind = data.get("kind")
        if kind == "p_norm":
            return cls.p_norm(data["p"])
        if kind == "weighted_euclidean":
            return cls.weighted_euclidean(data["weights"])
        return cls(kind)


def crisp_norms(points: np.ndarray, kind: CrispNormKind) -> np.ndarray:
    """Row-wise norms of an ``(n, dim)`` array.  No validation."""
    if kind.kind == "euclidean":
        return np.linalg.norm(points, axis=-1)
    if kind.kind == "max_norm":
        return np.max(np.abs(points), axis=-1)
    if kind.kind == "p_norm":
        if kind.p == 1:
            return np.sum(np.abs(points), axis=-1)
        return np.linalg.norm(points, ord=kind.p, axis=-1)
    w = np.sqrt(np.asarray(kind.weights, dtype=float))
    return np.linalg.norm(points * w, axis=-1)


def crisp_norm(v, kind: CrispNormKind) -> float:
    """Norm of a single vector; zero exactly when ``v`` is the zero vector."""
    arr = as_vector(v)
    kind.check_dimension(arr.size)
    return float(crisp_norms(arr[None, :], kind)[0])


def _pair(u, v):
    u, v = as_vector(u), as_vector(v)
    if u.size != v.size:
        raise StructuralError(f"dimension mismatch: {u.size} vs {v.size}")
    return u, v


def add(u, v) -> np.ndarray:
    u, v = _pair(u, v)
    return u + v


def subtract(u, v) -> np.ndarray:
    u, v = _pair(u, v)
    return u - v


def scale(v, c: float) -> np.ndarray:
    if not np.isfinite(c):
        raise DomainError(f"scalar must be finite, got {c}")
    return float(c) * as_vector(v)


def midpoint(u, v) -> np.ndarray:
    """The arithmetic midpoint ``(u + v) / 2``."""
    u, v = _pair(u, v)
    return (u + v) / 2.0
