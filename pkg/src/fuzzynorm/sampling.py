"""Seeded sampling plans and the structured reports every checker returns."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .errors import DomainError

__all__ = ["SamplePlan", "Witness", "ClauseResult", "CheckReport", "plain"]


@dataclass(frozen=True)
class SamplePlan:
    """Deterministic sampling configuration.

    Two equal plans always produce the same sample stream.  Each consumer
    asks for its own sub-stream through :meth:`rng`, so adding samples to one
    check never shifts the samples of another.
    """

    seed: int = 0
    n_points: int = 256
    point_radius: float = 2.0
    a_range: tuple[float, float] = (1e-3, 1e3)
    n_thresholds: int = 16
    equality_tol: float = 1e-9
    limit_tol: float = 1e-6
    max_witnesses: int = 8

    def __post_init__(self):
        object.__setattr__(self, "a_range", tuple(float(a) for a in self.a_range))
        lo, hi = self.a_range
        if int(self.seed) != self.seed or self.seed < 0:
            raise DomainError(f"seed must be an unsigned integer, got {self.seed}")
        if self.n_points < 1 or self.n_thresholds < 1 or self.max_witnesses < 1:
            raise DomainError("n_points, n_thresholds and max_witnesses must be positive")
        if not (self.point_radius > 0 and np.isfinite(self.point_radius)):
            raise DomainError(f"point_radius must be positive, got {self.point_radius}")
        if not (0 < lo < hi < np.inf):
            raise DomainError(f"a_range must satisfy 0 < lo < hi < inf, got {self.a_range}")
        if not (self.equality_tol > 0 and self.limit_tol > 0):
            raise DomainError("tolerances must be positive")

    def rng(self, *stream: int) -> np.random.Generator:
        return np.random.default_rng([int(self.seed), *stream])

    def ball(self, rng: np.random.Generator, n: int, dim: int, radius: float | None = None) -> np.ndarray:
        """``n`` points uniform in the Euclidean ball of ``radius`` in R^dim."""
        radius = self.point_radius if radius is None else radius
        g = rng.standard_normal((n, dim))
        g /= np.maximum(np.linalg.norm(g, axis=1, keepdims=True), 1e-300)
        r = radius * rng.random(n) ** (1.0 / dim)
        return g * r[:, None]

    def thresholds(self, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
        """Log-uniform positive thresholds over ``a_range``."""
        n = self.n_thresholds if n is None else n
        lo, hi = np.log(self.a_range)
        return np.exp(rng.uniform(lo, hi, n))

    def to_dict(self) -> dict:
        return {
            "seed": int(self.seed),
            "n_points": self.n_points,
            "point_radius": self.point_radius,
            "a_range": list(self.a_range),
            "n_thresholds": self.n_thresholds,
            "equality_tol": self.equality_tol,
            "limit_tol": self.limit_tol,
            "max_witnesses": self.max_witnesses,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SamplePlan":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown plan fields: {sorted(unknown)}")
        kwargs = dict(data)
        if "a_range" in kwargs:
            kwargs["a_range"] = tuple(kwargs["a_range"])
        return cls(**kwargs)


def plain(value: Any) -> Any:
    """Convert numpy scalars/arrays (possibly nested) into JSON-ready Python values."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return value


@dataclass
class Witness:
    """A concrete input violating ``clause``, plus the values observed on it."""

    clause: str
    inputs: dict
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        self.inputs = plain(self.inputs)
        self.values = plain(self.values)

    def to_dict(self) -> dict:
        return {"clause": self.clause, "inputs": self.inputs, "values": self.values}

    @classmethod
    def from_dict(cls, data: dict) -> "Witness":
        return cls(data["clause"], dict(data["inputs"]), dict(data.get("values", {})))


@dataclass
class ClauseResult:
    name: str
    verdict: str
    samples: int = 0

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict, "samples": self.samples}


@dataclass
class CheckReport:
    """Pass/fail verdict with per-clause results and reproducible witnesses.

    ``verdict == "fail"`` exactly when ``witnesses`` is non-empty.
    """

    verdict: str
    clauses: list[ClauseResult]
    witnesses: list[Witness]
    samples_used: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if (self.verdict == "fail") != bool(self.witnesses):
            raise ValueError("verdict must be 'fail' exactly when witnesses are present")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def clause(self, name: str) -> ClauseResult:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def witnesses_for(self, clause: str) -> list[Witness]:
        return [w for w in self.witnesses if w.clause == clause]

    @classmethod
    def build(
        cls,
        found: dict[str, Iterable[Witness]],
        samples: dict[str, int],
        max_witnesses: int,
        meta: dict | None = None,
    ) -> "CheckReport":
        """Assemble a report from per-clause witness lists (in clause order)."""
        clauses, witnesses = [], []
        for name, ws in found.items():
            ws = list(ws)[:max_witnesses]
            clauses.append(ClauseResult(name, "fail" if ws else "pass", samples.get(name, 0)))
            witnesses.extend(ws)
        return cls(
            verdict="fail" if witnesses else "pass",
            clauses=clauses,
            witnesses=witnesses,
            samples_used=int(sum(samples.values())),
            meta=plain(meta or {}),
        )

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "clauses": [c.to_dict() for c in self.clauses],
            "witnesses": [w.to_dict() for w in self.witnesses],
            "samples_used": self.samples_used,
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CheckReport":
        return cls(
            verdict=data["verdict"],
            clauses=[ClauseResult(**c) for c in data["clauses"]],
            witnesses=[Witness.from_dict(w) for w in data["witnesses"]],
            samples_used=data["samples_used"],
            meta=data.get("meta", {}),
        )

    def summary(self) -> str:
        parts = [f"{c.name}={c.verdict}" for c in self.clauses]
        return f"{self.verdict.upper()} ({', '.join(parts)}; {self.samples_used} samples)"
