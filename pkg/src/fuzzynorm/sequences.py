"""Convergence and Cauchy checks for sequences, truncated at a finite horizon.

Both checks only look at indices ``1..n_max``; a pass means "no counterexample
up to the horizon" and is labelled that way in the report metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, StructuralError
from .fuzzy_norm import FuzzyNormSpec
from .sampling import CheckReport, Witness
from .vecspace import as_vector

__all__ = [
    "SequenceSpec",
    "check_convergence",
    "check_cauchy",
    "replay_sequence_witness",
    "drift_sequence",
    "constant_sequence",
    "alternating_sequence",
    "SEQUENCES",
]


@dataclass(frozen=True)
class SequenceSpec:
    """A sequence ``n -> x_n`` (``n >= 1``) truncated at ``n_max``."""

    generator: Callable[[int], Sequence[float]]
    dimension: int
    n_max: int
    label: str = ""

    def __post_init__(self):
        if self.dimension < 1 or self.n_max < 1:
            raise StructuralError("dimension and n_max must be positive")

    def term(self, n: int) -> np.ndarray:
        return as_vector(self.generator(int(n)), self.dimension)

    def terms(self) -> np.ndarray:
        """Rows ``x_1 .. x_{n_max}``."""
        return np.stack([self.term(n) for n in range(1, self.n_max + 1)])


def drift_sequence(base, n_max: int = 1000) -> SequenceSpec:
    """``x_n = base + e_1 / n``; converges to ``base``."""
    base = as_vector(base)
    e1 = np.zeros(base.size)
    e1[0] = 1.0
    return SequenceSpec(lambda n: base + e1 / n, base.size, n_max, "drift")


def constant_sequence(base, n_max: int = 1000) -> SequenceSpec:
    base = as_vector(base)
    return SequenceSpec(lambda n: base, base.size, n_max, "constant")


def alternating_sequence(dim: int = 2, n_max: int = 1000) -> SequenceSpec:
    """``x_n = (-1)^n e_1``; neither convergent nor Cauchy."""
    e1 = np.zeros(dim)
    e1[0] = 1.0
    return SequenceSpec(lambda n: (-1.0) ** n * e1, dim, n_max, "alternating")


SEQUENCES = {
    "drift": drift_sequence,
    "constant": constant_sequence,
    "alternating": alternating_sequence,
}


def _validate(spec, seq, eps, a_grid):
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    a_grid = [float(a) for a in a_grid]
    if not a_grid:
        raise StructuralError("a_grid must not be empty")
    if any(not a > 0 for a in a_grid):
        raise DomainError(f"a_grid entries must be positive, got {a_grid}")
    if seq.dimension != spec.dimension:
        raise StructuralError(f"sequence dimension {seq.dimension} != space dimension {spec.dimension}")
    return a_grid


def _tail_start(ok: np.ndarray) -> int | None:
    """0-based index where the all-True tail of ``ok`` begins, or None."""
    bad = np.flatnonzero(~ok)
    if bad.size == 0:
        return 0
    start = int(bad[-1]) + 1
    return start if start < ok.size else None


def check_convergence(spec: FuzzyNormSpec, seq: SequenceSpec, limit, eps: float, a_grid) -> CheckReport:
    """For each ``a``: some ``n_0 <= n_max`` with ``N(x_n - limit, a) > 1 - eps`` on ``[n_0, n_max]``."""
    a_grid = _validate(spec, seq, eps, a_grid)
    limit = as_vector(limit, spec.dimension)
    diffs = seq.terms() - limit
    witnesses, n0s = [], {}
    for a in a_grid:
        vals = spec.evaluate_many(diffs, a)
        start = _tail_start(vals > 1 - eps)
        if start is None:
            n = int(np.flatnonzero(vals <= 1 - eps)[-1]) + 1
            inp = {"a": a, "n": n, "eps": eps, "limit": limit}
            witnesses.append(Witness("convergence", inp, _sequence_clause(spec, seq, "convergence", inp)[1]))
        else:
            n0s[repr(a)] = start + 1
    samples = {"convergence": len(a_grid) * seq.n_max}
    return CheckReport.build(
        {"convergence": witnesses}, samples, len(a_grid),
        meta={"up_to_horizon": seq.n_max, "n0": n0s, "sequence": seq.label},
    )


def check_cauchy(spec: FuzzyNormSpec, seq: SequenceSpec, eps: float, a_grid, p_max: int) -> CheckReport:
    """For each ``a``: some ``n_0`` with ``N(x_{n+p} - x_n, a) > 1 - eps`` for
    all ``n`` in ``[n_0, n_max - p_max]`` and ``1 <= p <= p_max``."""
    a_grid = _validate(spec, seq, eps, a_grid)
    if not 1 <= p_max < seq.n_max:
        raise StructuralError(f"p_max must satisfy 1 <= p_max < n_max, got p_max={p_max}, n_max={seq.n_max}")
    X = seq.terms()
    m = seq.n_max - p_max
    # gaps[p-1, n-1] = x_{n+p} - x_n
    gaps = np.stack([X[p : p + m] - X[:m] for p in range(1, p_max + 1)])
    flat = gaps.reshape(-1, spec.dimension)
    witnesses, n0s = [], {}
    for a in a_grid:
        vals = spec.evaluate_many(flat, a).reshape(p_max, m)
        ok = np.all(vals > 1 - eps, axis=0)
        start = _tail_start(ok)
        if start is None:
            n = int(np.flatnonzero(~ok)[-1]) + 1
            p = int(np.argmin(vals[:, n - 1])) + 1
            inp = {"a": a, "n": n, "p": p, "eps": eps}
            witnesses.append(Witness("cauchy", inp, _sequence_clause(spec, seq, "cauchy", inp)[1]))
        else:
            n0s[repr(a)] = start + 1
    samples = {"cauchy": len(a_grid) * m * p_max}
    return CheckReport.build(
        {"cauchy": witnesses}, samples, len(a_grid),
        meta={"up_to_horizon": seq.n_max, "p_max": p_max, "n0": n0s, "sequence": seq.label},
    )


def _sequence_clause(spec, seq, clause, inp):
    n, a, eps = inp["n"], inp["a"], inp["eps"]
    if clause == "convergence":
        v = spec.evaluate(seq.term(n) - as_vector(inp["limit"], spec.dimension), a)
        return v <= 1 - eps, {"N(x_n-x,a)": v}
    v = spec.evaluate(seq.term(n + inp["p"]) - seq.term(n), a)
    return v <= 1 - eps, {"N(x_n+p-x_n,a)": v}


def replay_sequence_witness(spec: FuzzyNormSpec, seq: SequenceSpec, witness: Witness) -> tuple[bool, dict]:
    return _sequence_clause(spec, seq, witness.clause, witness.inputs)
