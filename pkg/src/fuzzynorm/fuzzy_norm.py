"""Fuzzy norms ``N(x, a)`` and sampled checkers for their axioms.

A fuzzy norm assigns to a vector ``x`` and a real threshold ``a`` the truth
value of "the norm of ``x`` is at most ``a``".  The family shipped here is the
one induced by a classical norm::

    N(x, a) = a / (a + ||x||)   for a > 0,        0 otherwise.

Arbitrary evaluators can be wrapped with :meth:`FuzzyNormSpec.custom`; every
value they return is range-checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ContractViolation, StructuralError
from .sampling import CheckReport, SamplePlan, Witness
from .vecspace import CrispNormKind, as_points, as_vector, crisp_norms

__all__ = [
    "FuzzyNormSpec",
    "AXIOMS",
    "USC_OFFSETS",
    "evaluate",
    "check_axioms",
    "check_strict_convexity",
    "check_crisp_strict_convexity",
    "replay_axiom_witness",
    "replay_strict_convexity_witness",
    "replay_crisp_convexity_witness",
    "squared_norm_evaluator",
    "ceiling_threshold_evaluator",
    "overflowing_evaluator",
    "CUSTOM_EVALUATORS",
]

AXIOMS = ("N1", "N2", "N3", "N4", "N5", "N6")

# one-sided probe offsets for the upper-semicontinuity clause
USC_OFFSETS = tuple(10.0 ** -k for k in range(3, 10))

# multiplier applied to equality_tol before two inputs count as distinct
SEPARATION_FACTOR = 1e3


@dataclass(frozen=True)
class FuzzyNormSpec:
    """An evaluable fuzzy norm on R^dimension.

    Exactly one of ``kind`` (crisp-induced family) or ``evaluator`` (custom
    family) is set.  Build instances with :meth:`crisp_induced` or
    :meth:`custom`.
    """

    dimension: int
    kind: CrispNormKind | None = None
    evaluator: Callable[[np.ndarray, float], float] | None = None
    label: str = ""

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise StructuralError(f"dimension must be a positive integer, got {self.dimension}")
        if (self.kind is None) == (self.evaluator is None):
            raise StructuralError("give exactly one of a crisp norm kind or a custom evaluator")
        if self.kind is not None:
            self.kind.check_dimension(self.dimension)

    @classmethod
    def crisp_induced(cls, kind: CrispNormKind, dimension: int) -> "FuzzyNormSpec":
        return cls(dimension=dimension, kind=kind, label=f"crisp_induced({kind.kind})")

    @classmethod
    def custom(cls, evaluator, dimension: int, label: str = "custom") -> "FuzzyNormSpec":
        return cls(dimension=dimension, evaluator=evaluator, label=label)

    @property
    def family(self) -> str:
        return "crisp_induced" if self.kind is not None else "custom"

    def evaluate(self, x, a: float) -> float:
        x = as_vector(x, self.dimension)
        return self._eval_one(x, float(a))

    def _eval_one(self, x: np.ndarray, a: float) -> float:
        if self.kind is not None:
            if a <= 0:
                return 0.0
            r = float(crisp_norms(x[None, :], self.kind)[0])
            return a / (a + r)
        value = float(self.evaluator(x, a))
        if not 0.0 <= value <= 1.0:  # also rejects NaN
            raise ContractViolation(
                f"{self.label}: N(x={x.tolist()}, a={a!r}) = {value!r} lies outside [0, 1]"
            )
        return value

    def evaluate_many(self, points, thresholds) -> np.ndarray:
        """Vectorised ``N(points[i], thresholds[i])``; thresholds broadcast."""
        X = as_points(points, self.dimension)
        A = np.broadcast_to(np.asarray(thresholds, dtype=float), (X.shape[0],))
        if self.kind is not None:
            r = crisp_norms(X, self.kind)
            out = np.zeros_like(A)
            pos = A > 0
            out[pos] = A[pos] / (A[pos] + r[pos])
            return out
        return np.array([self._eval_one(x, float(a)) for x, a in zip(X, A)])

    def to_dict(self) -> dict:
        if self.kind is not None:
            return {"dimension": self.dimension, "family": "crisp_induced", "norm": self.kind.to_dict()}
        return {"dimension": self.dimension, "family": "custom", "label": self.label}


def evaluate(spec: FuzzyNormSpec, x, a: float) -> float:
    return spec.evaluate(x, a)


# -- example custom evaluators -------------------------------------------------


def squared_norm_evaluator(kind: CrispNormKind | None = None):
    """``a / (a + ||x||^2)``: a valid-looking formula that breaks (N3)."""
    kind = kind or CrispNormKind.euclidean()

    def N(x, a):
        if a <= 0:
            return 0.0
        r = float(crisp_norms(np.asarray(x, dtype=float)[None, :], kind)[0])
        return a / (a + r * r)

    return N


def ceiling_threshold_evaluator(kind: CrispNormKind | None = None):
    """Rounds the threshold up to an integer first; not upper semicontinuous at integers."""
    kind = kind or CrispNormKind.euclidean()

    def N(x, a):
        if a <= 0:
            return 0.0
        r = float(crisp_norms(np.asarray(x, dtype=float)[None, :], kind)[0])
        c = math.ceil(a)
        return c / (c + r)

    return N


def overflowing_evaluator(kind: CrispNormKind | None = None):
    """Returns values up to 2; used to exercise the range contract."""
    kind = kind or CrispNormKind.euclidean()

    def N(x, a):
        if a <= 0:
            return 0.0
        r = float(crisp_norms(np.asarray(x, dtype=float)[None, :], kind)[0])
        return 2 * a / (a + r)

    return N


CUSTOM_EVALUATORS = {
    "squared_norm": squared_norm_evaluator,
    "ceiling_threshold": ceiling_threshold_evaluator,
    "overflowing": overflowing_evaluator,
}


# -- axiom clauses ---------------------------------------------------------------
#
# Each _clause_* function re-evaluates one witness from its inputs alone and
# returns (violated, observed values).  The batch checker only uses vectorised
# masks to find candidates; witnesses are always filled in by these functions,
# which keeps every reported witness reproducible by construction.


def _clause_n1(spec, inp, tol):
    v = spec.evaluate(inp["x"], inp["a"])
    return abs(v) > tol, {"N(x,a)": v}


def _clause_n2(spec, inp, tol):
    x = as_vector(inp["x"], spec.dimension)
    if not np.any(x):
        v = spec.evaluate(x, inp["a"])
        return abs(v - 1.0) > tol, {"N(0,a)": v}
    vals = [spec.evaluate(x, a) for a in inp["thresholds"]]
    return min(vals) >= 1.0, {"min N(x,a)": min(vals)}


def _clause_n3(spec, inp, tol):
    x = as_vector(inp["x"], spec.dimension)
    c, b = inp["c"], inp["b"]
    lhs = spec.evaluate(c * x, b)
    rhs = spec.evaluate(x, b / abs(c))
    return abs(lhs - rhs) > tol, {"N(cx,b)": lhs, "N(x,b/|c|)": rhs}


def _clause_n4(spec, inp, tol):
    x = as_vector(inp["x"], spec.dimension)
    y = as_vector(inp["y"], spec.dimension)
    a, b = inp["a"], inp["b"]
    lhs = spec.evaluate(x + y, a + b)
    rhs = min(spec.evaluate(x, a), spec.evaluate(y, b))
    return lhs < rhs - tol, {"N(x+y,a+b)": lhs, "min": rhs}


def _clause_n5(spec, inp, tol, limit_tol=1e-6):
    x = as_vector(inp["x"], spec.dimension)
    if "a_big" in inp:
        v = spec.evaluate(x, inp["a_big"])
        return v < 1.0 - inp.get("limit_tol", limit_tol), {"N(x,a_big)": v}
    lo = spec.evaluate(x, inp["a_lo"])
    hi = spec.evaluate(x, inp["a_hi"])
    return lo > hi + tol, {"N(x,a_lo)": lo, "N(x,a_hi)": hi}


def _usc_estimate(right, left):
    # Richardson step for geometric offsets (ratio 10): removes the first-order
    # drift of a continuous function, keeps a genuine jump.
    def limit(p):
        return p[-1] - (p[-2] - p[-1]) / 9.0

    return max(limit(right), limit(left))


def _clause_n6(spec, inp, tol):
    x = as_vector(inp["x"], spec.dimension)
    a = inp["a"]
    offsets = inp.get("offsets", USC_OFFSETS)
    value = spec.evaluate(x, a)
    right = [spec.evaluate(x, a + h) for h in offsets]
    left = [spec.evaluate(x, a - h) for h in offsets]
    limsup = _usc_estimate(right, left)
    return value < limsup - tol, {"N(x,a)": value, "limsup_estimate": limsup}


_CLAUSES = {
    "N1": _clause_n1,
    "N2": _clause_n2,
    "N3": _clause_n3,
    "N4": _clause_n4,
    "N5": _clause_n5,
    "N6": _clause_n6,
}


def replay_axiom_witness(spec: FuzzyNormSpec, witness: Witness, tol: float) -> tuple[bool, dict]:
    """Re-evaluate ``witness``: ``(still violated at tol, observed values)``."""
    return _CLAUSES[witness.clause](spec, witness.inputs, tol)


def _witnesses(spec, clause, candidates, tol, limit):
    out = []
    for inp in candidates:
        violated, values = _CLAUSES[clause](spec, inp, tol)
        if violated:
            out.append(Witness(clause, inp, values))
            if len(out) >= limit:
                break
    return out


def _grid(plan: SamplePlan, rng) -> np.ndarray:
    lo, hi = plan.a_range
    anchors = [lo, hi] + [a for a in (0.5, 1.0, 2.0) if lo <= a <= hi]
    return np.unique(np.concatenate([plan.thresholds(rng), anchors]))


def check_axioms(spec: FuzzyNormSpec, plan: SamplePlan | None = None) -> CheckReport:
    """Check (N1)-(N6) on a seeded sample.

    (N2) is only probed one way round: ``N(0, a) = 1`` on sampled ``a`` and,
    for each sampled ``x != 0``, some grid threshold with ``N(x, a) < 1``.
    (N5)'s limit clause and (N6)'s semicontinuity are finite probes.
    """
    plan = plan or SamplePlan()
    tol = plan.equality_tol
    dim, n = spec.dimension, plan.n_points
    rng = plan.rng(1)
    X = plan.ball(rng, n, dim)
    Y = plan.ball(rng, n, dim)
    grid = _grid(plan, rng)
    ta = plan.thresholds(rng, n)
    tb = plan.thresholds(rng, n)
    signs = np.where(rng.random(n) < 0.25, -1.0, 1.0)
    cs = np.exp(rng.uniform(np.log(1e-2), np.log(1e2), n)) * np.where(rng.random(n) < 0.5, -1.0, 1.0)
    ev = spec.evaluate_many
    found, samples = {}, {}

    # N1: non-positive thresholds give 0
    a_neg = -ta
    a_neg[0] = 0.0
    bad = np.abs(ev(X, a_neg)) > tol
    found["N1"] = _witnesses(spec, "N1", ({"x": X[i], "a": a_neg[i]} for i in np.flatnonzero(bad)), tol, plan.max_witnesses)
    samples["N1"] = n

    # N2: zero vector is fully "short"; nonzero vectors are not
    zeros = np.zeros((grid.size, dim))
    bad_zero = np.abs(ev(zeros, grid) - 1.0) > tol
    cand = [{"x": np.zeros(dim), "a": grid[i]} for i in np.flatnonzero(bad_zero)]
    nonzero = np.any(X != 0, axis=1)
    vals = ev(np.repeat(X, grid.size, axis=0), np.tile(grid, n)).reshape(n, grid.size)
    bad_nz = nonzero & (vals.min(axis=1) >= 1.0)
    cand += [{"x": X[i], "thresholds": grid} for i in np.flatnonzero(bad_nz)]
    found["N2"] = _witnesses(spec, "N2", cand, tol, plan.max_witnesses)
    samples["N2"] = grid.size + n * grid.size

    # N3: N(cx, b) = N(x, b/|c|) for c != 0, b of either sign
    b = ta * signs
    bad = np.abs(ev(X * cs[:, None], b) - ev(X, b / np.abs(cs))) > tol
    found["N3"] = _witnesses(
        spec, "N3", ({"x": X[i], "c": cs[i], "b": b[i]} for i in np.flatnonzero(bad)), tol, plan.max_witnesses
    )
    samples["N3"] = n

    # N4: N(x+y, a+b) >= min(N(x,a), N(y,b))
    a4, b4 = ta * signs, tb
    lhs = ev(X + Y, a4 + b4)
    rhs = np.minimum(ev(X, a4), ev(Y, b4))
    bad = lhs < rhs - tol
    found["N4"] = _witnesses(
        spec, "N4", ({"x": X[i], "y": Y[i], "a": a4[i], "b": b4[i]} for i in np.flatnonzero(bad)), tol, plan.max_witnesses
    )
    samples["N4"] = n

    # N5: non-decreasing on a sorted grid (crossing into a <= 0), tends to 1
    full = np.concatenate([[-1.0, 0.0], grid])
    vals5 = np.concatenate([np.zeros((n, 2)), vals], axis=1)
    vals5[:, 0] = ev(X, -1.0)
    vals5[:, 1] = ev(X, 0.0)
    drops = np.diff(vals5, axis=1) < -tol
    cand = []
    for i, j in zip(*np.nonzero(drops)):
        cand.append({"x": X[i], "a_lo": full[j], "a_hi": full[j + 1]})
    a_big = plan.a_range[1] * 1e6
    bad = ev(X, a_big) < 1.0 - plan.limit_tol
    cand += [{"x": X[i], "a_big": a_big, "limit_tol": plan.limit_tol} for i in np.flatnonzero(bad)]
    found["N5"] = _witnesses(spec, "N5", cand, tol, plan.max_witnesses)
    samples["N5"] = n * (full.size + 1)

    # N6: upper semicontinuity of N(x, .) at grid thresholds, x != 0
    Xn = X[nonzero]
    m = Xn.shape[0]
    P = np.repeat(Xn, grid.size, axis=0)
    G = np.tile(grid, m)
    value = ev(P, G)
    right = np.stack([ev(P, G + h) for h in USC_OFFSETS[-2:]])
    left = np.stack([ev(P, G - h) for h in USC_OFFSETS[-2:]])
    limsup = np.maximum(right[1] - (right[0] - right[1]) / 9.0, left[1] - (left[0] - left[1]) / 9.0)
    bad = value < limsup - tol
    cand = ({"x": P[k], "a": G[k], "offsets": USC_OFFSETS} for k in np.flatnonzero(bad))
    found["N6"] = _witnesses(spec, "N6", cand, tol, plan.max_witnesses)
    samples["N6"] = m * grid.size * (1 + 2 * len(USC_OFFSETS))

    return CheckReport.build(found, samples, plan.max_witnesses, meta={"norm": spec.to_dict(), "grid_size": int(grid.size)})


# -- strict convexity --------------------------------------------------------------


def _sc_clause(spec, inp, tol):
    x = as_vector(inp["x"], spec.dimension)
    y = as_vector(inp["y"], spec.dimension)
    a, b = float(inp["a"]), float(inp["b"])
    nx, ny = spec.evaluate(x, a), spec.evaluate(y, b)
    nsum = spec.evaluate(x + y, a + b)
    hyp_min = abs(nsum - min(nx, ny)) <= tol
    hyp_eq = abs(nx - ny) <= tol
    separation = float(np.linalg.norm(x - y) + abs(a - b))
    violated = hyp_min and hyp_eq and separation > SEPARATION_FACTOR * tol
    return violated, {"N(x,a)": nx, "N(y,b)": ny, "N(x+y,a+b)": nsum, "separation": separation}


def replay_strict_convexity_witness(spec: FuzzyNormSpec, witness: Witness, tol: float) -> tuple[bool, dict]:
    return _sc_clause(spec, witness.inputs, tol)


def check_strict_convexity(spec: FuzzyNormSpec, plan: SamplePlan | None = None) -> CheckReport:
    """Search for violations of fuzzy strict convexity.

    A violation is ``(x, y, a, b)`` with ``N(x+y, a+b) = min(N(x,a), N(y,b))``
    and ``N(x,a) = N(y,b)`` while ``(x, a) != (y, b)``.  Three probe families
    run in order: scaled pairs ``(x, c x, a, c a)``, the zero vector with two
    different thresholds, and random quadruples.
    """
    plan = plan or SamplePlan()
    tol, dim, n = plan.equality_tol, spec.dimension, plan.n_points
    rng = plan.rng(2)
    X = plan.ball(rng, n, dim)
    Y = plan.ball(rng, n, dim)
    ta, tb = plan.thresholds(rng, n), plan.thresholds(rng, n)
    cs = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    cs[np.abs(cs - 1.0) < 1e-3] = 2.0
    e1 = np.zeros(dim)
    e1[0] = 1.0
    # canonical probe first: x = e1, y = 2 e1, a = 1, b = 2
    X[0], cs[0], ta[0] = e1, 2.0, 1.0

    def search(clause, cands):
        out = []
        for inp in cands:
            violated, values = _sc_clause(spec, inp, tol)
            if violated:
                out.append(Witness(clause, inp, values))
                if len(out) >= plan.max_witnesses:
                    break
        return out

    found = {
        "scaled_pair": search("scaled_pair", ({"x": X[i], "y": cs[i] * X[i], "a": ta[i], "b": cs[i] * ta[i]} for i in range(n))),
        "zero_vector": search(
            "zero_vector",
            ({"x": np.zeros(dim), "y": np.zeros(dim), "a": a, "b": b} for a, b in [(1.0, 2.0)] + list(zip(ta, tb))),
        ),
        "random": search("random", ({"x": X[i], "y": Y[i], "a": ta[i], "b": tb[i]} for i in range(n))),
    }
    samples = {"scaled_pair": n, "zero_vector": n + 1, "random": n}
    return CheckReport.build(found, samples, plan.max_witnesses, meta={"norm": spec.to_dict()})


def _crisp_sc_clause(kind, inp, tol):
    u = as_vector(inp["u"])
    v = as_vector(inp["v"], u.size)
    nu, nv, nuv = (float(crisp_norms(w[None, :], kind)[0]) for w in (u, v, u + v))
    if nu == 0 or nv == 0:
        return False, {}
    equality = abs(nuv - nu - nv) <= tol * max(1.0, nu + nv)
    direction_gap = float(np.linalg.norm(u / np.linalg.norm(u) - v / np.linalg.norm(v)))
    violated = equality and direction_gap > 1e-6
    return violated, {"|u+v|": nuv, "|u|+|v|": nu + nv, "direction_gap": direction_gap}


def replay_crisp_convexity_witness(kind: CrispNormKind, witness: Witness, tol: float) -> tuple[bool, dict]:
    return _crisp_sc_clause(kind, witness.inputs, tol)


def _vertex_vectors(dim: int) -> list[np.ndarray]:
    eye = np.eye(dim)
    out = [eye[i] for i in range(dim)]
    for i in range(dim):
        for j in range(i + 1, dim):
            out += [eye[i] + eye[j], eye[i] - eye[j]]
    return out


def check_crisp_strict_convexity(kind: CrispNormKind, plan: SamplePlan | None = None, dim: int = 2) -> CheckReport:
    """Look for ``u, v != 0``, not positively parallel, with ``|u+v| = |u| + |v|``.

    Random pairs almost never land on a flat face of the unit ball, so pairs of
    coordinate vectors and their sums/differences are tried first.
    """
    plan = plan or SamplePlan()
    kind.check_dimension(dim)
    tol = plan.equality_tol
    verts = _vertex_vectors(dim)
    structured = [{"u": u, "v": v} for i, u in enumerate(verts) for v in verts[i + 1 :]]
    rng = plan.rng(3)
    U, V = plan.ball(rng, plan.n_points, dim), plan.ball(rng, plan.n_points, dim)

    def search(clause, cands):
        out = []
        for inp in cands:
            violated, values = _crisp_sc_clause(kind, inp, tol)
            if violated:
                out.append(Witness(clause, inp, values))
                if len(out) >= plan.max_witnesses:
                    break
        return out

    found = {
        "vertex_pairs": search("vertex_pairs", structured),
        "random": search("random", ({"u": U[i], "v": V[i]} for i in range(plan.n_points))),
    }
    samples = {"vertex_pairs": len(structured), "random": plan.n_points}
    return CheckReport.build(found, samples, plan.max_witnesses, meta={"norm": kind.to_dict(), "dimension": dim})

