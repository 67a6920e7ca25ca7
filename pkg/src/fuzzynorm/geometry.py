"""Collinearity and metric midpoints in a fuzzy normed space.

A metric midpoint of ``a`` and ``b`` at scale ``s > 0`` is any ``x`` with::

    N(a - x, s) = N(a - b, 2s)   and   N(b - x, s) = N(a - b, 2s).

``(a + b) / 2`` always qualifies.  Whether it is the only one depends on the
geometry of the norm; :func:`find_midpoints` probes this with a seeded
multi-start search.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, DomainError, StructuralError
from .fuzzy_norm import FuzzyNormSpec
from .sampling import SamplePlan, Witness
from .vecspace import as_vector, crisp_norms

__all__ = [
    "collinear",
    "MidpointProblem",
    "MidpointSolution",
    "MinInequalityReport",
    "midpoint_residual",
    "verify_midpoint",
    "find_midpoints",
    "check_min_inequalities",
    "uniqueness_witness",
    "replay_uniqueness_witness",
]

SOLVER_TOL = 1e-9
DISTINCT_FRACTION = 1e-2
DEFAULT_STARTS = 64


def collinear(x, y, z, tol: float = 1e-9) -> tuple[bool, float | None]:
    """Is ``y - z = t (x - z)`` for some real ``t``?

    Returns ``(flag, t)`` with the least-squares ``t``.  When ``x`` and ``z``
    coincide (within ``tol``) there is no direction to measure along; the
    triple counts as collinear iff ``y`` coincides with ``z`` too, and ``t`` is
    ``None``.
    """
    x, y, z = as_vector(x), as_vector(y), as_vector(z)
    if not x.size == y.size == z.size:
        raise StructuralError(f"dimension mismatch: {x.size}, {y.size}, {z.size}")
    d, e = x - z, y - z
    if np.linalg.norm(d) <= tol:
        return bool(np.linalg.norm(e) <= tol), None
    t = float(d @ e / (d @ d))
    return bool(np.linalg.norm(e - t * d) <= tol), t


@dataclass(frozen=True)
class MidpointProblem:
    space: FuzzyNormSpec
    a: np.ndarray
    b: np.ndarray
    s: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "a", as_vector(self.a, self.space.dimension))
        object.__setattr__(self, "b", as_vector(self.b, self.space.dimension))
        if not (self.s > 0 and np.isfinite(self.s)):
            raise DomainError(f"s must be positive and finite, got {self.s}")
        object.__setattr__(self, "s", float(self.s))

    @property
    def target(self) -> float:
        return self.space.evaluate(self.a - self.b, 2 * self.s)

    def with_scale(self, s: float) -> "MidpointProblem":
        return MidpointProblem(self.space, self.a, self.b, s)


@dataclass
class MidpointSolution:
    solutions: list[np.ndarray]
    residuals: list[float]
    unique_within_probe: bool
    meta: dict = field(default_factory=dict)


@dataclass
class MinInequalityReport:
    """Both sides of the two min-inequalities at the midpoint ``m`` of ``u, v``."""

    m: np.ndarray
    lhs_a: float
    rhs_a: float
    lhs_b: float
    rhs_b: float
    holds_a: bool
    holds_b: bool
    equality_a: bool
    equality_b: bool


def midpoint_residual(prob: MidpointProblem, x) -> float:
    """Largest defect of the two defining equalities at ``x``."""
    x = as_vector(x, prob.space.dimension)
    t = prob.target
    return max(
        abs(prob.space.evaluate(prob.a - x, prob.s) - t),
        abs(prob.space.evaluate(prob.b - x, prob.s) - t),
    )


def verify_midpoint(prob: MidpointProblem, x, tol: float = SOLVER_TOL) -> bool:
    return midpoint_residual(prob, x) <= tol


def _batch_defects(prob: MidpointProblem):
    """Signed defects of the two equalities, row-wise on an ``(n, dim)`` array -> ``(n, 2)``."""
    space, a, b, s = prob.space, prob.a, prob.b, prob.s
    t = prob.target
    if space.kind is not None:
        kind = space.kind

        def f(X):
            ra, rb = crisp_norms(a - X, kind), crisp_norms(b - X, kind)
            return np.stack([s / (s + ra) - t, s / (s + rb) - t], axis=-1)

        return f

    def g(X):
        return np.stack([space.evaluate_many(a - X, s) - t, space.evaluate_many(b - X, s) - t], axis=-1)

    return g


_STEPS = 0.5 ** np.arange(12)


def _gauss_newton(defects, X0, scale, tol, max_iter=200):
    """Minimise the max-abs defect from every start at once.

    Gauss-Newton directions from central-difference Jacobians, accepted by
    backtracking on the max-abs merit.  A start that cannot improve is frozen.
    """
    X = X0.copy()
    k, d = X.shape
    eta = 1e-7 * scale
    E = np.eye(d) * eta
    merit = np.max(np.abs(defects(X)), axis=1)
    active = merit > tol
    for _ in range(max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        Xa = X[idx]
        m = idx.size
        R = defects(Xa)
        probes = np.concatenate([Xa[:, None, :] + E, Xa[:, None, :] - E], axis=1).reshape(-1, d)
        F = defects(probes).reshape(m, 2, d, 2)
        J = np.transpose(F[:, 0] - F[:, 1], (0, 2, 1)) / (2 * eta)  # (m, 2, d)
        step = -np.einsum("mij,mj->mi", np.linalg.pinv(J, rcond=1e-12), R)
        trial = Xa[:, None, :] + _STEPS[None, :, None] * step[:, None, :]
        tm = np.max(np.abs(defects(trial.reshape(-1, d))), axis=1).reshape(m, _STEPS.size)
        ok = tm < merit[idx, None]
        first = np.argmax(ok, axis=1)
        moved = ok[np.arange(m), first]
        mv = idx[moved]
        X[mv] = trial[moved, first[moved]]
        merit[mv] = tm[moved, first[moved]]
        active[idx[~moved]] = False
        active &= merit > tol
    return X, merit


def find_midpoints(
    prob: MidpointProblem,
    plan: SamplePlan | None = None,
    n_starts: int = DEFAULT_STARTS,
    tol: float = SOLVER_TOL,
) -> MidpointSolution:
    """All distinct midpoints found by the analytic candidate plus ``n_starts`` local searches.

    Starts are uniform in the Euclidean ball of radius ``2 |a - b|`` around
    ``(a + b) / 2``; all of them run one batched Gauss-Newton search on the
    larger of the two equality defects.  Solutions closer than
    ``1e-2 |a - b|`` are merged, keeping the earlier one.  Starts whose
    optimum misses ``tol`` are discarded and counted in
    ``meta["discarded_starts"]``.
    """
    plan = plan or SamplePlan()
    a, b = prob.a, prob.b
    if np.array_equal(a, b):
        return MidpointSolution([a.copy()], [midpoint_residual(prob, a)], True, {"degenerate": True})

    dist = float(np.linalg.norm(a - b))
    sep = DISTINCT_FRACTION * dist
    m = (a + b) / 2.0
    defects = _batch_defects(prob)
    solutions, residuals = [], []

    def offer(x, r):
        if r <= tol and all(np.linalg.norm(x - y) > sep for y in solutions):
            solutions.append(x)
            residuals.append(r)

    offer(m, midpoint_residual(prob, m))
    rng = plan.rng(4)
    starts = m + plan.ball(rng, n_starts, a.size, radius=2.0 * dist)
    ends, _ = _gauss_newton(defects, starts, dist, 1e-3 * tol)
    discarded = 0
    for x in ends:
        r = midpoint_residual(prob, x)
        if r > tol:
            discarded += 1
            continue
        offer(x, r)
    return MidpointSolution(
        solutions,
        residuals,
        len(solutions) == 1,
        {"n_starts": n_starts, "discarded_starts": discarded, "separation": sep, "tol": tol},
    )


def check_min_inequalities(prob: MidpointProblem, u, v, tol: float = SOLVER_TOL) -> MinInequalityReport:
    """Evaluate ``N(a - (u+v)/2, s) >= min(N(a-u, s), N(a-v, s))`` and its ``b`` twin.

    Both ``u`` and ``v`` must already be midpoints.  The inequalities follow
    from the triangle axiom, so a failure means the norm itself is broken and
    is raised as :class:`ContractViolation`.
    """
    u = as_vector(u, prob.space.dimension)
    v = as_vector(v, prob.space.dimension)
    for name, w in (("u", u), ("v", v)):
        if not verify_midpoint(prob, w, tol):
            raise DomainError(f"{name}={w.tolist()} is not a midpoint (residual {midpoint_residual(prob, w)!r})")
    N, s = prob.space.evaluate, prob.s
    m = (u + v) / 2.0
    lhs_a, rhs_a = N(prob.a - m, s), min(N(prob.a - u, s), N(prob.a - v, s))
    lhs_b, rhs_b = N(prob.b - m, s), min(N(prob.b - u, s), N(prob.b - v, s))
    rep = MinInequalityReport(
        m=m,
        lhs_a=lhs_a,
        rhs_a=rhs_a,
        lhs_b=lhs_b,
        rhs_b=rhs_b,
        holds_a=lhs_a >= rhs_a - tol,
        holds_b=lhs_b >= rhs_b - tol,
        equality_a=abs(lhs_a - rhs_a) <= tol,
        equality_b=abs(lhs_b - rhs_b) <= tol,
    )
    if not (rep.holds_a and rep.holds_b):
        raise ContractViolation(f"min-inequality fails at u={u.tolist()}, v={v.tolist()}: {rep}")
    return rep


def uniqueness_witness(prob: MidpointProblem, solution: MidpointSolution):
    """Witness of non-uniqueness built from the first two solutions, or None."""
    if len(solution.solutions) < 2:
        return None
    inp = {"x": solution.solutions[0], "y": solution.solutions[1], "tol": solution.meta["tol"]}
    return Witness("uniqueness", inp, replay_uniqueness_witness(prob, inp)[1])


def replay_uniqueness_witness(prob: MidpointProblem, inputs: dict) -> tuple[bool, dict]:
    """Both points solve the midpoint equations yet are farther apart than the merge threshold."""
    x = as_vector(inputs["x"], prob.space.dimension)
    y = as_vector(inputs["y"], prob.space.dimension)
    tol = inputs.get("tol", SOLVER_TOL)
    rx, ry = midpoint_residual(prob, x), midpoint_residual(prob, y)
    gap = float(np.linalg.norm(x - y))
    sep = DISTINCT_FRACTION * float(np.linalg.norm(prob.a - prob.b))
    return rx <= tol and ry <= tol and gap > sep, {"residual_x": rx, "residual_y": ry, "gap": gap}
